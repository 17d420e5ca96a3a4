// synctool: command-line front end for the pfasync library.
//
// Exit status: 0 on success, 1 on a domain error (bad input, solver failure,
// infeasible parameters), 2 on a usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pfasync/automaton_io.hpp"
#include "pfasync/dimacs.hpp"
#include "pfasync/encoding.hpp"
#include "pfasync/errors.hpp"
#include "pfasync/experiments.hpp"
#include "pfasync/external.hpp"
#include "pfasync/families.hpp"
#include "pfasync/oracles.hpp"
#include "pfasync/random.hpp"
#include "pfasync/search.hpp"
#include "pfasync/solver.hpp"

namespace {

using nlohmann::json;
using namespace pfasync;

struct SolverFlags {
  std::string solver;
  std::vector<std::string> solver_args;
  long long max_conflicts = -1;
  double timeout = 0;
  std::uint64_t seed = sat::kDefaultSeed;
  bool keep_cnf = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--solver", solver,
                    "External solver executable, or 'builtin'; defaults to $" + std::string(sat::kSolverEnv) +
                        " and then the built-in solver");
    cmd->add_option("--solver-arg", solver_args, "Extra argument passed to the external solver (repeatable)");
    cmd->add_option("--budget-conflicts", max_conflicts, "Conflict budget per solver call (built-in solver)");
    cmd->add_option("--budget-seconds", timeout, "Time budget in seconds per solver call");
    cmd->add_flag("--keep-cnf", keep_cnf, "Keep the temporary files handed to an external solver");
    cmd->add_option("--solver-seed", seed, "Seed of the built-in solver");
  }

  sat::Budget budget() const { return sat::Budget{max_conflicts, timeout}; }

  sat::Backend backend() const {
    std::string path = solver;
    if (path.empty()) {
      const char* env = std::getenv(sat::kSolverEnv);
      if (env && *env) path = env;
    }
    if (path.empty() || path == "builtin") return sat::builtin_backend(seed);
    return sat::external_backend(sat::ExternalSolver{path, solver_args, keep_cnf, {}});
  }
};

SyncMode parse_mode(const std::string& text) {
  if (text == "csw" || text == "careful") return SyncMode::careful;
  if (text == "esw" || text == "exact") return SyncMode::exact;
  throw InputError("unknown mode '" + text + "' (expected csw or esw)");
}

std::vector<int> parse_int_list(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& item : items) {
    std::stringstream parts(item);
    std::string part;
    while (std::getline(parts, part, ',')) {
      if (part.empty()) continue;
      const auto dash = part.find('-', 1);
      try {
        if (dash == std::string::npos) {
          out.push_back(std::stoi(part));
        } else {
          const int lo = std::stoi(part.substr(0, dash)), hi = std::stoi(part.substr(dash + 1));
          if (hi < lo) throw InputError("empty range '" + part + "'");
          for (int v = lo; v <= hi; ++v) out.push_back(v);
        }
      } catch (const std::logic_error&) {
        throw InputError("bad integer list item '" + part + "'");
      }
    }
  }
  return out;
}

std::vector<std::string> split_commas(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream parts(item);
    std::string part;
    while (std::getline(parts, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-")
    std::cout << text;
  else
    write_file(output, text);
}

json outcome_json(const SearchOutcome& out) {
  json j{{"status", to_string(out.status)}, {"trace", out.query_trace}};
  if (out.status == SearchStatus::synchronizing) {
    j["min_len"] = out.min_len;
    j["witness"] = format_word(out.witness);
  }
  if (out.status == SearchStatus::not_synchronizing) j["certificate"] = to_string(out.certificate);
  if (out.status == SearchStatus::inconclusive) j["max_len_tried"] = out.max_len_tried;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"Careful and exact synchronization of partial automata"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random automaton");
  std::string series_text = "1", gen_mode = "csw", gen_output, gen_format = "text";
  GenSpec gen_spec;
  gen->add_option("--series", series_text, "1, 2, 3, 4 or nonexact")->required();
  gen->add_option("--n", gen_spec.n, "Number of states")->required();
  gen->add_option("--m", gen_spec.m, "Number of letters (series 3)");
  gen->add_option("--rho", gen_spec.rho, "Number of defined transitions (series 3 and 4)");
  gen->add_option("--mode", gen_mode, "csw or esw (series 4)");
  gen->add_option("--seed", gen_spec.seed, "Random seed");
  gen->add_option("--output,-o", gen_output, "Output file (default stdout)");
  gen->add_option("--format", gen_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  // encode
  auto* enc = app.add_subcommand("encode", "Write the CNF for a length query");
  std::string enc_input, enc_mode = "csw", enc_output;
  std::vector<std::string> enc_comments;
  int enc_len = 1;
  EncodeOptions enc_opts;
  enc->add_option("--input,-i", enc_input, "Automaton file")->required();
  enc->add_option("--len", enc_len, "Word length")->required();
  enc->add_option("--mode", enc_mode, "csw or esw");
  enc->add_flag("--binary-opt", enc_opts.binary_opt, "One letter variable per position (two letters only)");
  enc->add_flag("--ladder", enc_opts.ladder, "Ladder encoding for the final at-most-one constraint");
  enc->add_flag("--ladder-letters", enc_opts.ladder_letters, "Ladder encoding for the per-position letter choice");
  enc->add_flag("--merge-parallel", enc_opts.merge_parallel, "Merge transitions that agree on every letter");
  enc->add_option("--comment", enc_comments, "Comment line written before the header (repeatable)");
  enc->add_option("--output,-o", enc_output, "Output file (default stdout)");

  // scale
  auto* scale = app.add_subcommand("scale", "Derive the length-L CNF from the length-1 binary CNF");
  std::string scale_input, scale_output;
  int scale_len = 1, scale_n = 0;
  scale->add_option("--input,-i", scale_input, "Length-1 DIMACS file")->required();
  scale->add_option("--len", scale_len, "Target length")->required();
  scale->add_option("--n", scale_n, "Number of states")->required();
  scale->add_option("--output,-o", scale_output, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a DIMACS file");
  std::string solve_input;
  SolverFlags solve_flags;
  solve->add_option("--input,-i", solve_input, "DIMACS file")->required();
  solve_flags.attach(solve);

  // minlen
  auto* minlen = app.add_subcommand("minlen", "Shortest synchronizing word by SAT search");
  std::string min_input, min_mode = "csw";
  SearchConfig min_cfg;
  bool no_filter = false, oracle_fallback = false;
  int predict = 0;
  SolverFlags min_flags;
  minlen->add_option("--input,-i", min_input, "Automaton file")->required();
  minlen->add_option("--mode", min_mode, "csw or esw");
  minlen->add_option("--max-len", min_cfg.doubling_cap, "Largest length tried by doubling search");
  minlen->add_option("--max-incremental", min_cfg.incremental_cap, "Largest length tried by incremental search");
  minlen->add_flag("--no-filter", no_filter, "Skip the cyclic-state filter");
  minlen->add_flag("--ladder", min_cfg.ladder, "Ladder encoding for the final constraint");
  minlen->add_flag("--oracle-fallback", oracle_fallback, "Settle inconclusive searches by subset search");
  minlen->add_option("--predict", predict, "Only confirm this predicted minimum length (two solver calls)")
      ->check(CLI::PositiveNumber);
  min_flags.attach(minlen);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Shortest synchronizing word by subset search");
  std::string oracle_input, oracle_mode = "csw";
  int oracle_cap = kDefaultOracleCap;
  oracle->add_option("--input,-i", oracle_input, "Automaton file")->required();
  oracle->add_option("--mode", oracle_mode, "csw or esw");
  oracle->add_option("--cap", oracle_cap, "Largest state count accepted");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark family member and its predicted length");
  std::string family_name, bench_output, bench_format = "text";
  int bench_n = 0;
  bench->add_option("--family", family_name, "cerny, pn, pprime, hprime, hdoubleprime, wielandt or en")->required();
  bench->add_option("--n", bench_n, "Number of states")->required();
  bench->add_option("--output,-o", bench_output, "Write the automaton to this file");
  bench->add_option("--format", bench_format, "Automaton file format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run an experiment series");
  std::string exp_series = "1", exp_mode = "csw", exp_out;
  std::vector<std::string> exp_ns{"5"}, exp_ms{"2"}, exp_rhos;
  ExperimentOptions exp_opts;
  exp->add_option("--series", exp_series, "1, 2, 3 or 4")->check(CLI::IsMember({"1", "2", "3", "4"}));
  exp->add_option("--n", exp_ns, "State counts, e.g. 5,10,20 or 5-10");
  exp->add_option("--m", exp_ms, "Alphabet sizes (series 3)");
  exp->add_option("--rho", exp_rhos, "Densities such as 17 or 2n-1 (series 3 and 4; series 4 defaults to all)");
  exp->add_option("--mode", exp_mode, "csw or esw (series 1 and 4)");
  exp->add_option("--trials", exp_opts.trials, "Trials per configuration");
  exp->add_option("--seed", exp_opts.seed, "Base seed");
  exp->add_option("--jobs", exp_opts.jobs, "Worker threads");
  exp->add_option("--oracle-cap", exp_opts.oracle_cap, "Subset-search fallback up to this many states");
  exp->add_option("--budget-conflicts", exp_opts.search.per_call.max_conflicts, "Conflict budget per solver call");
  exp->add_flag("--deterministic", exp_opts.deterministic, "Record zero wall time so output files are reproducible");
  exp->add_option("--out-dir", exp_out, "Directory for records.csv, aggregate.csv and plot files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    gen_spec.series = parse_series(series_text);
    gen_spec.mode = parse_mode(gen_mode);
    const Pfa A = gen_random(gen_spec);
    emit(gen_format == "json" ? automaton_to_json(A).dump(2) + "\n" : write_automaton_text(A), gen_output);
  } else if (enc->parsed()) {
    enc_opts.mode = parse_mode(enc_mode);
    const Pfa A = load_automaton(enc_input);
    emit(write_dimacs(encode(A, enc_len, enc_opts).formula, enc_comments), enc_output);
  } else if (scale->parsed()) {
    emit(scale_dimacs(read_file(scale_input), scale_len, scale_n), scale_output);
  } else if (solve->parsed()) {
    const CnfFormula F = parse_dimacs(read_file(solve_input));
    const auto out = solve_flags.backend()(F, solve_flags.budget());
    json j{{"verdict", sat::to_string(out.verdict)}};
    if (out.verdict == sat::Verdict::sat) {
      std::vector<int> lits;
      for (int v = 1; v <= F.num_vars; ++v) lits.push_back(out.model[v] ? v : -v);
      j["model"] = lits;
    }
    std::cout << j.dump() << "\n";
  } else if (minlen->parsed()) {
    const Pfa A = load_automaton(min_input);
    const SyncMode mode = parse_mode(min_mode);
    min_cfg.use_filter = !no_filter;
    min_cfg.per_call = min_flags.budget();
    const auto start = std::chrono::steady_clock::now();
    json j;
    if (predict > 0) {
      const auto r = check_predicted(A, predict, mode, min_cfg, min_flags.backend());
      j = json{{"predicted", predict},
               {"confirmation", to_string(r.status)},
               {"at_len", sat::to_string(r.at_len)},
               {"below", sat::to_string(r.below)}};
      if (r.at_len == sat::Verdict::sat) j["witness"] = format_word(r.witness);
    } else {
      auto out = min_length(A, mode, min_cfg, min_flags.backend());
      if (oracle_fallback) out = resolve_with_oracle(A, mode, std::move(out));
      j = outcome_json(out);
    }
    j["mode"] = to_string(mode);
    j["time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << j.dump() << "\n";
  } else if (oracle->parsed()) {
    const Pfa A = load_automaton(oracle_input);
    const SyncMode mode = parse_mode(oracle_mode);
    const auto r = oracle_search(A, mode, oracle_cap);
    json j{{"mode", to_string(mode)}, {"found", r.found}, {"explored", r.explored}};
    if (r.found) {
      j["min_len"] = r.min_len;
      j["witness"] = format_word(r.witness);
    }
    std::cout << j.dump() << "\n";
  } else if (bench->parsed()) {
    const FamilySpec spec{parse_family(family_name), bench_n};
    const Pfa A = make_family(spec);
    json j{{"family", to_string(spec.family)}, {"n", spec.n}};
    if (has_predicted_length(spec.family)) j["predicted_length"] = predicted_length(spec);
    if (spec.family != Family::p && has_predicted_length(spec.family)) j["witness"] = format_word(witness_word(spec));
    if (!bench_output.empty()) {
      write_file(bench_output, bench_format == "json" ? automaton_to_json(A).dump(2) + "\n" : write_automaton_text(A));
      j["automaton"] = bench_output;
    }
    std::cout << j.dump() << "\n";
  } else if (exp->parsed()) {
    const auto ns = parse_int_list(exp_ns);
    const SyncMode mode = parse_mode(exp_mode);
    std::vector<RhoExpr> rhos;
    for (const auto& r : split_commas(exp_rhos)) rhos.push_back(parse_rho(r));
    ExperimentResult result;
    if (exp_series == "1") {
      result = run_series1(ns, mode, exp_opts);
    } else if (exp_series == "2") {
      result = run_series2(ns, exp_opts);
    } else if (exp_series == "3") {
      result = run_series3(ns, parse_int_list(exp_ms), rhos, exp_opts);
    } else {
      if (!rhos.empty()) {
        result = run_series4(ns, rhos, mode, exp_opts);
      } else {
        for (int n : ns) {
          auto part = run_series4({n}, series4_densities(n, mode), mode, exp_opts);
          result.records.insert(result.records.end(), part.records.begin(), part.records.end());
        }
        result = finish(std::move(result.records));
      }
    }
    if (!exp_out.empty()) {
      std::filesystem::create_directories(exp_out);
      const std::filesystem::path dir(exp_out);
      write_file((dir / "records.csv").string(), records_csv(result.records));
      write_file((dir / "aggregate.csv").string(), aggregate_csv(result.rows));
      for (const auto& [stem, points] : plot_series(result.rows))
        write_file((dir / (stem + ".dat")).string(), plot_text(points));
    }
    std::cout << aggregate_csv(result.rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const pfasync::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
