#pragma once

// External SAT solver driven as a subprocess.
//
// The solver is invoked as `<path> [extra args...] <input.cnf> <result-file>`
// (the MiniSat convention). The verdict is read from the result file when the
// solver wrote one, otherwise from its standard output. Accepted verdict lines
// are "SAT"/"SATISFIABLE"/"UNSAT"/"UNSATISFIABLE", optionally prefixed by "s ";
// model literals may be prefixed by "v " and end with 0.

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pfasync/automaton_io.hpp"
#include "pfasync/dimacs.hpp"
#include "pfasync/errors.hpp"
#include "pfasync/solver.hpp"

namespace pfasync::sat {

struct ExternalSolver {
  std::string path;
  std::vector<std::string> extra_args;
  /// Leave the temporary CNF and result files behind.
  bool keep_files = false;
  std::string temp_dir;  // empty: system temp directory
};

/// Environment variable naming the default external solver.
inline constexpr const char* kSolverEnv = "PFASYNC_SOLVER";

namespace detail {

inline std::string resolve_executable(const std::string& path) {
  if (path.empty()) throw ConfigError("no external solver configured");
  if (path.find('/') != std::string::npos) {
    if (::access(path.c_str(), X_OK) != 0) throw ConfigError("solver not executable: " + path);
    return path;
  }
  const char* env = std::getenv("PATH");
  std::stringstream dirs(env ? env : "");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    auto candidate = dir + "/" + path;
    if (::access(candidate.c_str(), X_OK) == 0) return candidate;
  }
  throw ConfigError("solver not found on PATH: " + path);
}

inline std::string make_temp(const std::string& dir, const std::string& suffix) {
  auto base = dir.empty() ? std::filesystem::temp_directory_path().string() : dir;
  std::string tmpl = base + "/pfasync-XXXXXX" + suffix;
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  const int fd = ::mkstemps(buf.data(), static_cast<int>(suffix.size()));
  if (fd < 0) throw ProcessError("cannot create temporary file in " + base);
  ::close(fd);
  return std::string(buf.data());
}

struct TempFiles {
  std::vector<std::string> paths;
  bool keep = false;
  ~TempFiles() {
    if (keep) return;
    for (const auto& p : paths) ::unlink(p.c_str());
  }
};

struct ParsedResult {
  bool have_verdict = false;
  bool sat = false;
  std::vector<long long> literals;
  bool terminated = false;
};

inline ParsedResult parse_result(const std::string& text) {
  ParsedResult r;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") continue;
    if (tok == "s") {
      if (!(ls >> tok)) continue;
    }
    if (tok == "SAT" || tok == "SATISFIABLE") {
      r.have_verdict = true;
      r.sat = true;
      continue;
    }
    if (tok == "UNSAT" || tok == "UNSATISFIABLE") {
      r.have_verdict = true;
      r.sat = false;
      continue;
    }
    if (tok == "INDET" || tok == "UNKNOWN") continue;
    if (!r.have_verdict || !r.sat) continue;
    std::istringstream lits(line);
    std::string item;
    while (lits >> item) {
      if (item == "v") continue;
      try {
        std::size_t used = 0;
        const long long v = std::stoll(item, &used);
        if (used != item.size()) throw ProcessError("unparseable model token '" + item + "'");
        if (v == 0) {
          r.terminated = true;
          break;
        }
        r.literals.push_back(v);
      } catch (const std::invalid_argument&) {
        throw ProcessError("unparseable model token '" + item + "'");
      } catch (const std::out_of_range&) {
        throw ProcessError("unparseable model token '" + item + "'");
      }
    }
  }
  return r;
}

}  // namespace detail

/// Runs an external solver on F. Sat models are verified locally; a model that
/// violates F raises IntegrityError.
inline SolveOutcome solve_external(const CnfFormula& F, const ExternalSolver& solver, const Budget& budget = {}) {
  F.validate();
  const std::string exe = detail::resolve_executable(solver.path);
  detail::TempFiles temps;
  temps.keep = solver.keep_files;
  const auto cnf_path = detail::make_temp(solver.temp_dir, ".cnf");
  temps.paths.push_back(cnf_path);
  const auto result_path = detail::make_temp(solver.temp_dir, ".out");
  temps.paths.push_back(result_path);
  const auto stdout_path = detail::make_temp(solver.temp_dir, ".log");
  temps.paths.push_back(stdout_path);
  write_file(cnf_path, write_dimacs(F));
  // Some solvers refuse to overwrite; start from an absent result file.
  ::unlink(result_path.c_str());

  std::vector<std::string> args{exe};
  args.insert(args.end(), solver.extra_args.begin(), solver.extra_args.end());
  args.push_back(cnf_path);
  args.push_back(result_path);
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw ProcessError("fork failed");
  if (pid == 0) {
    const int fd = ::open(stdout_path.c_str(), O_WRONLY | O_TRUNC);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::dup2(fd, STDERR_FILENO);
      ::close(fd);
    }
    ::execv(exe.c_str(), argv.data());
    ::_exit(127);
  }

  int status = 0;
  bool timed_out = false;
  for (;;) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw ProcessError("waitpid failed");
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (budget.max_seconds > 0 && elapsed > budget.max_seconds) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }

  SolveOutcome out;
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (timed_out) {
    out.verdict = Verdict::budget_exceeded;
    return out;
  }
  if (WIFSIGNALED(status)) throw ProcessError("solver killed by signal " + std::to_string(WTERMSIG(status)));
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code == 127) throw ProcessError("solver could not be executed: " + exe);

  std::string text;
  if (std::filesystem::exists(result_path) && std::filesystem::file_size(result_path) > 0)
    text = read_file(result_path);
  else
    text = read_file(stdout_path);
  auto parsed = detail::parse_result(text);
  if (!parsed.have_verdict) {
    if (code != 0 && code != 10 && code != 20) throw ProcessError("solver exited with status " + std::to_string(code));
    out.verdict = Verdict::budget_exceeded;
    return out;
  }
  if (!parsed.sat) {
    out.verdict = Verdict::unsat;
    return out;
  }
  if (!parsed.terminated) throw ProcessError("model line not terminated by 0");
  out.verdict = Verdict::sat;
  out.model.assign(static_cast<std::size_t>(F.num_vars) + 1, false);
  for (long long l : parsed.literals) {
    const long long v = l < 0 ? -l : l;
    if (v > F.num_vars) throw ProcessError("model mentions unknown variable " + std::to_string(v));
    out.model[static_cast<std::size_t>(v)] = l > 0;
  }
  verify_model(F, out.model);
  return out;
}

inline Backend external_backend(ExternalSolver solver) {
  return [solver = std::move(solver)](const CnfFormula& F, const Budget& b) { return solve_external(F, solver, b); };
}

}  // namespace pfasync::sat
