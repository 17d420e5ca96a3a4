#pragma once

// Batch experiments over random automata: per-trial records, aggregation by
// configuration, and CSV / plot-file reporting.
//
// Each trial generates one automaton from its own seed, searches for a
// shortest synchronizing word with the SAT pipeline and, when the search runs
// out of budget, falls back to the exhaustive oracle for small automata.
// Trials run on a bounded pool of worker threads; records are sorted by
// (series, n, m, rho, mode, seed) afterwards so output does not depend on
// scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "pfasync/errors.hpp"
#include "pfasync/oracles.hpp"
#include "pfasync/random.hpp"
#include "pfasync/search.hpp"
#include "pfasync/solver.hpp"
#include "pfasync/stats.hpp"

namespace pfasync {

enum class TrialStatus { sync, nonsync_filter, nonsync_oracle, inconclusive };

inline const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::sync: return "sync";
    case TrialStatus::nonsync_filter: return "nonsync-filter";
    case TrialStatus::nonsync_oracle: return "nonsync-oracle";
    case TrialStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct TrialRecord {
  Series series = Series::s1;
  int n = 0;
  int m = 2;
  int rho = 0;
  std::uint64_t seed = 0;
  SyncMode mode = SyncMode::careful;
  TrialStatus status = TrialStatus::inconclusive;
  std::optional<int> min_len;  // present iff status == sync
  int solver_calls = 0;
  double wall_ms = 0;
};

/// Density as a function of n: coef * n + offset, written like "2n-1" or "17".
struct RhoExpr {
  int coef = 0;
  int offset = 0;

  int at(int n) const { return coef * n + offset; }
};

inline RhoExpr parse_rho(const std::string& text) {
  RhoExpr r;
  const auto pos = text.find('n');
  try {
    std::size_t used = 0;
    if (pos == std::string::npos) {
      r.offset = std::stoi(text, &used);
      if (used != text.size()) throw InputError("");
      return r;
    }
    const auto head = text.substr(0, pos);
    r.coef = head.empty() ? 1 : head == "-" ? -1 : std::stoi(head, &used);
    if (!head.empty() && head != "-" && used != head.size()) throw InputError("");
    const auto tail = text.substr(pos + 1);
    if (!tail.empty()) {
      if (tail[0] != '+' && tail[0] != '-') throw InputError("");
      r.offset = std::stoi(tail, &used);
      if (used != tail.size()) throw InputError("");
    }
  } catch (const std::exception&) {
    throw InputError("bad density expression '" + text + "'");
  }
  return r;
}

struct ExperimentOptions {
  std::uint64_t seed = 1;
  int trials = 100;
  int jobs = 1;
  /// Oracle fallback for inconclusive searches up to this many states.
  int oracle_cap = kDefaultOracleCap;
  /// Record wall_ms as 0 so repeated runs produce identical files.
  bool deterministic = false;
  SearchConfig search = harness_search_config();

  static SearchConfig harness_search_config() {
    SearchConfig c;
    c.doubling_cap = 64;
    c.incremental_cap = 32;
    c.per_call = sat::Budget{200'000, 0.0};
    return c;
  }
};

/// Runs one trial: generate, search, fall back to the oracle when needed.
inline TrialRecord run_trial(const GenSpec& spec, const ExperimentOptions& opts, const sat::Backend* backend = nullptr) {
  TrialRecord rec;
  rec.series = spec.series;
  rec.n = spec.n;
  rec.m = spec.m;
  rec.rho = spec.rho;
  rec.seed = spec.seed;
  rec.mode = spec.mode;
  const auto start = std::chrono::steady_clock::now();
  const Pfa A = gen_random(spec);
  const sat::Backend solver = backend ? *backend : sat::builtin_backend(spec.seed);
  SearchOutcome out = min_length(A, spec.mode, opts.search, solver);
  rec.solver_calls = static_cast<int>(out.query_trace.size());
  out = resolve_with_oracle(A, spec.mode, std::move(out), opts.oracle_cap);
  switch (out.status) {
    case SearchStatus::synchronizing:
      rec.status = TrialStatus::sync;
      rec.min_len = out.min_len;
      break;
    case SearchStatus::not_synchronizing:
      rec.status = out.certificate == Certificate::filter ? TrialStatus::nonsync_filter : TrialStatus::nonsync_oracle;
      break;
    case SearchStatus::inconclusive: rec.status = TrialStatus::inconclusive; break;
  }
  if (!opts.deterministic)
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline auto record_key(const TrialRecord& r) {
  return std::make_tuple(static_cast<int>(r.series), r.n, r.m, r.rho, static_cast<int>(r.mode), r.seed);
}

/// Runs the given trials on up to opts.jobs threads and returns the records
/// in sorted order. The first exception thrown by a trial is rethrown.
inline std::vector<TrialRecord> run_trials(const std::vector<GenSpec>& specs, const ExperimentOptions& opts) {
  std::vector<TrialRecord> records(specs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      try {
        records[i] = run_trial(specs[i], opts);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(specs.size());
        return;
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(specs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return record_key(a) < record_key(b); });
  return records;
}

struct AggregateRow {
  Series series = Series::s1;
  int n = 0;
  int m = 2;
  int rho = 0;
  SyncMode mode = SyncMode::careful;
  int trials = 0;
  int sync = 0;
  int inconclusive = 0;
  /// sync / (trials - inconclusive); NaN when every trial was inconclusive.
  double fraction = NAN;
  /// Over synchronizing trials; NaN when undefined.
  double mean_len = NAN;
  double rsd = NAN;
};

/// Groups records by configuration; rows come out in key order.
inline std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& records) {
  std::map<std::tuple<int, int, int, int, int>, std::pair<AggregateRow, std::vector<double>>> groups;
  for (const auto& r : records) {
    auto key = std::make_tuple(static_cast<int>(r.series), r.n, r.m, r.rho, static_cast<int>(r.mode));
    auto& [row, lengths] = groups[key];
    row.series = r.series;
    row.n = r.n;
    row.m = r.m;
    row.rho = r.rho;
    row.mode = r.mode;
    ++row.trials;
    if (r.status == TrialStatus::inconclusive) ++row.inconclusive;
    if (r.status == TrialStatus::sync) {
      ++row.sync;
      lengths.push_back(*r.min_len);
    }
  }
  std::vector<AggregateRow> rows;
  for (auto& [key, group] : groups) {
    auto& [row, lengths] = group;
    const int decided = row.trials - row.inconclusive;
    if (decided > 0) row.fraction = static_cast<double>(row.sync) / decided;
    if (!lengths.empty()) row.mean_len = mean(lengths);
    if (lengths.size() >= 2 && row.mean_len > 0) row.rsd = rsd(lengths);
    rows.push_back(row);
  }
  return rows;
}

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<AggregateRow> rows;
};

inline ExperimentResult finish(std::vector<TrialRecord> records) {
  ExperimentResult r;
  r.rows = aggregate(records);
  r.records = std::move(records);
  return r;
}

inline void check_trials(int trials, int minimum) {
  if (trials < minimum) throw InputError("need at least " + std::to_string(minimum) + " trials");
}

inline GenSpec trial_spec(Series series, int n, int m, int rho, SyncMode mode, const ExperimentOptions& opts, int index) {
  GenSpec g;
  g.series = series;
  g.n = n;
  g.m = m;
  g.rho = rho;
  g.mode = mode;
  // Careful and exact runs of series 1 share seeds, so both modes see the same automata.
  g.seed = trial_seed(opts.seed, static_cast<int>(series) * 1000 + m * 10 + (series == Series::s4 ? static_cast<int>(mode) : 0), n,
                      static_cast<std::uint64_t>(index) * 4099 + static_cast<std::uint64_t>(rho));
  return g;
}

/// Fraction of almost complete binary PFAs that synchronize in the given mode.
inline ExperimentResult run_series1(const std::vector<int>& ns, SyncMode mode, const ExperimentOptions& opts) {
  check_trials(opts.trials, 1);
  std::vector<GenSpec> specs;
  for (int n : ns)
    for (int i = 0; i < opts.trials; ++i) specs.push_back(trial_spec(Series::s1, n, 2, 2 * n - 1, mode, opts, i));
  return finish(run_trials(specs, opts));
}

/// Mean and relative standard deviation of the shortest careful length over
/// synchronizing almost complete binary PFAs.
inline ExperimentResult run_series2(const std::vector<int>& ns, const ExperimentOptions& opts) {
  check_trials(opts.trials, 2);
  std::vector<GenSpec> specs;
  for (int n : ns)
    for (int i = 0; i < opts.trials; ++i)
      specs.push_back(trial_spec(Series::s2, n, 2, 2 * n - 1, SyncMode::careful, opts, i));
  return finish(run_trials(specs, opts));
}

/// Careful lengths over alphabets of several sizes: letter 0 total, the other
/// letters with random supports. Density 0 leaves supports unconstrained.
inline ExperimentResult run_series3(const std::vector<int>& ns, const std::vector<int>& ms, const std::vector<RhoExpr>& rhos,
                                    const ExperimentOptions& opts) {
  check_trials(opts.trials, 1);
  std::vector<GenSpec> specs;
  const std::vector<RhoExpr> densities = rhos.empty() ? std::vector<RhoExpr>{RhoExpr{}} : rhos;
  for (int n : ns)
    for (int m : ms)
      for (const auto& expr : densities)
        for (int i = 0; i < opts.trials; ++i)
          specs.push_back(trial_spec(Series::s3, n, m, expr.at(n), SyncMode::careful, opts, i));
  return finish(run_trials(specs, opts));
}

/// Binary PFAs of fixed density; careful mode keeps letter 0 total.
inline ExperimentResult run_series4(const std::vector<int>& ns, const std::vector<RhoExpr>& rhos, SyncMode mode,
                                    const ExperimentOptions& opts) {
  check_trials(opts.trials, 1);
  std::vector<GenSpec> specs;
  for (int n : ns)
    for (const auto& expr : rhos)
      for (int i = 0; i < opts.trials; ++i) specs.push_back(trial_spec(Series::s4, n, 2, expr.at(n), mode, opts, i));
  return finish(run_trials(specs, opts));
}

/// Every integer density the series admits for n in the given mode.
inline std::vector<RhoExpr> series4_densities(int n, SyncMode mode) {
  std::vector<RhoExpr> out;
  for (int rho = mode == SyncMode::careful ? n + 1 : 2; rho <= 2 * n - 1; ++rho) out.push_back(RhoExpr{0, rho});
  return out;
}

/// Floating-point value with 9 significant digits; NaN prints as an empty field.
inline std::string format_float(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string out = "series,n,m,rho,seed,mode,status,min_len,solver_calls,wall_ms\n";
  for (const auto& r : records) {
    out += to_string(r.series) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + std::to_string(r.rho) + ',' +
           std::to_string(r.seed) + ',' + to_string(r.mode) + ',' + to_string(r.status) + ',' +
           (r.min_len ? std::to_string(*r.min_len) : std::string()) + ',' + std::to_string(r.solver_calls) + ',' +
           format_float(r.wall_ms) + '\n';
  }
  return out;
}

inline std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::string out = "series,n,m,rho,mode,trials,sync,inconclusive,fraction,mean_len,rsd\n";
  for (const auto& r : rows) {
    out += to_string(r.series) + ',' + std::to_string(r.n) + ',' + std::to_string(r.m) + ',' + std::to_string(r.rho) + ',' +
           to_string(r.mode) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.sync) + ',' +
           std::to_string(r.inconclusive) + ',' + format_float(r.fraction) + ',' + format_float(r.mean_len) + ',' +
           format_float(r.rsd) + '\n';
  }
  return out;
}

using PlotSeries = std::vector<std::pair<double, double>>;

/// Plot-ready (x, y) series keyed by file stem: synchronization fractions and
/// mean lengths against n, RSD against n, and for series 4 mean lengths
/// against the density.
inline std::map<std::string, PlotSeries> plot_series(const std::vector<AggregateRow>& rows) {
  std::map<std::string, PlotSeries> out;
  for (const auto& r : rows) {
    const std::string base = "series" + to_string(r.series) + "_" + to_string(r.mode);
    switch (r.series) {
      case Series::s1:
        if (!std::isnan(r.fraction)) out[base + "_fraction"].emplace_back(r.n, r.fraction);
        break;
      case Series::s2:
        if (!std::isnan(r.mean_len)) out[base + "_mean"].emplace_back(r.n, r.mean_len);
        if (!std::isnan(r.rsd)) out[base + "_rsd"].emplace_back(r.n, r.rsd);
        break;
      case Series::s3:
        if (!std::isnan(r.mean_len)) out[base + "_m" + std::to_string(r.m) + "_mean"].emplace_back(r.n, r.mean_len);
        break;
      case Series::s4:
        if (!std::isnan(r.mean_len)) out[base + "_n" + std::to_string(r.n) + "_mean"].emplace_back(r.rho, r.mean_len);
        break;
      case Series::nonexact: break;
    }
  }
  return out;
}

inline std::string plot_text(const PlotSeries& points) {
  std::string out;
  for (const auto& [x, y] : points) out += format_float(x) + ' ' + format_float(y) + '\n';
  return out;
}

}  // namespace pfasync
