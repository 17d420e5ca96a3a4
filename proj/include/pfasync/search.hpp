#pragma once

// Minimum-length search over SAT queries "is there a synchronizing word of
// length l?".
//
// Careful mode with a total letter uses doubling (1, 2, 4, ...) followed by
// bisection between the last unsatisfiable and first satisfiable power; a
// total letter makes existence monotone in l, since prefixing a csw with that
// letter yields a longer csw. Without a total letter, and always in exact
// mode, lengths are tried one by one.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pfasync/dimacs.hpp"
#include "pfasync/encoding.hpp"
#include "pfasync/errors.hpp"
#include "pfasync/oracles.hpp"
#include "pfasync/pfa.hpp"
#include "pfasync/solver.hpp"

namespace pfasync {

enum class SearchStatus { synchronizing, not_synchronizing, inconclusive };
enum class Certificate { none, filter, oracle };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::synchronizing: return "synchronizing";
    case SearchStatus::not_synchronizing: return "not_synchronizing";
    case SearchStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::none: return "none";
    case Certificate::filter: return "filter";
    case Certificate::oracle: return "oracle";
  }
  return "none";
}

struct SearchOutcome {
  SearchStatus status = SearchStatus::inconclusive;
  int min_len = -1;
  Word witness;
  /// Set when status is not_synchronizing.
  Certificate certificate = Certificate::none;
  /// Largest length submitted before giving up; set when inconclusive.
  int max_len_tried = 0;
  /// Lengths submitted to the solver, in order.
  std::vector<int> query_trace;
};

/// Answer to one length query.
struct LengthAnswer {
  sat::Verdict verdict = sat::Verdict::budget_exceeded;
  Word witness;
};

struct SearchConfig {
  /// Largest power of two tried by the doubling phase.
  int doubling_cap = 1 << 14;
  /// Largest length tried by incremental search.
  int incremental_cap = 64;
  sat::Budget per_call{1'000'000, 0.0};
  /// Run the binary cyclic-state filter before any solver call.
  bool use_filter = true;
  bool ladder = false;
  /// Binary optimisation whenever the automaton has two letters.
  bool binary_opt = true;
  bool merge_parallel = true;
};

/// Doubling then bisection. `query(l)` must be monotone: sat at l implies sat
/// at every larger length.
template <class Query>
SearchOutcome doubling_search(Query&& query, int cap) {
  SearchOutcome out;
  int lo = 0;
  int hi = -1;
  for (int len = 1;; len *= 2) {
    if (len > cap) {
      out.max_len_tried = lo;
      return out;
    }
    out.query_trace.push_back(len);
    LengthAnswer ans = query(len);
    if (ans.verdict == sat::Verdict::budget_exceeded) {
      out.max_len_tried = len;
      return out;
    }
    if (ans.verdict == sat::Verdict::sat) {
      hi = len;
      out.witness = std::move(ans.witness);
      break;
    }
    lo = len;
    if (len > cap / 2) {
      out.max_len_tried = len;
      return out;
    }
  }
  // lo is hi/2, or 0 when the very first query succeeded.
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    out.query_trace.push_back(mid);
    LengthAnswer ans = query(mid);
    if (ans.verdict == sat::Verdict::budget_exceeded) {
      out.max_len_tried = mid;
      return out;
    }
    if (ans.verdict == sat::Verdict::sat) {
      hi = mid;
      out.witness = std::move(ans.witness);
    } else {
      lo = mid;
    }
  }
  out.status = SearchStatus::synchronizing;
  out.min_len = hi;
  return out;
}

/// Tries l = 1, 2, ..., cap and stops at the first satisfiable length.
template <class Query>
SearchOutcome incremental_search(Query&& query, int cap) {
  SearchOutcome out;
  for (int len = 1; len <= cap; ++len) {
    out.query_trace.push_back(len);
    LengthAnswer ans = query(len);
    out.max_len_tried = len;
    if (ans.verdict == sat::Verdict::budget_exceeded) return out;
    if (ans.verdict == sat::Verdict::sat) {
      out.status = SearchStatus::synchronizing;
      out.min_len = len;
      out.witness = std::move(ans.witness);
      out.max_len_tried = 0;
      return out;
    }
  }
  return out;
}

inline EncodeOptions search_encode_options(const Pfa& A, SyncMode mode, const SearchConfig& cfg) {
  EncodeOptions opts;
  opts.mode = mode;
  opts.ladder = cfg.ladder;
  opts.binary_opt = cfg.binary_opt && A.letters() == 2;
  opts.merge_parallel = cfg.merge_parallel;
  return opts;
}

/// Encodes (A, l), solves it and decodes the witness, which is re-checked
/// against the automaton.
inline LengthAnswer solve_length(const Pfa& A, int len, SyncMode mode, const SearchConfig& cfg, const sat::Backend& backend) {
  const Encoding e = encode(A, len, search_encode_options(A, mode, cfg));
  const sat::SolveOutcome r = backend(e.formula, cfg.per_call);
  LengthAnswer ans{r.verdict, {}};
  if (r.verdict == sat::Verdict::sat) {
    ans.witness = decode_word(r.model, e.varmap);
    const bool ok = mode == SyncMode::careful ? is_csw(A, ans.witness) : is_esw(A, ans.witness);
    if (!ok) throw IntegrityError("decoded word " + format_word(ans.witness) + " does not synchronize");
  }
  return ans;
}

inline SearchOutcome trivial_outcome() {
  SearchOutcome out;
  out.status = SearchStatus::synchronizing;
  out.min_len = 0;
  return out;
}

/// Minimum length of a carefully synchronizing word.
inline SearchOutcome min_csw(const Pfa& A, const SearchConfig& cfg = {}, const sat::Backend& backend = sat::builtin_backend()) {
  if (A.states() == 1) return trivial_outcome();
  if (cfg.use_filter && A.letters() == 2 && cyclic_filter(A)) {
    SearchOutcome out;
    out.status = SearchStatus::not_synchronizing;
    out.certificate = Certificate::filter;
    return out;
  }
  auto query = [&](int len) { return solve_length(A, len, SyncMode::careful, cfg, backend); };
  if (A.has_total_letter()) return doubling_search(query, cfg.doubling_cap);
  return incremental_search(query, cfg.incremental_cap);
}

/// Minimum length of an exactly synchronizing word. Existence is not monotone
/// in the length, so every length up to the cap is tried in turn.
inline SearchOutcome min_esw(const Pfa& A, const SearchConfig& cfg = {}, const sat::Backend& backend = sat::builtin_backend()) {
  if (A.states() == 1) return trivial_outcome();
  auto query = [&](int len) { return solve_length(A, len, SyncMode::exact, cfg, backend); };
  return incremental_search(query, cfg.incremental_cap);
}

inline SearchOutcome min_length(const Pfa& A, SyncMode mode, const SearchConfig& cfg = {},
                                const sat::Backend& backend = sat::builtin_backend()) {
  return mode == SyncMode::careful ? min_csw(A, cfg, backend) : min_esw(A, cfg, backend);
}

/// Settles an inconclusive outcome with the exhaustive oracle when the
/// automaton is small enough; other outcomes are returned unchanged.
inline SearchOutcome resolve_with_oracle(const Pfa& A, SyncMode mode, SearchOutcome outcome, int cap = kDefaultOracleCap) {
  if (outcome.status != SearchStatus::inconclusive || A.states() > cap) return outcome;
  const auto r = oracle_search(A, mode, cap);
  if (r.found) {
    outcome.status = SearchStatus::synchronizing;
    outcome.min_len = r.min_len;
    outcome.witness = r.witness;
    outcome.certificate = Certificate::oracle;
  } else {
    outcome.status = SearchStatus::not_synchronizing;
    outcome.certificate = Certificate::oracle;
  }
  return outcome;
}

enum class Confirmation { confirmed, too_short, too_long, inconclusive };

inline const char* to_string(Confirmation c) {
  switch (c) {
    case Confirmation::confirmed: return "confirmed";
    case Confirmation::too_short: return "too_short";
    case Confirmation::too_long: return "too_long";
    case Confirmation::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct ConfirmResult {
  Confirmation status = Confirmation::inconclusive;
  sat::Verdict at_len = sat::Verdict::budget_exceeded;
  sat::Verdict below = sat::Verdict::budget_exceeded;
  Word witness;
};

/// Confirms a predicted minimum length with two queries, at len and len-1.
/// `too_short` means len itself is unsatisfiable; `too_long` means len-1 is
/// already satisfiable.
inline ConfirmResult check_predicted(const Pfa& A, int len, SyncMode mode, const SearchConfig& cfg = {},
                                     const sat::Backend& backend = sat::builtin_backend()) {
  if (len < 1) throw InputError("predicted length must be at least 1");
  ConfirmResult r;
  LengthAnswer at = solve_length(A, len, mode, cfg, backend);
  r.at_len = at.verdict;
  r.witness = std::move(at.witness);
  if (len - 1 == 0) {
    // The empty word synchronizes only a one-state automaton.
    r.below = A.states() > 1 ? sat::Verdict::unsat : sat::Verdict::sat;
  } else {
    r.below = solve_length(A, len - 1, mode, cfg, backend).verdict;
  }
  if (r.at_len == sat::Verdict::unsat)
    r.status = Confirmation::too_short;
  else if (r.below == sat::Verdict::sat)
    r.status = Confirmation::too_long;
  else if (r.at_len == sat::Verdict::sat && r.below == sat::Verdict::unsat)
    r.status = Confirmation::confirmed;
  return r;
}

}  // namespace pfasync
