#pragma once

// CNF encodings of "A has a carefully (exactly) synchronizing word of length l".
//
// Variables, for states j in [0,n), letters i in [0,m), steps t:
//   y(j,t), 0 <= t <= l   state j is active after t letters
//   x(i,t), 1 <= t <= l   letter i sits at position t
// numbered y(j,t) = j+1 + t*s and x(i,t) = n + i+1 + (t-1)*s with stride
// s = n + (number of letter variables per position). With the binary
// optimisation there is one letter variable per position and x_t true means
// letter 0. Ladder auxiliaries are appended after all x/y variables.
//
// Clause order is fixed: initial clauses, then per position the letter and
// transition clauses (letter-major, state-minor), then the final-step group.

#include <string>
#include <vector>

#include "pfasync/cnf.hpp"
#include "pfasync/errors.hpp"
#include "pfasync/pfa.hpp"

namespace pfasync {

enum class SyncMode { careful, exact };

inline std::string to_string(SyncMode mode) { return mode == SyncMode::careful ? "csw" : "esw"; }

struct EncodeOptions {
  SyncMode mode = SyncMode::careful;
  /// Ladder encoding for the final at-most-one group.
  bool ladder = false;
  /// Ladder encoding for the per-position letter group as well.
  bool ladder_letters = false;
  /// One letter variable per position; requires a binary automaton.
  bool binary_opt = false;
  /// Replace the m transition clauses of a state whose letters all lead to the
  /// same target by the single clause -y(j,t-1) | y(k,t).
  bool merge_parallel = false;
};

struct VarMap {
  int n = 0;
  int m = 0;
  int len = 0;
  EncodeOptions options;
  int num_vars = 0;
  /// Variable of f_1 of the final-step ladder (f_j = sync_ladder_base + j - 1), 0 if absent.
  int sync_ladder_base = 0;
  /// Per position t (index t-1): variable of f_1 of the letter ladder, 0 if absent.
  std::vector<int> letter_ladder_base;

  int letter_slots() const { return options.binary_opt ? 1 : m; }
  int stride() const { return n + letter_slots(); }
  int core_vars() const { return n + len * stride(); }

  int y(State j, int t) const { return j + 1 + t * stride(); }

  /// Variable for letter i at position t (1-based t). Under the binary
  /// optimisation both letters share x_t.
  int x(Letter i, int t) const {
    if (options.binary_opt) return n + 1 + (t - 1) * stride();
    return n + i + 1 + (t - 1) * stride();
  }

  /// Literal that is true iff letter i is at position t.
  Lit letter_lit(Letter i, int t) const {
    if (options.binary_opt) return i == 0 ? x(0, t) : -x(0, t);
    return x(i, t);
  }

  int sync_ladder(int j) const { return sync_ladder_base + j - 1; }
};

/// Ladder encoding over `vars` (|vars| = k >= 2) with fresh variables
/// f_1..f_{k-1} numbered fresh_base .. fresh_base+k-2.
///
/// Validity clauses -f_{j+1} | f_j (j = 1..k-2) come first, then for each j the
/// channelling clauses of y_j <-> f_{j-1} & -f_j with f_0 = 1 and f_k = 0
/// simplified away; 4k-4 clauses in total. Since f_0 = 1 and f_k = 0 force a
/// step somewhere in the ladder, the set is satisfiable exactly when one of
/// the vars is true.
inline std::vector<Clause> ladder_amo(std::span<const int> vars, int fresh_base) {
  const int k = static_cast<int>(vars.size());
  if (k < 2) throw InputError("ladder encoding needs at least two variables");
  if (fresh_base < 1) throw InputError("ladder fresh variable base must be positive");
  auto f = [&](int j) { return fresh_base + j - 1; };
  std::vector<Clause> out;
  out.reserve(static_cast<std::size_t>(4 * k - 4));
  for (int j = 1; j <= k - 2; ++j) out.push_back({-f(j + 1), f(j)});
  for (int j = 1; j <= k; ++j) {
    const int y = vars[j - 1];
    // -f_{j-1} | f_j | y_j
    Clause c;
    if (j > 1) c.push_back(-f(j - 1));
    if (j < k) c.push_back(f(j));
    c.push_back(y);
    out.push_back(std::move(c));
    // -y_j | f_{j-1}   (tautology when j = 1)
    if (j > 1) out.push_back({-y, f(j - 1)});
    // -y_j | -f_j      (tautology when j = k)
    if (j < k) out.push_back({-y, -f(j)});
  }
  return out;
}

namespace detail {

inline void check_encode_args(const Pfa& A, int len, const EncodeOptions& opts) {
  if (len < 1) throw InputError("word length must be at least 1");
  if (opts.binary_opt && A.letters() != 2) throw OptionError("binary optimisation requires exactly two letters");
  if (opts.binary_opt && opts.ladder_letters) throw OptionError("letter ladder is meaningless under binary optimisation");
}

inline VarMap make_varmap(const Pfa& A, int len, const EncodeOptions& opts) {
  VarMap vm;
  vm.n = A.states();
  vm.m = A.letters();
  vm.len = len;
  vm.options = opts;
  int next_free = vm.core_vars() + 1;
  if (opts.ladder && vm.n >= 2) {
    vm.sync_ladder_base = next_free;
    next_free += vm.n - 1;
  }
  if (opts.ladder_letters && vm.m >= 2) {
    for (int t = 1; t <= len; ++t) {
      vm.letter_ladder_base.push_back(next_free);
      next_free += vm.m - 1;
    }
  }
  vm.num_vars = next_free - 1;
  return vm;
}

inline void add_initial(CnfFormula& F, const VarMap& vm) {
  for (State j = 0; j < vm.n; ++j) F.add({vm.y(j, 0)});
}

inline void add_letter_group(CnfFormula& F, const VarMap& vm, int t) {
  if (vm.options.binary_opt) return;
  std::vector<int> xs;
  for (Letter i = 0; i < vm.m; ++i) xs.push_back(vm.x(i, t));
  if (vm.options.ladder_letters && vm.m >= 2) {
    for (auto& c : ladder_amo(xs, vm.letter_ladder_base[t - 1])) F.add(std::move(c));
    return;
  }
  F.add(Clause(xs.begin(), xs.end()));
  for (Letter r = 0; r < vm.m; ++r)
    for (Letter s = r + 1; s < vm.m; ++s) F.add({-vm.x(r, t), -vm.x(s, t)});
}

/// Common target of state j under every letter, or kUndefined.
inline State parallel_target(const Pfa& A, State j) {
  if (A.letters() < 2) return kUndefined;
  const State k = A.next(j, 0);
  if (k == kUndefined) return kUndefined;
  for (Letter i = 1; i < A.letters(); ++i)
    if (A.next(j, i) != k) return kUndefined;
  return k;
}

/// Forward transition clauses for step t. With `block_undefined`, an
/// undefined (j,i) yields -y(j,t-1) | -x(i,t).
inline void add_forward(CnfFormula& F, const Pfa& A, const VarMap& vm, int t, bool block_undefined) {
  const bool merge = vm.options.merge_parallel;
  for (Letter i = 0; i < vm.m; ++i) {
    for (State j = 0; j < vm.n; ++j) {
      if (merge) {
        const State k = parallel_target(A, j);
        if (k != kUndefined) {
          if (i == 0) F.add({-vm.y(j, t - 1), vm.y(k, t)});
          continue;
        }
      }
      const State k = A.next(j, i);
      if (k != kUndefined)
        F.add({-vm.y(j, t - 1), -vm.letter_lit(i, t), vm.y(k, t)});
      else if (block_undefined)
        F.add({-vm.y(j, t - 1), -vm.letter_lit(i, t)});
    }
  }
}

/// Backward clauses for step t: a state active after t steps under letter i
/// must have an active preimage one step earlier.
inline void add_backward(CnfFormula& F, const Pfa& A, const VarMap& vm, int t) {
  for (Letter i = 0; i < vm.m; ++i) {
    for (State k = 0; k < vm.n; ++k) {
      Clause c{-vm.y(k, t), -vm.letter_lit(i, t)};
      for (State j = 0; j < vm.n; ++j)
        if (A.next(j, i) == k) c.push_back(vm.y(j, t - 1));
      F.add(std::move(c));
    }
  }
}

inline void add_final_amo(CnfFormula& F, const VarMap& vm) {
  if (vm.n < 2) return;
  std::vector<int> ys;
  for (State j = 0; j < vm.n; ++j) ys.push_back(vm.y(j, vm.len));
  if (vm.options.ladder) {
    for (auto& c : ladder_amo(ys, vm.sync_ladder_base)) F.add(std::move(c));
    return;
  }
  for (State r = 0; r < vm.n; ++r)
    for (State s = r + 1; s < vm.n; ++s) F.add({-ys[r], -ys[s]});
}

}  // namespace detail

struct Encoding {
  CnfFormula formula;
  VarMap varmap;
};

/// Satisfiable iff A has a carefully synchronizing word of length len.
/// Without options: (m+n)len + n variables and
/// len(m(m-1)/2 + mn + 1) + n(n+1)/2 clauses.
inline Encoding encode_csw(const Pfa& A, int len, EncodeOptions opts = {}) {
  opts.mode = SyncMode::careful;
  detail::check_encode_args(A, len, opts);
  Encoding e;
  e.varmap = detail::make_varmap(A, len, opts);
  e.formula.num_vars = e.varmap.num_vars;
  detail::add_initial(e.formula, e.varmap);
  for (int t = 1; t <= len; ++t) {
    detail::add_letter_group(e.formula, e.varmap, t);
    detail::add_forward(e.formula, A, e.varmap, t, /*block_undefined=*/true);
  }
  detail::add_final_amo(e.formula, e.varmap);
  return e;
}

/// Satisfiable iff A has an exactly synchronizing word of length len.
///
/// Forward clauses without undefined-blocking, plus backward clauses, pin
/// y(.,t) to the exact image of Q under the length-t prefix; the final group
/// then requires that image to be a singleton.
inline Encoding encode_esw(const Pfa& A, int len, EncodeOptions opts = {}) {
  opts.mode = SyncMode::exact;
  detail::check_encode_args(A, len, opts);
  Encoding e;
  e.varmap = detail::make_varmap(A, len, opts);
  e.formula.num_vars = e.varmap.num_vars;
  detail::add_initial(e.formula, e.varmap);
  for (int t = 1; t <= len; ++t) {
    detail::add_letter_group(e.formula, e.varmap, t);
    detail::add_forward(e.formula, A, e.varmap, t, /*block_undefined=*/false);
    detail::add_backward(e.formula, A, e.varmap, t);
  }
  detail::add_final_amo(e.formula, e.varmap);
  // The ladder already forces one active state; pairwise AMO does not.
  if (!(opts.ladder && e.varmap.n >= 2)) {
    Clause alo;
    for (State j = 0; j < e.varmap.n; ++j) alo.push_back(e.varmap.y(j, len));
    e.formula.add(std::move(alo));
  }
  return e;
}

inline Encoding encode(const Pfa& A, int len, const EncodeOptions& opts) {
  return opts.mode == SyncMode::careful ? encode_csw(A, len, opts) : encode_esw(A, len, opts);
}

}  // namespace pfasync
