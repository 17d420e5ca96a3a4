#pragma once

// Conflict-driven clause learning SAT solver.
//
// Two-literal watching with blocker literals, first-UIP learning with
// recursive minimisation, VSIDS on a binary heap, phase saving, geometric
// restarts and LBD-guided learnt clause reduction. No preprocessing.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "pfasync/cnf.hpp"
#include "pfasync/errors.hpp"

namespace pfasync::sat {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed5a7ULL;

struct Budget {
  /// Negative: unlimited.
  std::int64_t max_conflicts = -1;
  /// Non-positive: unlimited.
  double max_seconds = 0.0;
};

enum class Verdict { sat, unsat, budget_exceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::sat: return "SAT";
    case Verdict::unsat: return "UNSAT";
    case Verdict::budget_exceeded: return "UNKNOWN";
  }
  return "UNKNOWN";
}

struct SolveStats {
  std::int64_t decisions = 0;
  std::int64_t propagations = 0;
  std::int64_t conflicts = 0;
  std::int64_t restarts = 0;
  double seconds = 0.0;
};

struct SolveOutcome {
  Verdict verdict = Verdict::budget_exceeded;
  /// Indexed by variable, entry 0 unused. Only meaningful when verdict is sat.
  Model model;
  SolveStats stats;
};

class Solver {
 public:
  explicit Solver(int num_vars, std::uint64_t seed = kDefaultSeed) : rng_(seed) {
    const auto nv = static_cast<std::size_t>(num_vars);
    assigns_.assign(nv, 0);
    level_.assign(nv, 0);
    reason_.assign(nv, kNoReason);
    polarity_.assign(nv, 1);
    seen_.assign(nv, 0);
    activity_.assign(nv, 0.0);
    heap_index_.assign(nv, -1);
    watches_.resize(2 * nv);
    // Tiny seeded jitter fixes tie-breaking among equally active variables.
    std::uniform_real_distribution<double> jitter(0.0, 1e-5);
    for (std::size_t v = 0; v < nv; ++v) {
      activity_[v] = jitter(rng_);
      heap_insert(static_cast<int>(v));
    }
  }

  int num_vars() const { return static_cast<int>(assigns_.size()); }

  /// Adds a clause of DIMACS literals. Returns false once the clause set is
  /// known to be unsatisfiable.
  bool add_clause(std::span<const Lit> dimacs) {
    if (!ok_) return false;
    std::vector<LitCode> lits;
    lits.reserve(dimacs.size());
    for (Lit l : dimacs) {
      if (l == 0 || std::abs(l) > num_vars()) throw InputError("literal out of range: " + std::to_string(l));
      lits.push_back(encode(l));
    }
    std::sort(lits.begin(), lits.end());
    std::vector<LitCode> kept;
    LitCode prev = kNoLit;
    for (LitCode p : lits) {
      if (p == prev) continue;
      if (prev != kNoLit && p == (prev ^ 1U)) return true;  // tautology
      const int v = value(p);
      if (v > 0) return true;  // already satisfied at level 0
      if (v < 0) continue;     // false at level 0
      kept.push_back(p);
      prev = p;
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      if (propagate() != kNoReason) ok_ = false;
      return ok_;
    }
    clauses_.push_back(ClauseData{std::move(kept), 0.0, 0, false});
    watch(static_cast<std::uint32_t>(clauses_.size() - 1));
    return true;
  }

  Verdict solve(const Budget& budget = {}) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    Verdict result = Verdict::budget_exceeded;
    if (!ok_) {
      result = Verdict::unsat;
    } else {
      double restart_limit = 100.0;
      max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
      const std::int64_t conflict_start = stats_.conflicts;
      for (;;) {
        const auto status = search(static_cast<std::int64_t>(restart_limit), budget, conflict_start, elapsed);
        if (status != Status::restart) {
          result = status == Status::sat ? Verdict::sat : status == Status::unsat ? Verdict::unsat : Verdict::budget_exceeded;
          break;
        }
        ++stats_.restarts;
        restart_limit *= 1.5;
      }
    }
    if (result == Verdict::sat) {
      model_.assign(static_cast<std::size_t>(num_vars()) + 1, false);
      for (int v = 0; v < num_vars(); ++v) model_[v + 1] = assigns_[v] > 0;
    }
    cancel_until(0);
    stats_.seconds += elapsed();
    return result;
  }

  const Model& model() const { return model_; }
  const SolveStats& stats() const { return stats_; }

 private:
  using LitCode = std::uint32_t;
  static constexpr LitCode kNoLit = std::numeric_limits<LitCode>::max();
  static constexpr std::uint32_t kNoReason = std::numeric_limits<std::uint32_t>::max();

  enum class Status { sat, unsat, restart, budget };

  struct ClauseData {
    std::vector<LitCode> lits;
    double activity;
    int lbd;
    bool learnt;
  };

  struct Watcher {
    std::uint32_t cref;
    LitCode blocker;
  };

  static LitCode encode(Lit l) { return static_cast<LitCode>(2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0)); }
  static int var(LitCode p) { return static_cast<int>(p >> 1); }
  static bool sign(LitCode p) { return (p & 1U) != 0; }

  /// +1 true, -1 false, 0 unassigned.
  int value(LitCode p) const {
    const int a = assigns_[var(p)];
    return sign(p) ? -a : a;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void watch(std::uint32_t cref) {
    const auto& c = clauses_[cref].lits;
    watches_[c[0] ^ 1U].push_back({cref, c[1]});
    watches_[c[1] ^ 1U].push_back({cref, c[0]});
  }

  void enqueue(LitCode p, std::uint32_t reason) {
    const int v = var(p);
    assigns_[v] = sign(p) ? -1 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(p);
  }

  // watches_[p] holds the clauses watching the negation of p, visited when p
  // becomes true.
  std::uint32_t propagate() {
    std::uint32_t conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      const LitCode p = trail_[qhead_++];
      const LitCode false_lit = p ^ 1U;
      auto& ws = watches_[p];
      ++stats_.propagations;
      std::size_t i = 0, j = 0;
      const std::size_t end = ws.size();
      while (i < end) {
        const Watcher w = ws[i];
        if (value(w.blocker) > 0) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& lits = clauses_[w.cref].lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        ++i;
        const LitCode first = lits[0];
        if (first != w.blocker && value(first) > 0) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) >= 0) {
            std::swap(lits[1], lits[k]);
            watches_[lits[1] ^ 1U].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) < 0) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < end) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[level];) {
      const int v = var(trail_[c]);
      polarity_[v] = sign(trail_[c]) ? 1 : 0;
      assigns_[v] = 0;
      reason_[v] = kNoReason;
      if (heap_index_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    qhead_ = trail_.size();
    trail_lim_.resize(static_cast<std::size_t>(level));
  }

  // --- VSIDS heap -----------------------------------------------------------

  bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }

  void heap_up(std::size_t i) {
    const int v = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }

  void heap_down(std::size_t i) {
    const int v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) break;
      if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_index_[heap_[i]] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
  }

  void heap_insert(int v) {
    heap_.push_back(v);
    heap_index_[v] = static_cast<int>(heap_.size() - 1);
    heap_up(heap_.size() - 1);
  }

  int heap_pop() {
    const int top = heap_[0];
    heap_index_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_index_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
  }

  void bump_clause(ClauseData& c) {
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (auto& d : clauses_)
        if (d.learnt) d.activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // --- conflict analysis ------------------------------------------------------

  std::uint32_t abstract_level(int v) const { return 1U << (level_[v] & 31); }

  bool lit_redundant(LitCode p, std::uint32_t levels) {
    analyze_stack_.clear();
    analyze_stack_.push_back(p);
    const std::size_t top = analyze_toclear_.size();
    while (!analyze_stack_.empty()) {
      const LitCode q = analyze_stack_.back();
      analyze_stack_.pop_back();
      const auto& c = clauses_[reason_[var(q)]].lits;
      for (std::size_t i = 1; i < c.size(); ++i) {
        const LitCode r = c[i];
        const int v = var(r);
        if (seen_[v] || level_[v] == 0) continue;
        if (reason_[v] != kNoReason && (abstract_level(v) & levels) != 0) {
          seen_[v] = 1;
          analyze_stack_.push_back(r);
          analyze_toclear_.push_back(r);
        } else {
          for (std::size_t j = top; j < analyze_toclear_.size(); ++j) seen_[var(analyze_toclear_[j])] = 0;
          analyze_toclear_.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  void analyze(std::uint32_t conflict, std::vector<LitCode>& learnt, int& backtrack_level) {
    int path = 0;
    LitCode p = kNoLit;
    learnt.clear();
    learnt.push_back(kNoLit);
    std::size_t index = trail_.size();
    do {
      auto& c = clauses_[conflict];
      if (c.learnt) bump_clause(c);
      for (std::size_t i = (p == kNoLit ? 0 : 1); i < c.lits.size(); ++i) {
        const LitCode q = c.lits[i];
        const int v = var(q);
        if (seen_[v] || level_[v] == 0) continue;
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          ++path;
        else
          learnt.push_back(q);
      }
      while (!seen_[var(trail_[--index])]) {
      }
      p = trail_[index];
      conflict = reason_[var(p)];
      seen_[var(p)] = 0;
      --path;
    } while (path > 0);
    learnt[0] = p ^ 1U;

    analyze_toclear_.assign(learnt.begin(), learnt.end());
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(var(learnt[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      const int v = var(learnt[i]);
      if (reason_[v] == kNoReason || !lit_redundant(learnt[i], levels)) learnt[j++] = learnt[i];
    }
    learnt.resize(j);

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[var(learnt[i])] > level_[var(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[var(learnt[1])];
    }
    for (LitCode q : analyze_toclear_) seen_[var(q)] = 0;
  }

  int compute_lbd(const std::vector<LitCode>& lits) {
    ++lbd_stamp_;
    if (lbd_seen_.size() < trail_lim_.size() + 1) lbd_seen_.resize(trail_lim_.size() + 1, 0);
    int count = 0;
    for (LitCode p : lits) {
      const int l = level_[var(p)];
      if (lbd_seen_[l] != lbd_stamp_) {
        lbd_seen_[l] = lbd_stamp_;
        ++count;
      }
    }
    return count;
  }

  // --- learnt clause database -------------------------------------------------

  bool locked(std::uint32_t cref) const {
    const LitCode first = clauses_[cref].lits[0];
    return value(first) > 0 && reason_[var(first)] == cref;
  }

  void reduce_db() {
    std::vector<std::uint32_t> learnts;
    for (std::uint32_t i = 0; i < clauses_.size(); ++i)
      if (clauses_[i].learnt) learnts.push_back(i);
    std::sort(learnts.begin(), learnts.end(), [&](std::uint32_t a, std::uint32_t b) {
      const auto& ca = clauses_[a];
      const auto& cb = clauses_[b];
      if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
      return ca.activity < cb.activity;
    });
    std::vector<char> drop(clauses_.size(), 0);
    const std::size_t half = learnts.size() / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const auto cref = learnts[i];
      if (clauses_[cref].lbd <= 2 || locked(cref)) continue;
      drop[cref] = 1;
    }
    // Compact the arena and remap reasons.
    std::vector<std::uint32_t> remap(clauses_.size(), kNoReason);
    std::vector<ClauseData> kept;
    kept.reserve(clauses_.size());
    for (std::uint32_t i = 0; i < clauses_.size(); ++i) {
      if (drop[i]) continue;
      remap[i] = static_cast<std::uint32_t>(kept.size());
      kept.push_back(std::move(clauses_[i]));
    }
    clauses_ = std::move(kept);
    for (auto& r : reason_)
      if (r != kNoReason) r = remap[r];
    for (auto& ws : watches_) ws.clear();
    for (std::uint32_t i = 0; i < clauses_.size(); ++i) watch(i);
    num_learnts_ = 0;
    for (const auto& c : clauses_)
      if (c.learnt) ++num_learnts_;
  }

  // --- search -------------------------------------------------------------------

  template <class Elapsed>
  Status search(std::int64_t conflicts_allowed, const Budget& budget, std::int64_t conflict_start, Elapsed& elapsed) {
    std::int64_t conflicts_here = 0;
    std::vector<LitCode> learnt;
    for (;;) {
      const std::uint32_t conflict = propagate();
      if (conflict != kNoReason) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          ok_ = false;
          return Status::unsat;
        }
        int backtrack = 0;
        analyze(conflict, learnt, backtrack);
        const int lbd = compute_lbd(learnt);
        cancel_until(backtrack);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          clauses_.push_back(ClauseData{learnt, 0.0, lbd, true});
          const auto cref = static_cast<std::uint32_t>(clauses_.size() - 1);
          watch(cref);
          bump_clause(clauses_[cref]);
          enqueue(learnt[0], cref);
          ++num_learnts_;
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;

        if (budget.max_conflicts >= 0 && stats_.conflicts - conflict_start >= budget.max_conflicts) {
          return Status::budget;
        }
        if (budget.max_seconds > 0 && (stats_.conflicts & 255) == 0 && elapsed() > budget.max_seconds) {
          return Status::budget;
        }
        continue;
      }

      if (conflicts_here >= conflicts_allowed) {
        cancel_until(0);
        return Status::restart;
      }
      if (static_cast<double>(num_learnts_) - static_cast<double>(trail_.size()) >= max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }

      int next = -1;
      while (!heap_.empty()) {
        const int v = heap_pop();
        if (assigns_[v] == 0) {
          next = v;
          break;
        }
      }
      if (next < 0) return Status::sat;
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(static_cast<LitCode>(2 * next + (polarity_[next] ? 1 : 0)), kNoReason);
    }
  }

  std::mt19937_64 rng_;
  bool ok_ = true;
  std::vector<ClauseData> clauses_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<std::int8_t> polarity_;  // 1: last value false
  std::vector<char> seen_;
  std::vector<double> activity_;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  std::vector<LitCode> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 2000.0;
  std::size_t num_learnts_ = 0;
  std::vector<LitCode> analyze_stack_;
  std::vector<LitCode> analyze_toclear_;
  std::vector<std::uint64_t> lbd_seen_;
  std::uint64_t lbd_stamp_ = 0;
  Model model_;
  SolveStats stats_;
};

/// Checks a claimed model clause by clause; throws IntegrityError on mismatch.
inline void verify_model(const CnfFormula& F, const Model& model) {
  const long bad = first_violated(model, F);
  if (bad >= 0) throw IntegrityError("model violates clause " + std::to_string(bad));
}

/// Complete decision with the built-in solver. Sat models are re-verified.
inline SolveOutcome solve_builtin(const CnfFormula& F, const Budget& budget = {}, std::uint64_t seed = kDefaultSeed) {
  F.validate();
  Solver solver(F.num_vars, seed);
  for (const auto& c : F.clauses)
    if (!solver.add_clause(c)) break;
  SolveOutcome out;
  out.verdict = solver.solve(budget);
  out.stats = solver.stats();
  if (out.verdict == Verdict::sat) {
    out.model = solver.model();
    verify_model(F, out.model);
  }
  return out;
}

/// A solving backend: formula and per-call budget in, outcome out.
using Backend = std::function<SolveOutcome(const CnfFormula&, const Budget&)>;

inline Backend builtin_backend(std::uint64_t seed = kDefaultSeed) {
  return [seed](const CnfFormula& F, const Budget& b) { return solve_builtin(F, b, seed); };
}

}  // namespace pfasync::sat
