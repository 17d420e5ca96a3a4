#pragma once

// Exhaustive ground truth on state subsets encoded as n-bit masks.
//
// power_bfs_csw walks the partial power automaton (a letter is defined on a
// subset iff it is defined at every member); subset_bfs_esw walks subsets
// under exact application with the empty set pruned. Letters are expanded in
// order 0..m-1, which fixes the witness among equally short ones.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pfasync/encoding.hpp"
#include "pfasync/errors.hpp"
#include "pfasync/pfa.hpp"

namespace pfasync {

using Mask = std::uint64_t;

inline constexpr int kDefaultOracleCap = 22;

struct SubsetSearchResult {
  bool found = false;
  int min_len = -1;
  Word witness;
  std::size_t explored = 0;
};

namespace detail {

class MaskAutomaton {
 public:
  explicit MaskAutomaton(const Pfa& A) : n_(A.states()), m_(A.letters()) {
    targets_.resize(static_cast<std::size_t>(n_) * m_);
    for (State q = 0; q < n_; ++q)
      for (Letter a = 0; a < m_; ++a) targets_[q * m_ + a] = A.next(q, a);
  }

  int states() const { return n_; }
  int letters() const { return m_; }

  /// Careful image; `defined` is cleared when some member lacks the letter.
  Mask careful(Mask s, Letter a, bool& defined) const {
    Mask out = 0;
    defined = true;
    for (Mask rest = s; rest != 0; rest &= rest - 1) {
      const int q = __builtin_ctzll(rest);
      const State t = targets_[q * m_ + a];
      if (t == kUndefined) {
        defined = false;
        return 0;
      }
      out |= Mask{1} << t;
    }
    return out;
  }

  Mask exact(Mask s, Letter a) const {
    Mask out = 0;
    for (Mask rest = s; rest != 0; rest &= rest - 1) {
      const int q = __builtin_ctzll(rest);
      const State t = targets_[q * m_ + a];
      if (t != kUndefined) out |= Mask{1} << t;
    }
    return out;
  }

 private:
  int n_, m_;
  std::vector<State> targets_;
};

inline bool singleton(Mask s) { return s != 0 && (s & (s - 1)) == 0; }

inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }

inline void check_cap(const Pfa& A, int cap) {
  if (cap > 63) cap = 63;
  if (A.states() > cap)
    throw ResourceError("subset search refused: " + std::to_string(A.states()) + " states exceed cap " + std::to_string(cap));
}

template <class Step>
SubsetSearchResult subset_bfs(const Pfa& A, int cap, Step step) {
  check_cap(A, cap);
  const MaskAutomaton M(A);
  SubsetSearchResult r;
  const Mask start = full_mask(A.states());
  struct Pred {
    Mask parent;
    Letter letter;
    int depth;
  };
  std::unordered_map<Mask, Pred> visited;
  visited.emplace(start, Pred{start, -1, 0});
  r.explored = 1;
  if (singleton(start)) {
    r.found = true;
    r.min_len = 0;
    return r;
  }
  std::deque<Mask> frontier{start};
  while (!frontier.empty()) {
    const Mask s = frontier.front();
    frontier.pop_front();
    const int depth = visited.at(s).depth;
    for (Letter a = 0; a < M.letters(); ++a) {
      Mask t = 0;
      if (!step(M, s, a, t)) continue;
      if (!visited.emplace(t, Pred{s, a, depth + 1}).second) continue;
      ++r.explored;
      if (singleton(t)) {
        r.found = true;
        r.min_len = depth + 1;
        for (Mask cur = t; cur != start;) {
          const auto& p = visited.at(cur);
          r.witness.push_back(p.letter);
          cur = p.parent;
        }
        std::reverse(r.witness.begin(), r.witness.end());
        return r;
      }
      frontier.push_back(t);
    }
  }
  return r;
}

}  // namespace detail

/// Shortest carefully synchronizing word by BFS over the partial power automaton.
inline SubsetSearchResult power_bfs_csw(const Pfa& A, int cap = kDefaultOracleCap) {
  return detail::subset_bfs(A, cap, [](const detail::MaskAutomaton& M, Mask s, Letter a, Mask& t) {
    bool defined = true;
    t = M.careful(s, a, defined);
    return defined;
  });
}

/// Shortest exactly synchronizing word by BFS over exact images.
inline SubsetSearchResult subset_bfs_esw(const Pfa& A, int cap = kDefaultOracleCap) {
  return detail::subset_bfs(A, cap, [](const detail::MaskAutomaton& M, Mask s, Letter a, Mask& t) {
    t = M.exact(s, a);
    return t != 0;
  });
}

inline SubsetSearchResult oracle_search(const Pfa& A, SyncMode mode, int cap = kDefaultOracleCap) {
  return mode == SyncMode::careful ? power_bfs_csw(A, cap) : subset_bfs_esw(A, cap);
}

/// For each length 0..max_len, whether some word of exactly that length
/// synchronizes A under the given semantics. Tracks the set of distinct
/// images reachable by words of each length.
inline std::vector<bool> length_profile(const Pfa& A, SyncMode mode, int max_len, int cap = kDefaultOracleCap) {
  detail::check_cap(A, cap);
  const detail::MaskAutomaton M(A);
  std::vector<bool> exists(static_cast<std::size_t>(max_len) + 1, false);
  std::unordered_set<Mask> layer{detail::full_mask(A.states())};
  for (int t = 0; t <= max_len; ++t) {
    for (Mask s : layer)
      if (detail::singleton(s)) {
        exists[t] = true;
        break;
      }
    if (t == max_len) break;
    std::unordered_set<Mask> next;
    for (Mask s : layer) {
      for (Letter a = 0; a < M.letters(); ++a) {
        if (mode == SyncMode::careful) {
          bool defined = true;
          const Mask img = M.careful(s, a, defined);
          if (defined) next.insert(img);
        } else {
          const Mask img = M.exact(s, a);
          if (img != 0) next.insert(img);
        }
      }
    }
    layer = std::move(next);
    if (layer.empty()) break;
  }
  return exists;
}

}  // namespace pfasync
