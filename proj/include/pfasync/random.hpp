#pragma once

// Seeded random PFA generators for the experiment series.
//
// Stream discipline: every trial owns one std::mt19937_64 seeded with
// trial_seed(base, series, n, index). Bounded integers are drawn by rejection
// on raw 64-bit outputs, so a given seed yields the same automaton on every
// platform.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pfasync/encoding.hpp"
#include "pfasync/errors.hpp"
#include "pfasync/pfa.hpp"

namespace pfasync {

enum class Series { s1 = 1, s2 = 2, s3 = 3, s4 = 4, nonexact = 5 };

inline std::string to_string(Series s) {
  return s == Series::nonexact ? "nonexact" : std::to_string(static_cast<int>(s));
}

inline Series parse_series(const std::string& text) {
  if (text == "1") return Series::s1;
  if (text == "2") return Series::s2;
  if (text == "3") return Series::s3;
  if (text == "4") return Series::s4;
  if (text == "nonexact") return Series::nonexact;
  throw InputError("unknown series '" + text + "'");
}

struct GenSpec {
  Series series = Series::s1;
  int n = 2;
  int m = 2;
  /// Target number of defined transitions; 0 leaves it unconstrained (series 3).
  int rho = 0;
  SyncMode mode = SyncMode::careful;
  std::uint64_t seed = 0;
};

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent per-trial seed derived from a base seed and the trial's key.
inline std::uint64_t trial_seed(std::uint64_t base, int series, int n, std::uint64_t index) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ static_cast<std::uint64_t>(series));
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  return splitmix64(h ^ index);
}

/// Uniform integer in [0, bound).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw InputError("empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) {
  if (hi < lo) throw InputError("empty range");
  return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

/// Uniform k-subset of {0..n-1}, by partial Fisher-Yates.
inline std::vector<State> uniform_subset(Rng& rng, int n, int k) {
  std::vector<State> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) std::swap(pool[i], pool[uniform_int(rng, i, n - 1)]);
  pool.resize(static_cast<std::size_t>(k));
  return pool;
}

/// Defines letter a on `support` states chosen uniformly, each with a uniform image.
inline void fill_letter(Pfa& A, Letter a, int support, Rng& rng) {
  const int n = A.states();
  for (State q : uniform_subset(rng, n, support)) A.set(q, a, uniform_int(rng, 0, n - 1));
}

namespace detail {

inline Pfa gen_almost_complete(int n, Rng& rng) {
  Pfa A(n, 2);
  fill_letter(A, 0, n, rng);
  fill_letter(A, 1, n, rng);
  A.clear(uniform_int(rng, 0, n - 1), 1);
  return A;
}

inline Pfa gen_series3(int n, int m, int rho, Rng& rng) {
  if (m < 2) throw InputError("series 3 needs at least two letters");
  if (n < 2) throw InputError("series 3 needs at least two states");
  if (rho != 0 && (rho < n + (m - 1) || rho > n + (m - 1) * (n - 1)))
    throw InputError("density " + std::to_string(rho) + " infeasible for series 3 with n=" + std::to_string(n) +
                     ", m=" + std::to_string(m));
  std::vector<int> supports(static_cast<std::size_t>(m - 1));
  for (;;) {
    int sum = 0;
    for (auto& k : supports) sum += k = uniform_int(rng, 1, n - 1);
    if (rho == 0 || sum == rho - n) break;
  }
  Pfa A(n, m);
  fill_letter(A, 0, n, rng);
  for (Letter a = 1; a < m; ++a) fill_letter(A, a, supports[a - 1], rng);
  return A;
}

inline Pfa gen_series4(int n, int rho, SyncMode mode, Rng& rng) {
  Pfa A(n, 2);
  if (mode == SyncMode::careful) {
    if (rho < n + 1 || rho > 2 * n - 1)
      throw InputError("careful series 4 needs n+1 <= rho <= 2n-1, got rho=" + std::to_string(rho));
    fill_letter(A, 0, n, rng);
    fill_letter(A, 1, rho - n, rng);
    return A;
  }
  if (rho < 2 || rho > 2 * n - 1)
    throw InputError("exact series 4 needs 2 <= rho <= 2n-1, got rho=" + std::to_string(rho));
  const int k = uniform_int(rng, std::max(0, rho - n), std::min(rho, n));
  fill_letter(A, 0, k, rng);
  fill_letter(A, 1, rho - k, rng);
  return A;
}

}  // namespace detail

/// Almost complete binary PFA without an exactly synchronizing word: a state
/// q0 with b undefined and an arbitrary a-image, a state q1 fixed by both
/// letters, and every other state mapped by both letters into Q \ {q0, q1}.
inline Pfa gen_nonexact(int n, std::uint64_t seed) {
  if (n < 3) throw InputError("nonexact construction needs n >= 3");
  Rng rng(seed);
  const auto roles = uniform_subset(rng, n, 2);
  const State q0 = roles[0], q1 = roles[1];
  std::vector<State> rest;
  for (State q = 0; q < n; ++q)
    if (q != q0 && q != q1) rest.push_back(q);
  Pfa A(n, 2);
  A.set(q0, 0, uniform_int(rng, 0, n - 1));
  A.set(q1, 0, q1);
  A.set(q1, 1, q1);
  for (State q : rest)
    for (Letter a = 0; a < 2; ++a) A.set(q, a, rest[uniform_below(rng, rest.size())]);
  return A;
}

inline Pfa gen_random(const GenSpec& spec) {
  if (spec.n < 1) throw InputError("state count must be positive");
  Rng rng(spec.seed);
  switch (spec.series) {
    case Series::s1:
    case Series::s2: return detail::gen_almost_complete(spec.n, rng);
    case Series::s3: return detail::gen_series3(spec.n, spec.m, spec.rho, rng);
    case Series::s4: return detail::gen_series4(spec.n, spec.rho, spec.mode, rng);
    case Series::nonexact: return gen_nonexact(spec.n, spec.seed);
  }
  throw InputError("unknown series");
}

}  // namespace pfasync
