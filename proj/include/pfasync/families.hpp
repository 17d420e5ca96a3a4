#pragma once

// Benchmark automata with known shortest carefully synchronizing words.
// States are 0-based; letter 0 is "a" and letter 1 is "b".

#include <cstdint>
#include <numeric>
#include <string>

#include "pfasync/errors.hpp"
#include "pfasync/pfa.hpp"

namespace pfasync {

enum class Family { cerny, p, p_prime, h_prime, h_double_prime, wielandt, e };

struct FamilySpec {
  Family family = Family::p;
  int n = 3;
};

inline const char* to_string(Family f) {
  switch (f) {
    case Family::cerny: return "cerny";
    case Family::p: return "pn";
    case Family::p_prime: return "pprime";
    case Family::h_prime: return "hprime";
    case Family::h_double_prime: return "hdoubleprime";
    case Family::wielandt: return "wielandt";
    case Family::e: return "en";
  }
  return "pn";
}

inline Family parse_family(const std::string& name) {
  for (Family f : {Family::cerny, Family::p, Family::p_prime, Family::h_prime, Family::h_double_prime, Family::wielandt,
                   Family::e})
    if (name == to_string(f)) return f;
  throw InputError("unknown family '" + name + "'");
}

inline int family_min_states(Family f) {
  switch (f) {
    case Family::cerny: return 2;
    case Family::p:
    case Family::p_prime:
    case Family::e: return 3;
    case Family::h_prime:
    case Family::h_double_prime:
    case Family::wielandt: return 5;
  }
  return 3;
}

inline void check_family(const FamilySpec& s) {
  if (s.n < family_min_states(s.family))
    throw InputError(std::string(to_string(s.family)) + " needs at least " + std::to_string(family_min_states(s.family)) +
                     " states, got " + std::to_string(s.n));
}

/// fib(0) = 0, fib(1) = 1.
inline std::int64_t fib(int k) {
  if (k < 0) throw InputError("fib of a negative index");
  std::int64_t a = 0, b = 1;
  for (int i = 0; i < k; ++i) {
    const std::int64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

/// Largest integer that is not a non-negative combination of k1 and k2.
inline std::int64_t frobenius(std::int64_t k1, std::int64_t k2) {
  if (k1 < 1 || k2 < 1) throw InputError("frobenius needs positive arguments");
  if (std::gcd(k1, k2) != 1) throw InputError("frobenius needs coprime arguments");
  return k1 * k2 - k1 - k2;
}

inline Pfa make_family(const FamilySpec& s) {
  check_family(s);
  const int n = s.n;
  Pfa A(n, 2);
  constexpr Letter a = 0, b = 1;
  switch (s.family) {
    case Family::cerny:
      for (State q = 0; q < n; ++q) {
        A.set(q, b, (q + 1) % n);
        A.set(q, a, q);
      }
      A.set(n - 1, a, 0);
      break;
    case Family::p:
    case Family::p_prime:
    case Family::e:
      for (State q = 0; q < n; ++q) A.set(q, a, q);
      A.set(0, a, 1);
      A.set(n - 1, a, 0);
      for (State q = 0; q + 1 < n; ++q) A.set(q, b, q + 1);
      if (s.family != Family::p) A.set(n - 1, b, 1);
      if (s.family == Family::p_prime) A.clear(0, b);
      break;
    case Family::h_prime:
      for (State q = 0; q < n; ++q) A.set(q, a, q);
      A.set(0, a, 1);
      A.set(1, a, 1);
      A.set(n - 1, a, 1);
      for (State q = 1; q + 1 < n; ++q) A.set(q, b, q + 1);
      A.set(n - 1, b, 1);
      break;
    case Family::h_double_prime:
    case Family::wielandt:
      for (State q = 0; q + 1 < n; ++q) A.set(q, a, q + 1);
      A.set(n - 1, a, 1);
      for (State q = 1; q < n; ++q) A.set(q, b, (q + 1) % n);
      if (s.family == Family::wielandt) A.set(0, b, 1);
      break;
  }
  return A;
}

/// Closed-form length of the shortest carefully synchronizing word.
inline std::int64_t predicted_length(const FamilySpec& s) {
  check_family(s);
  const std::int64_t n = s.n;
  switch (s.family) {
    case Family::cerny: return (n - 1) * (n - 1);
    case Family::p: {
      // m is the unique index with fib(m-1) < n-2 <= fib(m).
      int m = 1;
      while (fib(m) < n - 2) ++m;
      return n * n + m * n - 5 * n - fib(m + 1) - 2 * m + 8;
    }
    case Family::h_prime: return (n - 2) * (n - 2);
    case Family::p_prime: return n * n - 3 * n + 2;
    case Family::h_double_prime: return n * n - 3 * n + 3;
    case Family::wielandt:
    case Family::e: break;
  }
  throw UnsupportedError(std::string("no closed form for ") + to_string(s.family));
}

inline bool has_predicted_length(Family f) { return f != Family::wielandt && f != Family::e; }

/// A shortest carefully synchronizing word of closed form.
inline Word witness_word(const FamilySpec& s) {
  check_family(s);
  const int n = s.n;
  const Word a{0}, b{1};
  switch (s.family) {
    case Family::cerny: return concat({power(concat({a, power(b, n - 1)}), n - 2), a});
    case Family::h_prime: return concat({power(concat({a, power(b, n - 2)}), n - 3), a});
    case Family::p_prime: return concat({power(concat({power(a, 2), power(b, n - 2)}), n - 3), power(a, 2)});
    case Family::h_double_prime: return concat({power(concat({a, b, power(a, n - 2)}), n - 3), a, b, a});
    case Family::p:
    case Family::wielandt:
    case Family::e: break;
  }
  throw UnsupportedError(std::string("no closed-form witness for ") + to_string(s.family));
}

}  // namespace pfasync
