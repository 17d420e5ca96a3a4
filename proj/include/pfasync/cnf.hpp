#pragma once

#include <cstdlib>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pfasync/errors.hpp"

namespace pfasync {

/// DIMACS-style literal: +v is variable v, -v its negation. Never 0.
using Lit = int;
using Clause = std::vector<Lit>;

/// Truth assignment indexed by variable number; entry 0 is unused.
using Model = std::vector<bool>;

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  void add(Clause c) { clauses.push_back(std::move(c)); }
  void add(std::initializer_list<Lit> c) { clauses.emplace_back(c); }

  std::size_t num_clauses() const { return clauses.size(); }

  /// Throws InputError if a literal is 0 or refers to a variable > num_vars.
  void validate() const {
    if (num_vars < 0) throw InputError("negative variable count");
    for (std::size_t i = 0; i < clauses.size(); ++i) {
      for (Lit l : clauses[i]) {
        if (l == 0) throw InputError("clause " + std::to_string(i) + " contains literal 0");
        if (std::abs(l) > num_vars)
          throw InputError("clause " + std::to_string(i) + " mentions variable " + std::to_string(std::abs(l)) +
                           " beyond " + std::to_string(num_vars));
      }
    }
  }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

inline bool literal_true(const Model& model, Lit l) {
  const auto v = static_cast<std::size_t>(std::abs(l));
  const bool value = v < model.size() && model[v];
  return l > 0 ? value : !value;
}

inline bool satisfies(const Model& model, std::span<const Lit> clause) {
  for (Lit l : clause)
    if (literal_true(model, l)) return true;
  return false;
}

inline bool satisfies(const Model& model, const CnfFormula& F) {
  for (const auto& c : F.clauses)
    if (!satisfies(model, c)) return false;
  return true;
}

/// Index of the first clause falsified by `model`, or -1.
inline long first_violated(const Model& model, const CnfFormula& F) {
  for (std::size_t i = 0; i < F.clauses.size(); ++i)
    if (!satisfies(model, F.clauses[i])) return static_cast<long>(i);
  return -1;
}

}  // namespace pfasync
