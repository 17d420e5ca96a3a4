#pragma once

// Partial deterministic automata and word application under careful and
// exact semantics. States and letters are 0-based; letter 0 is rendered "a".

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pfasync/errors.hpp"

namespace pfasync {

using State = int;
using Letter = int;
using Word = std::vector<Letter>;

inline constexpr State kUndefined = -1;

/// Subset of [0, n) with bitset storage.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(int universe) : universe_(universe), bits_(blocks(universe), 0) {}

  static StateSet full(int universe) {
    StateSet s(universe);
    for (int q = 0; q < universe; ++q) s.insert(q);
    return s;
  }

  static StateSet of(int universe, std::initializer_list<State> members) {
    StateSet s(universe);
    for (State q : members) s.insert(q);
    return s;
  }

  int universe() const { return universe_; }

  bool contains(State q) const {
    return q >= 0 && q < universe_ && ((bits_[q / 64] >> (q % 64)) & 1U) != 0;
  }

  void insert(State q) {
    if (q < 0 || q >= universe_) throw InputError("state " + std::to_string(q) + " outside [0," + std::to_string(universe_) + ")");
    bits_[q / 64] |= std::uint64_t{1} << (q % 64);
  }

  void erase(State q) {
    if (q >= 0 && q < universe_) bits_[q / 64] &= ~(std::uint64_t{1} << (q % 64));
  }

  int size() const {
    int total = 0;
    for (auto b : bits_) total += __builtin_popcountll(b);
    return total;
  }

  bool empty() const {
    return std::all_of(bits_.begin(), bits_.end(), [](std::uint64_t b) { return b == 0; });
  }

  std::vector<State> members() const {
    std::vector<State> out;
    for (State q = 0; q < universe_; ++q)
      if (contains(q)) out.push_back(q);
    return out;
  }

  bool subset_of(const StateSet& other) const {
    for (State q = 0; q < universe_; ++q)
      if (contains(q) && !other.contains(q)) return false;
    return true;
  }

  friend bool operator==(const StateSet& a, const StateSet& b) {
    return a.universe_ == b.universe_ && a.bits_ == b.bits_;
  }

 private:
  static std::size_t blocks(int universe) { return static_cast<std::size_t>((universe + 63) / 64); }

  int universe_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// Partial deterministic finite automaton with `states()` states and
/// `letters()` letters. Each table entry is a target state or kUndefined.
class Pfa {
 public:
  Pfa() = default;

  Pfa(int states, int letters) : n_(states), m_(letters) {
    if (states < 1) throw InputError("automaton needs at least one state");
    if (letters < 1) throw InputError("automaton needs at least one letter");
    table_.assign(static_cast<std::size_t>(states) * letters, kUndefined);
  }

  /// Row-major table: entry (q, a) lives at q * letters + a.
  Pfa(int states, int letters, std::vector<State> table) : Pfa(states, letters) {
    if (table.size() != table_.size()) throw InputError("transition table has wrong size");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i] != kUndefined && (table[i] < 0 || table[i] >= states))
        throw InputError("transition target " + std::to_string(table[i]) + " is not a state");
    }
    table_ = std::move(table);
  }

  int states() const { return n_; }
  int letters() const { return m_; }

  State next(State q, Letter a) const { return table_[index(q, a)]; }
  bool defined(State q, Letter a) const { return next(q, a) != kUndefined; }

  void set(State q, Letter a, State target) {
    if (target != kUndefined && (target < 0 || target >= n_))
      throw InputError("transition target " + std::to_string(target) + " is not a state");
    table_[index(q, a)] = target;
  }
  void clear(State q, Letter a) { table_[index(q, a)] = kUndefined; }

  int density() const {
    return static_cast<int>(std::count_if(table_.begin(), table_.end(), [](State s) { return s != kUndefined; }));
  }
  bool complete() const { return density() == n_ * m_; }

  bool total(Letter a) const {
    check_letter(a);
    for (State q = 0; q < n_; ++q)
      if (!defined(q, a)) return false;
    return true;
  }

  bool has_total_letter() const {
    for (Letter a = 0; a < m_; ++a)
      if (total(a)) return true;
    return false;
  }

  void check_letter(Letter a) const {
    if (a < 0 || a >= m_) throw InputError("letter index " + std::to_string(a) + " out of range [0," + std::to_string(m_) + ")");
  }
  void check_state(State q) const {
    if (q < 0 || q >= n_) throw InputError("state index " + std::to_string(q) + " out of range [0," + std::to_string(n_) + ")");
  }

  const std::vector<State>& table() const { return table_; }

  friend bool operator==(const Pfa&, const Pfa&) = default;

 private:
  std::size_t index(State q, Letter a) const {
    check_state(q);
    check_letter(a);
    return static_cast<std::size_t>(q) * m_ + a;
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<State> table_;
};

inline void check_word(const Pfa& A, std::span<const Letter> w) {
  for (Letter a : w) A.check_letter(a);
}

inline void check_subset(const Pfa& A, const StateSet& S) {
  if (S.universe() != A.states()) throw InputError("state set universe does not match automaton");
}

/// Careful image S.w. Returns nullopt as soon as a letter is undefined at some
/// state of the current set.
inline std::optional<StateSet> apply_careful(const Pfa& A, const StateSet& S, std::span<const Letter> w) {
  check_subset(A, S);
  check_word(A, w);
  StateSet current = S;
  for (Letter a : w) {
    StateSet next(A.states());
    for (State q : current.members()) {
      State t = A.next(q, a);
      if (t == kUndefined) return std::nullopt;
      next.insert(t);
    }
    current = std::move(next);
  }
  return current;
}

/// Exact image: states at which a prefix is undefined are dropped. May be empty.
inline StateSet apply_exact(const Pfa& A, const StateSet& S, std::span<const Letter> w) {
  check_subset(A, S);
  check_word(A, w);
  StateSet current = S;
  for (Letter a : w) {
    StateSet next(A.states());
    for (State q : current.members()) {
      State t = A.next(q, a);
      if (t != kUndefined) next.insert(t);
    }
    current = std::move(next);
  }
  return current;
}

inline bool is_csw(const Pfa& A, std::span<const Letter> w) {
  auto image = apply_careful(A, StateSet::full(A.states()), w);
  return image && image->size() == 1;
}

inline bool is_esw(const Pfa& A, std::span<const Letter> w) {
  return apply_exact(A, StateSet::full(A.states()), w).size() == 1;
}

/// States on a cycle of the functional graph of a total letter.
inline StateSet a_cyclic_states(const Pfa& A, Letter a) {
  if (!A.total(a)) throw PreconditionError("letter " + std::to_string(a) + " is not defined at every state");
  const int n = A.states();
  // Iterating the map n times lands every state on its cycle; the image of
  // q.a^n under further powers is exactly the set of cyclic states.
  StateSet cyclic(n);
  for (State q = 0; q < n; ++q) {
    State p = q;
    for (int i = 0; i < n; ++i) p = A.next(p, a);
    cyclic.insert(p);
  }
  return cyclic;
}

/// Sufficient condition for a binary PFA to be NOT carefully synchronizing:
/// some total letter has at least two cyclic states and the other letter is
/// undefined at one of them.
inline bool cyclic_filter(const Pfa& A) {
  if (A.letters() != 2) throw UnsupportedError("cyclic filter is defined for binary automata only");
  for (Letter a = 0; a < 2; ++a) {
    if (!A.total(a)) continue;
    StateSet cyc = a_cyclic_states(A, a);
    if (cyc.size() < 2) continue;
    const Letter other = 1 - a;
    for (State q : cyc.members())
      if (!A.defined(q, other)) return true;
  }
  return false;
}

inline std::string letter_name(Letter a) {
  if (a >= 0 && a < 26) return std::string(1, static_cast<char>('a' + a));
  return "<" + std::to_string(a) + ">";
}

/// Renders a word with letters a, b, c, ...; the empty word renders as "".
inline std::string format_word(std::span<const Letter> w) {
  std::string out;
  for (Letter a : w) out += letter_name(a);
  return out;
}

/// Inverse of format_word for alphabets of at most 26 letters.
inline Word parse_word(std::string_view text) {
  Word w;
  for (char c : text) {
    if (c < 'a' || c > 'z') throw ParseError(std::string("not a letter: '") + c + "'");
    w.push_back(c - 'a');
  }
  return w;
}

/// Concatenation helpers used to spell closed-form witnesses.
inline Word power(const Word& w, int k) {
  Word out;
  for (int i = 0; i < k; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

inline Word concat(std::initializer_list<Word> parts) {
  Word out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace pfasync
