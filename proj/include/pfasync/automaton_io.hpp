#pragma once

// Automaton file formats.
//
// Text: first line "n m", then n lines of m whitespace-separated entries, each
// a 0-based target state or "-" for undefined.
// JSON: {"n": .., "m": .., "delta": [[..], ..]} with null for undefined.

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pfasync/errors.hpp"
#include "pfasync/pfa.hpp"

namespace pfasync {

inline std::string write_automaton_text(const Pfa& A) {
  std::ostringstream out;
  out << A.states() << ' ' << A.letters() << '\n';
  for (State q = 0; q < A.states(); ++q) {
    for (Letter a = 0; a < A.letters(); ++a) {
      if (a > 0) out << ' ';
      State t = A.next(q, a);
      if (t == kUndefined)
        out << '-';
      else
        out << t;
    }
    out << '\n';
  }
  return out.str();
}

inline Pfa parse_automaton_text(const std::string& text) {
  std::istringstream in(text);
  long long n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("automaton text: missing \"n m\" header");
  if (n < 1 || m < 1 || n > 1'000'000 || m > 1'000'000) throw ParseError("automaton text: bad dimensions");
  Pfa A(static_cast<int>(n), static_cast<int>(m));
  for (State q = 0; q < n; ++q) {
    for (Letter a = 0; a < m; ++a) {
      std::string tok;
      if (!(in >> tok)) throw ParseError("automaton text: table truncated at state " + std::to_string(q));
      if (tok == "-") continue;
      std::size_t used = 0;
      long long target = -1;
      try {
        target = std::stoll(tok, &used);
      } catch (const std::exception&) {
        throw ParseError("automaton text: bad entry '" + tok + "'");
      }
      if (used != tok.size() || target < 0 || target >= n)
        throw ParseError("automaton text: bad entry '" + tok + "'");
      A.set(q, a, static_cast<State>(target));
    }
  }
  std::string extra;
  if (in >> extra) throw ParseError("automaton text: trailing data '" + extra + "'");
  return A;
}

inline nlohmann::json automaton_to_json(const Pfa& A) {
  nlohmann::json delta = nlohmann::json::array();
  for (State q = 0; q < A.states(); ++q) {
    nlohmann::json row = nlohmann::json::array();
    for (Letter a = 0; a < A.letters(); ++a) {
      State t = A.next(q, a);
      if (t == kUndefined)
        row.push_back(nullptr);
      else
        row.push_back(t);
    }
    delta.push_back(std::move(row));
  }
  return {{"n", A.states()}, {"m", A.letters()}, {"delta", std::move(delta)}};
}

inline Pfa automaton_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const auto& delta = j.at("delta");
    if (n < 1 || m < 1) throw ParseError("automaton json: bad dimensions");
    if (!delta.is_array() || delta.size() != static_cast<std::size_t>(n))
      throw ParseError("automaton json: delta must have n rows");
    Pfa A(n, m);
    for (State q = 0; q < n; ++q) {
      const auto& row = delta[q];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(m))
        throw ParseError("automaton json: row " + std::to_string(q) + " must have m entries");
      for (Letter a = 0; a < m; ++a) {
        if (row[a].is_null()) continue;
        const int t = row[a].get<int>();
        if (t < 0 || t >= n) throw ParseError("automaton json: bad target " + std::to_string(t));
        A.set(q, a, t);
      }
    }
    return A;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("automaton json: ") + e.what());
  }
}

/// Accepts either format; JSON is recognised by a leading '{'.
inline Pfa parse_automaton(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("automaton json: ") + e.what());
    }
    return automaton_from_json(j);
  }
  return parse_automaton_text(text);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

inline Pfa load_automaton(const std::string& path) { return parse_automaton(read_file(path)); }

}  // namespace pfasync
