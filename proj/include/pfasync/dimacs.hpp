#pragma once

// Simplified DIMACS CNF: optional "c" comment lines, a "p cnf V C" header, then
// C clause lines written as literals separated by single spaces followed by
// " 0". Newlines are LF.

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pfasync/cnf.hpp"
#include "pfasync/encoding.hpp"
#include "pfasync/errors.hpp"

namespace pfasync {

inline std::string write_dimacs(const CnfFormula& F, const std::vector<std::string>& comments = {}) {
  std::string out;
  out.reserve(F.clauses.size() * 12 + 32);
  for (const auto& c : comments) {
    out += "c ";
    out += c;
    out += '\n';
  }
  out += "p cnf " + std::to_string(F.num_vars) + ' ' + std::to_string(F.clauses.size()) + '\n';
  for (const auto& clause : F.clauses) {
    for (Lit l : clause) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

inline std::vector<long long> parse_ints(std::string_view line) {
  std::vector<long long> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    long long v = 0;
    auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), v);
    if (ec != std::errc{}) throw ParseError("dimacs: not an integer in line '" + std::string(line) + "'");
    i = static_cast<std::size_t>(ptr - line.data());
    if (i < line.size() && line[i] != ' ' && line[i] != '\t')
      throw ParseError("dimacs: bad token in line '" + std::string(line) + "'");
    out.push_back(v);
  }
  return out;
}

struct DimacsHeader {
  long long vars = 0;
  long long clauses = 0;
};

inline DimacsHeader parse_header(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string p, cnf;
  DimacsHeader h;
  if (!(in >> p >> cnf >> h.vars >> h.clauses) || p != "p" || cnf != "cnf" || h.vars < 0 || h.clauses < 0)
    throw ParseError("dimacs: bad header '" + std::string(line) + "'");
  std::string extra;
  if (in >> extra) throw ParseError("dimacs: bad header '" + std::string(line) + "'");
  return h;
}

}  // namespace detail

/// Parses DIMACS CNF. Clauses may span lines; each ends at a 0.
inline CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula F;
  bool have_header = false;
  long long expected = 0;
  Clause current;
  for (auto line : detail::split_lines(text)) {
    auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (line[first] == 'c') continue;
    if (line[first] == 'p') {
      if (have_header) throw ParseError("dimacs: duplicate header");
      auto h = detail::parse_header(line.substr(first));
      F.num_vars = static_cast<int>(h.vars);
      expected = h.clauses;
      have_header = true;
      continue;
    }
    if (line[first] == '%') break;  // SATLIB terminator
    if (!have_header) throw ParseError("dimacs: clause before header");
    for (long long v : detail::parse_ints(line)) {
      if (v == 0) {
        F.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (v > F.num_vars || -v > F.num_vars) throw ParseError("dimacs: literal " + std::to_string(v) + " exceeds variable count");
      current.push_back(static_cast<Lit>(v));
    }
  }
  if (!have_header) throw ParseError("dimacs: missing header");
  if (!current.empty()) throw ParseError("dimacs: last clause not terminated by 0");
  if (static_cast<long long>(F.clauses.size()) != expected)
    throw ParseError("dimacs: header announces " + std::to_string(expected) + " clauses, found " +
                     std::to_string(F.clauses.size()));
  return F;
}

/// Rewrites the DIMACS text of the binary-optimised, ladder-free careful
/// encoding of (A,1) into the text of (A,len) without re-encoding: T' lines are
/// replicated with offsets (t-1)(n+1) and S' lines shifted by (len-1)(n+1).
/// Comment lines are carried over unchanged.
inline std::string scale_dimacs(std::string_view primary, int len, int n) {
  if (len < 1) throw InputError("scale length must be at least 1");
  if (n < 1) throw InputError("state count must be positive");
  std::vector<std::string_view> comments;
  std::vector<std::string_view> body;
  bool have_header = false;
  detail::DimacsHeader header;
  for (auto line : detail::split_lines(primary)) {
    if (!line.empty() && line[0] == 'c') {
      if (have_header) throw ParseError("scale: comment after header");
      comments.push_back(line);
      continue;
    }
    if (!have_header) {
      header = detail::parse_header(line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    body.push_back(line);
  }
  if (!have_header) throw ParseError("scale: missing header");
  const long long nn = n;
  const long long sync = nn * (nn - 1) / 2;
  if (header.vars != 2 * nn + 1 || header.clauses != 2 * nn + nn * (nn + 1) / 2)
    throw ParseError("scale: header does not describe a length-1 binary encoding of " + std::to_string(n) + " states");
  if (static_cast<long long>(body.size()) != header.clauses)
    throw ParseError("scale: clause count does not match header");

  const long long stride = nn + 1;
  auto shifted = [&](std::string_view line, long long offset) {
    std::string out;
    auto values = detail::parse_ints(line);
    if (values.empty() || values.back() != 0) throw ParseError("scale: clause line not terminated by 0");
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      const long long v = values[i];
      if (v == 0) throw ParseError("scale: embedded 0 in clause line");
      out += std::to_string(v > 0 ? v + offset : v - offset);
      out += ' ';
    }
    out += "0\n";
    return out;
  };

  std::string out;
  for (auto c : comments) {
    out += c;
    out += '\n';
  }
  out += "p cnf " + std::to_string((len + 1) * nn + len) + ' ' + std::to_string(2 * len * nn + nn * (nn + 1) / 2) + '\n';
  const auto initial = body.begin();
  const auto trans = initial + n;
  const auto sync_begin = trans + 2 * n;
  for (auto it = initial; it != trans; ++it) out += shifted(*it, 0);
  for (int t = 1; t <= len; ++t)
    for (auto it = trans; it != sync_begin; ++it) out += shifted(*it, (t - 1) * stride);
  if (sync_begin + sync != body.end()) throw ParseError("scale: unexpected number of synchronization clauses");
  for (auto it = sync_begin; it != body.end(); ++it) out += shifted(*it, (len - 1) * stride);
  return out;
}

/// Reads the word off the letter variables of a model.
inline Word decode_word(const Model& model, const VarMap& vm) {
  Word w;
  w.reserve(static_cast<std::size_t>(vm.len));
  auto value = [&](int v) {
    if (v < 1 || static_cast<std::size_t>(v) >= model.size()) throw ModelError("model does not assign variable " + std::to_string(v));
    return static_cast<bool>(model[v]);
  };
  for (int t = 1; t <= vm.len; ++t) {
    if (vm.options.binary_opt) {
      w.push_back(value(vm.x(0, t)) ? 0 : 1);
      continue;
    }
    Letter chosen = -1;
    for (Letter i = 0; i < vm.m; ++i) {
      if (!value(vm.x(i, t))) continue;
      if (chosen != -1) throw ModelError("several letters at position " + std::to_string(t));
      chosen = i;
    }
    if (chosen == -1) throw ModelError("no letter at position " + std::to_string(t));
    w.push_back(chosen);
  }
  return w;
}

}  // namespace pfasync
