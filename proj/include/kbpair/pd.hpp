#pragma once

// Planar-diagram (PD) codes.
//
// A crossing is written X[a,b,c,d] with positive integer edge labels listed
// counterclockwise from the incoming under-edge. Loop[k] stands for a
// crossingless circle. Entries may be wrapped in PD[...] and separated by
// commas or newlines; `#` starts a comment that runs to the end of the line.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kbpair/diagram.hpp"
#include "kbpair/error.hpp"

namespace kbpair {

struct PdCode {
  std::vector<std::array<std::int64_t, 4>> crossings;
  std::vector<std::int64_t> loops;
};

namespace detail {

class PdScanner {
 public:
  explicit PdScanner(std::string_view text, std::size_t line_base = 1)
      : text_(text), line_(line_base) {}

  // Entries up to the end of input, or up to the `]` closing a PD[ wrapper
  // when `wrapped` is set.
  PdCode entries(bool wrapped) {
    PdCode code;
    for (;;) {
      skip_separators();
      if (at_end()) {
        if (wrapped) fail("unterminated PD[", {"]"});
        return code;
      }
      if (wrapped && peek() == ']') {
        ++pos_;
        return code;
      }
      const std::string word = identifier();
      if (word == "X") {
        const auto labels = bracketed();
        if (labels.size() != 4) fail("X[...] needs exactly 4 labels", {"4 labels"});
        code.crossings.push_back({labels[0], labels[1], labels[2], labels[3]});
      } else if (word == "Loop") {
        const auto labels = bracketed();
        if (labels.size() != 1) fail("Loop[...] needs exactly 1 label", {"1 label"});
        code.loops.push_back(labels[0]);
      } else if (word == "PD" && !wrapped && code.crossings.empty() && code.loops.empty()) {
        expect('[');
        PdCode inner = entries(true);
        skip_separators();
        if (!at_end()) fail("unexpected input after PD[...]", {"end of input"});
        return inner;
      } else {
        fail(word.empty() ? "unexpected character" : "unknown entry '" + word + "'",
             {"X[", "Loop[", "PD["});
      }
    }
  }

  std::size_t position() const { return pos_; }
  std::size_t line() const { return line_; }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_ws() {
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        return;
      }
    }
  }

  void skip_separators() {
    for (;;) {
      skip_ws();
      if (peek() != ',') return;
      advance();
    }
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'", {std::string(1, c)});
    ++pos_;
  }

  std::vector<std::int64_t> bracketed() {
    expect('[');
    std::vector<std::int64_t> out;
    for (;;) {
      skip_ws();
      const std::size_t start = pos_;
      std::int64_t v = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        if (v > (INT64_MAX - 9) / 10) fail("edge label too large", {"label"});
        v = v * 10 + (peek() - '0');
        ++pos_;
      }
      if (pos_ == start) fail("expected an edge label", {"positive integer"});
      if (v < 1) {
        pos_ = start;
        fail("edge labels must be positive", {"positive integer"});
      }
      out.push_back(v);
      skip_ws();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      expect(',');
    }
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError("PD parse error at line " + std::to_string(line_) + ": " + msg, pos_,
                     std::move(expected), line_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace detail

inline PdCode parse_pd(std::string_view text) { return detail::PdScanner(text).entries(false); }

// Each crossing label must occur exactly twice; loop labels once and nowhere else.
inline LinkDiagram to_diagram(const PdCode& code) {
  if (code.crossings.empty() && code.loops.empty()) throw DomainError("PD code: no components");
  std::map<std::int64_t, std::vector<std::int32_t>> where;
  for (std::size_t i = 0; i < code.crossings.size(); ++i)
    for (int s = 0; s < 4; ++s)
      where[code.crossings[i][s]].push_back(static_cast<std::int32_t>(4 * i + s));
  for (std::int64_t l : code.loops) {
    if (where.count(l)) throw DomainError("PD code: loop label " + std::to_string(l) + " reused");
    where[l];
  }
  std::vector<std::int32_t> partner(4 * code.crossings.size(), -1);
  for (const auto& [label, pts] : where) {
    if (pts.empty()) continue;
    if (pts.size() != 2)
      throw DomainError("PD code: edge label " + std::to_string(label) + " occurs " +
                        std::to_string(pts.size()) + " times, expected 2");
    partner[pts[0]] = pts[1];
    partner[pts[1]] = pts[0];
  }
  return LinkDiagram(code.crossings.size(), std::move(partner), false, code.loops.size());
}

inline LinkDiagram pd_read(std::string_view text) { return to_diagram(parse_pd(text)); }

// Edges are numbered consecutively along each oriented component (first-strand
// orientation), and every crossing is rotated to start at its incoming
// under-edge. Components are numbered in order of their lowest crossing.
inline PdCode to_pd(const LinkDiagram& d) {
  if (d.is_tangle()) throw DomainError("PD code: diagram has open ends");
  const auto n = static_cast<std::int32_t>(4 * d.crossing_count());
  std::vector<std::int8_t> entering(n, -1);
  std::vector<std::int64_t> label(n, 0);
  std::vector<std::int32_t> cycle;
  std::int64_t next = 1;
  for (std::int32_t p = 0; p < n; ++p) {
    if (label[p] != 0) continue;
    detail::walk_closed(d, p, cycle);
    const std::int32_t start = detail::strand_start(cycle);
    std::int32_t e = start;
    do {
      entering[e] = 1;
      label[e] = label[d.partner(e)] = next++;
      const std::int32_t q = Diagram::opposite(e);
      entering[q] = 0;
      e = d.partner(q);
    } while (e != start);
  }
  PdCode code;
  for (std::size_t i = 0; i < d.crossing_count(); ++i) {
    const auto b = static_cast<std::int32_t>(4 * i);
    const int first = entering[b] ? 0 : 2;
    std::array<std::int64_t, 4> x{};
    for (int k = 0; k < 4; ++k) x[k] = label[b + (first + k) % 4];
    code.crossings.push_back(x);
  }
  for (std::uint64_t k = 0; k < d.free_loops(); ++k) code.loops.push_back(next++);
  return code;
}

inline std::string format_pd(const PdCode& code, bool inline_form = false) {
  std::ostringstream os;
  const char* sep = inline_form ? ", " : "\n";
  if (inline_form) os << "PD[";
  bool first = true;
  for (const auto& x : code.crossings) {
    if (!first) os << sep;
    first = false;
    os << "X[" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << "]";
  }
  for (std::int64_t l : code.loops) {
    if (!first) os << sep;
    first = false;
    os << "Loop[" << l << "]";
  }
  if (inline_form) os << "]";
  return os.str();
}

inline std::string pd_write(const LinkDiagram& d) { return format_pd(to_pd(d)); }

// ---------------------------------------------------------------------------
// Census files: one PD[...] record per entry, optionally preceded on the
// same line by a name.

struct CensusRecord {
  std::string name;
  std::size_t line = 0;
  LinkDiagram diagram;
};

// Fails on the first malformed record.
inline std::vector<CensusRecord> read_census(std::string_view text) {
  std::vector<CensusRecord> out;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view row = text.substr(pos, eol - pos);
    if (const auto hash = row.find('#'); hash != std::string_view::npos) row = row.substr(0, hash);
    const auto first = row.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
      pos = eol + 1;
      ++line;
      continue;
    }
    const std::size_t index = out.size() + 1;
    const auto pd_at = row.find("PD[");
    if (pd_at == std::string_view::npos)
      throw ParseError("census record " + std::to_string(index) + " (line " +
                           std::to_string(line) + "): expected PD[...]",
                       pos, {"PD["}, line);
    std::string name(row.substr(first, pd_at > first ? pd_at - first : 0));
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t' || name.back() == ':'))
      name.pop_back();
    // The record may span lines until its closing bracket.
    std::size_t depth = 0;
    std::size_t end = pos + pd_at;
    std::size_t end_line = line;
    for (; end < text.size(); ++end) {
      if (text[end] == '\n') ++end_line;
      if (text[end] == '[') ++depth;
      if (text[end] == ']' && --depth == 0) break;
    }
    if (end >= text.size())
      throw ParseError("census record " + std::to_string(index) + " (line " +
                           std::to_string(line) + "): unterminated PD[",
                       pos, {"]"}, line);
    const std::string_view body = text.substr(pos + pd_at, end + 1 - (pos + pd_at));
    try {
      out.push_back({name, line, to_diagram(detail::PdScanner(body, line).entries(false))});
    } catch (const ParseError& e) {
      throw ParseError("census record " + std::to_string(index) + ": " + e.what(), pos,
                       e.expected(), e.line());
    } catch (const DomainError& e) {
      throw ParseError("census record " + std::to_string(index) + " (line " +
                           std::to_string(line) + "): " + e.what(),
                       pos, {}, line);
    }
    const std::size_t rest_eol = std::min(text.find('\n', end), text.size());
    const std::string_view tail = text.substr(end + 1, rest_eol - end - 1);
    const auto tail_cut = tail.find('#');
    if (tail.substr(0, tail_cut).find_first_not_of(" \t\r,") != std::string_view::npos)
      throw ParseError("census record " + std::to_string(index) + " (line " +
                           std::to_string(end_line) + "): unexpected text after PD[...]",
                       end + 1, {"end of line"}, end_line);
    pos = rest_eol + 1;
    line = end_line + 1;
  }
  return out;
}

}  // namespace kbpair
