#pragma once

// Algebraic tangle expressions.
//
// Grammar (whitespace between tokens is ignored):
//
//   expr   := term { "+" term }
//   term   := factor { "*" factor }
//   factor := int | "1" "/" posint | "-" factor | "(" expr ")" | name | "0" | "inf"
//   int    := [ "-" ] posint
//   name   := "T821" | "T10" | "T20" | "M" posint
//
// `*` binds tighter than `+`, both are left-associative. A `-` directly in
// front of an integer or `1/k` literal negates the literal; in front of
// anything else it builds the mirror image.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kbpair/error.hpp"

namespace kbpair {

enum class NodeKind { Twist, VTwist, Sum, Star, Mirror, Zero, Infinity };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

// Subtrees are shared rather than copied, so M_r is a chain of r nodes.
struct ExprNode {
  NodeKind kind;
  std::int64_t count = 0;  // Twist / VTwist only, nonzero
  Expr left;               // Sum / Star / Mirror (child)
  Expr right;              // Sum / Star
  std::string name;        // set on nodes built from a named tangle
};

namespace expr {

inline Expr make(NodeKind kind, std::int64_t count = 0, Expr left = nullptr, Expr right = nullptr,
                 std::string name = {}) {
  return std::make_shared<const ExprNode>(
      ExprNode{kind, count, std::move(left), std::move(right), std::move(name)});
}

inline Expr twist(std::int64_t k) {
  if (k == 0) throw DomainError("twist count must be nonzero");
  return make(NodeKind::Twist, k);
}
inline Expr vtwist(std::int64_t k) {
  if (k == 0) throw DomainError("vertical twist count must be nonzero");
  return make(NodeKind::VTwist, k);
}
inline Expr sum(Expr a, Expr b) { return make(NodeKind::Sum, 0, std::move(a), std::move(b)); }
inline Expr star(Expr a, Expr b) { return make(NodeKind::Star, 0, std::move(a), std::move(b)); }
inline Expr mirror(Expr a) { return make(NodeKind::Mirror, 0, std::move(a)); }
inline Expr zero() { return make(NodeKind::Zero); }
inline Expr infinity() { return make(NodeKind::Infinity); }

inline Expr named(Expr e, std::string name) {
  return make(e->kind, e->count, e->left, e->right, std::move(name));
}

}  // namespace expr

// ---------------------------------------------------------------------------
// Named tangles

struct NamedTangle {
  enum class Kind { T821, T10, T20, M, D };
  Kind kind;
  int r = 0;  // M and D only

  // D(r) is the closed knot diagram den(1 * M_r).
  bool is_closed() const { return kind == Kind::D; }
  std::string label() const {
    switch (kind) {
      case Kind::T821: return "T821";
      case Kind::T10: return "T10";
      case Kind::T20: return "T20";
      case Kind::M: return "M" + std::to_string(r);
      case Kind::D: return "D" + std::to_string(r);
    }
    return {};
  }
};

// Largest r accepted for M_r; 20 * 2^(r-1) must fit the crossing counter.
inline constexpr int kMaxDoublingDepth = 58;

inline Expr build_named(const NamedTangle& n) {
  using namespace expr;
  using Kind = NamedTangle::Kind;
  switch (n.kind) {
    case Kind::T821:
      return named(sum(star(sum(vtwist(2), twist(1)), twist(2)), twist(-3)), "T821");
    case Kind::T10:
      return named(star(build_named({Kind::T821}), twist(2)), "T10");
    case Kind::T20: {
      Expr t10 = build_named({Kind::T10});
      return named(sum(t10, mirror(t10)), "T20");
    }
    case Kind::M: {
      if (n.r < 1) throw DomainError("M_r needs r >= 1");
      if (n.r > kMaxDoublingDepth) throw DomainError("M_r supports r <= 58");
      Expr m = named(build_named({Kind::T20}), "M1");
      for (int k = 2; k <= n.r; ++k) m = named(sum(m, m), "M" + std::to_string(k));
      return m;
    }
    case Kind::D:
      if (n.r < 1) throw DomainError("D_r needs r >= 1");
      return star(twist(1), build_named({Kind::M, n.r}));
  }
  throw DomainError("unknown named tangle");
}

// ---------------------------------------------------------------------------
// Structural queries

// |k| per Twist/VTwist leaf; shared subtrees are counted once per use.
inline std::uint64_t crossing_count(const Expr& e) {
  std::unordered_map<const ExprNode*, std::uint64_t> memo;
  auto go = [&](auto&& self, const ExprNode* n) -> std::uint64_t {
    switch (n->kind) {
      case NodeKind::Twist:
      case NodeKind::VTwist:
        return static_cast<std::uint64_t>(n->count < 0 ? -n->count : n->count);
      case NodeKind::Zero:
      case NodeKind::Infinity:
        return 0;
      default:
        break;
    }
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    std::uint64_t c = self(self, n->left.get());
    if (n->right) c += self(self, n->right.get());
    memo.emplace(n, c);
    return c;
  };
  return go(go, e.get());
}

// Structural equality; name tags are ignored.
inline bool equal(const Expr& a, const Expr& b) {
  std::set<std::pair<const ExprNode*, const ExprNode*>> seen;
  auto go = [&](auto&& self, const ExprNode* x, const ExprNode* y) -> bool {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->count != y->count) return false;
    if (!seen.insert({x, y}).second) return true;
    return self(self, x->left.get(), y->left.get()) && self(self, x->right.get(), y->right.get());
  };
  return go(go, a.get(), b.get());
}

// Text form that parses back to an equal expression. Named nodes print as
// their name.
inline std::string format(const Expr& e) {
  auto go = [](auto&& self, const ExprNode& n) -> std::string {
    if (!n.name.empty()) return n.name;
    switch (n.kind) {
      case NodeKind::Twist:
        return n.count < 0 ? "(" + std::to_string(n.count) + ")" : std::to_string(n.count);
      case NodeKind::VTwist:
        return n.count < 0 ? "(-1/" + std::to_string(-n.count) + ")"
                           : "1/" + std::to_string(n.count);
      case NodeKind::Zero: return "0";
      case NodeKind::Infinity: return "inf";
      case NodeKind::Mirror: return "-(" + self(self, *n.left) + ")";
      case NodeKind::Sum: {
        std::string rhs = self(self, *n.right);
        if (n.right->kind == NodeKind::Sum && n.right->name.empty()) rhs = "(" + rhs + ")";
        return self(self, *n.left) + " + " + rhs;
      }
      case NodeKind::Star: {
        auto wrap = [&](const ExprNode& c, bool is_right) {
          std::string s = self(self, c);
          const bool needs = c.name.empty() && (c.kind == NodeKind::Sum ||
                                                (is_right && c.kind == NodeKind::Star));
          return needs ? "(" + s + ")" : s;
        };
        return wrap(*n.left, false) + " * " + wrap(*n.right, true);
      }
    }
    return {};
  };
  return go(go, *e);
}

// ---------------------------------------------------------------------------
// Parser

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    skip_ws();
    Expr e = expr();
    skip_ws();
    if (!at_end()) fail("unexpected trailing input", {"+", "*", "end of input"});
    return e;
  }

 private:
  Expr expr() {
    Expr e = term();
    for (;;) {
      skip_ws();
      if (peek() != '+') return e;
      ++pos_;
      e = expr::sum(std::move(e), term());
    }
  }

  Expr term() {
    Expr e = factor();
    for (;;) {
      skip_ws();
      if (peek() != '*') return e;
      ++pos_;
      e = expr::star(std::move(e), factor());
    }
  }

  Expr factor() {
    skip_ws();
    const char c = peek();
    if (c == '-') {
      ++pos_;
      skip_ws();
      if (is_digit(peek())) return literal(true);
      return expr::mirror(factor());
    }
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      skip_ws();
      if (peek() != ')') fail("unbalanced parenthesis", {")", "+", "*"});
      ++pos_;
      return e;
    }
    if (is_digit(c)) return literal(false);
    if (c == 'T' || c == 'M' || c == 'i') return name();
    fail(at_end() ? "unexpected end of input" : "unexpected character", kFactorStart);
  }

  // int | "1" "/" posint | "0"
  Expr literal(bool negative) {
    const std::size_t start = pos_;
    const std::int64_t k = number();
    const std::size_t after = pos_;
    skip_ws();
    if (peek() == '/') {
      if (k != 1) {
        pos_ = start;
        fail("only 1/k vertical twists are supported", {"1/k"});
      }
      ++pos_;
      skip_ws();
      const std::size_t den_start = pos_;
      if (!is_digit(peek())) fail("expected a positive integer after '/'", {"posint"});
      const std::int64_t d = number();
      if (d < 1) {
        pos_ = den_start;
        fail("k in 1/k must be at least 1", {"posint"});
      }
      return expr::vtwist(negative ? -d : d);
    }
    pos_ = after;
    if (k == 0) {
      if (negative) {
        pos_ = start;
        fail("twist count must be nonzero", {"posint"});
      }
      return expr::zero();
    }
    return expr::twist(negative ? -k : k);
  }

  Expr name() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && (is_digit(text_[end]) || is_alpha(text_[end]))) ++end;
    const std::string_view word = text_.substr(start, end - start);
    pos_ = end;
    using Kind = NamedTangle::Kind;
    if (word == "inf") return expr::infinity();
    if (word == "T821") return build_named({Kind::T821});
    if (word == "T10") return build_named({Kind::T10});
    if (word == "T20") return build_named({Kind::T20});
    if (word.size() > 1 && word[0] == 'M') {
      const std::string_view digits = word.substr(1);
      bool ok = digits[0] != '0';
      for (char d : digits) ok = ok && is_digit(d);
      if (ok && digits.size() <= 3) {
        const int r = std::stoi(std::string(digits));
        if (r >= 1 && r <= kMaxDoublingDepth) return build_named({Kind::M, r});
      }
    }
    pos_ = start;
    fail("unknown name '" + std::string(word) + "'", {"T821", "T10", "T20", "M<r>", "inf"});
  }

  std::int64_t number() {
    const std::size_t start = pos_;
    std::int64_t v = 0;
    while (is_digit(peek())) {
      if (v > (INT64_MAX - 9) / 10) {
        pos_ = start;
        fail("integer literal too large", {"posint"});
      }
      v = v * 10 + (peek() - '0');
      ++pos_;
    }
    return v;
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  void skip_ws() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                         text_[pos_] == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    std::string what = "syntax error at offset " + std::to_string(pos_) + ": " + msg;
    if (!expected.empty()) {
      what += " (expected one of:";
      for (const auto& x : expected) what += " " + x;
      what += ")";
    }
    throw ParseError(what, pos_, std::move(expected));
  }

  inline static const std::vector<std::string> kFactorStart = {
      "integer", "1/k", "-", "(", "T821", "T10", "T20", "M<r>", "0", "inf"};

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_tangle(std::string_view text) { return detail::ExprParser(text).parse(); }

}  // namespace kbpair
