#pragma once

// Bracket pairs [f; g] of 4-ended tangles: <T> = f <0> + g <inf>.

#include <functional>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <utility>

#include "kbpair/expr.hpp"
#include "kbpair/laurent.hpp"

namespace kbpair {

struct BracketPair {
  LaurentPoly f;  // coefficient of <0>
  LaurentPoly g;  // coefficient of <inf>

  friend bool operator==(const BracketPair& a, const BracketPair& b) {
    return a.f == b.f && a.g == b.g;
  }
  friend bool operator!=(const BracketPair& a, const BracketPair& b) { return !(a == b); }

  static BracketPair zero_tangle() { return {LaurentPoly::one(), {}}; }
  static BracketPair infinity_tangle() { return {{}, LaurentPoly::one()}; }
};

inline std::ostream& operator<<(std::ostream& os, const BracketPair& p) {
  return os << "[" << p.f << "; " << p.g << "]";
}

// Exact arithmetic, or every intermediate reduced modulo m >= 2.
class EvalMode {
 public:
  static EvalMode exact() { return EvalMode(); }
  static EvalMode modular(const Integer& m) {
    require_modulus(m);
    EvalMode mode;
    mode.modulus_ = m;
    return mode;
  }

  bool is_exact() const { return !modulus_.has_value(); }
  const std::optional<Integer>& modulus() const { return modulus_; }

  LaurentPoly reduce(LaurentPoly p) const { return modulus_ ? mod_reduce(p, *modulus_) : p; }
  BracketPair reduce(BracketPair p) const {
    if (!modulus_) return p;
    return {mod_reduce(p.f, *modulus_), mod_reduce(p.g, *modulus_)};
  }

 private:
  std::optional<Integer> modulus_;
};

// br(1) = [t; t^-1], br(-1) = [t^-1; t].
inline BracketPair generator(int sign) {
  if (sign != 1 && sign != -1) throw DomainError("generator sign must be +1 or -1");
  return {LaurentPoly::t(sign), LaurentPoly::t(-sign)};
}

// br(T + U)
inline BracketPair hsum(const BracketPair& a, const BracketPair& b) {
  static const LaurentPoly delta = LaurentPoly::delta();
  if (&a == &b) {
    LaurentPoly fg = a.f * a.g;
    return {square(a.f), fg + fg + delta * square(a.g)};
  }
  return {a.f * b.f, a.f * b.g + a.g * b.f + delta * (a.g * b.g)};
}

// br(T * U), T stacked above U.
inline BracketPair vsum(const BracketPair& a, const BracketPair& b) {
  static const LaurentPoly delta = LaurentPoly::delta();
  if (&a == &b) {
    LaurentPoly fg = a.f * a.g;
    return {delta * square(a.f) + fg + fg, square(a.g)};
  }
  return {delta * (a.f * b.f) + a.f * b.g + a.g * b.f, a.g * b.g};
}

inline BracketPair mirror_pair(const BracketPair& a) { return {mirror(a.f), mirror(a.g)}; }

// <num(T)> = delta f + g
inline LaurentPoly num_closure(const BracketPair& a) { return LaurentPoly::delta() * a.f + a.g; }
// <den(T)> = f + delta g
inline LaurentPoly den_closure(const BracketPair& a) { return a.f + LaurentPoly::delta() * a.g; }

using GeneratorFn = std::function<BracketPair(int)>;

// Structural fold over the expression. Shared subtrees are evaluated once,
// so M_r costs r pair operations. Integer twists are folded from generators.
inline BracketPair eval_expr(const Expr& e, const EvalMode& mode = EvalMode::exact(),
                             const GeneratorFn& gen = generator) {
  std::unordered_map<const ExprNode*, BracketPair> memo;
  auto fold = [&](int sign, std::int64_t k, bool vertical) {
    const BracketPair unit = mode.reduce(gen(sign));
    BracketPair acc = unit;
    for (std::int64_t i = 1; i < k; ++i)
      acc = mode.reduce(vertical ? vsum(acc, unit) : hsum(acc, unit));
    return acc;
  };
  auto go = [&](auto&& self, const ExprNode* n) -> BracketPair {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    BracketPair out;
    switch (n->kind) {
      case NodeKind::Twist:
        out = fold(n->count > 0 ? 1 : -1, n->count > 0 ? n->count : -n->count, false);
        break;
      case NodeKind::VTwist:
        out = fold(n->count > 0 ? 1 : -1, n->count > 0 ? n->count : -n->count, true);
        break;
      case NodeKind::Zero: out = BracketPair::zero_tangle(); break;
      case NodeKind::Infinity: out = BracketPair::infinity_tangle(); break;
      case NodeKind::Mirror: out = mirror_pair(self(self, n->left.get())); break;
      case NodeKind::Sum:
      case NodeKind::Star: {
        const BracketPair a = self(self, n->left.get());
        const bool same = n->left == n->right;
        const BracketPair b = same ? BracketPair{} : self(self, n->right.get());
        const BracketPair& rhs = same ? a : b;
        out = mode.reduce(n->kind == NodeKind::Sum ? hsum(a, rhs) : vsum(a, rhs));
        break;
      }
    }
    memo.emplace(n, out);
    return out;
  };
  return go(go, e.get());
}

}  // namespace kbpair
