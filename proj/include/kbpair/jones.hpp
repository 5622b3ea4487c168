#pragma once

// Writhe normalization, the Jones polynomial and the K_r pipeline.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kbpair/bracket.hpp"
#include "kbpair/diagram.hpp"
#include "kbpair/expr.hpp"
#include "kbpair/laurent.hpp"

namespace kbpair {

// Polynomial in t^(1/4): exponents are stored in quarter units.
class QuarterLaurent {
 public:
  QuarterLaurent() = default;
  explicit QuarterLaurent(LaurentPoly quarters) : quarters_(std::move(quarters)) {}

  static QuarterLaurent one() { return QuarterLaurent(LaurentPoly::one()); }

  const LaurentPoly& quarter_terms() const noexcept { return quarters_; }
  bool is_zero() const noexcept { return quarters_.is_zero(); }

  // True when every exponent is an integer power of t.
  bool integral() const {
    for (const auto& term : quarters_.terms())
      if (term.first % 4 != 0) return false;
    return true;
  }

  friend bool operator==(const QuarterLaurent& a, const QuarterLaurent& b) {
    return a.quarters_ == b.quarters_;
  }
  friend bool operator!=(const QuarterLaurent& a, const QuarterLaurent& b) { return !(a == b); }
  friend QuarterLaurent operator-(const QuarterLaurent& a, const QuarterLaurent& b) {
    return QuarterLaurent(a.quarters_ - b.quarters_);
  }

 private:
  LaurentPoly quarters_;
};

// Same layout as the Laurent format; fractional exponents print as t^(a/b).
inline std::string format(const QuarterLaurent& v) {
  const LaurentPoly& q = v.quarter_terms();
  if (q.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : q.terms()) {
    if (e % 4 == 0) {
      detail::append_term(out, c, e / 4, first);
    } else {
      detail::append_term(out, c, 1, first);
      const Exponent g = std::gcd(e < 0 ? -e : e, Exponent{4});
      out += "^(" + std::to_string(e / g) + "/" + std::to_string(4 / g) + ")";
    }
    first = false;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const QuarterLaurent& v) { return os << format(v); }

// (-t^3)^(-writhe) * bracket
inline LaurentPoly normalized_bracket(const LaurentPoly& bracket, std::int64_t writhe) {
  const Integer sign = (writhe % 2 == 0) ? 1 : -1;
  return sign * bracket.shifted(-3 * writhe);
}

// t <- t^(-1/4)
inline QuarterLaurent jones_from_chi(const LaurentPoly& chi) { return QuarterLaurent(mirror(chi)); }

inline bool congruent_to_one(const QuarterLaurent& v, const Integer& m) {
  require_modulus(m);
  return congruent(v.quarter_terms(), LaurentPoly::one(), m);
}

// Largest crossing count evaluated with exact coefficients.
inline constexpr std::uint64_t kDefaultExactCrossingBudget = 6000;

struct KrReport {
  int r = 0;
  LaurentPoly f;  // f(M_r), reduced in modular mode
  LaurentPoly g;  // g(M_r)
  std::int64_t writhe = 0;
  LaurentPoly chi;
  QuarterLaurent jones;
  std::optional<Monomial> chi_leading;  // exact mode only
  bool jones_mod_trivial = false;       // V(K_r) = 1 mod 2^r
  std::uint64_t crossing_bound = 0;     // 1 + 20 * 2^(r-1)
};

inline Integer power_of_two(unsigned r) {
  Integer m;
  mpz_ui_pow_ui(m.get_mpz_t(), 2, r);
  return m;
}

// K_r is the closure den(1 * M_r). In modular mode the modulus must be a
// multiple of 2^r so the congruence is still decidable.
inline KrReport jones_of_Kr(int r, const EvalMode& mode = EvalMode::exact(),
                            std::uint64_t exact_budget = kDefaultExactCrossingBudget) {
  if (r < 1) throw DomainError("K_r needs r >= 1");
  const Expr diagram = build_named({NamedTangle::Kind::D, r});
  KrReport rep;
  rep.r = r;
  rep.crossing_bound = crossing_count(diagram);
  if (mode.is_exact() && rep.crossing_bound > exact_budget)
    throw ResourceError("K_" + std::to_string(r) + " has " + std::to_string(rep.crossing_bound) +
                        " crossings, over the exact budget " + std::to_string(exact_budget) +
                        "; use modular mode");
  const Integer two_r = power_of_two(static_cast<unsigned>(r));
  if (!mode.is_exact() && *mode.modulus() % two_r != 0)
    throw DomainError("modulus must be a multiple of 2^" + std::to_string(r));

  const Expr& m_r = diagram->right;
  const BracketPair br_m = eval_expr(m_r, mode);
  rep.f = br_m.f;
  rep.g = br_m.g;
  const BracketPair br_d = mode.reduce(vsum(mode.reduce(generator(1)), br_m));
  const LaurentPoly bracket = mode.reduce(den_closure(br_d));

  StructuralWrithe sw;
  rep.writhe = sw.closed(diagram, Closure::Den);
  rep.chi = mode.reduce(normalized_bracket(bracket, rep.writhe));
  rep.jones = jones_from_chi(rep.chi);
  rep.jones_mod_trivial = congruent_to_one(rep.jones, two_r);
  if (mode.is_exact()) rep.chi_leading = leading_term(rep.chi);
  return rep;
}

}  // namespace kbpair
