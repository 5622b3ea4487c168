#pragma once

// Re-derives every quantitative claim about the T20 / M_r / K_r family and
// reports each one with a witness.

#include <cstdint>
#include <string>
#include <vector>

#include "kbpair/bracket.hpp"
#include "kbpair/diagram.hpp"
#include "kbpair/expr.hpp"
#include "kbpair/jones.hpp"
#include "kbpair/laurent.hpp"

namespace kbpair {

struct ClaimResult {
  std::string id;
  std::string locus;
  bool pass = false;
  std::string witness;
};

struct VerificationReport {
  std::vector<ClaimResult> claims;

  std::size_t passed() const {
    std::size_t n = 0;
    for (const auto& c : claims) n += c.pass ? 1 : 0;
    return n;
  }
  bool all_pass() const { return passed() == claims.size(); }
};

struct VerifyOptions {
  int max_r = 8;
  int max_traced_r = 4;  // diagram-level writhe/component checks
  GeneratorFn generator = kbpair::generator;
};

namespace detail {

inline BracketPair pair_of(std::string_view f, std::string_view g) {
  return {parse_laurent(f), parse_laurent(g)};
}

inline std::string witness(const BracketPair& p) {
  return "f = " + format(p.f) + "; g = " + format(p.g);
}

inline std::string witness(const Monomial& m) { return format(LaurentPoly::monomial(m)); }

}  // namespace detail

inline VerificationReport verify_claims(const VerifyOptions& opt = {}) {
  using detail::pair_of;
  using detail::witness;
  using Kind = NamedTangle::Kind;
  VerificationReport rep;
  auto add = [&](std::string id, std::string locus, bool pass, std::string w) {
    rep.claims.push_back({std::move(id), std::move(locus), pass, std::move(w)});
  };
  const EvalMode exact = EvalMode::exact();
  auto eval = [&](const Expr& e, const EvalMode& mode) { return eval_expr(e, mode, opt.generator); };

  // Small twists.
  const std::vector<std::tuple<std::string, std::string, BracketPair>> displays = {
      {"br2-display", "2", pair_of("t^2", "-t^-4 + 1")},
      {"br3-display", "3", pair_of("t^3", "t^-7 - t^-3 + t")},
      {"br1/2-display", "1/2", pair_of("1 - t^4", "t^-2")},
  };
  for (const auto& [id, text, expected] : displays) {
    const BracketPair got = eval(parse_tangle(text), exact);
    add(id, "bracket pair of the tangle " + text + " from br(1)", got == expected, witness(got));
  }

  const Expr t821 = build_named({Kind::T821});
  const BracketPair br821 = eval(t821, exact);
  add("T821-pair", "bracket pair of T(8,21) = (((1/2)+1)*2)+(-3)",
      br821 == pair_of("-2t^-6 + 2t^-2 - 2t^2 + t^6",
                       "-2t^-4 + 3 - 4t^4 + 3t^8 - 2t^12 + t^16"),
      witness(br821));

  const Expr t10 = build_named({Kind::T10});
  const BracketPair br10 = eval(t10, exact);
  add("T10-pair", "bracket pair of T10 = T(8,21) * 2",
      br10 == pair_of("2t^-10 - 2t^-6 + 2t^-2 - 2t^6 + 2t^10 - 2t^14 + t^18",
                      "2t^-8 - 5t^-4 + 7 - 7t^4 + 5t^8 - 3t^12 + t^16"),
      witness(br10));
  const BracketPair br10m = eval(expr::mirror(t10), exact);
  add("minus-T10-pair", "bracket pair of -T10",
      br10m == pair_of("t^-18 - 2t^-14 + 2t^-10 - 2t^-6 + 2t^2 - 2t^6 + 2t^10",
                       "t^-16 - 3t^-12 + 5t^-8 - 7t^-4 + 7 - 5t^4 + 2t^8"),
      witness(br10m));
  const EvalMode mod2 = EvalMode::modular(2);
  const BracketPair br10_2 = eval(t10, mod2);
  const BracketPair br10m_2 = eval(expr::mirror(t10), mod2);
  add("T10-mod2", "bracket pairs of T10 and -T10 modulo 2",
      br10_2 == pair_of("t^18", "t^-4 + 1 + t^4 + t^8 + t^12 + t^16") &&
          br10m_2 == pair_of("t^-18", "t^-16 + t^-12 + t^-8 + t^-4 + 1 + t^4"),
      witness(br10_2) + " | " + witness(br10m_2));

  const Expr t20 = build_named({Kind::T20});
  const BracketPair br20_2 = eval(t20, mod2);
  const BracketPair br20 = eval(t20, exact);
  add("T20-mod2", "bracket pair of T20 modulo 2 is [1; 0]",
      br20_2 == BracketPair::zero_tangle(), witness(br20_2));
  {
    const bool ok = !br20.f.is_zero() && !br20.g.is_zero() &&
                    leading_term(br20.f) == Monomial{2, 28} &&
                    leading_term(br20.g) == Monomial{2, 26};
    add("T20-leading", "leading terms 2t^28 of f(T20) and 2t^26 of g(T20)", ok,
        br20.f.is_zero() || br20.g.is_zero()
            ? "zero component"
            : "lt(f) = " + witness(leading_term(br20.f)) + "; lt(g) = " + witness(leading_term(br20.g)));
  }

  // M_r: one exact doubling chain shared by all r.
  std::vector<Monomial> chi_leads;
  BracketPair br_m = br20;
  const Monomial ell1{2, 28};
  for (int r = 1; r <= opt.max_r; ++r) {
    if (r > 1) br_m = hsum(br_m, br_m);
    const Integer two_r = power_of_two(static_cast<unsigned>(r));
    const Expr m_r = build_named({Kind::M, r});
    const BracketPair reduced = eval(m_r, EvalMode::modular(two_r));
    Monomial ell = ell1;
    for (int k = 1; k < r; ++k) ell = ell * ell;
    const bool lead_ok = !br_m.f.is_zero() && !br_m.g.is_zero() &&
                         leading_term(br_m.f) == ell &&
                         leading_term(br_m.g) == Monomial{ell.coefficient, ell.exponent - 2};
    const bool mod_ok = reduced == BracketPair::zero_tangle();
    const bool consistent = EvalMode::modular(two_r).reduce(br_m) == reduced;
    std::string w = "br mod 2^" + std::to_string(r) + " = " + "[" + format(reduced.f) + "; " +
                    format(reduced.g) + "]";
    if (!br_m.f.is_zero() && !br_m.g.is_zero())
      w += "; lt(f) = " + witness(leading_term(br_m.f)) + "; lt(g) = " +
           witness(leading_term(br_m.g));
    add("M" + std::to_string(r) + "-pair",
        "br(M_r) = [1; 0] mod 2^r with leading terms (2t^28)^(2^(r-1)) and t^-2 times that",
        lead_ok && mod_ok && consistent, w);

    // K_r = den(1 * M_r), writhe +1.
    const Expr d_r = build_named({Kind::D, r});
    StructuralWrithe sw;
    const std::int64_t w_d = sw.closed(d_r, Closure::Den);
    const LaurentPoly bracket =
        den_closure(vsum(opt.generator(1), br_m));
    const LaurentPoly chi = normalized_bracket(bracket, w_d);
    const QuarterLaurent v = jones_from_chi(chi);
    const bool chi_ok = chi == br_m.f + br_m.g.shifted(-6);
    const bool trivial = congruent_to_one(v, two_r);
    const bool lt_ok = !chi.is_zero() && leading_term(chi) == ell;
    if (!chi.is_zero()) chi_leads.push_back(leading_term(chi));
    add("K" + std::to_string(r) + "-jones",
        "chi(K_r) = f(M_r) + t^-6 g(M_r), V(K_r) = 1 mod 2^r, lt(chi(K_r)) = (2t^28)^(2^(r-1))",
        chi_ok && trivial && lt_ok && w_d == 1,
        "writhe = " + std::to_string(w_d) + "; V = 1 mod 2^" + std::to_string(r) + ": " +
            (trivial ? "true" : "false") +
            (chi.is_zero() ? std::string() : "; lt(chi) = " + witness(leading_term(chi))));
  }

  for (int r = 1; r <= std::min(opt.max_r, opt.max_traced_r); ++r) {
    const TangleDiagram m = expand(build_named({Kind::M, r}));
    const LinkDiagram d = close(expand(build_named({Kind::D, r})), Closure::Den);
    const std::int64_t wm = writhe(m, OrientationConvention::LeftRight);
    const std::int64_t wd = writhe(d, OrientationConvention::FirstStrand);
    const std::uint64_t comps = component_count(d);
    add("M" + std::to_string(r) + "-writhe",
        "M_r is left-right orientable with writhe 0; D_r = den(1 * M_r) is a knot of writhe +1",
        wm == 0 && wd == 1 && comps == 1 && m.crossing_count() == 20ULL << (r - 1),
        "crossings = " + std::to_string(m.crossing_count()) + "; wri(M) = " + std::to_string(wm) +
            "; wri(D) = " + std::to_string(wd) + "; components = " + std::to_string(comps));
  }

  if (opt.max_r >= 1) {
    bool distinct = chi_leads.size() == static_cast<std::size_t>(opt.max_r);
    std::string w;
    for (std::size_t i = 0; i < chi_leads.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) distinct = distinct && !(chi_leads[i] == chi_leads[j]);
      w += (i ? ", " : "") + std::to_string(chi_leads[i].exponent);
    }
    add("Kr-distinct", "leading terms of chi(K_r) are pairwise distinct", distinct,
        "exponents: " + w);
  }

  {
    const BracketPair state = state_sum_pair(expand(t821));
    add("T821-oracle", "state sum over 2^8 smoothings of T(8,21) agrees with the algebra",
        state == br821, witness(state));
  }
  return rep;
}

}  // namespace kbpair
