// Evaluates a few tangles and prints their bracket pairs and Jones polynomials.

#include <iostream>

#include "kbpair/kbpair.hpp"

int main() {
  using namespace kbpair;

  const Expr t821 = parse_tangle("(((1/2)+1)*2)+(-3)");
  std::cout << "br(T821) = " << eval_expr(t821) << "\n";
  std::cout << "br(T20) mod 2 = " << eval_expr(parse_tangle("T20"), EvalMode::modular(2)) << "\n";

  for (int r = 1; r <= 4; ++r) {
    const KrReport k = jones_of_Kr(r);
    std::cout << "K_" << r << ": " << k.crossing_bound << " crossings, lt(chi) = "
              << *k.chi_leading << ", V = 1 mod 2^" << r << ": " << std::boolalpha
              << k.jones_mod_trivial << "\n";
  }

  const LinkDiagram trefoil = pd_read("X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]");
  const std::int64_t w = writhe(trefoil, OrientationConvention::FirstStrand);
  std::cout << "V(trefoil) = " << jones_from_chi(normalized_bracket(state_sum_bracket(trefoil), w))
            << "\n";
}
