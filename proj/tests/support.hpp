#pragma once

// Shared test helpers: seeded random generators and a label-based state-sum
// oracle that does not touch the library's diagram code.

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "kbpair/kbpair.hpp"

namespace kbtest {

using kbpair::BracketPair;
using kbpair::Expr;
using kbpair::Integer;
using kbpair::LaurentPoly;
using kbpair::NodeKind;

inline constexpr std::uint64_t kSeed = 20261019;

inline LaurentPoly random_poly(std::mt19937_64& rng, int max_terms = 6, int span = 12,
                               int coeff = 50) {
  std::uniform_int_distribution<int> n_terms(0, max_terms);
  std::uniform_int_distribution<int> exp(-span, span);
  std::uniform_int_distribution<int> c(-coeff, coeff);
  std::vector<LaurentPoly::Term> terms;
  for (int n = n_terms(rng); n > 0; --n) terms.emplace_back(exp(rng), Integer(c(rng)));
  return LaurentPoly::from_terms(std::move(terms));
}

// Occasionally produces huge coefficients so the multi-limb paths are exercised.
inline LaurentPoly random_big_poly(std::mt19937_64& rng) {
  LaurentPoly p = random_poly(rng);
  if (rng() % 4 == 0) {
    Integer big = 1;
    big <<= static_cast<unsigned>(64 + rng() % 200);
    p = p + LaurentPoly::monomial(big + static_cast<long>(rng() % 1000),
                                  static_cast<std::int64_t>(rng() % 9) - 4);
  }
  return p;
}

inline BracketPair random_pair(std::mt19937_64& rng) {
  return {random_poly(rng, 4, 8, 9), random_poly(rng, 4, 8, 9)};
}

// Random algebraic tangle with at most `budget` crossings.
inline Expr random_expr(std::mt19937_64& rng, std::uint64_t budget, int depth = 0) {
  using namespace kbpair::expr;
  const auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
  const bool leaf = budget < 2 || depth > 5 || pick(3) == 0;
  if (leaf) {
    if (budget == 0 || pick(8) == 0) return pick(2) ? zero() : infinity();
    const auto k = static_cast<std::int64_t>(1 + rng() % std::min<std::uint64_t>(budget, 3));
    const std::int64_t count = pick(2) ? k : -k;
    return pick(2) ? twist(count) : vtwist(count);
  }
  const std::uint64_t left_budget = 1 + rng() % (budget - 1);
  switch (pick(5)) {
    case 0:
      return mirror(random_expr(rng, budget, depth + 1));
    case 1:
    case 2:
      return sum(random_expr(rng, left_budget, depth + 1),
                 random_expr(rng, budget - left_budget, depth + 1));
    default:
      return star(random_expr(rng, left_budget, depth + 1),
                  random_expr(rng, budget - left_budget, depth + 1));
  }
}

// ---------------------------------------------------------------------------
// Oracle. A tangle is a list of crossings X[a,b,c,d] over edge labels plus the
// labels sitting on NW, NE, SW, SE. Gluing two ends identifies their labels.

struct LabelTangle {
  std::vector<std::array<int, 4>> crossings;
  std::array<int, 4> ends{};  // NW, NE, SW, SE
  int loops = 0;
};

class LabelBuilder {
 public:
  LabelTangle build(const Expr& e) {
    LabelTangle t = go(*e, false);
    for (auto& x : t.crossings)
      for (int& l : x) l = find(l);
    for (int& l : t.ends) l = find(l);
    return t;
  }

 private:
  int fresh() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Returns true when the two labels were already one edge.
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return true;
    parent_[a] = b;
    return false;
  }

  LabelTangle crossing(bool positive) {
    LabelTangle t;
    for (int& l : t.ends) l = fresh();
    const auto [nw, ne, sw, se] = t.ends;
    // listed counterclockwise from an under end
    t.crossings.push_back(positive ? std::array<int, 4>{sw, se, ne, nw}
                                   : std::array<int, 4>{nw, sw, se, ne});
    return t;
  }

  LabelTangle glue(LabelTangle a, const LabelTangle& b, bool horizontal) {
    const auto [anw, ane, asw, ase] = a.ends;
    const auto [bnw, bne, bsw, bse] = b.ends;
    LabelTangle t;
    t.crossings = std::move(a.crossings);
    t.crossings.insert(t.crossings.end(), b.crossings.begin(), b.crossings.end());
    t.loops = a.loops + b.loops;
    if (horizontal) {
      t.loops += join(ane, bnw);
      t.loops += join(ase, bsw);
      t.ends = {anw, bne, asw, bse};
    } else {
      t.loops += join(asw, bnw);
      t.loops += join(ase, bne);
      t.ends = {anw, ane, bsw, bse};
    }
    return t;
  }

  LabelTangle go(const kbpair::ExprNode& n, bool mirrored) {
    switch (n.kind) {
      case NodeKind::Zero: {
        LabelTangle t;
        const int top = fresh(), bottom = fresh();
        t.ends = {top, top, bottom, bottom};
        return t;
      }
      case NodeKind::Infinity: {
        LabelTangle t;
        const int left = fresh(), right = fresh();
        t.ends = {left, right, left, right};
        return t;
      }
      case NodeKind::Twist:
      case NodeKind::VTwist: {
        const bool positive = (n.count > 0) != mirrored;
        const std::int64_t k = n.count > 0 ? n.count : -n.count;
        LabelTangle t = crossing(positive);
        for (std::int64_t i = 1; i < k; ++i)
          t = glue(std::move(t), crossing(positive), n.kind == NodeKind::Twist);
        return t;
      }
      case NodeKind::Mirror:
        return go(*n.left, !mirrored);
      case NodeKind::Sum:
      case NodeKind::Star: {
        LabelTangle a = go(*n.left, mirrored);
        return glue(std::move(a), go(*n.right, mirrored), n.kind == NodeKind::Sum);
      }
    }
    throw std::logic_error("bad node");
  }

  std::vector<int> parent_;
};

// Generic state sum over labelled crossings: the A smoothing joins slots
// (0,1),(2,3) and has weight t, the B smoothing joins (0,3),(1,2).
// `classify` receives the union-find and returns the bucket of the state.
template <class Classify>
std::map<int, std::map<long, long long>> label_state_sum(
    const std::vector<std::array<int, 4>>& crossings, int label_count, const std::vector<int>& open,
    Classify classify) {
  const std::size_t n = crossings.size();
  std::map<int, std::map<long, long long>> buckets;  // bucket -> (exponent -> coefficient)
  std::vector<int> parent(label_count);
  for (std::uint64_t state = 0; state < (std::uint64_t{1} << n); ++state) {
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto join = [&](int a, int b) { parent[find(a)] = find(b); };
    int a_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = crossings[i];
      if (state >> i & 1) {
        join(x[0], x[3]);
        join(x[1], x[2]);
      } else {
        ++a_count;
        join(x[0], x[1]);
        join(x[2], x[3]);
      }
    }
    std::vector<char> used(label_count, 0), open_root(label_count, 0);
    for (int l : open) open_root[find(l)] = 1;
    int loops = 0;
    for (const auto& x : crossings)
      for (int l : x) {
        const int r = find(l);
        if (!used[r] && !open_root[r]) ++loops;
        used[r] = 1;
      }
    const int bucket = classify(find);
    // t^(a - b) * delta^loops, delta = -t^-2 - t^2
    std::map<long, long long> term{{static_cast<long>(2 * a_count - static_cast<int>(n)), 1}};
    for (int k = 0; k < loops; ++k) {
      std::map<long, long long> next;
      for (const auto& [e, c] : term) {
        next[e - 2] -= c;
        next[e + 2] -= c;
      }
      term = std::move(next);
    }
    for (const auto& [e, c] : term) buckets[bucket][e] += c;
  }
  return buckets;
}

inline LaurentPoly to_poly(const std::map<long, long long>& m) {
  std::vector<LaurentPoly::Term> terms;
  for (const auto& [e, c] : m) terms.emplace_back(e, Integer(static_cast<long>(c)));
  return LaurentPoly::from_terms(std::move(terms));
}

inline LaurentPoly delta_power(int k) {
  LaurentPoly p = LaurentPoly::one();
  for (int i = 0; i < k; ++i) p = p * LaurentPoly::delta();
  return p;
}

inline int label_span(const std::vector<std::array<int, 4>>& crossings,
                      const std::vector<int>& extra) {
  int top = 0;
  for (const auto& x : crossings)
    for (int l : x) top = std::max(top, l + 1);
  for (int l : extra) top = std::max(top, l + 1);
  return top;
}

inline BracketPair oracle_pair(const Expr& e) {
  const LabelTangle t = LabelBuilder().build(e);
  const std::vector<int> open(t.ends.begin(), t.ends.end());
  const int span = label_span(t.crossings, open);
  const auto [nw, ne, sw, se] = t.ends;
  auto buckets = label_state_sum(t.crossings, span, open, [&](auto& find) {
    if (find(nw) == find(ne)) return 0;
    if (find(nw) == find(sw)) return 1;
    throw std::logic_error("oracle: crossed state in a planar tangle");
  });
  const LaurentPoly loops = delta_power(t.loops);
  return {loops * to_poly(buckets[0]), loops * to_poly(buckets[1])};
}

// Bracket of a closed PD code, normalised so the unknot has bracket 1.
inline LaurentPoly oracle_bracket(const kbpair::PdCode& code) {
  std::map<std::int64_t, int> ids;
  std::vector<std::array<int, 4>> crossings;
  for (const auto& x : code.crossings) {
    std::array<int, 4> y{};
    for (int s = 0; s < 4; ++s) {
      auto [it, fresh] = ids.emplace(x[s], static_cast<int>(ids.size()));
      y[s] = it->second;
    }
    crossings.push_back(y);
  }
  const int span = label_span(crossings, {});
  auto buckets = label_state_sum(crossings, span, {}, [](auto&) { return 0; });
  const int components_without_crossings = static_cast<int>(code.loops.size());
  LaurentPoly b = crossings.empty() ? LaurentPoly::one() : to_poly(buckets[0]);
  // the state sum above counts delta per loop; divide one delta out by
  // treating the first loop as the reference circle
  if (!crossings.empty()) {
    // every state has at least one loop, so the sum is divisible by delta
    // and the quotient is obtained by dividing term by term from the top
    LaurentPoly rest = b;
    std::vector<LaurentPoly::Term> q;
    while (!rest.is_zero()) {
      const auto lt = kbpair::leading_term(rest);
      const LaurentPoly m = LaurentPoly::monomial(-lt.coefficient, lt.exponent - 2);
      q.emplace_back(lt.exponent - 2, Integer(-lt.coefficient));
      rest = rest - m * LaurentPoly::delta();
    }
    b = LaurentPoly::from_terms(std::move(q));
  }
  const int extra = components_without_crossings - (crossings.empty() ? 1 : 0);
  return b * delta_power(std::max(extra, 0));
}

// Writhe of a one-component PD code: walk the knot from the first under
// entry; a crossing is positive when its over strand runs from slot 3 to slot 1.
inline int oracle_writhe(const kbpair::PdCode& code) {
  const std::size_t n = code.crossings.size();
  if (n == 0) return 0;
  std::map<std::int64_t, std::vector<std::pair<std::size_t, int>>> at;
  for (std::size_t c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) at[code.crossings[c][s]].push_back({c, s});
  std::vector<int> over_in(n, -1);
  std::pair<std::size_t, int> in{0, 0};
  for (std::size_t step = 0; step < 2 * n; ++step) {
    if (in.second % 2 == 1) over_in[in.first] = in.second;
    const std::pair<std::size_t, int> out{in.first, (in.second + 2) % 4};
    const auto& ends = at[code.crossings[out.first][out.second]];
    in = ends[0] == out ? ends[1] : ends[0];
  }
  int w = 0;
  for (int s : over_in) {
    if (s < 0) throw std::logic_error("oracle_writhe: not a knot");
    w += s == 3 ? 1 : -1;
  }
  return w;
}

inline kbpair::QuarterLaurent oracle_jones(const kbpair::PdCode& code) {
  const int w = oracle_writhe(code);
  const LaurentPoly chi =
      ((w % 2 == 0) ? LaurentPoly::one() : -LaurentPoly::one()) * oracle_bracket(code).shifted(-3 * w);
  std::vector<LaurentPoly::Term> terms;
  for (const auto& [e, c] : chi.terms()) terms.emplace_back(-e, c);
  return kbpair::QuarterLaurent(LaurentPoly::from_terms(std::move(terms)));
}

}  // namespace kbtest
