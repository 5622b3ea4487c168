#pragma once

// Crossing-level planar diagrams of tangles and links.
//
// A diagram is a set of half-edge endpoints ("points") joined in pairs by
// arcs. Crossing i owns points 4i..4i+3, listed counterclockwise starting
// from an endpoint of the under-strand, so slots (0,2) are the under-strand
// and (1,3) the over-strand. A 4-ended tangle additionally owns the boundary
// points 4n + {NW, NE, SW, SE}. Crossingless closed circles are only counted.
//
// With the slot convention above, smoothing slots (0,1)+(2,3) carries the
// weight t and smoothing (0,3)+(1,2) carries t^-1.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kbpair/bracket.hpp"
#include "kbpair/expr.hpp"
#include "kbpair/laurent.hpp"

namespace kbpair {

enum Endpoint : int { NW = 0, NE = 1, SW = 2, SE = 3 };

enum class Pairing { Zero, Infinity, Cross };

enum class Closure { Num, Den };

struct Connectivity {
  Pairing pairing = Pairing::Zero;
  std::uint64_t loops = 0;

  friend bool operator==(const Connectivity&, const Connectivity&) = default;
};

inline const char* to_string(Pairing p) {
  switch (p) {
    case Pairing::Zero: return "0";
    case Pairing::Infinity: return "inf";
    case Pairing::Cross: return "cross";
  }
  return "?";
}

namespace detail {

// Endpoint partner inside a tangle with the given pairing.
inline int pairing_partner(Pairing p, int e) {
  static constexpr int kZero[4] = {NE, NW, SE, SW};
  static constexpr int kInf[4] = {SW, SE, NW, NE};
  static constexpr int kCross[4] = {SE, SW, NE, NW};
  switch (p) {
    case Pairing::Zero: return kZero[e];
    case Pairing::Infinity: return kInf[e];
    case Pairing::Cross: return kCross[e];
  }
  return -1;
}

// Tangle endpoint attached to each slot of the crossings 1 and -1.
// Tangle 1: over-strand NW-SE, under-strand SW-NE.
inline constexpr std::array<int, 4> kPositiveSlots = {SW, SE, NE, NW};
inline constexpr std::array<int, 4> kNegativeSlots = {NW, SW, SE, NE};

// Sign of a crossing from the slot at which each strand enters it.
inline int crossing_sign(int under_entry_slot, int over_entry_slot) {
  return (under_entry_slot + 3) % 4 == over_entry_slot ? 1 : -1;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::int32_t>(i);
  }

  std::int32_t find(std::int32_t x) {
    std::int32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::int32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // True when a and b were in different sets.
  bool unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::int32_t> parent_;
};

}  // namespace detail

// ---------------------------------------------------------------------------

class Diagram {
 public:
  Diagram() = default;

  // `partner` has 4n or 4n + 4 entries and must be a fixed-point-free involution.
  Diagram(std::size_t crossings, std::vector<std::int32_t> partner, bool tangle,
          std::uint64_t free_loops)
      : crossings_(crossings), tangle_(tangle), free_loops_(free_loops),
        partner_(std::move(partner)) {
    const std::size_t expected = 4 * crossings_ + (tangle_ ? 4 : 0);
    if (partner_.size() != expected) throw DomainError("diagram: wrong number of endpoints");
    for (std::size_t p = 0; p < partner_.size(); ++p) {
      const std::int32_t q = partner_[p];
      if (q < 0 || static_cast<std::size_t>(q) >= partner_.size() ||
          static_cast<std::size_t>(q) == p || partner_[q] != static_cast<std::int32_t>(p))
        throw DomainError("diagram: arcs must pair endpoints");
    }
    if (tangle_) {
      for (int e = 0; e < 4; ++e)
        for (int f = e + 1; f < 4; ++f)
          if (boundary(e) == boundary(f)) throw DomainError("diagram: boundary ids not distinct");
    }
  }

  std::size_t crossing_count() const noexcept { return crossings_; }
  bool is_tangle() const noexcept { return tangle_; }
  std::uint64_t free_loops() const noexcept { return free_loops_; }
  std::size_t point_count() const noexcept { return partner_.size(); }
  const std::vector<std::int32_t>& partners() const noexcept { return partner_; }

  std::int32_t partner(std::int32_t p) const { return partner_[p]; }
  std::array<std::int32_t, 4> crossing(std::size_t i) const {
    const auto b = static_cast<std::int32_t>(4 * i);
    return {b, b + 1, b + 2, b + 3};
  }
  std::int32_t boundary(int e) const { return static_cast<std::int32_t>(4 * crossings_) + e; }

  bool is_crossing_point(std::int32_t p) const {
    return static_cast<std::size_t>(p) < 4 * crossings_;
  }
  // Leaving a crossing through the slot opposite to p.
  static std::int32_t opposite(std::int32_t p) { return (p & ~3) | ((p + 2) & 3); }

  friend bool operator==(const Diagram&, const Diagram&) = default;

 private:
  std::size_t crossings_ = 0;
  bool tangle_ = false;
  std::uint64_t free_loops_ = 0;
  std::vector<std::int32_t> partner_;
};

using TangleDiagram = Diagram;
using LinkDiagram = Diagram;

namespace detail {

using Ends = std::array<std::int32_t, 4>;

// Grows a diagram by gluing tangles at their boundary points. Glued points
// disappear; their arc partners get joined directly.
class DiagramBuilder {
 public:
  DiagramBuilder() = default;

  explicit DiagramBuilder(const Diagram& d) {
    partner_ = d.partners();
    for (std::size_t i = 0; i < d.crossing_count(); ++i) {
      const auto c = d.crossing(i);
      crossings_.push_back(c);
    }
    free_loops_ = d.free_loops();
  }

  Ends crossing(bool positive) {
    const auto& slots = positive ? kPositiveSlots : kNegativeSlots;
    std::array<std::int32_t, 4> c{};
    Ends ends{};
    for (int s = 0; s < 4; ++s) c[s] = new_point();
    for (int e = 0; e < 4; ++e) ends[e] = new_point();
    for (int s = 0; s < 4; ++s) link(c[s], ends[slots[s]]);
    crossings_.push_back(c);
    return ends;
  }

  Ends zero() {
    Ends ends{};
    for (auto& p : ends) p = new_point();
    link(ends[NW], ends[NE]);
    link(ends[SW], ends[SE]);
    return ends;
  }

  Ends infinity() {
    Ends ends{};
    for (auto& p : ends) p = new_point();
    link(ends[NW], ends[SW]);
    link(ends[NE], ends[SE]);
    return ends;
  }

  Ends hsum(const Ends& a, const Ends& b) {
    glue(a[NE], b[NW]);
    glue(a[SE], b[SW]);
    return {a[NW], b[NE], a[SW], b[SE]};
  }

  Ends vsum(const Ends& a, const Ends& b) {
    glue(a[SW], b[NW]);
    glue(a[SE], b[NE]);
    return {a[NW], a[NE], b[SW], b[SE]};
  }

  void glue(std::int32_t x, std::int32_t y) {
    const std::int32_t px = partner_[x];
    const std::int32_t py = partner_[y];
    if (px == y) {
      ++free_loops_;
    } else {
      link(px, py);
    }
  }

  std::size_t crossing_total() const { return crossings_.size(); }

  // Renumbers into the compact layout of Diagram.
  Diagram finish(const Ends* boundary) const {
    const std::size_t n = crossings_.size();
    std::vector<std::int32_t> remap(partner_.size(), -1);
    for (std::size_t i = 0; i < n; ++i)
      for (int s = 0; s < 4; ++s) remap[crossings_[i][s]] = static_cast<std::int32_t>(4 * i + s);
    if (boundary)
      for (int e = 0; e < 4; ++e) remap[(*boundary)[e]] = static_cast<std::int32_t>(4 * n + e);
    std::vector<std::int32_t> partner(4 * n + (boundary ? 4 : 0));
    for (std::size_t p = 0; p < partner_.size(); ++p) {
      if (remap[p] < 0) continue;
      partner[remap[p]] = remap[partner_[p]];
    }
    return Diagram(n, std::move(partner), boundary != nullptr, free_loops_);
  }

 private:
  std::int32_t new_point() {
    partner_.push_back(-1);
    return static_cast<std::int32_t>(partner_.size() - 1);
  }
  void link(std::int32_t a, std::int32_t b) {
    partner_[a] = b;
    partner_[b] = a;
  }

  std::vector<std::int32_t> partner_;
  std::vector<std::array<std::int32_t, 4>> crossings_;
  std::uint64_t free_loops_ = 0;
};

}  // namespace detail

inline constexpr std::uint64_t kDefaultExpandLimit = std::uint64_t{1} << 22;

// Crossing-level diagram of an expression. Mirror swaps over and under of
// every crossing below it.
inline TangleDiagram expand(const Expr& e, std::uint64_t max_crossings = kDefaultExpandLimit) {
  const std::uint64_t n = crossing_count(e);
  if (n > max_crossings)
    throw ResourceError(std::to_string(n) + " crossings exceeds expansion limit " +
                        std::to_string(max_crossings));
  detail::DiagramBuilder b;
  auto chain = [&](std::int64_t k, bool mirrored, bool vertical) {
    const bool positive = (k > 0) != mirrored;
    const std::int64_t len = k > 0 ? k : -k;
    detail::Ends acc = b.crossing(positive);
    for (std::int64_t i = 1; i < len; ++i)
      acc = vertical ? b.vsum(acc, b.crossing(positive)) : b.hsum(acc, b.crossing(positive));
    return acc;
  };
  auto go = [&](auto&& self, const ExprNode& node, bool mirrored) -> detail::Ends {
    switch (node.kind) {
      case NodeKind::Twist: return chain(node.count, mirrored, false);
      case NodeKind::VTwist: return chain(node.count, mirrored, true);
      case NodeKind::Zero: return b.zero();
      case NodeKind::Infinity: return b.infinity();
      case NodeKind::Mirror: return self(self, *node.left, !mirrored);
      case NodeKind::Sum: {
        const auto l = self(self, *node.left, mirrored);
        return b.hsum(l, self(self, *node.right, mirrored));
      }
      case NodeKind::Star: {
        const auto l = self(self, *node.left, mirrored);
        return b.vsum(l, self(self, *node.right, mirrored));
      }
    }
    throw DomainError("bad expression node");
  };
  const detail::Ends ends = go(go, *e, false);
  return b.finish(&ends);
}

// den joins NW-SW and NE-SE; num joins NW-NE and SW-SE.
inline LinkDiagram close(const TangleDiagram& d, Closure mode) {
  if (!d.is_tangle()) throw DomainError("close: diagram has no boundary");
  detail::DiagramBuilder b(d);
  if (mode == Closure::Den) {
    b.glue(d.boundary(NW), d.boundary(SW));
    b.glue(d.boundary(NE), d.boundary(SE));
  } else {
    b.glue(d.boundary(NW), d.boundary(NE));
    b.glue(d.boundary(SW), d.boundary(SE));
  }
  return b.finish(nullptr);
}

// Closed strands plus free loops; for tangles the two open strands count too.
inline std::uint64_t component_count(const Diagram& d) {
  const auto n = static_cast<std::int32_t>(d.point_count());
  detail::UnionFind uf(d.point_count());
  std::int64_t comps = n;
  for (std::int32_t p = 0; p < n; ++p) {
    if (p < d.partner(p) && uf.unite(p, d.partner(p))) --comps;
    if (d.is_crossing_point(p) && (p & 3) < 2 && uf.unite(p, Diagram::opposite(p))) --comps;
  }
  return static_cast<std::uint64_t>(comps) + d.free_loops();
}

// ---------------------------------------------------------------------------
// Connectivity

inline Connectivity hsum(const Connectivity& a, const Connectivity& b) {
  const bool a_inf = a.pairing == Pairing::Infinity;
  const bool b_inf = b.pairing == Pairing::Infinity;
  Connectivity out;
  out.loops = a.loops + b.loops + (a_inf && b_inf ? 1 : 0);
  if (a_inf || b_inf)
    out.pairing = Pairing::Infinity;
  else
    out.pairing = a.pairing == b.pairing ? Pairing::Zero : Pairing::Cross;
  return out;
}

inline Connectivity vsum(const Connectivity& a, const Connectivity& b) {
  const bool a_zero = a.pairing == Pairing::Zero;
  const bool b_zero = b.pairing == Pairing::Zero;
  Connectivity out;
  out.loops = a.loops + b.loops + (a_zero && b_zero ? 1 : 0);
  if (a_zero || b_zero)
    out.pairing = Pairing::Zero;
  else
    out.pairing = a.pairing == b.pairing ? Pairing::Infinity : Pairing::Cross;
  return out;
}

namespace detail {

inline Connectivity twist_connectivity(std::int64_t k, bool vertical) {
  const bool odd = (k % 2) != 0;
  if (odd) return {Pairing::Cross, 0};
  return {vertical ? Pairing::Infinity : Pairing::Zero, 0};
}

class ConnectivityTable {
 public:
  const Connectivity& of(const ExprNode* n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    Connectivity c;
    switch (n->kind) {
      case NodeKind::Twist: c = twist_connectivity(n->count, false); break;
      case NodeKind::VTwist: c = twist_connectivity(n->count, true); break;
      case NodeKind::Zero: c = {Pairing::Zero, 0}; break;
      case NodeKind::Infinity: c = {Pairing::Infinity, 0}; break;
      case NodeKind::Mirror: c = of(n->left.get()); break;
      case NodeKind::Sum: c = hsum(of(n->left.get()), of(n->right.get())); break;
      case NodeKind::Star: c = vsum(of(n->left.get()), of(n->right.get())); break;
    }
    return memo_.emplace(n, c).first->second;
  }

 private:
  std::unordered_map<const ExprNode*, Connectivity> memo_;
};

}  // namespace detail

// Composed from the hsum/vsum tables without building the diagram.
inline Connectivity connectivity(const Expr& e) {
  detail::ConnectivityTable table;
  return table.of(e.get());
}

// Read off an expanded tangle diagram.
inline Connectivity traced_connectivity(const TangleDiagram& d) {
  if (!d.is_tangle()) throw DomainError("connectivity: diagram has no boundary");
  std::int32_t p = d.partner(d.boundary(NW));
  while (d.is_crossing_point(p)) p = d.partner(Diagram::opposite(p));
  Connectivity c;
  const std::int32_t end = p - static_cast<std::int32_t>(4 * d.crossing_count());
  if (end == NE)
    c.pairing = Pairing::Zero;
  else if (end == SW)
    c.pairing = Pairing::Infinity;
  else
    c.pairing = Pairing::Cross;
  c.loops = component_count(d) - 2;
  return c;
}

// Number of components after closing, from connectivity alone.
inline std::uint64_t closure_components(const Connectivity& c, Closure mode) {
  if (c.pairing == Pairing::Cross) return 1 + c.loops;
  const bool two = (mode == Closure::Den) == (c.pairing == Pairing::Infinity);
  return (two ? 2 : 1) + c.loops;
}

// ---------------------------------------------------------------------------
// Orientation and writhe

namespace detail {

// Entry points met when walking a closed strand through p.
inline void walk_closed(const Diagram& d, std::int32_t p, std::vector<std::int32_t>& cycle) {
  cycle.clear();
  std::int32_t u = p;
  do {
    cycle.push_back(u);
    u = d.partner(Diagram::opposite(u));
  } while (u != p);
}

// Lowest slot-0 point on the strand, else its lowest point.
inline std::int32_t strand_start(const std::vector<std::int32_t>& cycle) {
  std::int32_t start = -1;
  for (std::int32_t v : cycle)
    for (std::int32_t w : {v, Diagram::opposite(v)})
      if ((w & 3) == 0 && (start < 0 || w < start)) start = w;
  if (start >= 0) return start;
  for (std::int32_t v : cycle)
    for (std::int32_t w : {v, Diagram::opposite(v)})
      if (start < 0 || w < start) start = w;
  return start;
}

}  // namespace detail

enum class OrientationConvention {
  // Both strands of a tangle run from the west endpoints to the east ones.
  LeftRight,
  // Each strand is oriented from a canonical start: the lowest-numbered
  // under-strand entry slot (slot 0) on it, else its lowest endpoint id.
  // Open strands of a tangle start at their lower boundary endpoint.
  FirstStrand,
};

struct Orientation {
  std::vector<std::int8_t> signs;  // one per crossing
  std::int64_t writhe = 0;
};

inline Orientation orient(const Diagram& d, OrientationConvention conv) {
  const auto n = static_cast<std::int32_t>(d.point_count());
  std::vector<std::int8_t> entering(n, -1);  // -1 unknown, 1 enters its crossing, 0 leaves

  auto run_open = [&](std::int32_t start_boundary) {
    std::int32_t p = d.partner(start_boundary);
    while (d.is_crossing_point(p)) {
      entering[p] = 1;
      const std::int32_t q = Diagram::opposite(p);
      entering[q] = 0;
      p = d.partner(q);
    }
    return p;
  };

  if (d.is_tangle()) {
    if (conv == OrientationConvention::LeftRight) {
      for (int e : {NW, SW}) {
        const std::int32_t end = run_open(d.boundary(e));
        if (end == d.boundary(NW) || end == d.boundary(SW))
          throw NotOrientableError("tangle is not left-right orientable: west endpoints are joined");
      }
    } else {
      std::vector<bool> done(4, false);
      for (int e = 0; e < 4; ++e) {
        if (done[e]) continue;
        const std::int32_t end = run_open(d.boundary(e));
        done[e] = true;
        done[end - d.boundary(0)] = true;
      }
    }
  }

  // Closed strands.
  std::vector<std::int32_t> cycle;
  for (std::int32_t p = 0; p < static_cast<std::int32_t>(4 * d.crossing_count()); ++p) {
    if (entering[p] != -1) continue;
    detail::walk_closed(d, p, cycle);
    const std::int32_t start = detail::strand_start(cycle);
    const bool forward = std::find(cycle.begin(), cycle.end(), start) != cycle.end();
    for (std::int32_t v : cycle) {
      entering[v] = forward ? 1 : 0;
      entering[Diagram::opposite(v)] = forward ? 0 : 1;
    }
  }

  Orientation out;
  out.signs.resize(d.crossing_count());
  for (std::size_t i = 0; i < d.crossing_count(); ++i) {
    const auto b = static_cast<std::int32_t>(4 * i);
    const int under = entering[b] ? 0 : 2;
    const int over = entering[b + 1] ? 1 : 3;
    out.signs[i] = static_cast<std::int8_t>(detail::crossing_sign(under, over));
    out.writhe += out.signs[i];
  }
  return out;
}

inline std::int64_t writhe(const Diagram& d, OrientationConvention conv) {
  return orient(d, conv).writhe;
}

// Writhe computed compositionally on the expression tree, without expanding
// it. An orientation is a 4-bit mask over the endpoints (bit e set when the
// strand enters the tangle at e); it is pushed down through each sum by
// following the strands across the two glued endpoints. Closed strands
// that never reach the outer boundary are oriented from the left summand
// to the right (or top to bottom) at the first glued endpoint.
class StructuralWrithe {
 public:
  std::int64_t left_right(const Expr& e) {
    if (table_.of(e.get()).pairing == Pairing::Infinity)
      throw NotOrientableError("tangle is not left-right orientable: west endpoints are joined");
    return of(e.get(), (1 << NW) | (1 << SW));
  }

  // Writhe of the closure, strands oriented starting from NW entering.
  std::int64_t closed(const Expr& e, Closure mode) {
    const Pairing p = table_.of(e.get()).pairing;
    std::array<int, 4> in{-1, -1, -1, -1};
    auto outside = [&](int x) {
      if (mode == Closure::Den) return x == NW ? SW : x == SW ? NW : x == NE ? SE : NE;
      return x == NW ? NE : x == NE ? NW : x == SW ? SE : SW;
    };
    for (int seed = 0; seed < 4; ++seed) {
      if (in[seed] != -1) continue;
      int x = seed;
      in[x] = 1;
      for (;;) {
        const int y = detail::pairing_partner(p, x);  // leaves here
        in[y] = 0;
        const int z = outside(y);
        if (in[z] != -1) break;
        in[z] = 1;
        x = z;
      }
    }
    int mask = 0;
    for (int x = 0; x < 4; ++x)
      if (in[x] == 1) mask |= 1 << x;
    return of(e.get(), mask);
  }

  std::int64_t of(const ExprNode* n, int mask) {
    const auto key = std::make_pair(n, mask);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::int64_t w = 0;
    switch (n->kind) {
      case NodeKind::Zero:
      case NodeKind::Infinity: w = 0; break;
      case NodeKind::Twist:
      case NodeKind::VTwist: w = twist(n->count, n->kind == NodeKind::VTwist, mask); break;
      case NodeKind::Mirror: w = -of(n->left.get(), mask); break;
      case NodeKind::Sum:
      case NodeKind::Star: {
        const bool horizontal = n->kind == NodeKind::Sum;
        const auto [ma, mb] = split(horizontal, table_.of(n->left.get()).pairing,
                                    table_.of(n->right.get()).pairing, mask);
        w = of(n->left.get(), ma) + of(n->right.get(), mb);
        break;
      }
    }
    memo_.emplace(key, w);
    return w;
  }

  // Sign of the crossing 1 (positive) or -1 under an endpoint orientation.
  static int generator_sign(bool positive, int mask) {
    const auto& slots = positive ? detail::kPositiveSlots : detail::kNegativeSlots;
    auto enters = [&](int slot) { return ((mask >> slots[slot]) & 1) != 0; };
    return detail::crossing_sign(enters(0) ? 0 : 2, enters(1) ? 1 : 3);
  }

  // Orientation masks of the two summands given that of the sum.
  static std::pair<int, int> split(bool horizontal, Pairing pa, Pairing pb, int mask) {
    // Points 0..3 are the left/top summand's endpoints, 4..7 the other's.
    std::array<int, 8> in{};
    in.fill(-1);
    std::array<int, 8> glue{};
    glue.fill(-1);
    std::array<std::pair<int, int>, 4> outer{};  // (point, outer endpoint)
    if (horizontal) {
      glue[NE] = 4 + NW, glue[4 + NW] = NE, glue[SE] = 4 + SW, glue[4 + SW] = SE;
      outer = {{{NW, NW}, {4 + NE, NE}, {SW, SW}, {4 + SE, SE}}};
    } else {
      glue[SW] = 4 + NW, glue[4 + NW] = SW, glue[SE] = 4 + NE, glue[4 + NE] = SE;
      outer = {{{NW, NW}, {NE, NE}, {4 + SW, SW}, {4 + SE, SE}}};
    }
    for (const auto& [pt, e] : outer) in[pt] = (mask >> e) & 1;
    auto inner = [&](int pt) {
      return pt < 4 ? detail::pairing_partner(pa, pt) : 4 + detail::pairing_partner(pb, pt - 4);
    };
    auto propagate = [&] {
      bool changed = true;
      while (changed) {
        changed = false;
        for (int pt = 0; pt < 8; ++pt) {
          if (in[pt] == -1) continue;
          const int q = inner(pt);
          if (in[q] == -1) in[q] = 1 - in[pt], changed = true;
          if (glue[pt] >= 0 && in[glue[pt]] == -1) in[glue[pt]] = 1 - in[pt], changed = true;
        }
      }
    };
    propagate();
    for (int pt = 0; pt < 4; ++pt) {
      if (in[pt] == -1 && glue[pt] >= 0) {
        in[pt] = 0;  // flows out of the first summand
        propagate();
      }
    }
    int ma = 0;
    int mb = 0;
    for (int e = 0; e < 4; ++e) {
      if (in[e] == 1) ma |= 1 << e;
      if (in[4 + e] == 1) mb |= 1 << e;
    }
    return {ma, mb};
  }

 private:
  std::int64_t twist(std::int64_t k, bool vertical, int mask) {
    const bool positive = k > 0;
    std::int64_t len = positive ? k : -k;
    std::int64_t w = 0;
    const Pairing unit = Pairing::Cross;
    while (len > 1) {
      const Pairing rest = detail::twist_connectivity(len - 1, vertical).pairing;
      const auto [mrest, munit] = split(!vertical, rest, unit, mask);
      w += generator_sign(positive, munit);
      mask = mrest;
      --len;
    }
    return w + generator_sign(positive, mask);
  }

  struct KeyHash {
    std::size_t operator()(const std::pair<const ExprNode*, int>& k) const {
      return std::hash<const void*>()(k.first) * 31 + static_cast<std::size_t>(k.second);
    }
  };

  detail::ConnectivityTable table_;
  std::unordered_map<std::pair<const ExprNode*, int>, std::int64_t, KeyHash> memo_;
};

// ---------------------------------------------------------------------------
// State sums

struct StateSumOptions {
  std::size_t cap = 24;     // maximum number of crossings
  unsigned threads = 0;     // 0: hardware concurrency
};

namespace detail {

struct StateHistogram {
  std::size_t loops_dim = 0;
  std::vector<std::uint64_t> counts;  // [a_smoothings][loops][type]

  std::uint64_t& at(std::size_t a, std::size_t loops, int type) {
    return counts[(a * loops_dim + loops) * 2 + type];
  }
};

inline void check_cap(const Diagram& d, const StateSumOptions& opt) {
  if (d.crossing_count() > opt.cap)
    throw ResourceError(std::to_string(d.crossing_count()) + " crossings exceeds cap " +
                        std::to_string(opt.cap));
}

// Enumerates all 2^n smoothings. Bit i of the state selects the t^-1
// smoothing at crossing i. For tangles, type 0 means the surviving arcs join
// NW-NE and type 1 means NW-SW; loops excludes the two open arcs.
inline StateHistogram enumerate_states(const Diagram& d, const StateSumOptions& opt) {
  check_cap(d, opt);
  const std::size_t n = d.crossing_count();
  const std::size_t points = d.point_count();
  std::vector<std::int32_t> arc_of(points, -1);
  std::int32_t arcs = 0;
  for (std::size_t p = 0; p < points; ++p) {
    const auto q = static_cast<std::size_t>(d.partner(static_cast<std::int32_t>(p)));
    if (arc_of[p] < 0) arc_of[p] = arc_of[q] = arcs++;
  }
  std::vector<std::array<std::int32_t, 4>> slot_arcs(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int s = 0; s < 4; ++s) slot_arcs[i][s] = arc_of[4 * i + s];
  std::array<std::int32_t, 4> boundary_arc{};
  if (d.is_tangle())
    for (int e = 0; e < 4; ++e) boundary_arc[e] = arc_of[d.boundary(e)];

  StateHistogram total;
  total.loops_dim = static_cast<std::size_t>(arcs) + 1;
  total.counts.assign((n + 1) * total.loops_dim * 2, 0);
  const std::uint64_t states = std::uint64_t{1} << n;

  auto work = [&](std::uint64_t begin, std::uint64_t end, StateHistogram& hist) {
    UnionFind uf(static_cast<std::size_t>(arcs));
    for (std::uint64_t state = begin; state < end; ++state) {
      uf.reset(static_cast<std::size_t>(arcs));
      std::int64_t comps = arcs;
      std::size_t b_count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = slot_arcs[i];
        if ((state >> i) & 1U) {
          ++b_count;
          comps -= uf.unite(a[0], a[3]);
          comps -= uf.unite(a[1], a[2]);
        } else {
          comps -= uf.unite(a[0], a[1]);
          comps -= uf.unite(a[2], a[3]);
        }
      }
      int type = 0;
      if (d.is_tangle()) {
        const std::int32_t nw = uf.find(boundary_arc[NW]);
        if (nw == uf.find(boundary_arc[NE])) {
          type = 0;
        } else if (nw == uf.find(boundary_arc[SW])) {
          type = 1;
        } else {
          throw DomainError("state sum: smoothing joins NW to SE; diagram is not planar");
        }
        comps -= 2;
      }
      ++hist.at(n - b_count, static_cast<std::size_t>(comps), type);
    }
  };

  unsigned threads = opt.threads ? opt.threads : std::max(1U, std::thread::hardware_concurrency());
  if (n < 14) threads = 1;
  if (threads == 1) {
    work(0, states, total);
    return total;
  }
  std::vector<StateHistogram> partial(threads, total);
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) {
    const std::uint64_t lo = states * k / threads;
    const std::uint64_t hi = states * (k + 1) / threads;
    pool.emplace_back([&, lo, hi, k] {
      try {
        work(lo, hi, partial[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  for (const auto& h : partial)
    for (std::size_t i = 0; i < total.counts.size(); ++i) total.counts[i] += h.counts[i];
  return total;
}

inline LaurentPoly accumulate(StateHistogram& hist, std::size_t n, int type,
                              std::int64_t loop_shift) {
  const LaurentPoly delta = LaurentPoly::delta();
  std::vector<LaurentPoly> delta_pow;
  auto dpow = [&](std::size_t k) -> const LaurentPoly& {
    while (delta_pow.size() <= k)
      delta_pow.push_back(delta_pow.empty() ? LaurentPoly::one() : delta_pow.back() * delta);
    return delta_pow[k];
  };
  std::map<std::size_t, LaurentPoly> by_loops;
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t l = 0; l < hist.loops_dim; ++l) {
      const std::uint64_t c = hist.at(a, l, type);
      if (c == 0) continue;
      Integer coeff;
      mpz_import(coeff.get_mpz_t(), 1, 1, sizeof(c), 0, 0, &c);
      const auto e = static_cast<Exponent>(2 * a) - static_cast<Exponent>(n);
      by_loops[l] += LaurentPoly::monomial(coeff, e);
    }
  }
  LaurentPoly out;
  for (auto& [l, p] : by_loops) {
    const std::int64_t k = static_cast<std::int64_t>(l) + loop_shift;
    if (k < 0) throw DomainError("state sum: diagram has no components");
    out += p * dpow(static_cast<std::size_t>(k));
  }
  return out;
}

}  // namespace detail

// Kauffman bracket of a closed diagram by enumerating all smoothings:
// sum of t^(#A - #B) * delta^(circles - 1).
inline LaurentPoly state_sum_bracket(const LinkDiagram& d, const StateSumOptions& opt = {}) {
  if (d.is_tangle()) throw DomainError("state_sum_bracket: diagram has open ends");
  if (d.crossing_count() == 0 && d.free_loops() == 0)
    throw DomainError("state sum: diagram has no components");
  auto hist = detail::enumerate_states(d, opt);
  return detail::accumulate(hist, d.crossing_count(), 0,
                            static_cast<std::int64_t>(d.free_loops()) - 1);
}

// Bracket pair of a tangle diagram by enumerating all smoothings.
inline BracketPair state_sum_pair(const TangleDiagram& d, const StateSumOptions& opt = {}) {
  if (!d.is_tangle()) throw DomainError("state_sum_pair: diagram has no boundary");
  auto hist = detail::enumerate_states(d, opt);
  const auto shift = static_cast<std::int64_t>(d.free_loops());
  return {detail::accumulate(hist, d.crossing_count(), 0, shift),
          detail::accumulate(hist, d.crossing_count(), 1, shift)};
}

}  // namespace kbpair
