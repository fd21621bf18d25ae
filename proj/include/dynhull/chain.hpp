#pragma once

// Convex chains (one side of a hull), bridge finding and the conquer step
// of divide-and-conquer hull construction.
//
// A hull is stored as two chains, both in clockwise order:
//   left chain:  bottom-most vertex up to top-most vertex (increasing y)
//   right chain: top-most vertex down to bottom-most vertex (decreasing y)
// Both chains contain the top-most and bottom-most vertex. Consecutive
// triples of either chain turn Right.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dynhull/geometry.hpp"

namespace dynhull {

enum class Side { LeftChain, RightChain };

inline const char* to_string(Side s) { return s == Side::LeftChain ? "left" : "right"; }

/// Side of the upward directed line on which points outside the hull lie.
inline Orientation outer_side(Side s) {
  return s == Side::LeftChain ? Orientation::Left : Orientation::Right;
}

class Chain {
 public:
  Chain() = default;
  Chain(Side side, std::vector<Point> vertices) : side_(side), vertices_(std::move(vertices)) {}

  /// Builds a chain and throws GeometryError unless it is y-monotone in the
  /// side's direction and strictly convex.
  static Chain checked(Side side, std::vector<Point> vertices);

  Side side() const { return side_; }
  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }

  /// i-th vertex counted from the bottom.
  const Point& ascending(std::size_t i) const {
    return side_ == Side::LeftChain ? vertices_[i] : vertices_[vertices_.size() - 1 - i];
  }
  const Point& bottommost() const { return ascending(0); }
  const Point& topmost() const { return ascending(vertices_.size() - 1); }

  friend bool operator==(const Chain&, const Chain&) = default;

 private:
  Side side_ = Side::LeftChain;
  std::vector<Point> vertices_;
};

/// Returns a description of the first broken chain invariant, if any.
inline std::optional<std::string> chain_violation(const Chain& c) {
  const auto v = c.vertices();
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const bool ok = c.side() == Side::LeftChain ? v[i].y < v[i + 1].y : v[i].y > v[i + 1].y;
    if (!ok)
      return std::string(to_string(c.side())) + " chain not y-monotone at " + to_string(v[i]) +
             " -> " + to_string(v[i + 1]);
  }
  for (std::size_t i = 0; i + 2 < v.size(); ++i)
    if (orientation(v[i], v[i + 1], v[i + 2]) != Orientation::Right)
      return std::string(to_string(c.side())) + " chain not convex at " + to_string(v[i + 1]);
  return std::nullopt;
}

inline Chain Chain::checked(Side side, std::vector<Point> vertices) {
  for (const auto& p : vertices) require_finite(p);
  Chain c(side, std::move(vertices));
  if (auto why = chain_violation(c)) throw GeometryError(*why);
  return c;
}

/// Both chains of a convex hull.
struct Hull {
  Chain left{Side::LeftChain, {}};
  Chain right{Side::RightChain, {}};

  static Hull of_point(const Point& p) {
    return {Chain(Side::LeftChain, {p}), Chain(Side::RightChain, {p})};
  }
  /// Two-point base case; the points must have distinct y.
  static Hull of_pair(const Point& a, const Point& b) {
    const auto& lo = a.y < b.y ? a : b;
    const auto& hi = a.y < b.y ? b : a;
    return {Chain(Side::LeftChain, {lo, hi}), Chain(Side::RightChain, {hi, lo})};
  }

  bool empty() const { return left.empty() && right.empty(); }
  /// Number of distinct hull vertices.
  std::size_t vertex_count() const {
    if (left.empty()) return 0;
    if (left.size() == 1) return 1;
    return left.size() + right.size() - 2;
  }
  /// Closed polygon in clockwise order starting at the bottom-most vertex.
  std::vector<Point> polygon() const {
    std::vector<Point> out(left.vertices().begin(), left.vertices().end());
    if (right.size() > 2) out.insert(out.end(), right.vertices().begin() + 1, right.vertices().end() - 1);
    return out;
  }

  friend bool operator==(const Hull&, const Hull&) = default;
};

/// The two chains describe the same hull only if their extreme vertices agree.
inline bool endpoints_match(const Chain& left, const Chain& right) {
  if (left.empty() || right.empty()) return left.empty() && right.empty();
  return left.topmost() == right.topmost() && left.bottommost() == right.bottommost();
}

struct Bridge {
  Point p_star;                  // vertex on the top chain
  Point q_star;                  // vertex on the bottom chain
  std::size_t top_index = 0;     // stored index of p_star in the top chain
  std::size_t bottom_index = 0;  // stored index of q_star in the bottom chain
  std::size_t advances = 0;      // pointer advances performed by the walk
};

namespace detail {

inline std::size_t index_of(const Chain& c, const Point& v) {
  const auto vs = c.vertices();
  auto it = std::find(vs.begin(), vs.end(), v);
  if (it == vs.end())
    throw GeometryError("vertex " + to_string(v) + " is not on the " + to_string(c.side()) + " chain");
  return static_cast<std::size_t>(it - vs.begin());
}

inline std::size_t stored_index(const Chain& c, std::size_t ascending_index) {
  return c.side() == Side::LeftChain ? ascending_index : c.size() - 1 - ascending_index;
}

}  // namespace detail

/// True iff no chain neighbour of `v` lies strictly outside the line through
/// `v` and `other`, the line being directed from the lower of the two points
/// to the higher one.
inline bool is_tangent_at(const Chain& chain, const Point& v, const Point& other) {
  const std::size_t k = detail::index_of(chain, v);
  const Point& lo = other.y < v.y ? other : v;
  const Point& hi = other.y < v.y ? v : other;
  const Orientation outer = outer_side(chain.side());
  const auto vs = chain.vertices();
  if (k > 0 && orientation(lo, hi, vs[k - 1]) == outer) return false;
  if (k + 1 < vs.size() && orientation(lo, hi, vs[k + 1]) == outer) return false;
  return true;
}

/// Finds the common tangent of two y-separated chains of the same side.
///
/// p starts at the bottom of the top chain and only moves up; q starts at the
/// top of the bottom chain and only moves down. Each walks while its forward
/// neighbour is outside the current candidate line.
inline Bridge find_bridge(const Chain& top, const Chain& bottom) {
  if (top.side() != bottom.side()) throw GeometryError("find_bridge: chains have different sides");
  if (top.empty() || bottom.empty()) throw GeometryError("find_bridge: empty chain");
  if (!(top.bottommost().y > bottom.topmost().y))
    throw GeometryError("find_bridge: chains are not separated by a horizontal line (top min y " +
                        std::to_string(top.bottommost().y) + ", bottom max y " +
                        std::to_string(bottom.topmost().y) + ")");

  const Orientation outer = outer_side(top.side());
  const std::size_t nt = top.size();
  std::size_t i = 0;                  // ascending index into top
  std::size_t j = bottom.size() - 1;  // ascending index into bottom
  std::size_t advances = 0;
  bool moved = true;
  while (moved) {
    moved = false;
    while (i + 1 < nt &&
           orientation(bottom.ascending(j), top.ascending(i), top.ascending(i + 1)) == outer) {
      ++i;
      ++advances;
      moved = true;
    }
    while (j > 0 &&
           orientation(bottom.ascending(j), top.ascending(i), bottom.ascending(j - 1)) == outer) {
      --j;
      ++advances;
      moved = true;
    }
  }
  return Bridge{top.ascending(i), bottom.ascending(j), detail::stored_index(top, i),
                detail::stored_index(bottom, j), advances};
}

/// Splits at vertex `v`, which ends up in both parts.
inline std::pair<Chain, Chain> split_at(const Chain& chain, const Point& v) {
  const std::size_t k = detail::index_of(chain, v);
  const auto vs = chain.vertices();
  std::vector<Point> head(vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(k) + 1);
  std::vector<Point> tail(vs.begin() + static_cast<std::ptrdiff_t>(k), vs.end());
  // Left chains are stored bottom-up, right chains top-down.
  if (chain.side() == Side::LeftChain)
    return {Chain(chain.side(), std::move(tail)), Chain(chain.side(), std::move(head))};
  return {Chain(chain.side(), std::move(head)), Chain(chain.side(), std::move(tail))};
}

/// Joins an upper and a lower part of the same side into one chain, in the
/// side's stored order. The result is convex only when the parts meet at a
/// bridge.
inline Chain concat(const Chain& upper, const Chain& lower) {
  if (upper.side() != lower.side()) throw GeometryError("concat: chains have different sides");
  if (!upper.empty() && !lower.empty() && !(upper.bottommost().y > lower.topmost().y))
    throw GeometryError("concat: upper part does not lie strictly above lower part");
  const Chain& first = upper.side() == Side::LeftChain ? lower : upper;
  const Chain& second = upper.side() == Side::LeftChain ? upper : lower;
  std::vector<Point> out;
  out.reserve(first.size() + second.size());
  out.insert(out.end(), first.vertices().begin(), first.vertices().end());
  out.insert(out.end(), second.vertices().begin(), second.vertices().end());
  return Chain(upper.side(), std::move(out));
}

/// Chain of the union of two y-separated point sets, built from the chains of
/// each set. Equivalent to find_bridge + split_at + concat without the
/// intermediate copies.
inline Chain merge_chains(const Chain& top, const Chain& bottom) {
  const Bridge b = find_bridge(top, bottom);
  const auto tv = top.vertices();
  const auto bv = bottom.vertices();
  std::vector<Point> out;
  if (top.side() == Side::LeftChain) {
    out.reserve(b.bottom_index + 1 + tv.size() - b.top_index);
    out.insert(out.end(), bv.begin(), bv.begin() + static_cast<std::ptrdiff_t>(b.bottom_index) + 1);
    out.insert(out.end(), tv.begin() + static_cast<std::ptrdiff_t>(b.top_index), tv.end());
  } else {
    out.reserve(b.top_index + 1 + bv.size() - b.bottom_index);
    out.insert(out.end(), tv.begin(), tv.begin() + static_cast<std::ptrdiff_t>(b.top_index) + 1);
    out.insert(out.end(), bv.begin() + static_cast<std::ptrdiff_t>(b.bottom_index), bv.end());
  }
  return Chain(top.side(), std::move(out));
}

/// Conquer step: hull of the union of a top and a bottom point set.
inline Hull conquer(const Hull& top, const Hull& bottom) {
  return {merge_chains(top.left, bottom.left), merge_chains(top.right, bottom.right)};
}

/// Hull of points already sorted by increasing y, in linear time.
/// Colinear middle points are dropped.
inline Hull hull_of_y_sorted(std::span<const Point> pts) {
  Hull h;
  if (pts.empty()) return h;
  auto scan = [](auto first, auto last) {
    std::vector<Point> st;
    for (auto it = first; it != last; ++it) {
      while (st.size() >= 2 && orientation(st[st.size() - 2], st.back(), *it) != Orientation::Right)
        st.pop_back();
      st.push_back(*it);
    }
    return st;
  };
  h.left = Chain(Side::LeftChain, scan(pts.begin(), pts.end()));
  h.right = Chain(Side::RightChain, scan(pts.rbegin(), pts.rend()));
  return h;
}

/// Hull of the vertices of two possibly mismatched chains.
inline Hull convexify(const Chain& left, const Chain& right) {
  std::vector<Point> pts;
  pts.reserve(left.size() + right.size());
  for (std::size_t i = 0; i < left.size(); ++i) pts.push_back(left.ascending(i));
  std::vector<Point> rs;
  rs.reserve(right.size());
  for (std::size_t i = 0; i < right.size(); ++i) rs.push_back(right.ascending(i));
  const auto mid = static_cast<std::ptrdiff_t>(pts.size());
  pts.insert(pts.end(), rs.begin(), rs.end());
  std::inplace_merge(pts.begin(), pts.begin() + mid, pts.end(),
                     [](const Point& a, const Point& b) { return a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return hull_of_y_sorted(pts);
}

namespace detail {

// p is on the inner side of (or on) the chain edge spanning p.y.
inline bool inside_chain(const Chain& c, const Point& p) {
  const std::size_t n = c.size();
  if (n == 0) return false;
  if (n == 1) return c[0] == p;
  if (p.y < c.bottommost().y || p.y > c.topmost().y) return false;
  std::size_t lo = 0, hi = n - 1;  // ascending indices; find edge [k-1, k] with k = lower_bound
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (c.ascending(mid).y < p.y) lo = mid + 1;
    else hi = mid;
  }
  const std::size_t k = std::max<std::size_t>(lo, 1);
  return orientation(c.ascending(k - 1), c.ascending(k), p) != outer_side(c.side());
}

}  // namespace detail

/// Point-in-convex-polygon test; boundary points count as inside.
inline bool hull_contains(const Chain& left, const Chain& right, const Point& p) {
  return detail::inside_chain(left, p) && detail::inside_chain(right, p);
}

inline bool hull_contains(const Hull& h, const Point& p) { return hull_contains(h.left, h.right, p); }

}  // namespace dynhull
