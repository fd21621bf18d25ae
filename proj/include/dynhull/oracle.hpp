#pragma once

// Brute-force reference hulls. Nothing here shares code with the
// divide-and-conquer or tree paths; they only share the Chain/Hull types and
// the orientation predicate.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "dynhull/chain.hpp"
#include "dynhull/geometry.hpp"

namespace dynhull::oracle {

namespace detail {

inline std::vector<Point> sorted_by_y(std::span<const Point> pts) {
  std::vector<Point> s(pts.begin(), pts.end());
  for (const auto& p : s) require_finite(p);
  std::sort(s.begin(), s.end(), [](const Point& a, const Point& b) { return a.y < b.y; });
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i].y == s[i + 1].y)
      throw GeneralPositionError("points share a horizontal line: " + to_string(s[i]) + ' ' +
                                 to_string(s[i + 1]));
  return s;
}

// Splits a clockwise polygon starting at its bottom-most vertex into chains.
inline Hull chains_of_polygon(const std::vector<Point>& poly) {
  if (poly.empty()) return {};
  if (poly.size() == 1) return Hull::of_point(poly[0]);
  std::size_t top = 0;
  for (std::size_t i = 1; i < poly.size(); ++i)
    if (poly[i].y > poly[top].y) top = i;
  std::vector<Point> left(poly.begin(), poly.begin() + static_cast<std::ptrdiff_t>(top) + 1);
  std::vector<Point> right(poly.begin() + static_cast<std::ptrdiff_t>(top), poly.end());
  right.push_back(poly[0]);
  return {Chain(Side::LeftChain, std::move(left)), Chain(Side::RightChain, std::move(right))};
}

}  // namespace detail

/// Andrew's monotone chain on y. Throws GeneralPositionError on shared y or
/// on a colinear triple met during the scan.
inline Hull hull(std::span<const Point> pts) {
  const auto s = detail::sorted_by_y(pts);
  if (s.empty()) return {};
  std::vector<Point> left, right;
  for (const auto& p : s) {
    while (left.size() >= 2) {
      const auto o = orientation(left[left.size() - 2], left.back(), p);
      if (o == Orientation::Collinear)
        throw GeneralPositionError("colinear triple: " + to_string(left[left.size() - 2]) + ' ' +
                                   to_string(left.back()) + ' ' + to_string(p));
      if (o == Orientation::Right) break;
      left.pop_back();
    }
    left.push_back(p);
  }
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    while (right.size() >= 2) {
      const auto o = orientation(right[right.size() - 2], right.back(), *it);
      if (o == Orientation::Collinear)
        throw GeneralPositionError("colinear triple: " + to_string(right[right.size() - 2]) + ' ' +
                                   to_string(right.back()) + ' ' + to_string(*it));
      if (o == Orientation::Right) break;
      right.pop_back();
    }
    right.push_back(*it);
  }
  return {Chain(Side::LeftChain, std::move(left)), Chain(Side::RightChain, std::move(right))};
}

/// O(n^3) hull: a directed pair (a, b) is a clockwise hull edge iff every
/// other point lies strictly to its right.
inline Hull hull_brute_force(std::span<const Point> pts) {
  const auto s = detail::sorted_by_y(pts);
  const std::size_t n = s.size();
  if (n <= 1) return n == 0 ? Hull{} : Hull::of_point(s[0]);
  if (n == 2) return Hull::of_pair(s[0], s[1]);
  std::vector<std::size_t> next(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      bool edge = true;
      for (std::size_t c = 0; c < n && edge; ++c) {
        if (c == a || c == b) continue;
        const auto o = orientation(s[a], s[b], s[c]);
        if (o == Orientation::Collinear)
          throw GeneralPositionError("colinear triple: " + to_string(s[a]) + ' ' + to_string(s[b]) +
                                     ' ' + to_string(s[c]));
        edge = o == Orientation::Right;
      }
      if (edge) next[a] = b;
    }
  std::vector<Point> poly;
  std::size_t cur = 0;  // bottom-most point is always a hull vertex
  do {
    poly.push_back(s[cur]);
    cur = next[cur];
  } while (cur != 0 && cur < n && poly.size() <= n);
  return detail::chains_of_polygon(poly);
}

/// Bridge between y-separated point sets on the given side, by exhaustive
/// pair testing: the unique pair (q, p) such that no point of the union lies
/// strictly outside the upward line q->p.
inline Bridge bridge(std::span<const Point> top, std::span<const Point> bottom, Side side) {
  if (top.empty() || bottom.empty()) throw GeometryError("oracle::bridge: empty point set");
  double top_min = top[0].y, bot_max = bottom[0].y;
  for (const auto& p : top) top_min = std::min(top_min, p.y);
  for (const auto& q : bottom) bot_max = std::max(bot_max, q.y);
  if (!(top_min > bot_max)) throw GeometryError("oracle::bridge: sets are not y-separated");
  const Orientation outer = outer_side(side);
  for (const auto& p : top)
    for (const auto& q : bottom) {
      bool ok = true;
      for (const auto& r : top)
        if (!(r == p) && orientation(q, p, r) == outer) { ok = false; break; }
      for (const auto& r : bottom) {
        if (!ok) break;
        if (!(r == q) && orientation(q, p, r) == outer) ok = false;
      }
      if (ok) return Bridge{p, q, 0, 0, 0};
    }
  throw GeometryError("oracle::bridge: no bridge found (input not in general position?)");
}

/// Point-in-hull by testing every polygon edge; boundary counts as inside.
inline bool contains(const Hull& h, const Point& p) {
  const auto poly = h.polygon();
  if (poly.empty()) return false;
  if (poly.size() == 1) return poly[0] == p;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    if (orientation(a, b, p) == Orientation::Left) return false;
  }
  if (poly.size() == 2) {  // degenerate segment: also bound by the endpoints
    const double lo = std::min(poly[0].y, poly[1].y), hi = std::max(poly[0].y, poly[1].y);
    return p.y >= lo && p.y <= hi;
  }
  return true;
}

}  // namespace dynhull::oracle
