#pragma once

// Static divide-and-conquer convex hull: sort by y once, then halve the
// sorted range recursively and join halves with the conquer step.

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "dynhull/chain.hpp"
#include "dynhull/fork_join.hpp"
#include "dynhull/geometry.hpp"

namespace dynhull {

struct StaticHullConfig {
  /// Subproblems with more points than this are forked as tasks.
  std::size_t cutoff = 2000;
  /// Worker count, including the calling thread.
  unsigned parallelism = 1;

  void validate() const {
    if (cutoff < 2) throw GeometryError("StaticHullConfig: cutoff must be at least 2");
    if (parallelism < 1) throw GeometryError("StaticHullConfig: parallelism must be at least 1");
  }
};

namespace detail {

inline bool y_less(const Point& a, const Point& b) { return a.y < b.y; }

inline std::vector<Point> checked_copy(std::span<const Point> pts) {
  std::vector<Point> s(pts.begin(), pts.end());
  for (const auto& p : s) require_finite(p);
  return s;
}

inline void require_distinct_y(std::span<const Point> sorted) {
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i].y == sorted[i + 1].y)
      throw GeneralPositionError("points share a horizontal line: " + to_string(sorted[i]) + ' ' +
                                 to_string(sorted[i + 1]));
}

inline Hull solve_sorted(std::span<const Point> s) {
  if (s.size() == 1) return Hull::of_point(s[0]);
  if (s.size() == 2) return Hull::of_pair(s[0], s[1]);
  const std::size_t mid = s.size() / 2;
  return conquer(solve_sorted(s.subspan(mid)), solve_sorted(s.first(mid)));
}

inline Hull solve_sorted_parallel(ForkJoinPool& pool, std::span<const Point> s, std::size_t cutoff) {
  if (s.size() <= cutoff) return solve_sorted(s);
  const std::size_t mid = s.size() / 2;
  Hull top, bottom;
  pool.fork_join([&] { top = solve_sorted_parallel(pool, s.subspan(mid), cutoff); },
                 [&] { bottom = solve_sorted_parallel(pool, s.first(mid), cutoff); });
  return conquer(top, bottom);
}

inline void parallel_sort_y(ForkJoinPool& pool, std::span<Point> s, std::size_t grain) {
  if (s.size() <= grain) {
    std::sort(s.begin(), s.end(), y_less);
    return;
  }
  const std::size_t mid = s.size() / 2;
  pool.fork_join([&] { parallel_sort_y(pool, s.first(mid), grain); },
                 [&] { parallel_sort_y(pool, s.subspan(mid), grain); });
  std::inplace_merge(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(mid), s.end(), y_less);
}

}  // namespace detail

inline Hull static_hull_sequential(std::span<const Point> pts) {
  if (pts.empty()) return {};
  auto s = detail::checked_copy(pts);
  std::sort(s.begin(), s.end(), detail::y_less);
  detail::require_distinct_y(s);
  return detail::solve_sorted(s);
}

/// Same result as static_hull_sequential, vertex for vertex: the recursion
/// tree depends only on the input size.
inline Hull static_hull_parallel(std::span<const Point> pts, ForkJoinPool& pool, std::size_t cutoff = 2000) {
  StaticHullConfig{cutoff, pool.parallelism()}.validate();
  if (pts.empty()) return {};
  auto s = detail::checked_copy(pts);
  detail::parallel_sort_y(pool, s, std::max<std::size_t>(cutoff, 1u << 15));
  detail::require_distinct_y(s);
  return detail::solve_sorted_parallel(pool, s, cutoff);
}

inline Hull static_hull_parallel(std::span<const Point> pts, const StaticHullConfig& config) {
  config.validate();
  ForkJoinPool pool(config.parallelism);
  return static_hull_parallel(pts, pool, config.cutoff);
}

}  // namespace dynhull
