#pragma once

// Planar points, the orientation predicate and general-position checks.

#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynhull {

/// Base class for every error raised by the library on bad input.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when input violates general position: three colinear points or
/// two points sharing a y-coordinate.
class GeneralPositionError : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

/// A planar point. The y-coordinate is the search key of every structure in
/// this library.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << p.x << ',' << p.y << ')';
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Point& p) { return os << to_string(p); }

/// Throws GeometryError if `p` has a NaN or infinite coordinate.
inline void require_finite(const Point& p) {
  if (!is_finite(p)) throw GeometryError("non-finite coordinate in point " + to_string(p));
}

enum class Orientation { Left, Right, Collinear };

inline const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::Left: return "Left";
    case Orientation::Right: return "Right";
    case Orientation::Collinear: return "Collinear";
  }
  return "?";
}

/// Signed area of the parallelogram spanned by (b - a) and (c - a).
inline double cross(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Side of the directed line a->b on which c lies.
inline Orientation orientation(const Point& a, const Point& b, const Point& c) {
  const double d = cross(a, b, c);
  if (d > 0) return Orientation::Left;
  if (d < 0) return Orientation::Right;
  return Orientation::Collinear;
}

inline Orientation opposite(Orientation o) {
  switch (o) {
    case Orientation::Left: return Orientation::Right;
    case Orientation::Right: return Orientation::Left;
    default: return o;
  }
}

/// First general-position violation found in a point set.
struct PositionViolation {
  enum class Kind { SharedY, Colinear } kind;
  std::vector<Point> points;  // the offending pair or triple

  std::string describe() const {
    std::string s = kind == Kind::SharedY ? "points share a horizontal line:" : "colinear triple:";
    for (const auto& p : points) s += ' ' + to_string(p);
    return s;
  }
};

/// Exhaustive check: O(n^2) for shared y, O(n^3) for colinear triples.
/// Intended for tests and small inputs. Returns the first violation, if any.
inline std::optional<PositionViolation> find_position_violation(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pts[i].y == pts[j].y)
        return PositionViolation{PositionViolation::Kind::SharedY, {pts[i], pts[j]}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (orientation(pts[i], pts[j], pts[k]) == Orientation::Collinear)
          return PositionViolation{PositionViolation::Kind::Colinear, {pts[i], pts[j], pts[k]}};
  return std::nullopt;
}

/// Throws GeneralPositionError describing the first violation.
inline void assert_general_position(std::span<const Point> pts) {
  for (const auto& p : pts) require_finite(p);
  if (auto v = find_position_violation(pts)) throw GeneralPositionError(v->describe());
}

// Text format: one point per line, "x y". Blank lines and lines starting
// with '#' are skipped.

inline std::vector<Point> read_points(std::istream& in) {
  std::vector<Point> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Point p;
    std::string rest;
    if (!(ls >> p.x >> p.y) || (ls >> rest))
      throw GeometryError("malformed point on line " + std::to_string(lineno) + ": '" + line + "'");
    require_finite(p);
    out.push_back(p);
  }
  return out;
}

inline void write_points(std::ostream& out, std::span<const Point> pts) {
  const auto old = out.precision(17);
  for (const auto& p : pts) out << p.x << ' ' << p.y << '\n';
  out.precision(old);
}

}  // namespace dynhull
