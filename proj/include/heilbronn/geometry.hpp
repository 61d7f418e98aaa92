#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace heilbronn {

inline constexpr double kPi = 3.14159265358979323846;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(b - a); }

/// Folds any angle into [0, pi); lines are undirected.
double normalize_angle(double theta);

/// Infinite undirected line: anchor plus direction angle in [0, pi).
struct Line {
  Point anchor;
  double theta = 0.0;
  /// Indices of the two configuration points spanning the line, if any.
  std::optional<std::pair<std::size_t, std::size_t>> provenance;

  Point direction() const { return {std::cos(theta), std::sin(theta)}; }
  /// Unit normal (-sin, cos).
  Point normal() const { return {-std::sin(theta), std::cos(theta)}; }
};

Line make_line(Point anchor, double theta);

/// Open strip of points at distance < width/2 from the central line.
struct Strip {
  Line line;
  double width = 0.0;

  bool contains(Point p) const;
};

double triangle_area(Point a, Point b, Point c);

double point_line_distance(Point p, const Line& line);

/// Line through a and b; throws DegeneratePair when a == b exactly.
Line line_through(Point a, Point b);
Line line_through(Point a, Point b, std::size_t ia, std::size_t ib);

/// Intersection of the line with [0,1]^2 as a segment, or nullopt if it misses.
std::optional<std::array<Point, 2>> clip_to_unit_square(const Line& line);

bool line_misses_unit_square(const Line& line);

/// True iff line ∩ [0,1]^2 lies inside the strip. Lines missing the unit square
/// are vacuously contained (see line_misses_unit_square to detect that case).
bool line_in_tube(const Line& line, const Strip& tube);

/// Vertices of strip ∩ [0,1]^2 (convex, possibly empty).
std::vector<Point> clip_strip_to_unit_square(const Strip& strip);

/// True iff inner ∩ [0,1]^2 ⊆ outer, tested on the vertices of the clipped
/// inner polygon with closure slack `tolerance` on the outer half-width.
bool tube_in_tube(const Strip& inner, const Strip& outer, double tolerance = 0.0);

/// Axis-parallel half-open square [x0, x0+side) x [y0, y0+side).
struct Square {
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 0.0;

  bool contains(Point p) const {
    return p.x >= x0 && p.x < x0 + side && p.y >= y0 && p.y < y0 + side;
  }
  bool intersects(const Square& o) const {
    return x0 < o.x0 + o.side && o.x0 < x0 + side && y0 < o.y0 + o.side && o.y0 < y0 + side;
  }
};

/// Oriented half-open rectangle origin + s*length*e1 + t*width*e2 with s,t in
/// [0,1), e1 = (cos angle, sin angle), e2 = (-sin angle, cos angle).
struct Rectangle {
  Point origin;
  double angle = 0.0;
  double length = 0.0;  // side along e1 (the long side b)
  double width = 0.0;   // side along e2 (the short side a)

  /// Coordinates relative to the rectangle, mapping it onto [0,1)^2.
  Point to_unit(Point p) const;
  Point from_unit(Point q) const;
  bool contains(Point p) const {
    const Point q = to_unit(p);
    return q.x >= 0.0 && q.x < 1.0 && q.y >= 0.0 && q.y < 1.0;
  }
  static Rectangle from_square(const Square& sq) { return {{sq.x0, sq.y0}, 0.0, sq.side, sq.side}; }
};

}  // namespace heilbronn
