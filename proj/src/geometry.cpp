#include "heilbronn/geometry.hpp"

#include <algorithm>
#include <limits>

#include "heilbronn/error.hpp"

namespace heilbronn {

double normalize_angle(double theta) {
  theta = std::fmod(theta, kPi);
  if (theta < 0.0) theta += kPi;
  if (theta >= kPi) theta -= kPi;
  return theta;
}

Line make_line(Point anchor, double theta) { return Line{anchor, normalize_angle(theta), std::nullopt}; }

bool Strip::contains(Point p) const { return point_line_distance(p, line) < 0.5 * width; }

double triangle_area(Point a, Point b, Point c) { return 0.5 * std::abs(cross(b - a, c - a)); }

double point_line_distance(Point p, const Line& line) { return std::abs(dot(p - line.anchor, line.normal())); }

Line line_through(Point a, Point b) {
  if (a == b) throw DomainError(ErrorKind::DegeneratePair, "line_through needs two distinct points");
  const Point d = b - a;
  return make_line(a, std::atan2(d.y, d.x));
}

Line line_through(Point a, Point b, std::size_t ia, std::size_t ib) {
  Line l = line_through(a, b);
  l.provenance = std::make_pair(ia, ib);
  return l;
}

std::optional<std::array<Point, 2>> clip_to_unit_square(const Line& line) {
  // Liang-Barsky on the parametrisation anchor + t * direction.
  const Point d = line.direction();
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  auto slab = [&](double origin, double dir) {
    if (std::abs(dir) < 1e-300) return origin >= 0.0 && origin <= 1.0;
    double ta = (0.0 - origin) / dir;
    double tb = (1.0 - origin) / dir;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    return true;
  };
  if (!slab(line.anchor.x, d.x) || !slab(line.anchor.y, d.y)) return std::nullopt;
  if (t0 > t1) return std::nullopt;
  return std::array<Point, 2>{line.anchor + t0 * d, line.anchor + t1 * d};
}

bool line_misses_unit_square(const Line& line) { return !clip_to_unit_square(line).has_value(); }

bool line_in_tube(const Line& line, const Strip& tube) {
  const auto seg = clip_to_unit_square(line);
  if (!seg) return true;
  return tube.contains((*seg)[0]) && tube.contains((*seg)[1]);
}

std::vector<Point> clip_strip_to_unit_square(const Strip& strip) {
  // Sutherland-Hodgman: clip the unit square by the two half-planes of the strip.
  std::vector<Point> poly{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Point n = strip.line.normal();
  const double c = dot(strip.line.anchor, n);
  const double h = 0.5 * strip.width;
  auto clip = [&](double sign, double bound) {
    // keep sign * (n.p - c) <= bound
    std::vector<Point> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Point p = poly[i];
      const Point q = poly[(i + 1) % m];
      const double fp = sign * (dot(p, n) - c) - bound;
      const double fq = sign * (dot(q, n) - c) - bound;
      if (fp <= 0) out.push_back(p);
      if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
        const double t = fp / (fp - fq);
        out.push_back(p + t * (q - p));
      }
    }
    poly = std::move(out);
  };
  clip(1.0, h);
  clip(-1.0, h);
  return poly;
}

bool tube_in_tube(const Strip& inner, const Strip& outer, double tolerance) {
  const auto poly = clip_strip_to_unit_square(inner);
  const double h = 0.5 * outer.width + tolerance;
  return std::all_of(poly.begin(), poly.end(),
                     [&](Point p) { return point_line_distance(p, outer.line) < h; });
}

Point Rectangle::to_unit(Point p) const {
  const Point d = p - origin;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {(d.x * c + d.y * s) / length, (-d.x * s + d.y * c) / width};
}

Point Rectangle::from_unit(Point q) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const double u = q.x * length;
  const double v = q.y * width;
  return {origin.x + u * c - v * s, origin.y + u * s + v * c};
}

}  // namespace heilbronn
