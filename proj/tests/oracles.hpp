#pragma once

// Slow, obviously-correct reference computations. Nothing here calls into the
// accelerated code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "heilbronn/configs.hpp"
#include "heilbronn/geometry.hpp"
#include "heilbronn/incidence.hpp"

namespace oracle {

using heilbronn::Line;
using heilbronn::Point;

inline double shoelace(Point a, Point b, Point c) {
  return 0.5 * std::abs(a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
}

// a x + b y + c = 0 built from the anchor and angle.
inline double normal_form_distance(Point p, const Line& l) {
  const double a = std::sin(l.theta), b = -std::cos(l.theta);
  const double c = -(a * l.anchor.x + b * l.anchor.y);
  return std::abs(a * p.x + b * p.y + c) / std::sqrt(a * a + b * b);
}

inline double brute_min_area(const std::vector<Point>& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      for (std::size_t k = j + 1; k < p.size(); ++k) best = std::min(best, shoelace(p[i], p[j], p[k]));
  return best;
}

inline std::vector<Point> copy(const heilbronn::PointSet& s) { return {s.points().begin(), s.points().end()}; }

// Twice the area of a lattice triangle, exact.
inline std::int64_t lattice_twice_area(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by,
                                       std::int64_t cx, std::int64_t cy) {
  const std::int64_t v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return v < 0 ? -v : v;
}

inline std::size_t count_in(const std::vector<Point>& p, double x0, double y0, double w) {
  std::size_t c = 0;
  for (const auto& q : p)
    if (q.x >= x0 && q.x < x0 + w && q.y >= y0 && q.y < y0 + w) ++c;
  return c;
}

// Max over half-open w x w squares. An optimal square can be slid until its
// left edge hits a point and its bottom edge hits a point of that column, so
// anchors (x_i, y_j) with x_j in [x_i, x_i + w) are exhaustive.
inline std::size_t anchored_window_max(const std::vector<Point>& p, double w) {
  std::size_t best = 0;
  for (const auto& a : p) {
    std::vector<Point> column;
    for (const auto& q : p)
      if (q.x >= a.x && q.x < a.x + w) column.push_back(q);
    for (const auto& b : column) best = std::max(best, count_in(column, a.x, b.y, w));
  }
  return best;
}

// Same anchors, but each column is sorted once and scanned with two pointers.
inline std::size_t sweep_window_max(const std::vector<Point>& p, double w) {
  std::size_t best = 0;
  std::vector<double> ys;
  for (const auto& a : p) {
    ys.clear();
    for (const auto& q : p)
      if (q.x >= a.x && q.x < a.x + w) ys.push_back(q.y);
    std::sort(ys.begin(), ys.end());
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < ys.size(); ++lo) {
      hi = std::max(hi, lo);
      while (hi < ys.size() && ys[hi] < ys[lo] + w) ++hi;
      best = std::max(best, hi - lo);
    }
  }
  return best;
}

// Members of a region in its own unit frame, recomputed from the rectangle.
inline std::vector<Point> region_frame(const heilbronn::PointSet& P, const std::vector<std::size_t>& idx,
                                       const heilbronn::Rectangle& r) {
  const Point e1{std::cos(r.angle), std::sin(r.angle)}, e2{-std::sin(r.angle), std::cos(r.angle)};
  std::vector<Point> out;
  for (std::size_t i : idx) {
    const double dx = P[i].x - r.origin.x, dy = P[i].y - r.origin.y;
    out.push_back({std::clamp((dx * e1.x + dy * e1.y) / r.length, 0.0, std::nextafter(1.0, 0.0)),
                   std::clamp((dx * e2.x + dy * e2.y) / r.width, 0.0, std::nextafter(1.0, 0.0))});
  }
  return out;
}

inline std::size_t hard_count(double v, const std::vector<Point>& p, const std::vector<Line>& lines) {
  std::size_t c = 0;
  for (const auto& l : lines)
    for (const auto& q : p)
      if (normal_form_distance(q, l) < v / 2) ++c;
  return c;
}

// Exhaustive scan of every member of a tube family.
inline std::size_t family_max_lines(const std::vector<Line>& lines, const heilbronn::TubeFamily& f) {
  std::size_t best = 0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    const auto t = f[m];
    std::size_t c = 0;
    for (const auto& l : lines)
      if (heilbronn::line_in_tube(l, t)) ++c;
    best = std::max(best, c);
  }
  return best;
}

inline std::size_t family_max_points(const std::vector<Point>& p, const heilbronn::TubeFamily& f) {
  std::size_t best = 0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    const auto t = f[m];
    std::size_t c = 0;
    for (const auto& q : p)
      if (normal_form_distance(q, t.line) < t.width / 2) ++c;
    best = std::max(best, c);
  }
  return best;
}

// max over intervals [k len/2, k len/2 + len) mod pi, len = delta 2^m < pi,
// plus the whole circle, of count / (N len^sigma).
inline double dyadic_k_hat(const std::vector<double>& thetas, double sigma, double delta, double max_length) {
  const double pi = 3.14159265358979323846;
  const double n = static_cast<double>(thetas.size());
  double best = 0.0;
  for (double len = delta; len < pi && len <= max_length; len *= 2) {
    const double stride = len / 2;
    const auto starts = static_cast<std::size_t>(std::ceil(pi / stride));
    for (std::size_t k = 0; k < starts; ++k) {
      const double a = static_cast<double>(k) * stride;
      std::size_t c = 0;
      for (double t : thetas) {
        double d = t - a;
        if (d < 0) d += pi;
        if (d < len) ++c;
      }
      best = std::max(best, static_cast<double>(c) / (n * std::pow(len, sigma)));
    }
  }
  if (max_length >= pi) best = std::max(best, 1.0 / std::pow(pi, sigma));
  return best;
}

}  // namespace oracle
