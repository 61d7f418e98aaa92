#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "heilbronn/configs.hpp"

namespace heilbronn {

struct TriangleWitness {
  std::array<std::size_t, 3> indices{};  // i < j < k
  double area = 0.0;
  /// Exact area, present when the search ran in exact-rational mode.
  std::optional<Rational> exact_area;
};

/// Area of the triangle (P[i], P[j], P[k]) with indices sorted ascending, the
/// evaluation order shared by every search so values tie bit-for-bit.
double indexed_area(const PointSet& points, std::size_t i, std::size_t j, std::size_t k);

/// Exhaustive minimum over all triples; ties broken lexicographically.
/// exact = true requires an exact shadow (NotRational otherwise).
TriangleWitness min_triangle_brute(const PointSet& points, bool exact = false);

/// Same minimum value as min_triangle_brute, found by searching, for every
/// pair, only the thin rectangle around the segment that can host a third
/// vertex beating the incumbent.
TriangleWitness min_triangle_fast(const PointSet& points);

struct StripViolation {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t third = 0;
};

/// Pairs whose strip of width 4*delta/d(pair) contains a third point.
std::vector<StripViolation> verify_empty_strips(const PointSet& points, double delta);

/// Sum over pairs of (4 delta / d) * [x lies in the pair's strip of that width].
double weighted_strip_degree(const PointSet& points, double delta, Point x);

/// Sum over unordered pairs of d^-2.
double riesz_energy(std::span<const Point> points);
inline double riesz_energy(const PointSet& points) { return riesz_energy(points.points()); }

}  // namespace heilbronn
