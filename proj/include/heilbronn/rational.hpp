#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heilbronn/geometry.hpp"

namespace heilbronn {

using Rational = mpq_class;

/// Parses "p/q", an integer, or a finite decimal such as "0.0016" exactly.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Points with a common denominator: point i is (num[i][0]/den, num[i][1]/den).
struct LatticeShadow {
  std::int64_t denominator = 1;
  std::vector<std::array<std::int64_t, 2>> numerators;

  Point point(std::size_t i) const {
    const double d = static_cast<double>(denominator);
    return {static_cast<double>(numerators[i][0]) / d, static_cast<double>(numerators[i][1]) / d};
  }
};

/// Recovers exact rational coordinates whose denominators do not exceed
/// max_denominator (continued fractions, 1e-12 agreement). Returns nullopt if
/// any coordinate has no such representation or the common denominator
/// overflows 2^31.
std::optional<LatticeShadow> rationalize(std::span<const Point> points, std::int64_t max_denominator);

}  // namespace heilbronn
