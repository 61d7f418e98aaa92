#include "heilbronn/rational.hpp"

#include <cmath>
#include <numeric>

#include "heilbronn/error.hpp"

namespace heilbronn {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw DomainError(ErrorKind::Parse, "empty rational");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      Rational q(mpz_class(text.substr(0, slash), 10), mpz_class(text.substr(slash + 1), 10));
      if (q.get_den() == 0) throw DomainError(ErrorKind::Parse, "zero denominator in " + text);
      q.canonicalize();
      return q;
    }
    std::string digits = text;
    bool negative = false;
    if (digits[0] == '-' || digits[0] == '+') {
      negative = digits[0] == '-';
      digits.erase(0, 1);
    }
    const auto dot = digits.find('.');
    mpz_class den = 1;
    if (dot != std::string::npos) {
      const std::size_t frac = digits.size() - dot - 1;
      digits.erase(dot, 1);
      for (std::size_t i = 0; i < frac; ++i) den *= 10;
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw DomainError(ErrorKind::Parse, "not a rational literal: " + text);
    Rational q(mpz_class(digits, 10), den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw DomainError(ErrorKind::Parse, "not a rational literal: " + text);
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

std::optional<std::pair<std::int64_t, std::int64_t>> best_fraction(double x, std::int64_t max_den) {
  // Convergents of the continued fraction of x.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (a > 9e15) break;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - x) <= 1e-12) return std::make_pair(p1, q1);
    const double frac = r - a;
    if (frac <= 0.0) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

}  // namespace

std::optional<LatticeShadow> rationalize(std::span<const Point> points, std::int64_t max_denominator) {
  std::vector<std::array<std::pair<std::int64_t, std::int64_t>, 2>> fr;
  fr.reserve(points.size());
  std::int64_t den = 1;
  for (const Point& p : points) {
    const auto fx = best_fraction(p.x, max_denominator);
    const auto fy = best_fraction(p.y, max_denominator);
    if (!fx || !fy) return std::nullopt;
    fr.push_back({*fx, *fy});
    for (const auto& f : {*fx, *fy}) {
      den = std::lcm(den, f.second);
      if (den > (std::int64_t{1} << 31)) return std::nullopt;
    }
  }
  LatticeShadow shadow;
  shadow.denominator = den;
  shadow.numerators.reserve(fr.size());
  for (const auto& f : fr) {
    shadow.numerators.push_back({f[0].first * (den / f[0].second), f[1].first * (den / f[1].second)});
  }
  return shadow;
}

}  // namespace heilbronn
