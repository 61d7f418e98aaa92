#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heilbronn/rational.hpp"

namespace heilbronn {

/// u0 = n^-alpha, u1 = n^-beta; ell = gamma0 - 1/s2.
template <typename T>
struct BasicExponentParams {
  T gamma0;
  T s2;
  T alpha;
  T beta;

  T ell() const { return gamma0 - T(1) / s2; }
};

using ExponentParams = BasicExponentParams<double>;
using ExactExponentParams = BasicExponentParams<Rational>;

/// The (a, b) parameterization around gamma0 = 8/7: alpha = 3/7 + a, beta = 4/7 - b.
ExponentParams params_from_ab(double gamma0, double s2, double a, double b);
ExactExponentParams params_from_ab(const Rational& gamma0, const Rational& s2, const Rational& a, const Rational& b);

/// The five lower bounds on gamma1, one per case.
template <typename T>
std::array<T, 5> case_formulas(const BasicExponentParams<T>& p) {
  const T ell = p.ell();
  const T rest = T(1) - p.alpha - p.beta;
  return {(T(3) + p.alpha) / T(3),
          T(2) - T(2) * p.alpha + ell * rest,
          T(2) * p.beta + (T(2) / p.s2) * rest,
          (T(5) - T(3) * p.alpha + T(4) * p.beta + T(2) * ell * rest) / T(5),
          (T(7) - T(4) * p.alpha + T(3) * p.beta + T(3) * ell * rest) / T(6)};
}

/// Named feasibility constraints (the post-hoc beta <= gamma1/2 excluded).
std::vector<std::pair<std::string, bool>> feasibility(const ExponentParams& p);
std::vector<std::pair<std::string, bool>> feasibility(const ExactExponentParams& p);

/// Throws InfeasibleParams unless every constraint holds.
std::array<double, 5> case_bounds(const ExponentParams& p);
std::array<Rational, 5> case_bounds(const ExactExponentParams& p);

struct ExponentReport {
  ExponentParams params;
  std::array<double, 5> bounds{};
  double guaranteed = 0.0;
  double margin = 0.0;  // guaranteed - 8/7
  std::vector<std::pair<std::string, bool>> feasibility;
  /// Case indices (1-based) attaining the minimum within 1e-9.
  std::vector<int> active_cases;
  /// Constraints holding with equality within 1e-9.
  std::vector<std::string> tight_constraints;

  std::optional<ExactExponentParams> exact_params;
  std::optional<std::array<Rational, 5>> exact_bounds;
  std::optional<Rational> exact_guaranteed;
  std::optional<Rational> exact_margin;
};

/// Minimum of the five case bounds with the full feasibility re-check,
/// including beta <= guaranteed/2. Throws InfeasibleParams.
ExponentReport guaranteed_gamma1(const ExponentParams& p);
/// Same, evaluated in exact arithmetic (the floating fields are filled from it).
ExponentReport guaranteed_gamma1(const ExactExponentParams& p);

struct OptimizeWindow {
  double alpha_lo = 0.0, alpha_hi = 1.0;
  double beta_lo = 0.0, beta_hi = 1.0;
};

/// Grid search over (s2, alpha, beta) at the given resolution, then per-s2
/// refinement to 1e-7 by nested one-dimensional maximization (the objective
/// is concave in (alpha, beta)). Ties go to the smallest (s2, alpha, beta).
/// Throws NoFeasiblePoint.
ExponentReport optimize(double gamma0, const std::vector<double>& s2_grid, double resolution = 1e-3,
                        const OptimizeWindow& window = {});

/// 0.51, 0.52, ... below the cap 3/(2+gamma0), plus the cap itself.
std::vector<double> default_s2_grid(double gamma0);

/// Each round optimizes with gamma0 set to the previous guarantee; stops when
/// the gain falls below 1e-9. The first round is optimize(gamma_init).
std::vector<ExponentReport> iterate_fixed_point(double gamma_init, int rounds, double resolution = 1e-3);

}  // namespace heilbronn
