#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "heilbronn/configs.hpp"
#include "heilbronn/incidence.hpp"

namespace heilbronn {

/// Empirical s-regularity of a point set relative to a region R: points are
/// mapped to R's unit coordinates and compared against sub-squares Q' of
/// relative side w' >= delta via |P ∩ Q'| <= C |P_R| w'^s.
struct RegularityCertificate {
  Rectangle region;
  double s = 0.0;
  double delta = 0.0;
  /// Largest ratio |P ∩ Q'| / (|P_R| w'^s) found on the scale grid.
  double constant = 0.0;
  /// Upper bound on that ratio valid for every scale in [delta, 1].
  double bound = 0.0;
  /// Sub-square (unit coordinates) attaining `constant`.
  Square worst_witness;
  std::size_t witness_count = 0;
  std::size_t population = 0;
  /// Loss factor of the finite candidate family against all squares.
  double family_slack = 1.0;
};

/// Builds the certificate from points already in R's unit coordinates.
RegularityCertificate certify_regularity(std::span<const Point> unit_points, const Rectangle& region, double s,
                                         double delta, std::size_t scale_count = 64);

/// Points of `indices` mapped into the region's unit coordinates.
std::vector<Point> unit_coordinates(const PointSet& points, std::span<const std::size_t> indices,
                                    const Rectangle& region);

struct PigeonholeCheck {
  double lhs = 0.0;  // |P_Q|
  double rhs = 0.0;  // c u^s u_max^(2-s) |P|
  double c = 0.25;
  bool passes = false;
};

struct SquareExtraction {
  Square square;
  std::vector<std::size_t> subset;
  RegularityCertificate certificate;
  double objective = 0.0;  // |P ∩ Q| u^-s
  PigeonholeCheck pigeonhole;
};

/// Maximizes |P ∩ Q| u^-s over squares of side u_max 2^-k >= u_min anchored on
/// a stride-u/4 grid or at point coordinates. Throws EmptyRange.
SquareExtraction extract_square(const PointSet& points, double s, double u_min, double u_max);

struct CoverRegion {
  Square square;
  std::vector<std::size_t> subset;
  RegularityCertificate certificate;
};

struct CoverReport {
  std::vector<CoverRegion> regions;
  std::size_t n1 = 0;          // populations lie in [n1, 2 n1)
  double u_low = 0.0;          // sides lie in [u_low, 2 u_low]
  std::size_t covered = 0;
  std::size_t rounds = 0;      // extraction rounds on the residual
  std::size_t bucket_size = 0; // regions in the chosen bucket before disjointification
  std::size_t degree = 0;      // max intersection degree D inside the bucket
  double measured_c = 0.0;     // |P| / (covered log^2 |P|)
};

CoverReport extract_cover(const PointSet& points, double s, double u_min, double u_max);

struct RectangleExtraction {
  Rectangle rectangle;
  std::size_t orientation_index = 0;
  std::vector<std::size_t> subset;
  RegularityCertificate certificate;
  double objective = 0.0;  // |P ∩ R| a^-eps b^(-s+eps)
  struct StripStat {
    double w = 0.0;
    double fraction = 0.0;
    double target = 0.0;  // w^eps
  };
  std::vector<StripStat> strips;
};

inline constexpr int kRectangleOrientations = 64;

/// Maximizes |P ∩ R| a^-eps b^(-s2+eps) over rectangles with orientation
/// j pi/64, dyadic sides a <= b <= 1, a b >= area_floor. Throws EmptyRange.
RectangleExtraction extract_rectangle(const PointSet& points, double s2, double eps, double area_floor);

struct DirectionRegularity {
  double k_hat = 0.0;
  double start = 0.0;
  double length = 0.0;
  std::size_t count = 0;
};

/// max over intervals [k l/2, k l/2 + l) mod pi with l = delta 2^m < pi, and
/// the whole circle, of #{theta in I} / (|L| |I|^sigma). Intervals longer than
/// max_length are skipped (the whole circle too when max_length < pi).
DirectionRegularity direction_regularity(const LineSet& lines, double sigma, double delta,
                                         double max_length = kPi);

struct TubeConcentration {
  double max_fraction = 0.0;
  TubeCount tube;
};

TubeConcentration tube_concentration(const PointSet& points, double w, int divisor = 100);

struct ConcentrationStats {
  double mu_p = 0.0;             // measured on the centers
  double mu_p_underlying = 0.0;  // same statistic on P itself
  double mu_l = 0.0;
  double eta_angle = 0.0;
  double w_f = 0.0;
  double c0 = 1.0;
  double gate_lhs = 0.0;  // mu_P mu_L^2
  double gate_rhs = 0.0;  // c0 exp(-|log w_f|^0.9) w_f^2 eta
  bool gate_passes = false;
  double reduced_lhs = 0.0;  // w_f
  double reduced_rhs = 0.0;  // sqrt(eta / |P|)
  std::size_t pencil_count = 0;
  std::size_t pencil_size = 0;
  std::size_t worst_pencil = 0;
};

/// lines.groups[l] is the index into `centers` of the pencil holding line l.
/// Throws UnequalPencils, CenterOffsetTooLarge.
ConcentrationStats pencil_stats(const PointSet& points, const PointSet& centers, const LineSet& lines, double w_f,
                                double eta_angle, double c0 = 1.0);

struct DeltaBound {
  double first = 0.0;   // max{u, u^(2/3) w^(1/3)} |P|^-1/3 |L|^-1/3 kappa^-2/3
  double second = 0.0;  // u |P|^-1 kappa^-1
  double raw_rhs = 0.0;
  double constant = 1.0;
  double delta = 0.0;   // solves delta / |log delta| = constant * raw_rhs
};

DeltaBound low_scale_delta_bound(double u, double w, double n_points, double n_lines, double kappa,
                                 double constant = 1.0);

}  // namespace heilbronn
