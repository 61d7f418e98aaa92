#pragma once

#include <string>
#include <vector>

#include "heilbronn/report.hpp"

namespace heilbronn {

/// Implied constants of the chain; every one defaults to 1.
struct ChainConstants {
  double c0 = 1.0;         // pencil concentration gate
  double hypothesis = 1.0; // C in "I > C|L|", "|L| > C|P|", cover size
  double direction = 1.0;  // allowed K for the direction-regularity gate
  double highlow = 1.0;    // allowed high-low ratio
  double delta = 1.0;      // constant in the delta bound
};

struct KpsOptions {
  ChainConstants constants;
  double u_max = 0.25;
  /// 0 selects n^-1/2.
  double u_min = 0.0;
  int tube_divisor = 100;
};

struct HomogeneousOptions {
  ChainConstants constants;
  double homogeneity_limit = 8.0;
  int tube_divisor = 100;
};

struct PipelineReport {
  Json json;
  std::vector<Gate> gates;
  double predicted_delta = 0.0;
  bool has_prediction = false;
  TriangleWitness actual;

  std::vector<std::string> failed_gates() const;
  bool gate_failed() const { return !failed_gates().empty(); }
};

/// Measured version of the four-step chain: cover by regular squares, lines
/// inside the regions, direction and pencil statistics, scale profile, and the
/// low-scale delta bound set against the actual minimum triangle area. Failing
/// hypotheses are reported as GateFailed, never thrown.
PipelineReport pipeline_kps(const PointSet& points, double eps, const KpsOptions& options = {});

/// The u = n^(-1/2+2 eps) cell scheme for homogeneous sets. Throws
/// HomogeneityFailed if some n^-1/2 window holds more than the limit.
PipelineReport pipeline_homogeneous(const PointSet& points, double eps, const HomogeneousOptions& options = {});

}  // namespace heilbronn
