#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heilbronn/configs.hpp"

namespace heilbronn {

/// Smoothing profile: 1 on |t| <= 0.4, 0 on |t| >= 0.6, C^2 quintic smoothstep
/// in between (value 1/2 at |t| = 0.5).
inline constexpr double kEtaFlat = 0.4;
inline constexpr double kEtaSupport = 0.6;
double eta(double t);

struct IncidenceCount {
  double incidences = 0.0;  // I(w)
  double normalized = 0.0;  // B(w) = I / (w |P| |L|)
};

/// I(w) = sum over (p, l) of eta(d(p, l) / w). Throws EmptySets.
IncidenceCount smoothed_incidences(double w, const PointSet& points, const LineSet& lines);

/// N(v) = #{(p, l) : d(p, l) < v/2}.
std::size_t hard_count(double v, const PointSet& points, const LineSet& lines);

struct PointWindow {
  std::size_t count = 0;
  Square square;
};

/// Exact maximum of |P ∩ Q| over half-open axis-parallel w x w squares Q.
PointWindow max_points_window(std::span<const Point> points, double w);
inline std::size_t concentration_points(const PointSet& points, double w) {
  return max_points_window(points.points(), w).count;
}

/// Discretized family of (w/2)-tubes: rotations about (1/2, 1/2) by multiples
/// of w/divisor, each with offsets on a w/divisor grid covering the square.
/// Any w-tube T with central line l contains a member T' with l ⊂ T' ⊂ T.
class TubeFamily {
 public:
  explicit TubeFamily(double w, int divisor = 100);

  double width() const { return width_; }
  double member_width() const { return 0.5 * width_; }
  int divisor() const { return divisor_; }
  double angular_step() const { return angular_step_; }
  double offset_step() const { return offset_step_; }
  std::size_t angle_count() const { return angle_count_; }
  std::size_t offset_count() const { return 2 * half_offsets_ + 1; }
  std::size_t size() const { return angle_count() * offset_count(); }

  double angle(std::size_t j) const { return static_cast<double>(j) * angular_step_; }
  double offset(std::size_t i) const {
    return (static_cast<double>(i) - static_cast<double>(half_offsets_)) * offset_step_;
  }
  Strip tube(std::size_t j, std::size_t i) const;
  Strip operator[](std::size_t index) const { return tube(index / offset_count(), index % offset_count()); }
  /// Member whose angle and offset are closest to the given line.
  std::pair<std::size_t, std::size_t> nearest(const Line& line) const;

  static constexpr Point center() { return {0.5, 0.5}; }

 private:
  double width_;
  int divisor_;
  double angular_step_;
  double offset_step_;
  std::size_t angle_count_;
  std::size_t half_offsets_;
};

struct TubeCount {
  std::size_t count = 0;
  std::size_t angle_index = 0;
  std::size_t offset_index = 0;
  Strip tube;
};

/// max over family members T of #{l in L : l ⊂ T}. Lines missing the unit
/// square count in every member.
TubeCount max_lines_in_tube(const LineSet& lines, const TubeFamily& family);
inline std::size_t concentration_lines(const LineSet& lines, const TubeFamily& family) {
  return max_lines_in_tube(lines, family).count;
}

/// max over family members T of |P ∩ T|.
TubeCount max_points_in_tube(std::span<const Point> points, const TubeFamily& family);

/// (M_P/|P| * M_L/|L| * w^-3)^(1/2).
double err_term(double w, double m_points, double m_lines, double n_points, double n_lines);

struct ProfileEntry {
  double w = 0.0;
  double incidences = 0.0;
  double normalized = 0.0;
  std::size_t m_points = 0;
  std::size_t m_lines = 0;
  double err = 0.0;
  /// |B(w) - B(w/10)| / Err(w); only on factor-10 ladders with a next entry.
  std::optional<double> ratio;
};

struct ScaleProfile {
  std::vector<ProfileEntry> entries;
  int ladder = 10;
  std::size_t point_count = 0;
  std::size_t line_count = 0;
  int tube_divisor = 100;
};

/// Single-scale entry (no ratio); any w > 0 is accepted.
ProfileEntry profile_entry(const PointSet& points, const LineSet& lines, double w, int tube_divisor = 100);

/// One entry per ladder step w_max, w_max/ladder, ... down to >= w_min.
/// Throws LadderTooLong beyond 60 steps.
ScaleProfile scale_profile(const PointSet& points, const LineSet& lines, double w_max, double w_min, int ladder,
                           int tube_divisor = 100);

struct HighLowResult {
  double max_ratio = 0.0;
  std::vector<std::pair<double, double>> ratios;  // (w, ratio)
};

HighLowResult highlow_ratio(const ScaleProfile& profile);

/// CSV with header w,I,B,M_P,M_L,Err,ratio.
std::string profile_csv(const ScaleProfile& profile);

struct RichBuckets {
  /// j -> indices of lines with 2^(j-1) <= |T_w(l) ∩ P| / (w |P|) < 2^j.
  std::map<int, std::vector<std::size_t>> buckets;
  /// Lines whose strip holds no point.
  std::vector<std::size_t> empty;
};

RichBuckets rich_line_buckets(const PointSet& points, const LineSet& lines, double w);

}  // namespace heilbronn
