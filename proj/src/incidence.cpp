#include "heilbronn/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "heilbronn/error.hpp"
#include "heilbronn/io.hpp"
#include "heilbronn/parallel.hpp"

namespace heilbronn {

double eta(double t) {
  const double a = std::abs(t);
  if (a <= kEtaFlat) return 1.0;
  if (a >= kEtaSupport) return 0.0;
  const double s = (a - kEtaFlat) / (kEtaSupport - kEtaFlat);
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

namespace {

constexpr std::size_t kLineChunk = 64;

void require_nonempty(const PointSet& points, const LineSet& lines) {
  if (points.empty() || lines.empty()) throw DomainError(ErrorKind::EmptySets, "points and lines must be nonempty");
}

}  // namespace

IncidenceCount smoothed_incidences(double w, const PointSet& points, const LineSet& lines) {
  if (!(w > 0.0)) throw DomainError(ErrorKind::OutOfRange, "scale w must be positive");
  require_nonempty(points, lines);
  const std::size_t m = lines.size();
  std::vector<CompensatedSum> partial(chunk_count(m, kLineChunk));
  parallel_chunks(m, kLineChunk, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t l = begin; l < end; ++l) {
      const Line& line = lines.lines[l];
      for (const Point& p : points.points()) {
        const double v = eta(point_line_distance(p, line) / w);
        if (v != 0.0) partial[c].add(v);
      }
    }
  });
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  const double inc = total.value();
  return {inc, inc / (w * static_cast<double>(points.size()) * static_cast<double>(lines.size()))};
}

std::size_t hard_count(double v, const PointSet& points, const LineSet& lines) {
  const double half = 0.5 * v;
  const std::size_t m = lines.size();
  std::vector<std::size_t> partial(chunk_count(m, kLineChunk), 0);
  parallel_chunks(m, kLineChunk, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t l = begin; l < end; ++l)
      for (const Point& p : points.points())
        if (point_line_distance(p, lines.lines[l]) < half) ++partial[c];
  });
  return std::accumulate(partial.begin(), partial.end(), std::size_t{0});
}

PointWindow max_points_window(std::span<const Point> points, double w) {
  PointWindow best;
  if (points.empty()) return best;
  std::vector<std::size_t> by_x(points.size());
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) {
    return points[a].x < points[b].x || (points[a].x == points[b].x && points[a].y < points[b].y);
  });
  // Sliding x-window [x_i, x_i + w) with its y values kept sorted.
  std::vector<double> ys;
  std::size_t right = 0;
  for (std::size_t left = 0; left < by_x.size(); ++left) {
    const double x0 = points[by_x[left]].x;
    if (left > 0) {
      const double gone = points[by_x[left - 1]].y;
      ys.erase(std::lower_bound(ys.begin(), ys.end(), gone));
      if (points[by_x[left - 1]].x == x0) continue;  // same window as before, minus nothing new
    }
    while (right < by_x.size() && points[by_x[right]].x < x0 + w) {
      const double y = points[by_x[right]].y;
      ys.insert(std::upper_bound(ys.begin(), ys.end(), y), y);
      ++right;
    }
    std::size_t top = 0;
    for (std::size_t bottom = 0; bottom < ys.size(); ++bottom) {
      if (bottom > 0 && ys[bottom] == ys[bottom - 1]) continue;
      top = std::max(top, bottom);
      while (top < ys.size() && ys[top] < ys[bottom] + w) ++top;
      if (top - bottom > best.count) best = {top - bottom, Square{x0, ys[bottom], w}};
    }
  }
  return best;
}

TubeFamily::TubeFamily(double w, int divisor) : width_(w), divisor_(divisor) {
  if (!(w > 0.0)) throw DomainError(ErrorKind::OutOfRange, "tube width must be positive");
  if (divisor < 1) throw DomainError(ErrorKind::OutOfRange, "tube divisor must be positive");
  angular_step_ = w / divisor;
  offset_step_ = w / divisor;
  angle_count_ = static_cast<std::size_t>(std::ceil(kPi / angular_step_));
  half_offsets_ = static_cast<std::size_t>(std::ceil((std::sqrt(0.5) + 0.25 * w) / offset_step_));
}

Strip TubeFamily::tube(std::size_t j, std::size_t i) const {
  Line l{center(), angle(j), std::nullopt};
  l.anchor = center() + offset(i) * l.normal();
  return Strip{l, member_width()};
}

std::pair<std::size_t, std::size_t> TubeFamily::nearest(const Line& line) const {
  auto j = static_cast<std::size_t>(std::llround(line.theta / angular_step_));
  if (j >= angle_count_) j = 0;
  double theta = angle(j);
  // Angles near pi wrap to index 0, which flips the normal.
  const Point n{-std::sin(theta), std::cos(theta)};
  const Point dir{std::cos(theta), std::sin(theta)};
  // Offset of the line measured where it passes closest to the center.
  const Point foot = line.anchor + dot(center() - line.anchor, line.direction()) * line.direction();
  (void)dir;
  const double c = dot(foot - center(), n);
  const auto raw = std::llround(c / offset_step_) + static_cast<long long>(half_offsets_);
  const auto i = static_cast<std::size_t>(std::clamp<long long>(raw, 0, static_cast<long long>(offset_count()) - 1));
  return {j, i};
}

namespace {

struct Interval {
  long long lo;
  long long hi;
};

/// Integer offsets i in [lo, hi] whose member contains the item, given a
/// floating estimate of the open interval (lo_val, hi_val) of centre offsets
/// and an exact membership predicate used to settle the boundary indices.
template <typename Contains>
std::optional<Interval> offset_range(double lo_val, double hi_val, const TubeFamily& family, Contains contains) {
  const double step = family.offset_step();
  const auto half = static_cast<long long>((family.offset_count() - 1) / 2);
  const long long last = static_cast<long long>(family.offset_count()) - 1;
  long long lo = static_cast<long long>(std::floor(lo_val / step)) + half;
  long long hi = static_cast<long long>(std::ceil(hi_val / step)) + half;
  lo = std::clamp(lo, 0LL, last);
  hi = std::clamp(hi, 0LL, last);
  while (lo <= hi && !contains(lo)) ++lo;
  while (hi >= lo && !contains(hi)) --hi;
  if (lo > hi) return std::nullopt;
  while (lo > 0 && contains(lo - 1)) --lo;
  while (hi < last && contains(hi + 1)) ++hi;
  return Interval{lo, hi};
}

/// Best stabbing point (max count, smallest index) of closed integer intervals.
std::pair<std::size_t, long long> max_stab(std::vector<Interval>& intervals) {
  if (intervals.empty()) return {0, 0};
  std::vector<std::pair<long long, int>> events;
  events.reserve(2 * intervals.size());
  for (const auto& iv : intervals) {
    events.emplace_back(iv.lo, +1);
    events.emplace_back(iv.hi + 1, -1);
  }
  std::sort(events.begin(), events.end());
  std::size_t best = 0;
  long long where = intervals.front().lo;
  long long cur = 0;
  for (std::size_t e = 0; e < events.size();) {
    const long long at = events[e].first;
    while (e < events.size() && events[e].first == at) cur += events[e++].second;
    if (cur > static_cast<long long>(best)) {
      best = static_cast<std::size_t>(cur);
      where = at;
    }
  }
  return {best, where};
}

struct AngleBest {
  std::size_t count = 0;
  std::size_t j = 0;
  long long i = 0;
  bool set = false;
};

AngleBest reduce(const std::vector<AngleBest>& partial) {
  AngleBest best;
  for (const auto& p : partial) {
    if (!p.set) continue;
    if (!best.set || p.count > best.count) best = p;
  }
  return best;
}

}  // namespace

TubeCount max_lines_in_tube(const LineSet& lines, const TubeFamily& family) {
  struct Seg {
    Point a, b;
    double theta;
  };
  // Segments grouped by dyadic length class; a segment of length s can only
  // fit members whose angle is within asin(w/(2s)) of its own.
  constexpr int kClasses = 40;
  std::vector<std::vector<Seg>> classes(kClasses);
  std::size_t vacuous = 0;
  for (const Line& l : lines.lines) {
    const auto seg = clip_to_unit_square(l);
    if (!seg) {
      ++vacuous;
      continue;
    }
    const double s = distance((*seg)[0], (*seg)[1]);
    int cls = kClasses - 1;
    if (s > 0.0) cls = std::clamp(static_cast<int>(std::floor(-std::log2(s / 2.0))), 0, kClasses - 1);
    classes[static_cast<std::size_t>(cls)].push_back({(*seg)[0], (*seg)[1], l.theta});
  }
  std::vector<double> reach(kClasses);
  for (int c = 0; c < kClasses; ++c) {
    auto& v = classes[static_cast<std::size_t>(c)];
    std::sort(v.begin(), v.end(), [](const Seg& x, const Seg& y) { return x.theta < y.theta; });
    const double s_min = 2.0 * std::exp2(-(c + 1));  // lower edge of the class
    const double ratio = family.width() / (2.0 * s_min);
    reach[static_cast<std::size_t>(c)] =
        (c == kClasses - 1 || ratio >= 1.0 ? kPi : std::asin(ratio)) + 2.0 * family.angular_step();
  }

  const std::size_t angles = family.angle_count();
  constexpr std::size_t kAngleChunk = 16;
  std::vector<AngleBest> partial(chunk_count(angles, kAngleChunk));
  const double half_member = 0.5 * family.member_width();
  parallel_chunks(angles, kAngleChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    AngleBest best;
    std::vector<Interval> intervals;
    for (std::size_t j = begin; j < end; ++j) {
      intervals.clear();
      const double theta = family.angle(j);
      const Point n{-std::sin(theta), std::cos(theta)};
      for (int c = 0; c < kClasses; ++c) {
        const auto& segs = classes[static_cast<std::size_t>(c)];
        if (segs.empty()) continue;
        const double r = reach[static_cast<std::size_t>(c)];
        auto visit = [&](const Seg& sg) {
          const double o1 = dot(sg.a - TubeFamily::center(), n);
          const double o2 = dot(sg.b - TubeFamily::center(), n);
          if (std::abs(o1 - o2) >= 2.0 * half_member * (1.0 + 1e-9)) return;
          auto contains = [&](long long i) {
            const Strip t = family.tube(j, static_cast<std::size_t>(i));
            return t.contains(sg.a) && t.contains(sg.b);
          };
          const auto iv = offset_range(std::max(o1, o2) - half_member, std::min(o1, o2) + half_member, family, contains);
          if (iv) intervals.push_back(*iv);
        };
        if (r >= kPi / 2) {
          for (const auto& sg : segs) visit(sg);
          continue;
        }
        // Circular window [theta - r, theta + r] on [0, pi).
        auto scan = [&](double lo, double hi) {
          auto it = std::lower_bound(segs.begin(), segs.end(), lo,
                                     [](const Seg& s, double v) { return s.theta < v; });
          for (; it != segs.end() && it->theta <= hi; ++it) visit(*it);
        };
        const double lo = theta - r, hi = theta + r;
        if (lo < 0.0) {
          scan(0.0, hi);
          scan(lo + kPi, kPi);
        } else if (hi >= kPi) {
          scan(lo, kPi);
          scan(0.0, hi - kPi);
        } else {
          scan(lo, hi);
        }
      }
      const auto [count, where] = max_stab(intervals);
      if (!best.set || count > best.count) best = {count, j, where, true};
    }
    partial[chunk] = best;
  });
  const AngleBest best = reduce(partial);
  TubeCount out;
  out.count = best.count + vacuous;
  out.angle_index = best.j;
  out.offset_index = static_cast<std::size_t>(best.i);
  out.tube = family.tube(out.angle_index, out.offset_index);
  return out;
}

TubeCount max_points_in_tube(std::span<const Point> points, const TubeFamily& family) {
  const std::size_t angles = family.angle_count();
  constexpr std::size_t kAngleChunk = 16;
  std::vector<AngleBest> partial(chunk_count(angles, kAngleChunk));
  const double half_member = 0.5 * family.member_width();
  parallel_chunks(angles, kAngleChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    AngleBest best;
    std::vector<Interval> intervals;
    for (std::size_t j = begin; j < end; ++j) {
      intervals.clear();
      const double theta = family.angle(j);
      const Point n{-std::sin(theta), std::cos(theta)};
      for (const Point& p : points) {
        const double o = dot(p - TubeFamily::center(), n);
        auto contains = [&](long long i) { return family.tube(j, static_cast<std::size_t>(i)).contains(p); };
        const auto iv = offset_range(o - half_member, o + half_member, family, contains);
        if (iv) intervals.push_back(*iv);
      }
      const auto [count, where] = max_stab(intervals);
      if (!best.set || count > best.count) best = {count, j, where, true};
    }
    partial[chunk] = best;
  });
  const AngleBest best = reduce(partial);
  TubeCount out;
  out.count = best.count;
  out.angle_index = best.j;
  out.offset_index = static_cast<std::size_t>(best.i);
  out.tube = family.tube(out.angle_index, out.offset_index);
  return out;
}

double err_term(double w, double m_points, double m_lines, double n_points, double n_lines) {
  if (!(w > 0.0 && m_points > 0.0 && m_lines > 0.0 && n_points > 0.0 && n_lines > 0.0))
    throw DomainError(ErrorKind::OutOfRange, "err_term inputs must be positive");
  return std::sqrt(m_points / n_points * (m_lines / n_lines) / (w * w * w));
}

ProfileEntry profile_entry(const PointSet& points, const LineSet& lines, double w, int tube_divisor) {
  ProfileEntry e;
  e.w = w;
  const auto inc = smoothed_incidences(w, points, lines);
  e.incidences = inc.incidences;
  e.normalized = inc.normalized;
  e.m_points = concentration_points(points, w);
  e.m_lines = concentration_lines(lines, TubeFamily(w, tube_divisor));
  // M_L >= 1 whenever some line meets the square; guard the all-miss case.
  e.err = err_term(w, static_cast<double>(e.m_points), static_cast<double>(std::max<std::size_t>(e.m_lines, 1)),
                   static_cast<double>(points.size()), static_cast<double>(lines.size()));
  return e;
}

ScaleProfile scale_profile(const PointSet& points, const LineSet& lines, double w_max, double w_min, int ladder,
                           int tube_divisor) {
  if (ladder != 10 && ladder != 2) throw DomainError(ErrorKind::OutOfRange, "ladder factor must be 10 or 2");
  if (!(w_min > 0.0 && w_min < w_max && w_max <= 1.0))
    throw DomainError(ErrorKind::OutOfRange, "scale range must satisfy 0 < w_min < w_max <= 1");
  std::vector<double> scales;
  for (int k = 0;; ++k) {
    const double w = w_max / std::pow(static_cast<double>(ladder), k);
    if (w < w_min * (1.0 - 1e-9)) break;
    scales.push_back(w);
    if (scales.size() > 60) throw DomainError(ErrorKind::LadderTooLong, "more than 60 ladder steps");
  }
  ScaleProfile profile;
  profile.ladder = ladder;
  profile.point_count = points.size();
  profile.line_count = lines.size();
  profile.tube_divisor = tube_divisor;
  const bool empty = points.empty() || lines.empty();
  for (double w : scales) {
    ProfileEntry e;
    e.w = w;
    if (!empty) e = profile_entry(points, lines, w, tube_divisor);
    profile.entries.push_back(e);
  }
  if (ladder == 10) {
    for (std::size_t k = 0; k + 1 < profile.entries.size(); ++k) {
      auto& e = profile.entries[k];
      const double diff = std::abs(e.normalized - profile.entries[k + 1].normalized);
      e.ratio = diff == 0.0 ? 0.0 : diff / e.err;
    }
  }
  return profile;
}

HighLowResult highlow_ratio(const ScaleProfile& profile) {
  if (profile.ladder != 10) throw DomainError(ErrorKind::OutOfRange, "high-low ratios need a factor-10 ladder");
  HighLowResult out;
  for (const auto& e : profile.entries) {
    if (!e.ratio) continue;
    out.ratios.emplace_back(e.w, *e.ratio);
    out.max_ratio = std::max(out.max_ratio, *e.ratio);
  }
  return out;
}

std::string profile_csv(const ScaleProfile& profile) {
  std::ostringstream ss;
  ss << "w,I,B,M_P,M_L,Err,ratio\n";
  for (const auto& e : profile.entries) {
    ss << format_double(e.w) << ',' << format_double(e.incidences) << ',' << format_double(e.normalized) << ','
       << e.m_points << ',' << e.m_lines << ',' << format_double(e.err) << ','
       << (e.ratio ? format_double(*e.ratio) : std::string()) << '\n';
  }
  return ss.str();
}

RichBuckets rich_line_buckets(const PointSet& points, const LineSet& lines, double w) {
  if (!(w > 0.0)) throw DomainError(ErrorKind::OutOfRange, "scale w must be positive");
  RichBuckets out;
  const double scale = w * static_cast<double>(points.size());
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const Strip strip{lines.lines[l], w};
    std::size_t count = 0;
    for (const Point& p : points.points()) count += strip.contains(p) ? 1 : 0;
    if (count == 0) {
      out.empty.push_back(l);
      continue;
    }
    int exponent = 0;
    std::frexp(static_cast<double>(count) / scale, &exponent);  // 2^(e-1) <= r < 2^e
    out.buckets[exponent].push_back(l);
  }
  return out;
}

}  // namespace heilbronn
