#include "heilbronn/regularity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>

#include "heilbronn/error.hpp"
#include "heilbronn/parallel.hpp"

namespace heilbronn {

namespace {

/// Half-open box [x0, x1) x [y0, y1).
struct Box {
  double x0, y0, x1, y1;
};

/// Offline dominance counting: sweeps x with a Fenwick tree over y ranks.
std::vector<std::size_t> count_in_boxes(std::span<const Point> pts, std::span<const Box> boxes) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> by_y(n);
  std::iota(by_y.begin(), by_y.end(), 0);
  std::sort(by_y.begin(), by_y.end(), [&](std::size_t a, std::size_t b) { return pts[a].y < pts[b].y; });
  std::vector<double> ys(n);
  std::vector<std::size_t> rank(n);
  for (std::size_t r = 0; r < n; ++r) {
    ys[r] = pts[by_y[r]].y;
    rank[by_y[r]] = r;
  }
  std::vector<std::size_t> by_x(n);
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });

  // Corner query q: #{p : p.x < qx, p.y < qy} with sign.
  struct Corner {
    double x, y;
    std::size_t box;
    int sign;
  };
  std::vector<Corner> corners;
  corners.reserve(4 * boxes.size());
  for (std::size_t b = 0; b < boxes.size(); ++b) {
    corners.push_back({boxes[b].x1, boxes[b].y1, b, +1});
    corners.push_back({boxes[b].x0, boxes[b].y1, b, -1});
    corners.push_back({boxes[b].x1, boxes[b].y0, b, -1});
    corners.push_back({boxes[b].x0, boxes[b].y0, b, +1});
  }
  std::sort(corners.begin(), corners.end(), [](const Corner& a, const Corner& b) { return a.x < b.x; });

  std::vector<std::size_t> tree(n + 1, 0);
  auto add = [&](std::size_t r) {
    for (++r; r <= n; r += r & (~r + 1)) ++tree[r];
  };
  auto prefix = [&](std::size_t r) {  // entries with rank < r
    std::size_t s = 0;
    for (; r > 0; r -= r & (~r + 1)) s += tree[r];
    return s;
  };
  std::vector<long long> acc(boxes.size(), 0);
  std::size_t next = 0;
  for (const Corner& c : corners) {
    while (next < n && pts[by_x[next]].x < c.x) add(rank[by_x[next++]]);
    const auto below = static_cast<std::size_t>(std::lower_bound(ys.begin(), ys.end(), c.y) - ys.begin());
    acc[c.box] += c.sign * static_cast<long long>(prefix(below));
  }
  std::vector<std::size_t> out(boxes.size());
  for (std::size_t b = 0; b < boxes.size(); ++b) out[b] = static_cast<std::size_t>(acc[b]);
  return out;
}

std::vector<double> dyadic_sides(double u_max, double u_min) {
  std::vector<double> sides;
  for (int k = 0; k < 200; ++k) {
    const double u = std::ldexp(u_max, -k);
    if (u < u_min * (1.0 - 1e-12)) break;
    sides.push_back(u);
  }
  return sides;
}

void require_range(const PointSet& points, double u_min, double u_max) {
  if (points.empty()) throw DomainError(ErrorKind::EmptyRange, "no points to extract from");
  if (!(u_min > 0.0 && u_min < u_max)) throw DomainError(ErrorKind::EmptyRange, "need 0 < u_min < u_max");
}

}  // namespace

RegularityCertificate certify_regularity(std::span<const Point> unit_points, const Rectangle& region, double s,
                                         double delta, std::size_t scale_count) {
  RegularityCertificate cert;
  cert.region = region;
  cert.s = s;
  cert.delta = delta;
  cert.population = unit_points.size();
  if (unit_points.empty()) return cert;
  std::vector<double> scales;
  if (delta >= 1.0 || scale_count < 1) {
    scales.push_back(1.0);
  } else {
    const double ld = std::log(delta);
    for (std::size_t k = 0; k <= scale_count; ++k)
      scales.push_back(k == 0 ? delta
                              : k == scale_count ? 1.0
                                                 : std::exp(ld * (1.0 - static_cast<double>(k) / scale_count)));
  }
  const double n = static_cast<double>(unit_points.size());
  std::vector<PointWindow> windows(scales.size());
  for (std::size_t k = 0; k < scales.size(); ++k) windows[k] = max_points_window(unit_points, scales[k]);
  for (std::size_t k = 0; k < scales.size(); ++k) {
    const double ratio = static_cast<double>(windows[k].count) / (n * std::pow(scales[k], s));
    if (ratio > cert.constant) {
      cert.constant = ratio;
      cert.worst_witness = windows[k].square;
      cert.witness_count = windows[k].count;
    }
    // Between consecutive grid scales the count is at most the upper count and
    // w'^s at least the lower scale's power.
    const std::size_t upper = k + 1 < scales.size() ? windows[k + 1].count : windows[k].count;
    cert.bound = std::max(cert.bound, static_cast<double>(upper) / (n * std::pow(scales[k], s)));
  }
  return cert;
}

std::vector<Point> unit_coordinates(const PointSet& points, std::span<const std::size_t> indices,
                                    const Rectangle& region) {
  std::vector<Point> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    Point q = region.to_unit(points[i]);
    // Rounding in the frame change can push a member a hair outside [0,1).
    q.x = std::clamp(q.x, 0.0, std::nextafter(1.0, 0.0));
    q.y = std::clamp(q.y, 0.0, std::nextafter(1.0, 0.0));
    out.push_back(q);
  }
  return out;
}

SquareExtraction extract_square(const PointSet& points, double s, double u_min, double u_max) {
  require_range(points, u_min, u_max);
  if (!(s > 0.0 && s <= 2.0)) throw DomainError(ErrorKind::OutOfRange, "exponent s must lie in (0, 2]");
  const auto sides = dyadic_sides(u_max, u_min);

  struct Best {
    double objective = -1.0;
    Square sq;
    std::size_t count = 0;
  } best;
  auto better = [](double obj, const Square& q, const Best& b) {
    if (obj != b.objective) return obj > b.objective;
    if (q.x0 != b.sq.x0) return q.x0 < b.sq.x0;
    if (q.y0 != b.sq.y0) return q.y0 < b.sq.y0;
    return q.side < b.sq.side;
  };
  for (double u : sides) {
    std::vector<Square> cands;
    const double stride = u / 4.0;
    std::vector<double> grid;
    for (std::size_t i = 0; static_cast<double>(i) * stride < 1.0; ++i) grid.push_back(static_cast<double>(i) * stride);
    for (double x : grid)
      for (double y : grid) cands.push_back({x, y, u});
    const double hi = std::max(0.0, 1.0 - u);
    for (const Point& p : points.points()) cands.push_back({std::min(p.x, hi), std::min(p.y, hi), u});
    std::vector<Box> boxes;
    boxes.reserve(cands.size());
    for (const auto& q : cands) boxes.push_back({q.x0, q.y0, q.x0 + q.side, q.y0 + q.side});
    const auto counts = count_in_boxes(points.points(), boxes);
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (counts[c] == 0) continue;
      const double obj = static_cast<double>(counts[c]) * std::pow(u, -s);
      if (better(obj, cands[c], best)) best = {obj, cands[c], counts[c]};
    }
  }

  SquareExtraction out;
  out.square = best.sq;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (out.square.contains(points[i])) out.subset.push_back(i);
  const double u = out.square.side;
  out.objective = static_cast<double>(out.subset.size()) * std::pow(u, -s);
  const Rectangle region = Rectangle::from_square(out.square);
  out.certificate = certify_regularity(unit_coordinates(points, out.subset, region), region, s, u_min / u);
  out.certificate.family_slack = 4.0 * std::pow(2.0, s);
  out.pigeonhole.lhs = static_cast<double>(out.subset.size());
  out.pigeonhole.rhs = out.pigeonhole.c * std::pow(u, s) * std::pow(u_max, 2.0 - s) * static_cast<double>(points.size());
  out.pigeonhole.passes = out.pigeonhole.lhs >= out.pigeonhole.rhs;
  return out;
}

CoverReport extract_cover(const PointSet& points, double s, double u_min, double u_max) {
  require_range(points, u_min, u_max);
  const std::size_t n = points.size();
  std::vector<std::size_t> residual(n);
  std::iota(residual.begin(), residual.end(), 0);
  std::vector<CoverRegion> found;
  CoverReport report;
  // Stop once fewer than half the points remain.
  while (2 * residual.size() >= n && !residual.empty()) {
    const PointSet rest = points.subset(residual);
    auto ext = extract_square(rest, s, u_min, u_max);
    CoverRegion region{ext.square, {}, ext.certificate};
    std::vector<char> taken(residual.size(), 0);
    for (std::size_t local : ext.subset) {
      region.subset.push_back(residual[local]);
      taken[local] = 1;
    }
    std::vector<std::size_t> next;
    for (std::size_t r = 0; r < residual.size(); ++r)
      if (!taken[r]) next.push_back(residual[r]);
    residual = std::move(next);
    found.push_back(std::move(region));
    ++report.rounds;
  }

  // Dyadic buckets: side in [2^(e-1), 2^e), population in [2^(f-1), 2^f).
  std::map<std::pair<int, int>, std::vector<std::size_t>> buckets;
  for (std::size_t r = 0; r < found.size(); ++r) {
    int e = 0, f = 0;
    std::frexp(found[r].square.side, &e);
    std::frexp(static_cast<double>(found[r].subset.size()), &f);
    buckets[{e, f}].push_back(r);
  }
  std::pair<int, int> chosen{};
  std::size_t chosen_cover = 0;
  for (const auto& [key, members] : buckets) {
    std::size_t cover = 0;
    for (std::size_t r : members) cover += found[r].subset.size();
    if (cover > chosen_cover) {
      chosen_cover = cover;
      chosen = key;
    }
  }
  const auto& members = buckets[chosen];
  report.bucket_size = members.size();
  for (std::size_t a : members) {
    std::size_t deg = 0;
    for (std::size_t b : members)
      if (a != b && found[a].square.intersects(found[b].square)) ++deg;
    report.degree = std::max(report.degree, deg);
  }
  // Greedy maximal independent set in the intersection graph, index order.
  for (std::size_t r : members) {
    bool clear = true;
    for (const auto& kept : report.regions)
      if (kept.square.intersects(found[r].square)) {
        clear = false;
        break;
      }
    if (clear) report.regions.push_back(found[r]);
  }
  report.u_low = std::ldexp(1.0, chosen.first - 1);
  report.n1 = static_cast<std::size_t>(std::ldexp(1.0, chosen.second - 1));
  for (const auto& r : report.regions) report.covered += r.subset.size();
  const double ln = std::log(static_cast<double>(n));
  report.measured_c = static_cast<double>(n) / (static_cast<double>(report.covered) * ln * ln);
  return report;
}

RectangleExtraction extract_rectangle(const PointSet& points, double s2, double eps, double area_floor) {
  if (points.empty()) throw DomainError(ErrorKind::EmptyRange, "no points to extract from");
  if (!(s2 > 0.5 && s2 < 1.0)) throw DomainError(ErrorKind::OutOfRange, "s2 must lie in (0.5, 1)");
  if (!(eps > 0.0 && eps < 0.1)) throw DomainError(ErrorKind::OutOfRange, "eps must lie in (0, 0.1)");
  if (!(area_floor > 0.0 && area_floor <= 1.0)) throw DomainError(ErrorKind::EmptyRange, "area floor must lie in (0, 1]");

  // Dyadic (a, b) = (2^-i, 2^-k), i >= k, a b >= area_floor; smallest a first.
  std::vector<std::pair<double, double>> sides;
  for (int i = 60; i >= 0; --i)
    for (int k = 0; k <= i; ++k) {
      const double a = std::ldexp(1.0, -i), b = std::ldexp(1.0, -k);
      if (a * b >= area_floor) sides.emplace_back(a, b);
    }
  if (sides.empty()) throw DomainError(ErrorKind::EmptyRange, "no rectangle meets the area floor");

  struct Best {
    double objective = -std::numeric_limits<double>::infinity();
    double x0 = 0, y0 = 0, a = 0, b = 0;
    bool set = false;
  };
  std::vector<Best> per_angle(kRectangleOrientations);
  parallel_chunks(kRectangleOrientations, 1, [&](std::size_t j, std::size_t, std::size_t) {
    const double angle = static_cast<double>(j) * kPi / kRectangleOrientations;
    const Point e1{std::cos(angle), std::sin(angle)}, e2{-std::sin(angle), std::cos(angle)};
    std::vector<Point> rot;
    rot.reserve(points.size());
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const Point& p : points.points()) {
      rot.push_back({dot(p, e1), dot(p, e2)});
      xlo = std::min(xlo, rot.back().x);
      xhi = std::max(xhi, rot.back().x);
      ylo = std::min(ylo, rot.back().y);
      yhi = std::max(yhi, rot.back().y);
    }
    Best best;
    for (const auto& [a, b] : sides) {
      const double sx = b / 4.0, sy = a / 4.0;
      std::vector<Box> boxes;
      for (auto ix = static_cast<long long>(std::floor((xlo - b) / sx)); static_cast<double>(ix) * sx <= xhi; ++ix) {
        const double x0 = static_cast<double>(ix) * sx;
        if (x0 + b <= xlo) continue;
        for (auto iy = static_cast<long long>(std::floor((ylo - a) / sy)); static_cast<double>(iy) * sy <= yhi; ++iy) {
          const double y0 = static_cast<double>(iy) * sy;
          if (y0 + a <= ylo) continue;
          boxes.push_back({x0, y0, x0 + b, y0 + a});
        }
      }
      const auto counts = count_in_boxes(rot, boxes);
      for (std::size_t c = 0; c < boxes.size(); ++c) {
        if (counts[c] == 0) continue;
        const double obj = std::log(static_cast<double>(counts[c])) - eps * std::log(a) - (s2 - eps) * std::log(b);
        if (obj > best.objective) best = {obj, boxes[c].x0, boxes[c].y0, a, b, true};
      }
    }
    per_angle[j] = best;
  });
  std::size_t chosen = 0;
  for (std::size_t j = 1; j < per_angle.size(); ++j)
    if (per_angle[j].set && per_angle[j].objective > per_angle[chosen].objective) chosen = j;
  const Best& b = per_angle[chosen];

  RectangleExtraction out;
  out.orientation_index = chosen;
  const double angle = static_cast<double>(chosen) * kPi / kRectangleOrientations;
  const Point e1{std::cos(angle), std::sin(angle)}, e2{-std::sin(angle), std::cos(angle)};
  out.rectangle = Rectangle{b.x0 * e1 + b.y0 * e2, angle, b.b, b.a};
  for (std::size_t i = 0; i < points.size(); ++i)
    if (out.rectangle.contains(points[i])) out.subset.push_back(i);
  out.objective = static_cast<double>(out.subset.size()) * std::pow(b.a, -eps) * std::pow(b.b, -s2 + eps);
  const auto unit = unit_coordinates(points, out.subset, out.rectangle);
  out.certificate = certify_regularity(unit, out.rectangle, s2, area_floor);
  out.certificate.family_slack = 4.0 * std::pow(2.0, s2);
  // Relative strips of width w are the members of the 2w family.
  if (!unit.empty()) {
    for (double w = 0.5; w >= area_floor * (1.0 - 1e-12); w /= 2.0) {
      const auto t = max_points_in_tube(unit, TubeFamily(2.0 * w, 10));
      out.strips.push_back({w, static_cast<double>(t.count) / static_cast<double>(unit.size()), std::pow(w, eps)});
    }
  }
  return out;
}

DirectionRegularity direction_regularity(const LineSet& lines, double sigma, double delta, double max_length) {
  if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError(ErrorKind::OutOfRange, "sigma must lie in (0, 1]");
  if (!(delta > 0.0 && delta < kPi)) throw DomainError(ErrorKind::OutOfRange, "delta must lie in (0, pi)");
  DirectionRegularity out;
  if (lines.empty()) return out;
  std::vector<double> th;
  th.reserve(lines.size());
  for (const auto& l : lines.lines) th.push_back(l.theta);
  std::sort(th.begin(), th.end());
  auto count_in = [&](double lo, double hi) {  // [lo, hi) within [0, pi]
    return static_cast<std::size_t>(std::lower_bound(th.begin(), th.end(), hi) -
                                    std::lower_bound(th.begin(), th.end(), lo));
  };
  const double total = static_cast<double>(lines.size());
  auto offer = [&](double start, double len, std::size_t count) {
    const double k = static_cast<double>(count) / (total * std::pow(len, sigma));
    if (k > out.k_hat) out = {k, start, len, count};
  };
  for (int m = 0;; ++m) {
    const double len = std::ldexp(delta, m);
    if (len >= kPi || len > max_length) break;
    const double step = 0.5 * len;
    for (std::size_t k = 0; static_cast<double>(k) * step < kPi; ++k) {
      const double start = static_cast<double>(k) * step;
      const double end = start + len;
      const std::size_t c = end <= kPi ? count_in(start, end) : count_in(start, kPi) + count_in(0.0, end - kPi);
      offer(start, len, c);
    }
  }
  if (max_length >= kPi) offer(0.0, kPi, lines.size());
  return out;
}

TubeConcentration tube_concentration(const PointSet& points, double w, int divisor) {
  if (!(w > 0.0 && w < 1.0)) throw DomainError(ErrorKind::OutOfRange, "w must lie in (0, 1)");
  TubeConcentration out;
  if (points.empty()) return out;
  out.tube = max_points_in_tube(points.points(), TubeFamily(w, divisor));
  out.max_fraction = static_cast<double>(out.tube.count) / static_cast<double>(points.size());
  return out;
}

ConcentrationStats pencil_stats(const PointSet& points, const PointSet& centers, const LineSet& lines, double w_f,
                                double eta_angle, double c0) {
  if (!lines.grouped() || lines.groups.size() != lines.size())
    throw DomainError(ErrorKind::OutOfRange, "pencil statistics need grouped lines");
  if (centers.empty()) throw DomainError(ErrorKind::EmptySets, "no pencil centers");
  if (!(w_f > 0.0 && eta_angle > 0.0)) throw DomainError(ErrorKind::OutOfRange, "w_f and eta must be positive");
  std::vector<std::vector<double>> pencils(centers.size());
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto g = lines.groups[l];
    if (g < 0 || static_cast<std::size_t>(g) >= centers.size())
      throw DomainError(ErrorKind::OutOfRange, "pencil label out of range");
    const auto c = static_cast<std::size_t>(g);
    if (point_line_distance(centers[c], lines.lines[l]) >= w_f / 5.0)
      throw DomainError(ErrorKind::CenterOffsetTooLarge, "line " + std::to_string(l) + " misses its center by >= w_f/5");
    pencils[c].push_back(lines.lines[l].theta);
  }
  const std::size_t size = pencils.front().size();
  for (const auto& p : pencils)
    if (p.size() != size || size == 0) throw DomainError(ErrorKind::UnequalPencils, "pencils differ in size");

  ConcentrationStats out;
  out.eta_angle = eta_angle;
  out.w_f = w_f;
  out.c0 = c0;
  out.pencil_count = pencils.size();
  out.pencil_size = size;
  out.mu_p = static_cast<double>(concentration_points(centers, w_f)) / static_cast<double>(centers.size());
  out.mu_p_underlying =
      points.empty() ? 0.0 : static_cast<double>(concentration_points(points, w_f)) / static_cast<double>(points.size());
  std::size_t worst = 0;
  for (std::size_t c = 0; c < pencils.size(); ++c) {
    auto th = pencils[c];
    std::sort(th.begin(), th.end());
    const std::size_t m = th.size();
    for (std::size_t i = 0; i < m; ++i) th.push_back(th[i] + kPi);
    std::size_t best = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < m; ++i) {
      j = std::max(j, i);
      while (j < i + m && th[j] < th[i] + eta_angle) ++j;
      best = std::max(best, j - i);
    }
    if (best > worst) {
      worst = best;
      out.worst_pencil = c;
    }
  }
  out.mu_l = static_cast<double>(worst) / static_cast<double>(size);
  out.gate_lhs = out.mu_p * out.mu_l * out.mu_l;
  out.gate_rhs = c0 * std::exp(-std::pow(std::abs(std::log(w_f)), 0.9)) * w_f * w_f * eta_angle;
  out.gate_passes = out.gate_lhs <= out.gate_rhs;
  out.reduced_lhs = w_f;
  out.reduced_rhs = points.empty() ? 0.0 : std::sqrt(eta_angle / static_cast<double>(points.size()));
  return out;
}

DeltaBound low_scale_delta_bound(double u, double w, double n_points, double n_lines, double kappa, double constant) {
  if (!(u > 0.0 && w > 0.0 && n_points > 0.0 && n_lines > 0.0 && kappa > 0.0 && kappa <= 1.0 && constant > 0.0))
    throw DomainError(ErrorKind::OutOfRange, "delta bound inputs must be positive with kappa <= 1");
  DeltaBound out;
  out.constant = constant;
  out.first = std::max(u, std::cbrt(u * u * w)) * std::cbrt(1.0 / (n_points * n_lines)) * std::pow(kappa, -2.0 / 3.0);
  out.second = u / (n_points * kappa);
  out.raw_rhs = out.first + out.second;
  const double target = constant * out.raw_rhs;
  // t / |log t| increases on (0, 1); bisect in log t.
  double lo = -745.0, hi = -1e-300;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double val = std::exp(mid) / -mid;
    (val < target ? lo : hi) = mid;
  }
  out.delta = std::exp(0.5 * (lo + hi));
  return out;
}

}  // namespace heilbronn
