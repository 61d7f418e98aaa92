#include "heilbronn/configs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "heilbronn/error.hpp"

namespace heilbronn {

std::string to_string(Generator g) {
  switch (g) {
    case Generator::Erdos: return "erdos";
    case Generator::Uniform: return "uniform";
    case Generator::JitteredGrid: return "jittered_grid";
    case Generator::StGrid: return "st_grid";
    case Generator::File: return "file";
  }
  return "file";
}

Generator parse_generator(const std::string& tag) {
  if (tag == "erdos") return Generator::Erdos;
  if (tag == "uniform") return Generator::Uniform;
  if (tag == "jittered_grid") return Generator::JitteredGrid;
  if (tag == "st_grid") return Generator::StGrid;
  if (tag == "file") return Generator::File;
  throw DomainError(ErrorKind::Parse, "unknown generator tag '" + tag + "'");
}

PointSet::PointSet(std::vector<Point> points, Generator generator, std::uint64_t seed, Params params,
                   std::optional<LatticeShadow> exact)
    : points_(std::move(points)),
      generator_(generator),
      seed_(seed),
      params_(std::move(params)),
      exact_(std::move(exact)) {
  for (const Point& p : points_) {
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
      throw DomainError(ErrorKind::OutOfRange, "point outside the unit square");
  }
  if (exact_ && exact_->numerators.size() != points_.size())
    throw DomainError(ErrorKind::OutOfRange, "exact shadow size mismatch");
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points_[a].x < points_[b].x || (points_[a].x == points_[b].x && points_[a].y < points_[b].y);
  });
  constexpr double kDup = 1e-15;
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      const Point& p = points_[order[a]];
      const Point& q = points_[order[b]];
      if (q.x - p.x >= kDup) break;
      if (distance(p, q) < kDup)
        throw DomainError(ErrorKind::DuplicatePoints, "points " + std::to_string(order[a]) + " and " +
                                                          std::to_string(order[b]) + " coincide");
    }
  }
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  std::vector<Point> pts;
  pts.reserve(indices.size());
  std::optional<LatticeShadow> shadow;
  if (exact_) {
    shadow = LatticeShadow{exact_->denominator, {}};
    shadow->numerators.reserve(indices.size());
  }
  for (std::size_t i : indices) {
    pts.push_back(points_.at(i));
    if (shadow) shadow->numerators.push_back(exact_->numerators[i]);
  }
  return PointSet(std::move(pts), generator_, seed_, params_, std::move(shadow));
}

void LineSet::validate(const PointSet* source) const {
  if (!groups.empty() && groups.size() != lines.size())
    throw DomainError(ErrorKind::OutOfRange, "group labels do not match line count");
  for (const Line& l : lines) {
    if (!l.provenance) continue;
    const auto [i, j] = *l.provenance;
    const std::size_t n = source ? source->size() : source_size;
    if (n != 0 && (i >= n || j >= n))
      throw DomainError(ErrorKind::OutOfRange, "line provenance index out of range");
    if (source && (point_line_distance((*source)[i], l) > 1e-12 || point_line_distance((*source)[j], l) > 1e-12))
      throw DomainError(ErrorKind::OutOfRange, "line does not pass through its provenance pair");
  }
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

PointSet gen_erdos(std::int64_t p) {
  if (p < 3 || p > 10000) throw DomainError(ErrorKind::OutOfRange, "erdos prime must lie in [3, 10000]");
  if (!is_prime(p)) throw DomainError(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  LatticeShadow shadow{p, {}};
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(p));
  for (std::int64_t k = 0; k < p; ++k) {
    shadow.numerators.push_back({k, (k * k) % p});
    pts.push_back(shadow.point(static_cast<std::size_t>(k)));
  }
  return PointSet(std::move(pts), Generator::Erdos, 0, {{"p", std::to_string(p)}}, std::move(shadow));
}

PointSet gen_uniform(std::size_t n, std::uint64_t seed) {
  if (n < 3 || n > 100000) throw DomainError(ErrorKind::OutOfRange, "uniform n must lie in [3, 100000]");
  const CounterRng rng(seed);
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {rng.uniform(2 * i), rng.uniform(2 * i + 1)};
  return PointSet(std::move(pts), Generator::Uniform, seed, {{"n", std::to_string(n)}});
}

PointSet gen_jittered_grid(std::size_t n, double jitter, std::uint64_t seed) {
  if (!(jitter >= 0.0 && jitter < 1.0)) throw DomainError(ErrorKind::OutOfRange, "jitter must lie in [0, 1)");
  std::size_t k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while ((k + 1) * (k + 1) <= n) ++k;
  while (k * k > n) --k;
  if (k == 0) throw DomainError(ErrorKind::OutOfRange, "jittered grid needs n >= 1");
  const CounterRng rng(seed);
  const double cell = 1.0 / static_cast<double>(k);
  std::vector<Point> pts;
  pts.reserve(k * k);
  for (std::size_t row = 0; row < k; ++row) {
    for (std::size_t col = 0; col < k; ++col) {
      const std::size_t idx = row * k + col;
      const double jx = jitter * (rng.uniform(2 * idx) - 0.5);
      const double jy = jitter * (rng.uniform(2 * idx + 1) - 0.5);
      pts.push_back({(static_cast<double>(col) + 0.5 + jx) * cell, (static_cast<double>(row) + 0.5 + jy) * cell});
    }
  }
  PointSet::Params params{{"n_requested", std::to_string(n)},
                          {"n", std::to_string(k * k)},
                          {"side", std::to_string(k)},
                          {"jitter", std::to_string(jitter)}};
  return PointSet(std::move(pts), Generator::JitteredGrid, seed, std::move(params));
}

StExample gen_st_example(int k, bool perturb, std::uint64_t seed) {
  if (k < 10 || k > 200) throw DomainError(ErrorKind::OutOfRange, "st example needs 10 <= k <= 200");
  const int side = k + 1;
  const double n = static_cast<double>(side) * side;
  const double h = 1.0 / side;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(side * side));
  for (int b = 0; b < side; ++b)
    for (int a = 0; a < side; ++a) pts.push_back({a * h, b * h});

  // ||q||_inf ~ n^{-1/3} in unit coordinates is ~ n^{1/6} grid steps.
  const double target = std::pow(n, 1.0 / 6.0);
  const int lo = std::max(1, static_cast<int>(std::ceil(target / 2.0)));
  const int hi = std::max(lo, static_cast<int>(std::floor(target)));
  const auto min_points = static_cast<int>(std::ceil(std::cbrt(n) / 2.0));
  const double shift_cap = 0.5 * std::pow(n, -2.0 / 3.0);

  std::vector<std::pair<int, int>> dirs;
  for (int qy = 0; qy <= hi; ++qy) {
    for (int qx = -hi; qx <= hi; ++qx) {
      const int m = std::max(std::abs(qx), std::abs(qy));
      if (m < lo || m > hi || std::gcd(qx, qy) != 1) continue;
      if (qy == 0 && qx < 0) continue;
      dirs.emplace_back(qx, qy);
    }
  }

  LineSet lines;
  lines.source_size = pts.size();
  for (const auto& [qx, qy] : dirs) {
    // Grid points (a, b) on a common line share c = qy*a - qx*b.
    std::map<int, std::pair<int, Point>> groups;
    for (int b = 0; b < side; ++b) {
      for (int a = 0; a < side; ++a) {
        const int c = qy * a - qx * b;
        auto [it, inserted] = groups.try_emplace(c, 0, Point{a * h, b * h});
        ++it->second.first;
      }
    }
    const double theta = normalize_angle(std::atan2(static_cast<double>(qy), static_cast<double>(qx)));
    const double spacing = h / std::hypot(static_cast<double>(qx), static_cast<double>(qy));
    const double shift = std::min(shift_cap, 0.5 * spacing);
    for (const auto& [c, entry] : groups) {
      if (entry.first < min_points) continue;
      Line l = make_line(entry.second, theta);
      if (perturb) l.anchor = l.anchor + shift * l.normal();
      lines.lines.push_back(l);
    }
  }
  PointSet::Params params{{"k", std::to_string(k)},
                          {"perturb", perturb ? "true" : "false"},
                          {"min_step", std::to_string(lo)},
                          {"max_step", std::to_string(hi)}};
  return StExample{PointSet(std::move(pts), Generator::StGrid, seed, std::move(params)), std::move(lines), lo, hi};
}

bool same_line(const Line& a, const Line& b) {
  double dt = std::abs(a.theta - b.theta);
  dt = std::min(dt, kPi - dt);
  if (dt >= 1e-12) return false;
  return point_line_distance(a.anchor, b) < 1e-12 && point_line_distance(b.anchor, a) < 1e-12;
}

std::vector<std::size_t> dedup_lines(std::span<const Line> lines) {
  constexpr double kBucket = 1e-9;
  const auto last_bucket = static_cast<std::int64_t>(kPi / kBucket);
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto b = static_cast<std::int64_t>(lines[i].theta / kBucket);
    bool duplicate = false;
    const std::int64_t wrap_lo = b == 0 ? last_bucket : std::int64_t{-2};
    const std::int64_t wrap_hi = b >= last_bucket - 1 ? std::int64_t{0} : std::int64_t{-2};
    for (std::int64_t nb : {b - 1, b, b + 1, wrap_lo, wrap_hi}) {
      auto it = buckets.find(nb);
      if (it == buckets.end()) continue;
      for (std::size_t j : it->second) {
        if (same_line(lines[i], lines[j])) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) break;
    }
    if (!duplicate) {
      buckets[b].push_back(i);
      kept.push_back(i);
    }
  }
  return kept;
}

LineSet lines_from_pairs(const PointSet& points, double u, PairMode mode) {
  if (!(u > 0.0)) throw DomainError(ErrorKind::OutOfRange, "pair distance cap u must be positive");
  const std::size_t n = points.size();
  std::vector<Line> raw;
  std::vector<std::int64_t> raw_groups;

  if (mode.square_side) {
    const double side = *mode.square_side;
    if (!(side > 0.0)) throw DomainError(ErrorKind::OutOfRange, "square side must be positive");
    const auto cells = static_cast<std::int64_t>(std::ceil(1.0 / side));
    auto cell_of = [&](Point p) {
      const auto cx = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(p.x / side));
      const auto cy = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(p.y / side));
      return cy * cells + cx;
    };
    std::map<std::int64_t, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < n; ++i) members[cell_of(points[i])].push_back(i);
    for (const auto& [cell, idx] : members) {
      for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
          if (distance(points[idx[a]], points[idx[b]]) <= u) {
            raw.push_back(line_through(points[idx[a]], points[idx[b]], idx[a], idx[b]));
            raw_groups.push_back(cell);
          }
        }
      }
    }
  } else {
    // Bucket grid of cell size >= u so that close pairs sit in adjacent cells.
    const auto cells = std::max<std::int64_t>(1, std::min<std::int64_t>(4096, static_cast<std::int64_t>(1.0 / u)));
    const double cell = 1.0 / static_cast<double>(cells);
    auto coord = [&](double v) { return std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>(v / cell)); };
    std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
    for (std::size_t i = 0; i < n; ++i) grid[coord(points[i].y) * cells + coord(points[i].x)].push_back(i);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t cx = coord(points[i].x);
      const std::int64_t cy = coord(points[i].y);
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
          const std::int64_t x = cx + dx, y = cy + dy;
          if (x < 0 || y < 0 || x >= cells || y >= cells) continue;
          auto it = grid.find(y * cells + x);
          if (it == grid.end()) continue;
          for (std::size_t j : it->second)
            if (j > i && distance(points[i], points[j]) <= u) pairs.emplace_back(i, j);
        }
      }
    }
    std::sort(pairs.begin(), pairs.end());
    raw.reserve(pairs.size());
    for (const auto& [i, j] : pairs) raw.push_back(line_through(points[i], points[j], i, j));
  }

  if (raw.empty()) throw DomainError(ErrorKind::EmptyResult, "no point pair at distance <= u");
  LineSet out;
  out.source_size = n;
  for (std::size_t i : dedup_lines(raw)) {
    out.lines.push_back(raw[i]);
    if (!raw_groups.empty()) out.groups.push_back(raw_groups[i]);
  }
  return out;
}

}  // namespace heilbronn
