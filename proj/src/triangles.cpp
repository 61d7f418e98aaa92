#include "heilbronn/triangles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "heilbronn/error.hpp"
#include "heilbronn/parallel.hpp"

namespace heilbronn {

namespace {

struct Candidate {
  double area = std::numeric_limits<double>::infinity();
  std::array<std::size_t, 3> idx{};
  bool valid = false;

  bool better_than(const Candidate& o) const {
    if (!o.valid) return valid;
    if (!valid) return false;
    return std::tie(area, idx) < std::tie(o.area, o.idx);
  }
};

std::array<std::size_t, 3> sorted3(std::size_t a, std::size_t b, std::size_t c) {
  std::array<std::size_t, 3> t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

void require_three(const PointSet& points) {
  if (points.size() < 3) throw DomainError(ErrorKind::TooFewPoints, "need at least three points");
}

}  // namespace

double indexed_area(const PointSet& points, std::size_t i, std::size_t j, std::size_t k) {
  const auto t = sorted3(i, j, k);
  return triangle_area(points[t[0]], points[t[1]], points[t[2]]);
}

TriangleWitness min_triangle_brute(const PointSet& points, bool exact) {
  require_three(points);
  const std::size_t n = points.size();
  if (exact && !points.exact()) throw DomainError(ErrorKind::NotRational, "point set has no exact coordinates");

  if (exact) {
    const auto& num = points.exact()->numerators;
    using Wide = __int128;
    struct ExactBest {
      Wide twice = -1;
      std::array<std::size_t, 3> idx{};
    };
    std::vector<ExactBest> partial(chunk_count(n, 1));
    parallel_chunks(n, 1, [&](std::size_t begin, std::size_t end, std::size_t c) {
      ExactBest best;
      for (std::size_t i = begin; i < end; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const Wide ux = num[j][0] - num[i][0], uy = num[j][1] - num[i][1];
          for (std::size_t k = j + 1; k < n; ++k) {
            const Wide vx = num[k][0] - num[i][0], vy = num[k][1] - num[i][1];
            Wide cr = ux * vy - uy * vx;
            if (cr < 0) cr = -cr;
            if (best.twice < 0 || cr < best.twice) best = {cr, {i, j, k}};
          }
        }
      }
      partial[c] = best;
    });
    ExactBest best;
    for (const auto& p : partial) {
      if (p.twice < 0) continue;
      if (best.twice < 0 || p.twice < best.twice || (p.twice == best.twice && p.idx < best.idx)) best = p;
    }
    const auto twice = static_cast<long long>(best.twice);
    const mpz_class den = mpz_class(static_cast<long>(points.exact()->denominator));
    Rational area(mpz_class(static_cast<long>(twice)), 2 * den * den);
    area.canonicalize();
    TriangleWitness w;
    w.indices = best.idx;
    w.area = indexed_area(points, best.idx[0], best.idx[1], best.idx[2]);
    w.exact_area = area;
    return w;
  }

  std::vector<Candidate> partial(chunk_count(n, 1));
  parallel_chunks(n, 1, [&](std::size_t begin, std::size_t end, std::size_t c) {
    Candidate best;
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const double a = triangle_area(points[i], points[j], points[k]);
          if (!best.valid || a < best.area) best = {a, {i, j, k}, true};
        }
      }
    }
    partial[c] = best;
  });
  Candidate best;
  for (const auto& p : partial)
    if (p.better_than(best)) best = p;
  return TriangleWitness{best.idx, best.area, std::nullopt};
}

TriangleWitness min_triangle_fast(const PointSet& points) {
  require_three(points);
  const std::size_t n = points.size();
  if (n <= 16) return min_triangle_brute(points);

  // Incumbent from consecutive triples in x order.
  std::vector<std::size_t> by_x(n);
  std::iota(by_x.begin(), by_x.end(), 0);
  std::sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return points[a].x < points[b].x; });
  Candidate best;
  auto offer = [&](std::size_t a, std::size_t b, std::size_t c) {
    const auto t = sorted3(a, b, c);
    const Candidate cand{triangle_area(points[t[0]], points[t[1]], points[t[2]]), t, true};
    if (cand.better_than(best)) best = cand;
  };
  for (std::size_t s = 0; s + 2 < n; ++s) offer(by_x[s], by_x[s + 1], by_x[s + 2]);

  const auto grid = static_cast<std::int64_t>(std::max(1.0, std::floor(std::sqrt(static_cast<double>(n)))));
  const double cell = 1.0 / static_cast<double>(grid);
  auto coord = [&](double v) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(v / cell)), 0, grid - 1);
  };
  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(grid * grid));
  for (std::size_t i = 0; i < n; ++i)
    buckets[static_cast<std::size_t>(coord(points[i].y) * grid + coord(points[i].x))].push_back(i);

  constexpr double kRelSlack = 1e-6;
  constexpr double kAbsSlack = 1e-15;
  for (std::size_t i = 0; i < n && best.area > 0.0; ++i) {
    for (std::size_t j = i + 1; j < n && best.area > 0.0; ++j) {
      const Point a = points[i];
      const Point b = points[j];
      const Point ab = b - a;
      const double d = norm(ab);
      // Every triangle is reached through its longest edge, onto which the
      // opposite vertex projects; its height is 2*area/d.
      const double reach = 2.0 * best.area / d * (1.0 + kRelSlack) + kAbsSlack;
      const double xmin = std::min(a.x, b.x), xmax = std::max(a.x, b.x);
      for (std::int64_t cx = coord(xmin - reach); cx <= coord(xmax + reach); ++cx) {
        const double lo = std::max(xmin, cx * cell - reach);
        const double hi = std::min(xmax, (cx + 1) * cell + reach);
        double ylo, yhi;
        if (lo > hi) continue;
        if (std::abs(ab.x) < 1e-300) {
          ylo = std::min(a.y, b.y);
          yhi = std::max(a.y, b.y);
        } else {
          const double y1 = a.y + (lo - a.x) / ab.x * ab.y;
          const double y2 = a.y + (hi - a.x) / ab.x * ab.y;
          ylo = std::min(y1, y2);
          yhi = std::max(y1, y2);
        }
        for (std::int64_t cy = coord(ylo - reach); cy <= coord(yhi + reach); ++cy) {
          for (std::size_t k : buckets[static_cast<std::size_t>(cy * grid + cx)]) {
            if (k == i || k == j) continue;
            const Point ak = points[k] - a;
            if (std::abs(cross(ab, ak)) / d > reach) continue;
            const double t = dot(ak, ab) / (d * d);
            if (t < -kRelSlack || t > 1.0 + kRelSlack) continue;
            offer(i, j, k);
          }
        }
      }
    }
  }
  return TriangleWitness{best.idx, best.area, std::nullopt};
}

std::vector<StripViolation> verify_empty_strips(const PointSet& points, double delta) {
  const std::size_t n = points.size();
  std::vector<std::vector<StripViolation>> partial(chunk_count(n, 1));
  parallel_chunks(n, 1, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Strip strip{line_through(points[i], points[j], i, j), 4.0 * delta / distance(points[i], points[j])};
        // Boundary guard: the minimizing triple sits exactly on the strip edge.
        const double half = 0.5 * strip.width * (1.0 - 1e-12);
        for (std::size_t k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          if (point_line_distance(points[k], strip.line) < half) partial[c].push_back({i, j, k});
        }
      }
    }
  });
  std::vector<StripViolation> out;
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  return out;
}

double weighted_strip_degree(const PointSet& points, double delta, Point x) {
  if (!(delta > 0.0)) throw DomainError(ErrorKind::OutOfRange, "delta must be positive");
  const std::size_t n = points.size();
  std::vector<CompensatedSum> partial(chunk_count(n, 1));
  parallel_chunks(n, 1, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double width = 4.0 * delta / distance(points[i], points[j]);
        const Strip strip{line_through(points[i], points[j]), width};
        if (strip.contains(x)) partial[c].add(width);
      }
    }
  });
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

double riesz_energy(std::span<const Point> points) {
  const std::size_t n = points.size();
  std::vector<CompensatedSum> partial(chunk_count(n, 1));
  parallel_chunks(n, 1, [&](std::size_t begin, std::size_t end, std::size_t c) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Point d = points[j] - points[i];
        const double d2 = dot(d, d);
        if (d2 == 0.0) throw DomainError(ErrorKind::DuplicatePoints, "riesz energy of coincident points");
        partial[c].add(1.0 / d2);
      }
    }
  });
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  return total.value();
}

}  // namespace heilbronn
