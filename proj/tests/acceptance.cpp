// Acceptance run: one PASS/FAIL line per criterion, details indented below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "heilbronn/configs.hpp"
#include "heilbronn/error.hpp"
#include "heilbronn/exponents.hpp"
#include "heilbronn/incidence.hpp"
#include "heilbronn/pipeline.hpp"
#include "heilbronn/regularity.hpp"
#include "heilbronn/triangles.hpp"
#include "oracles.hpp"

using namespace heilbronn;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream log;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    failed: " << what << "\n";
    }
  }
  void note(const std::string& s) { log << "    " << s << "\n"; }
};

int failures = 0;

void criterion(const char* id, const char* title, double budget_s, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) c.note("over time budget (" + std::to_string(budget_s) + " s)");
  if (!c.ok) ++failures;
  std::printf("%s %s  %s  (%.1f s)\n", id, c.ok ? "PASS" : "FAIL", title, secs);
  std::fputs(c.log.str().c_str(), stdout);
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::int64_t> primes_upto(std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 5; p <= hi; ++p) {
    bool prime = true;
    for (std::int64_t d = 2; d * d <= p; ++d)
      if (p % d == 0) prime = false;
    if (prime) out.push_back(p);
  }
  return out;
}

// Re-scan a certificate at 20 log-spaced scales with the sweep oracle.
void revalidate(Check& c, const std::string& tag, const PointSet& P, const std::vector<std::size_t>& subset,
                const RegularityCertificate& cert) {
  const auto unit = oracle::region_frame(P, subset, cert.region);
  c.require(unit.size() == cert.population, tag + ": population");
  const double n = static_cast<double>(unit.size());
  const double d = std::min(cert.delta, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double w = d == 1.0 ? 1.0 : std::exp(std::log(d) * (1.0 - k / 19.0));
    const double count = static_cast<double>(oracle::sweep_window_max(unit, w));
    if (count > cert.bound * n * std::pow(w, cert.s) * (1 + 1e-12))
      c.require(false, tag + ": window count " + fmt(count) + " at w = " + fmt(w) + " exceeds bound");
  }
  c.require(cert.constant <= cert.bound, tag + ": constant <= bound");
}

PointSet cluster(Point ctr, double r, std::size_t n, std::uint64_t seed) {
  const auto U = gen_uniform(n, seed);
  std::vector<Point> pts;
  for (const auto& p : U.points()) pts.push_back({ctr.x + r * (2 * p.x - 1), ctr.y + r * (2 * p.y - 1)});
  return PointSet(pts);
}

}  // namespace

int main() {
  criterion("A1", "Erdos sets: exact min area >= 1/(2p^2), p = 5..101", 60, [](Check& c) {
    for (std::int64_t p : primes_upto(101)) {
      const auto w = min_triangle_brute(gen_erdos(p), true);
      const Rational floor(1, 2 * p * p);
      c.require(*w.exact_area >= floor, "p = " + std::to_string(p));
      // lattice oracle: twice the area, in units of 1/p^2
      std::int64_t twice = std::numeric_limits<std::int64_t>::max();
      for (std::int64_t i = 0; i < p; ++i)
        for (std::int64_t j = i + 1; j < p; ++j)
          for (std::int64_t k = j + 1; k < p; ++k)
            twice = std::min(twice, oracle::lattice_twice_area(i, i * i % p, j, j * j % p, k, k * k % p));
      Rational want(twice, 2 * p * p);
      want.canonicalize();
      c.require(*w.exact_area == want, "p = " + std::to_string(p) + " matches the lattice oracle");
    }
  });

  criterion("A2", "trivial upper bound min area <= 1/(n-2)", 120, [](Check& c) {
    for (std::int64_t p : primes_upto(101)) {
      const auto w = min_triangle_brute(gen_erdos(p), true);
      c.require(*w.exact_area <= Rational(1, p - 2), "erdos " + std::to_string(p));
    }
    for (std::size_t n : {50u, 100u, 200u, 500u})
      for (std::uint64_t s = 0; s < 10; ++s) {
        const double a = min_triangle_fast(gen_uniform(n, s)).area;
        c.require(a <= 1.0 / static_cast<double>(n - 2), "uniform " + std::to_string(n) + " seed " + std::to_string(s));
      }
    for (std::size_t n : {49u, 100u, 225u, 400u})
      for (double j : {0.0, 0.3, 0.9}) {
        const auto P = gen_jittered_grid(n, j, 1);
        const double a = min_triangle_fast(P).area;
        c.require(a <= 1.0 / static_cast<double>(P.size() - 2), "jittered " + std::to_string(n) + " jitter " + fmt(j));
      }
  });

  criterion("A3", "fast search equals brute force", 60, [](Check& c) {
    std::mt19937_64 rng(2024);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = 10 + rng() % 191;
      const auto P = i % 5 == 4 ? gen_jittered_grid(n, 0.05 * static_cast<double>(i % 7), rng()) : gen_uniform(n, rng());
      const double d = std::abs(min_triangle_fast(P).area - min_triangle_brute(P).area);
      worst = std::max(worst, d);
      c.require(d <= 1e-15, "instance " + std::to_string(i) + " n = " + std::to_string(P.size()));
    }
    for (std::int64_t p : primes_upto(61)) {
      const auto P = gen_erdos(p);
      const double d = std::abs(min_triangle_fast(P).area - min_triangle_brute(P).area);
      worst = std::max(worst, d);
      c.require(d <= 1e-15, "erdos " + std::to_string(p));
    }
    c.note("largest difference " + fmt(worst));
  });

  criterion("A4", "high-low ratio <= 100 on the factor-10 ladder", 300, [](Check& c) {
    auto run = [&](const std::string& tag, const PointSet& P, const LineSet& L) {
      const double fine = std::pow(static_cast<double>(P.size()), -2.0 / 3);
      // the ratio at w reads B(w/10), so the ladder runs one step below n^-2/3
      const auto hl = highlow_ratio(scale_profile(P, L, 0.1, fine / 10, 10));
      double worst = 0;
      std::size_t steps = 0;
      for (const auto& [w, r] : hl.ratios)
        if (w >= fine * (1 - 1e-12)) {
          worst = std::max(worst, r);
          ++steps;
        }
      c.note(tag + ": max ratio " + fmt(worst) + " over " + std::to_string(steps) + " steps");
      c.require(steps > 0, tag + ": at least one ratio");
      c.require(worst <= 100, tag);
    };
    const auto st = gen_st_example(30, false, 0);
    run("st(30)", st.points, st.lines);
    const auto sp = gen_st_example(30, true, 0);
    run("st(30) perturbed", sp.points, sp.lines);
    const auto U = gen_uniform(2000, 0);
    run("uniform(2000) u = 0.05", U, lines_from_pairs(U, 0.05));
  });

  criterion("A5", "st profile shape and perturbed fine scales", 180, [](Check& c) {
    const auto st = gen_st_example(30, false, 0);
    const double n = static_cast<double>(st.points.size());
    const double fine = std::pow(n, -2.0 / 3);
    for (int ladder : {10, 2}) {
      const auto prof = scale_profile(st.points, st.lines, 0.1, 4 * fine, ladder);
      for (const auto& e : prof.entries) {
        const double model = std::max(1.0, fine / e.w);
        c.note("ladder " + std::to_string(ladder) + " w = " + fmt(e.w) + ": B = " + fmt(e.normalized) + ", model " +
               fmt(model));
        c.require(e.normalized <= 8 * model && e.normalized >= model / 8, "B within factor 8 at w = " + fmt(e.w));
      }
    }
    const auto sp = gen_st_example(30, true, 0);
    const double np = static_cast<double>(sp.points.size());
    for (double w = std::pow(np, -2.0 / 3) / 4; w > 1e-6; w /= 2) {
      const double I = smoothed_incidences(w, sp.points, sp.lines).incidences;
      c.require(I == 0.0, "perturbed I(" + fmt(w) + ") = " + fmt(I));
    }
  });

  criterion("A6", "exponent system at the reference parameters", 30, [](Check& c) {
    Rational g0(8, 7), s2(21, 22);
    const auto p = params_from_ab(g0, s2, parse_rational("0.0016"), parse_rational("0.047"));
    const auto b = case_bounds(p);
    for (int i = 0; i < 5; ++i) {
      c.note("case " + std::to_string(i + 1) + ": " + to_string(b[i]) + " = " + fmt(b[i].get_d()));
      c.require(b[i] >= g0 + Rational(1, 2000), "case " + std::to_string(i + 1) + " >= 8/7 + 0.0005");
    }
    const auto r = guaranteed_gamma1(p);
    c.note("exact margin " + to_string(*r.exact_margin));
    c.require(*r.exact_guaranteed >= g0 + Rational(1, 2000), "guaranteed >= 8/7 + 1/2000");
    for (const auto& [name, ok] : r.feasibility) c.require(ok, "feasible: " + name);
    const auto zero = guaranteed_gamma1(params_from_ab(g0, s2, Rational(0), Rational(0)));
    c.require(*zero.exact_guaranteed == g0, "a = b = 0 gives 8/7 exactly");
    const auto opt = optimize(8.0 / 7, default_s2_grid(8.0 / 7));
    c.note("optimizer: " + fmt(opt.guaranteed) + " at s2 " + fmt(opt.params.s2) + ", alpha " + fmt(opt.params.alpha) +
           ", beta " + fmt(opt.params.beta));
    c.require(opt.margin >= r.exact_margin->get_d(), "optimizer margin >= reference margin");
    for (const auto& [name, ok] : opt.feasibility) c.require(ok, "optimizer feasible: " + name);
  });

  criterion("A7", "regularity certificates on 10 configurations", 300, [](Check& c) {
    const auto st = gen_st_example(12, false, 0);
    const std::vector<std::pair<std::string, PointSet>> configs{
        {"uniform(500, 0)", gen_uniform(500, 0)},
        {"uniform(1000, 1)", gen_uniform(1000, 1)},
        {"uniform(2000, 2)", gen_uniform(2000, 2)},
        {"jittered(400, 0.3)", gen_jittered_grid(400, 0.3, 1)},
        {"jittered(900, 0.6)", gen_jittered_grid(900, 0.6, 2)},
        {"erdos(53)", gen_erdos(53)},
        {"erdos(101)", gen_erdos(101)},
        {"st(12) points", st.points},
        {"cluster", cluster({0.3, 0.6}, 0.05, 400, 3)},
        {"cluster + uniform", [] {
           std::vector<Point> pts;
           const auto a = cluster({0.7, 0.2}, 0.01, 200, 4), b = gen_uniform(300, 5);
           for (const auto& p : a.points()) pts.push_back(p);
           for (const auto& p : b.points()) pts.push_back(p);
           return PointSet(pts);
         }()},
    };
    for (const auto& [tag, P] : configs) {
      const double n = static_cast<double>(P.size());
      const double u_min = 1 / std::sqrt(n);
      const auto sq = extract_square(P, 1.05, u_min, 0.25);
      revalidate(c, tag + " square", P, sq.subset, sq.certificate);
      const auto re = extract_rectangle(P, 0.9, 0.05, 1 / n);
      revalidate(c, tag + " rectangle", P, re.subset, re.certificate);
      const auto cv = extract_cover(P, 1.05, u_min, 0.25);
      std::set<std::size_t> seen;
      std::size_t covered = 0;
      for (std::size_t i = 0; i < cv.regions.size(); ++i) {
        const auto& r = cv.regions[i];
        for (std::size_t j = i + 1; j < cv.regions.size(); ++j)
          c.require(!r.square.intersects(cv.regions[j].square), tag + " cover regions disjoint");
        for (std::size_t k : r.subset) {
          c.require(seen.insert(k).second, tag + " cover subsets disjoint");
          c.require(r.square.contains(P[k]), tag + " cover member inside its square");
        }
        covered += r.subset.size();
        revalidate(c, tag + " cover region " + std::to_string(i), P, r.subset, r.certificate);
      }
      c.require(covered == cv.covered, tag + " covered count");
      const double ln = std::log(n);
      c.require(covered > 0 && static_cast<double>(covered) >= n / (cv.measured_c * ln * ln) * (1 - 1e-12),
                tag + " coverage against measured C");
      c.note(tag + ": " + std::to_string(cv.regions.size()) + " cover regions, covered " + std::to_string(covered) +
             ", measured C " + fmt(cv.measured_c));
    }
  });

  criterion("A8", "KPS chain: actual min area <= predicted bound", 600, [](Check& c) {
    for (const auto& [tag, P] : std::vector<std::pair<std::string, PointSet>>{
             {"jittered(2025, 0.4, 7)", gen_jittered_grid(2025, 0.4, 7)}, {"erdos(43)", gen_erdos(43)}}) {
      const auto r = pipeline_kps(P, 0.05);
      c.require(r.has_prediction, tag + " produced a prediction");
      c.note(tag + ": actual " + fmt(r.actual.area) + ", predicted " + fmt(r.predicted_delta));
      c.require(r.actual.area <= r.predicted_delta, tag + " actual <= predicted");
      const auto& js = r.json.at("gates");
      c.require(js.size() == r.gates.size(), tag + " gates in json");
      for (std::size_t i = 0; i < r.gates.size(); ++i) {
        const auto& g = r.gates[i];
        c.require(js[i].contains("lhs") && js[i].contains("rhs") && !g.relation.empty() && std::isfinite(g.lhs) &&
                      std::isfinite(g.rhs),
                  tag + " gate '" + g.name + "' lists both sides");
        if (!g.passes) c.note("gate failed: " + g.name + " (" + fmt(g.lhs) + " " + g.relation + " " + fmt(g.rhs) + ")");
      }
    }
  });

  criterion("A9", "homogeneous scheme on jittered(4096, 0.3, 2)", 300, [](Check& c) {
    const auto P = gen_jittered_grid(4096, 0.3, 2);
    const double n = 4096;
    const auto r = pipeline_homogeneous(P, 0.05);
    const auto& cells = r.json.at("steps").at("cells");
    const double u = cells.at("u").get<double>();
    const double q = cells.at("dense_cells").get<double>();
    const double covered = cells.at("covered").get<double>();
    c.note("u = " + fmt(u) + ", |Q| = " + fmt(q) + ", u^-2 = " + fmt(1 / (u * u)) + ", covered " + fmt(covered));
    c.require(covered >= n / 2, "dense cells cover >= n/2");
    c.require(q >= 1 / (8 * u * u) && q <= 8 / (u * u), "|Q| within factor 8 of u^-2");
    bool pencil = false;
    for (const auto& g : r.gates)
      if (g.name.rfind("pencil", 0) == 0) {
        pencil = std::isfinite(g.lhs) && std::isfinite(g.rhs);
        c.note("pencil gate: " + fmt(g.lhs) + " " + g.relation + " " + fmt(g.rhs) + (g.passes ? "" : " (fails)"));
      }
    c.require(pencil, "pencil gate sides reported");
  });

  criterion("A10", "smoothed incidence sandwich and monotonicity", 60, [](Check& c) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 20 + rng() % 61;
      const auto P = gen_uniform(n, rng());
      const auto L = lines_from_pairs(P, 0.1 + 0.4 * unit(rng));
      if (L.empty()) continue;
      const double w = std::exp(std::log(1e-3) + unit(rng) * (std::log(0.2) - std::log(1e-3)));
      const auto pv = oracle::copy(P);
      const double I = smoothed_incidences(w, P, L).incidences;
      const double lo = static_cast<double>(oracle::hard_count(0.8 * w, pv, L.lines));
      const double hi = static_cast<double>(oracle::hard_count(1.2 * w, pv, L.lines));
      c.require(lo <= I && I <= hi, "triple " + std::to_string(t) + ": " + fmt(lo) + " <= " + fmt(I) + " <= " + fmt(hi));
      double prev = -1;
      for (double v = w / 64; v <= 64 * w; v *= 2) {
        const double Iv = smoothed_incidences(v, P, L).incidences;
        c.require(Iv >= prev, "triple " + std::to_string(t) + " monotone at w = " + fmt(v));
        prev = Iv;
      }
    }
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
