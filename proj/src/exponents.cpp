#include "heilbronn/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "heilbronn/error.hpp"
#include "heilbronn/parallel.hpp"

namespace heilbronn {

namespace {

constexpr double kBaseline = 8.0 / 7.0;
constexpr double kTight = 1e-9;

template <typename T>
std::vector<std::pair<std::string, bool>> feasibility_impl(const BasicExponentParams<T>& p) {
  return {{"s2 > 1/2", p.s2 > T(1) / T(2)},
          {"s2 < 1", p.s2 < T(1)},
          {"s2 (2 + gamma0) <= 3", p.s2 * (T(2) + p.gamma0) <= T(3)},
          {"alpha >= 0", p.alpha >= T(0)},
          {"alpha <= beta", p.alpha <= p.beta},
          {"alpha + beta <= 1", p.alpha + p.beta <= T(1)},
          {"beta >= 4/9", p.beta >= T(4) / T(9)}};
}

template <typename T>
void require_feasible(const BasicExponentParams<T>& p) {
  for (const auto& [name, ok] : feasibility_impl(p))
    if (!ok) throw DomainError(ErrorKind::InfeasibleParams, "violated: " + name);
}

std::vector<std::string> tight(const ExponentParams& p, double guaranteed) {
  std::vector<std::string> out;
  auto near = [](double a, double b) { return std::abs(a - b) <= kTight; };
  if (near(p.s2 * (2.0 + p.gamma0), 3.0)) out.emplace_back("s2 (2 + gamma0) <= 3");
  if (near(p.alpha, 0.0)) out.emplace_back("alpha >= 0");
  if (near(p.alpha, p.beta)) out.emplace_back("alpha <= beta");
  if (near(p.alpha + p.beta, 1.0)) out.emplace_back("alpha + beta <= 1");
  if (near(p.beta, 4.0 / 9.0)) out.emplace_back("beta >= 4/9");
  if (near(p.beta, guaranteed / 2.0)) out.emplace_back("beta <= gamma1/2");
  return out;
}

void fill_summary(ExponentReport& r) {
  r.guaranteed = *std::min_element(r.bounds.begin(), r.bounds.end());
  r.margin = r.guaranteed - kBaseline;
  for (int i = 0; i < 5; ++i)
    if (r.bounds[static_cast<std::size_t>(i)] - r.guaranteed <= kTight) r.active_cases.push_back(i + 1);
  r.tight_constraints = tight(r.params, r.guaranteed);
}

double objective(double gamma0, double s2, double alpha, double beta) {
  const auto b = case_formulas(ExponentParams{gamma0, s2, alpha, beta});
  return *std::min_element(b.begin(), b.end());
}

/// Maximizer of a concave function on [lo, hi] by ternary search.
template <typename F>
std::pair<double, double> maximize_concave(F f, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2)) lo = m1;
    else hi = m2;
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

struct Candidate {
  double value = -1.0;
  double s2 = 0.0, alpha = 0.0, beta = 0.0;
  bool set = false;

  bool better_than(const Candidate& o) const {
    if (!o.set) return set;
    if (!set) return false;
    if (value != o.value) return value > o.value;
    return std::tie(s2, alpha, beta) < std::tie(o.s2, o.alpha, o.beta);
  }
};

bool feasible_point(double gamma0, double s2, double alpha, double beta, const OptimizeWindow& w, double* value) {
  if (alpha < std::max(0.0, w.alpha_lo) || alpha > w.alpha_hi || beta < w.beta_lo || beta > w.beta_hi) return false;
  const ExponentParams p{gamma0, s2, alpha, beta};
  for (const auto& [name, ok] : feasibility_impl(p))
    if (!ok) return false;
  const double g = objective(gamma0, s2, alpha, beta);
  if (beta > g / 2.0) return false;
  *value = g;
  return true;
}

}  // namespace

ExponentParams params_from_ab(double gamma0, double s2, double a, double b) {
  return {gamma0, s2, 3.0 / 7.0 + a, 4.0 / 7.0 - b};
}

ExactExponentParams params_from_ab(const Rational& gamma0, const Rational& s2, const Rational& a, const Rational& b) {
  return {gamma0, s2, Rational(3, 7) + a, Rational(4, 7) - b};
}

std::vector<std::pair<std::string, bool>> feasibility(const ExponentParams& p) { return feasibility_impl(p); }
std::vector<std::pair<std::string, bool>> feasibility(const ExactExponentParams& p) { return feasibility_impl(p); }

std::array<double, 5> case_bounds(const ExponentParams& p) {
  require_feasible(p);
  return case_formulas(p);
}

std::array<Rational, 5> case_bounds(const ExactExponentParams& p) {
  require_feasible(p);
  auto b = case_formulas(p);
  for (auto& v : b) v.canonicalize();
  return b;
}

ExponentReport guaranteed_gamma1(const ExponentParams& p) {
  ExponentReport r;
  r.params = p;
  r.bounds = case_bounds(p);
  fill_summary(r);
  r.feasibility = feasibility(p);
  const bool circular = p.beta <= r.guaranteed / 2.0;
  r.feasibility.emplace_back("beta <= gamma1/2", circular);
  if (!circular) throw DomainError(ErrorKind::InfeasibleParams, "violated: beta <= gamma1/2");
  return r;
}

ExponentReport guaranteed_gamma1(const ExactExponentParams& p) {
  ExponentReport r;
  const auto exact = case_bounds(p);
  r.params = {p.gamma0.get_d(), p.s2.get_d(), p.alpha.get_d(), p.beta.get_d()};
  for (std::size_t i = 0; i < 5; ++i) r.bounds[i] = exact[i].get_d();
  Rational g = *std::min_element(exact.begin(), exact.end());
  r.exact_params = p;
  r.exact_bounds = exact;
  r.exact_guaranteed = g;
  Rational margin = g - Rational(8, 7);
  margin.canonicalize();
  r.exact_margin = margin;
  fill_summary(r);
  r.guaranteed = g.get_d();
  r.margin = margin.get_d();
  r.feasibility = feasibility(p);
  const bool circular = p.beta <= g / 2;
  r.feasibility.emplace_back("beta <= gamma1/2", circular);
  if (!circular) throw DomainError(ErrorKind::InfeasibleParams, "violated: beta <= gamma1/2");
  return r;
}

std::vector<double> default_s2_grid(double gamma0) {
  const double cap = std::min(3.0 / (2.0 + gamma0), std::nextafter(1.0, 0.0));
  std::vector<double> grid;
  for (int k = 51; k < 100; ++k) {
    const double s = k / 100.0;
    if (s < cap) grid.push_back(s);
  }
  grid.push_back(cap);
  return grid;
}

ExponentReport optimize(double gamma0, const std::vector<double>& s2_grid, double resolution,
                        const OptimizeWindow& window) {
  if (!(resolution > 0.0 && resolution <= 1e-3)) throw DomainError(ErrorKind::OutOfRange, "resolution must be <= 1e-3");
  const auto steps = static_cast<std::size_t>(std::floor(1.0 / resolution + 1e-9));
  std::vector<Candidate> per_s2(s2_grid.size());
  parallel_chunks(s2_grid.size(), 1, [&](std::size_t k, std::size_t, std::size_t) {
    const double s2 = s2_grid[k];
    Candidate best;
    for (std::size_t i = 0; i <= steps; ++i) {
      const double alpha = static_cast<double>(i) * resolution;
      // Only beta in [max(alpha, 4/9), 1 - alpha] can be feasible.
      const auto j0 = std::max(i, static_cast<std::size_t>(std::ceil(4.0 / 9.0 / resolution - 1e-9)));
      for (std::size_t j = j0; j + i <= steps + 1; ++j) {
        const double beta = static_cast<double>(j) * resolution;
        double v = 0.0;
        if (!feasible_point(gamma0, s2, alpha, beta, window, &v)) continue;
        const Candidate c{v, s2, alpha, beta, true};
        if (c.better_than(best)) best = c;
      }
    }
    if (best.set) {
      // Refinement: for fixed beta the best alpha solves a concave 1D problem,
      // and the resulting profile in beta is concave again.
      const double b_lo = std::max({4.0 / 9.0, window.beta_lo, 0.0});
      const double b_hi = std::min(1.0, window.beta_hi);
      auto alpha_range = [&](double beta) {
        return std::pair{std::max(0.0, window.alpha_lo), std::min({beta, 1.0 - beta, window.alpha_hi})};
      };
      auto inner = [&](double beta) {
        const auto [lo, hi] = alpha_range(beta);
        if (lo > hi) return std::pair{0.0, -1e300};
        return maximize_concave([&](double a) { return objective(gamma0, s2, a, beta); }, lo, hi);
      };
      if (b_lo <= b_hi) {
        const auto [beta, val] = maximize_concave([&](double b) { return inner(b).second; }, b_lo, b_hi);
        (void)val;
        const double alpha = inner(beta).first;
        double v = 0.0;
        if (feasible_point(gamma0, s2, alpha, beta, window, &v)) {
          const Candidate c{v, s2, alpha, beta, true};
          if (c.better_than(best)) best = c;
        }
      }
    }
    per_s2[k] = best;
  });
  Candidate best;
  for (const auto& c : per_s2)
    if (c.better_than(best)) best = c;
  if (!best.set) throw DomainError(ErrorKind::NoFeasiblePoint, "no feasible (s2, alpha, beta) on the grid");
  return guaranteed_gamma1(ExponentParams{gamma0, best.s2, best.alpha, best.beta});
}

std::vector<ExponentReport> iterate_fixed_point(double gamma_init, int rounds, double resolution) {
  if (rounds < 1 || rounds > 50) throw DomainError(ErrorKind::OutOfRange, "rounds must lie in [1, 50]");
  std::vector<ExponentReport> seq;
  double gamma0 = gamma_init;
  for (int r = 0; r < rounds; ++r) {
    auto rep = optimize(gamma0, default_s2_grid(gamma0), resolution);
    if (!seq.empty() && rep.guaranteed - seq.back().guaranteed < 1e-9) break;
    gamma0 = rep.guaranteed;
    seq.push_back(std::move(rep));
  }
  return seq;
}

}  // namespace heilbronn
