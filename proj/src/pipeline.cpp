#include "heilbronn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "heilbronn/error.hpp"

namespace heilbronn {

std::vector<std::string> PipelineReport::failed_gates() const {
  std::vector<std::string> out;
  for (const auto& g : gates)
    if (!g.passes) out.push_back(g.name);
  return out;
}

namespace {

/// Deduplicated lines spanned by all pairs of the given point indices.
std::vector<Line> pair_lines(const PointSet& points, const std::vector<std::size_t>& members, double* max_pair) {
  std::vector<Line> raw;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const std::size_t i = members[a], j = members[b];
      raw.push_back(line_through(points[i], points[j], i, j));
      *max_pair = std::max(*max_pair, distance(points[i], points[j]));
    }
  std::vector<Line> out;
  for (std::size_t k : dedup_lines(raw)) out.push_back(raw[k]);
  return out;
}

Point clamp_unit(Point p) { return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)}; }

/// Pencils through the centers: each group truncated to the common size and
/// translated to pass through its center.
LineSet make_pencils(const std::vector<std::vector<Line>>& groups, const std::vector<Point>& centers,
                     std::size_t size) {
  LineSet out;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t k = 0; k < size; ++k) {
      out.lines.push_back(Line{centers[g], groups[g][k].theta, std::nullopt});
      out.groups.push_back(static_cast<std::int64_t>(g));
    }
  return out;
}

void finish(PipelineReport& rep, Json& steps, const Json& config) {
  Json gates = Json::array();
  for (const auto& g : rep.gates) gates.push_back(to_json(g));
  const auto failed = rep.failed_gates();
  rep.json = {{"schema_version", kSchemaVersion},
              {"config", config},
              {"steps", steps},
              {"gates", gates},
              {"predicted_delta", rep.has_prediction ? Json(rep.predicted_delta) : Json(nullptr)},
              {"actual_min_area", rep.actual.area},
              {"actual_witness", to_json(rep.actual)},
              {"status", failed.empty() ? "ok" : to_string(ErrorKind::GateFailed)},
              {"failed_gates", failed}};
}

/// Steps shared by both pipelines once the point regions are fixed: pencil
/// gate, profile, high-low ratios and the delta bound.
void chain_tail(PipelineReport& rep, Json& steps, const PointSet& points, const LineSet& lines,
                const std::vector<std::vector<Line>>& groups, const std::vector<Point>& centers, double w_f,
                double eta, const std::vector<double>& profile_scales, double u_pair, const ChainConstants& k,
                int divisor) {
  const double n = static_cast<double>(points.size());
  std::size_t common = std::numeric_limits<std::size_t>::max();
  for (const auto& g : groups) common = std::min(common, g.size());
  const PointSet pi(centers);
  const LineSet pencils = make_pencils(groups, centers, common);
  const auto stats = pencil_stats(points, pi, pencils, w_f, eta, k.c0);
  Json pencil = to_json(stats);
  pencil["truncated_to"] = common;
  const auto pi_inc = smoothed_incidences(w_f / 10.0, pi, pencils);
  pencil["B_centers_w_over_10"] = pi_inc.normalized;
  steps["pencils"] = pencil;
  rep.gates.push_back(make_gate("pencil concentration mu_P mu_L^2 <= c0 exp(-|log w_f|^0.9) w_f^2 eta", stats.gate_lhs,
                                "<=", stats.gate_rhs));

  // Profile on the chosen scales (largest first); ratio between neighbours.
  Json entries = Json::array();
  std::vector<ProfileEntry> prof;
  for (double w : profile_scales) prof.push_back(profile_entry(points, lines, w, divisor));
  double max_ratio = 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (i + 1 < prof.size()) {
      const double diff = std::abs(prof[i].normalized - prof[i + 1].normalized);
      prof[i].ratio = diff == 0.0 ? 0.0 : diff / prof[i].err;
      max_ratio = std::max(max_ratio, *prof[i].ratio);
    }
    entries.push_back({{"w", prof[i].w},
                       {"I", prof[i].incidences},
                       {"B", prof[i].normalized},
                       {"M_P", prof[i].m_points},
                       {"M_L", prof[i].m_lines},
                       {"Err", prof[i].err},
                       {"ratio", prof[i].ratio ? Json(*prof[i].ratio) : Json(nullptr)}});
  }
  steps["profile"] = {{"entries", entries}, {"max_ratio", max_ratio}};
  rep.gates.push_back(make_gate("high-low ratio <= C", max_ratio, "<=", k.highlow));

  const ProfileEntry& top = prof.front();
  const double kappa = std::min(1.0, top.normalized);
  const double nl = static_cast<double>(lines.size());
  rep.gates.push_back(make_gate("I(w) > C|L|", top.incidences, ">", k.hypothesis * nl));
  rep.gates.push_back(make_gate("|L| > C|P|", nl, ">", k.hypothesis * n));
  rep.gates.push_back(make_gate("kappa = min(1, B(w)) > 0", kappa, ">", 0.0));

  rep.actual = min_triangle_fast(points);
  if (kappa > 0.0) {
    const auto bound = low_scale_delta_bound(u_pair, top.w, n, nl, kappa, k.delta);
    rep.predicted_delta = bound.delta;
    rep.has_prediction = true;
    Json b = to_json(bound);
    b["u"] = u_pair;
    b["w"] = top.w;
    b["kappa"] = kappa;
    b["first_term_dominates"] = bound.first >= bound.second;
    steps["delta_bound"] = b;
    rep.gates.push_back(make_gate("actual min area <= predicted delta", rep.actual.area, "<=", bound.delta));
  }
}

}  // namespace

PipelineReport pipeline_kps(const PointSet& points, double eps, const KpsOptions& options) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError(ErrorKind::OutOfRange, "eps must lie in (0, 1/2)");
  if (points.size() < 3) throw DomainError(ErrorKind::TooFewPoints, "need at least three points");
  const auto& k = options.constants;
  const double n = static_cast<double>(points.size());
  const double s = 1.0 + eps;
  const double sigma = 1.0 - eps;
  const double u_min = options.u_min > 0.0 ? options.u_min : 1.0 / std::sqrt(n);
  const double u_max = options.u_max;

  PipelineReport rep;
  Json steps = Json::object();
  Json config{{"command", "pipeline-kps"},
              {"points", point_set_summary(points)},
              {"eps", eps},
              {"s", s},
              {"sigma", sigma},
              {"u_min", u_min},
              {"u_max", u_max},
              {"tube_divisor", options.tube_divisor},
              {"constants",
               {{"c0", k.c0}, {"hypothesis", k.hypothesis}, {"direction", k.direction}, {"highlow", k.highlow},
                {"delta", k.delta}}}};
  rep.gates.push_back(make_gate("|P| >= 500", n, ">=", 500.0));

  // 1. Regular squares.
  const auto cover = extract_cover(points, s, std::min(u_min, 0.5 * u_max), u_max);
  steps["cover"] = to_json(cover);
  const double ln = std::log(n);
  rep.gates.push_back(
      make_gate("covered >= |P| / (C log^2 |P|)", static_cast<double>(cover.covered), ">=", n / (k.hypothesis * ln * ln)));

  // 2. Lines inside the regions and their direction sets.
  double u_pair = 0.0;
  std::vector<std::vector<Line>> groups;
  std::vector<Point> centers;
  LineSet all;
  double k_hat = 0.0;
  Json directions = Json::array();
  for (const auto& region : cover.regions) {
    if (region.subset.size() < 2) continue;
    auto lines = pair_lines(points, region.subset, &u_pair);
    LineSet ls;
    ls.lines = lines;
    const double delta = std::min(0.5 * kPi, std::pow(static_cast<double>(region.subset.size()), -1.0 / s));
    const auto dir = direction_regularity(ls, sigma, delta);
    k_hat = std::max(k_hat, dir.k_hat);
    Json d = to_json(dir);
    d["delta"] = delta;
    d["lines"] = lines.size();
    directions.push_back(d);
    for (const auto& l : lines) {
      all.lines.push_back(l);
      all.groups.push_back(static_cast<std::int64_t>(groups.size()));
    }
    centers.push_back(clamp_unit({region.square.x0 + 0.5 * region.square.side, region.square.y0 + 0.5 * region.square.side}));
    groups.push_back(std::move(lines));
  }
  all.source_size = points.size();
  steps["directions"] = {{"sigma", sigma}, {"per_region", directions}, {"K_hat", k_hat}};
  rep.gates.push_back(make_gate("direction regularity K_hat <= K", k_hat, "<=", k.direction));
  if (all.empty()) {
    rep.gates.push_back(make_gate("|L| > 0", 0.0, ">", 0.0));
    rep.actual = min_triangle_fast(points);
    finish(rep, steps, config);
    return rep;
  }

  // 3-4. Pencil gate at w, profile from w down, delta bound.
  const double u = cover.u_low;
  const double w = std::min(1.0, std::max(k.hypothesis * u, std::pow(n, eps) / (n * u)));
  const double eta = std::min(0.5 * kPi, std::pow(static_cast<double>(cover.n1), -1.0 / s));
  const double floor_scale = std::cbrt(1.0 / (n * static_cast<double>(all.size())));
  std::vector<double> scales;
  for (double v = w; v >= std::max(w / 100.0, floor_scale) * (1.0 - 1e-12); v /= 10.0) scales.push_back(v);
  if (scales.size() < 2) scales.push_back(w / 10.0);
  steps["scales"] = {{"u", u}, {"w", w}, {"eta", eta}, {"u_pair", u_pair}, {"profile", scales}};
  chain_tail(rep, steps, points, all, groups, centers, w, eta, scales, u_pair, k, options.tube_divisor);
  finish(rep, steps, config);
  return rep;
}

PipelineReport pipeline_homogeneous(const PointSet& points, double eps, const HomogeneousOptions& options) {
  if (!(eps > 0.0 && eps < 0.25)) throw DomainError(ErrorKind::OutOfRange, "eps must lie in (0, 1/4)");
  if (points.size() < 3) throw DomainError(ErrorKind::TooFewPoints, "need at least three points");
  const auto& k = options.constants;
  const double n = static_cast<double>(points.size());

  const double unit = 1.0 / std::sqrt(n);
  const auto homogeneity = static_cast<double>(concentration_points(points, unit));
  if (homogeneity > options.homogeneity_limit)
    throw DomainError(ErrorKind::HomogeneityFailed, "an n^-1/2 window holds " + std::to_string(homogeneity) +
                                                        " points, above the limit " +
                                                        std::to_string(options.homogeneity_limit));

  PipelineReport rep;
  Json steps = Json::object();
  Json config{{"command", "pipeline-homogeneous"},
              {"points", point_set_summary(points)},
              {"eps", eps},
              {"homogeneity_limit", options.homogeneity_limit},
              {"tube_divisor", options.tube_divisor},
              {"constants",
               {{"c0", k.c0}, {"hypothesis", k.hypothesis}, {"direction", k.direction}, {"highlow", k.highlow},
                {"delta", k.delta}}}};
  steps["homogeneity"] = {{"window", unit}, {"max_count", homogeneity}};

  // Partition into u x u cells; keep the dense ones.
  const double u = std::pow(n, -0.5 + 2.0 * eps);
  const auto m = static_cast<std::int64_t>(std::ceil(1.0 / u - 1e-12));
  std::map<std::int64_t, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto cx = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(points[i].x / u)), 0, m - 1);
    const auto cy = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(points[i].y / u)), 0, m - 1);
    cells[cy * m + cx].push_back(i);
  }
  const double dense_floor = u * u * n / 2.0;
  std::vector<std::int64_t> dense;
  std::size_t covered = 0;
  std::size_t n1 = std::numeric_limits<std::size_t>::max();
  for (const auto& [id, members] : cells)
    if (static_cast<double>(members.size()) >= dense_floor) {
      dense.push_back(id);
      covered += members.size();
      n1 = std::min(n1, members.size());
    }
  const double q = static_cast<double>(dense.size());
  steps["cells"] = {{"u", u},
                    {"per_axis", m},
                    {"dense_floor", dense_floor},
                    {"dense_cells", dense.size()},
                    {"covered", covered},
                    {"u_inverse_squared", 1.0 / (u * u)}};
  rep.gates.push_back(make_gate("dense cells cover >= n/2", static_cast<double>(covered), ">=", n / 2.0));
  rep.gates.push_back(make_gate("|Q| >= u^-2 / 8", q, ">=", 1.0 / (8.0 * u * u)));
  rep.gates.push_back(make_gate("|Q| <= 8 u^-2", q, "<=", 8.0 / (u * u)));

  double u_pair = 0.0;
  std::vector<std::vector<Line>> groups;
  std::vector<Point> centers;
  LineSet all;
  const double sigma = 1.0 - eps;
  const double delta = dense.empty() ? 0.5 : std::min(0.5 * kPi, 1.0 / std::sqrt(static_cast<double>(n1)));
  double k_hat = 0.0;
  for (std::int64_t id : dense) {
    const auto& members = cells[id];
    auto lines = pair_lines(points, members, &u_pair);
    if (lines.empty()) continue;
    LineSet ls;
    ls.lines = lines;
    k_hat = std::max(k_hat, direction_regularity(ls, sigma, delta).k_hat);
    for (const auto& l : lines) {
      all.lines.push_back(l);
      all.groups.push_back(static_cast<std::int64_t>(groups.size()));
    }
    const double cx = static_cast<double>(id % m), cy = static_cast<double>(id / m);
    centers.push_back(clamp_unit({(cx + 0.5) * u, (cy + 0.5) * u}));
    groups.push_back(std::move(lines));
  }
  all.source_size = points.size();
  steps["directions"] = {{"sigma", sigma}, {"delta", delta}, {"K_hat", k_hat}, {"lines", all.size()}};
  rep.gates.push_back(make_gate("direction regularity K_hat <= K", k_hat, "<=", k.direction));
  if (all.empty()) {
    rep.gates.push_back(make_gate("|L| > 0", 0.0, ">", 0.0));
    rep.actual = min_triangle_fast(points);
    finish(rep, steps, config);
    return rep;
  }
  const double w = 10.0 * u;
  steps["scales"] = {{"w", w}, {"eta", delta}, {"u_pair", u_pair}, {"profile", {100.0 * u, w}}};
  chain_tail(rep, steps, points, all, groups, centers, w, delta, {100.0 * u, w}, u_pair, k, options.tube_divisor);
  finish(rep, steps, config);
  return rep;
}

}  // namespace heilbronn
