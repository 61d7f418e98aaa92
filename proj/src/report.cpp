#include "heilbronn/report.hpp"

#include "heilbronn/error.hpp"

namespace heilbronn {

Json to_json(const Point& p) { return Json::array({p.x, p.y}); }

Json to_json(const Square& q) { return {{"x0", q.x0}, {"y0", q.y0}, {"side", q.side}}; }

Json to_json(const Rectangle& r) {
  Json corners = Json::array();
  for (Point c : {Point{0, 0}, Point{1, 0}, Point{1, 1}, Point{0, 1}}) corners.push_back(to_json(r.from_unit(c)));
  return {{"origin", to_json(r.origin)},
          {"angle", r.angle},
          {"length", r.length},
          {"width", r.width},
          {"corners", corners}};
}

Json to_json(const Strip& s) {
  return {{"anchor", to_json(s.line.anchor)}, {"theta", s.line.theta}, {"width", s.width}};
}

Json point_set_summary(const PointSet& points) {
  Json params = Json::object();
  for (const auto& [k, v] : points.params()) params[k] = v;
  return {{"n", points.size()},
          {"generator", to_string(points.generator())},
          {"seed", points.seed()},
          {"params", params},
          {"exact", points.exact().has_value()}};
}

Json to_json(const TriangleWitness& w) {
  Json j{{"indices", w.indices}, {"area", w.area}};
  if (w.exact_area) j["exact_area"] = to_string(*w.exact_area);
  return j;
}

Json to_json(const ScaleProfile& profile) {
  Json entries = Json::array();
  for (const auto& e : profile.entries) {
    Json row{{"w", e.w},       {"I", e.incidences}, {"B", e.normalized},
             {"M_P", e.m_points}, {"M_L", e.m_lines},   {"Err", e.err}};
    row["ratio"] = e.ratio ? Json(*e.ratio) : Json(nullptr);
    entries.push_back(row);
  }
  return {{"ladder", profile.ladder},
          {"point_count", profile.point_count},
          {"line_count", profile.line_count},
          {"tube_divisor", profile.tube_divisor},
          {"entries", entries}};
}

Json to_json(const HighLowResult& r) {
  Json list = Json::array();
  for (const auto& [w, ratio] : r.ratios) list.push_back({{"w", w}, {"ratio", ratio}});
  return {{"max_ratio", r.max_ratio}, {"ratios", list}};
}

Json to_json(const RegularityCertificate& c) {
  return {{"region", to_json(c.region)},
          {"s", c.s},
          {"delta", c.delta},
          {"constant", c.constant},
          {"bound", c.bound},
          {"family_slack", c.family_slack},
          {"population", c.population},
          {"worst_witness", {{"unit_square", to_json(c.worst_witness)}, {"count", c.witness_count}}}};
}

Json to_json(const SquareExtraction& e) {
  return {{"square", to_json(e.square)},
          {"subset_size", e.subset.size()},
          {"subset", e.subset},
          {"objective", e.objective},
          {"certificate", to_json(e.certificate)},
          {"pigeonhole",
           {{"lhs", e.pigeonhole.lhs}, {"rhs", e.pigeonhole.rhs}, {"c", e.pigeonhole.c}, {"passes", e.pigeonhole.passes}}}};
}

Json to_json(const CoverReport& r) {
  Json regions = Json::array();
  for (const auto& reg : r.regions)
    regions.push_back({{"square", to_json(reg.square)},
                       {"subset_size", reg.subset.size()},
                       {"subset", reg.subset},
                       {"certificate", to_json(reg.certificate)}});
  return {{"regions", regions},
          {"n1", r.n1},
          {"u", r.u_low},
          {"covered", r.covered},
          {"rounds", r.rounds},
          {"bucket_size", r.bucket_size},
          {"degree", r.degree},
          {"measured_C", r.measured_c}};
}

Json to_json(const RectangleExtraction& e) {
  Json strips = Json::array();
  for (const auto& s : e.strips) strips.push_back({{"w", s.w}, {"fraction", s.fraction}, {"target", s.target}});
  return {{"rectangle", to_json(e.rectangle)},
          {"orientation_index", e.orientation_index},
          {"subset_size", e.subset.size()},
          {"subset", e.subset},
          {"objective", e.objective},
          {"certificate", to_json(e.certificate)},
          {"strips", strips}};
}

Json to_json(const DirectionRegularity& d) {
  return {{"K_hat", d.k_hat}, {"worst_interval", {{"start", d.start}, {"length", d.length}, {"count", d.count}}}};
}

Json to_json(const TubeConcentration& t) {
  return {{"max_fraction", t.max_fraction}, {"count", t.tube.count}, {"tube", to_json(t.tube.tube)}};
}

Json to_json(const ConcentrationStats& s) {
  return {{"mu_P", s.mu_p},
          {"mu_P_underlying", s.mu_p_underlying},
          {"mu_L", s.mu_l},
          {"eta", s.eta_angle},
          {"w_f", s.w_f},
          {"c0", s.c0},
          {"pencil_count", s.pencil_count},
          {"pencil_size", s.pencil_size},
          {"worst_pencil", s.worst_pencil},
          {"gate", {{"lhs", s.gate_lhs}, {"rhs", s.gate_rhs}, {"passes", s.gate_passes}}},
          {"reduced", {{"w_f", s.reduced_lhs}, {"sqrt_eta_over_P", s.reduced_rhs}}}};
}

Json to_json(const DeltaBound& b) {
  return {{"first", b.first},
          {"second", b.second},
          {"raw_rhs", b.raw_rhs},
          {"constant", b.constant},
          {"delta", b.delta}};
}

Json to_json(const ExponentReport& r) {
  Json params{{"gamma0", r.params.gamma0},
              {"s2", r.params.s2},
              {"alpha", r.params.alpha},
              {"beta", r.params.beta},
              {"ell", r.params.ell()}};
  Json feas = Json::object();
  for (const auto& [name, ok] : r.feasibility) feas[name] = ok;
  Json j{{"params", params},
         {"case_bounds", r.bounds},
         {"guaranteed", r.guaranteed},
         {"margin", r.margin},
         {"active_cases", r.active_cases},
         {"tight_constraints", r.tight_constraints},
         {"feasibility", feas}};
  if (r.exact_bounds) {
    Json exact = Json::array();
    for (const auto& b : *r.exact_bounds) exact.push_back(to_string(b));
    j["exact"] = {{"gamma0", to_string(r.exact_params->gamma0)},
                  {"s2", to_string(r.exact_params->s2)},
                  {"alpha", to_string(r.exact_params->alpha)},
                  {"beta", to_string(r.exact_params->beta)},
                  {"case_bounds", exact},
                  {"guaranteed", to_string(*r.exact_guaranteed)},
                  {"margin", to_string(*r.exact_margin)}};
  }
  return j;
}

Gate make_gate(std::string name, double lhs, std::string relation, double rhs) {
  bool ok = false;
  if (relation == "<=") ok = lhs <= rhs;
  else if (relation == "<") ok = lhs < rhs;
  else if (relation == ">=") ok = lhs >= rhs;
  else if (relation == ">") ok = lhs > rhs;
  else throw DomainError(ErrorKind::OutOfRange, "unknown relation " + relation);
  return {std::move(name), lhs, std::move(relation), rhs, ok};
}

Json to_json(const Gate& g) {
  return {{"name", g.name}, {"lhs", g.lhs}, {"relation", g.relation}, {"rhs", g.rhs}, {"passes", g.passes}};
}

}  // namespace heilbronn
