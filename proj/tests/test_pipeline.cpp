#include <doctest.h>

#include <cmath>
#include <map>

#include "heilbronn/configs.hpp"
#include "heilbronn/error.hpp"
#include "heilbronn/pipeline.hpp"
#include "oracles.hpp"

using namespace heilbronn;

namespace {

bool holds(double lhs, const std::string& rel, double rhs) {
  if (rel == "<=") return lhs <= rhs;
  if (rel == ">=") return lhs >= rhs;
  if (rel == "<") return lhs < rhs;
  if (rel == ">") return lhs > rhs;
  FAIL("unknown relation " << rel);
  return false;
}

// Every gate carries both sides, and its verdict matches them.
void check_gates(const PipelineReport& r) {
  REQUIRE_FALSE(r.gates.empty());
  const auto& js = r.json.at("gates");
  REQUIRE(js.size() == r.gates.size());
  std::vector<std::string> failed;
  for (std::size_t i = 0; i < r.gates.size(); ++i) {
    const auto& g = r.gates[i];
    CHECK_FALSE(g.name.empty());
    CHECK(std::isfinite(g.lhs));
    CHECK(std::isfinite(g.rhs));
    CHECK(g.passes == holds(g.lhs, g.relation, g.rhs));
    CHECK(js[i].at("name") == g.name);
    CHECK(js[i].at("lhs").get<double>() == g.lhs);
    CHECK(js[i].at("rhs").get<double>() == g.rhs);
    CHECK(js[i].at("relation") == g.relation);
    if (!g.passes) failed.push_back(g.name);
  }
  CHECK(r.failed_gates() == failed);
  CHECK(r.json.at("failed_gates").get<std::vector<std::string>>() == failed);
  CHECK(r.json.at("status") == (failed.empty() ? "ok" : "GateFailed"));
  CHECK(r.json.at("schema_version") == 1);
}

const Gate* find_gate(const PipelineReport& r, const std::string& name) {
  for (const auto& g : r.gates)
    if (g.name == name) return &g;
  return nullptr;
}

}  // namespace

TEST_CASE("kps chain on a jittered grid") {
  const auto P = gen_jittered_grid(625, 0.4, 7);
  const auto r = pipeline_kps(P, 0.05);
  check_gates(r);
  REQUIRE(r.has_prediction);
  CHECK(r.actual.area == doctest::Approx(oracle::brute_min_area(oracle::copy(P))).epsilon(1e-12));
  CHECK(r.actual.area <= r.predicted_delta);
  const auto* g = find_gate(r, "actual min area <= predicted delta");
  REQUIRE(g != nullptr);
  CHECK(g->lhs == r.actual.area);
  CHECK(g->rhs == r.predicted_delta);
  CHECK(r.json.at("predicted_delta").get<double>() == r.predicted_delta);
  // the bound on record matches its own inputs
  const auto& b = r.json.at("steps").at("delta_bound");
  const double n = 625, nl = find_gate(r, "|L| > C|P|")->lhs;
  const double u = b.at("u").get<double>(), w = b.at("w").get<double>(), kappa = b.at("kappa").get<double>();
  const double first = std::max(u, std::cbrt(u * u * w)) * std::cbrt(1 / (n * nl)) * std::pow(kappa, -2.0 / 3);
  CHECK(b.at("first").get<double>() == doctest::Approx(first).epsilon(1e-12));
  CHECK(b.at("second").get<double>() == doctest::Approx(u / (n * kappa)).epsilon(1e-12));
}

TEST_CASE("kps chain on erdos 43") {
  const auto P = gen_erdos(43);
  const auto r = pipeline_kps(P, 0.05);
  check_gates(r);
  CHECK(r.actual.area >= 1.0 / (2 * 43 * 43) - 1e-15);
  CHECK(r.actual.area == doctest::Approx(oracle::brute_min_area(oracle::copy(P))).epsilon(1e-12));
  // the size hypothesis is reported, not thrown
  const auto* g = find_gate(r, "|P| >= 500");
  REQUIRE(g != nullptr);
  CHECK_FALSE(g->passes);
  CHECK(g->lhs == 43);
  CHECK(g->rhs == 500);
  if (r.has_prediction) CHECK(r.actual.area <= r.predicted_delta);
}

TEST_CASE("collinear input fails a named gate") {
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({0.1 + 0.02 * i, 0.3 + 0.01 * i});
  const auto r = pipeline_kps(PointSet(pts), 0.05);
  check_gates(r);
  CHECK(r.gate_failed());
  CHECK(r.actual.area == 0.0);
  for (const auto& name : r.failed_gates()) CHECK(find_gate(r, name) != nullptr);
  CHECK(r.json.at("status") == "GateFailed");
}

TEST_CASE("kps rejects bad eps") {
  CHECK_THROWS_AS(pipeline_kps(gen_uniform(50, 0), 0.0), DomainError);
  CHECK_THROWS_AS(pipeline_kps(PointSet({{0.1, 0.1}, {0.2, 0.2}}), 0.05), DomainError);
}

TEST_CASE("homogeneous scheme on a jittered grid") {
  const auto P = gen_jittered_grid(900, 0.3, 2);
  const double n = 900, eps = 0.05;
  const auto r = pipeline_homogeneous(P, eps);
  check_gates(r);
  // dense cells recounted directly
  const double u = std::pow(n, -0.5 + 2 * eps);
  const auto m = static_cast<long>(std::ceil(1 / u - 1e-12));
  std::map<long, std::size_t> cells;
  for (const auto& p : P.points())
    ++cells[std::min(m - 1, static_cast<long>(p.y / u)) * m + std::min(m - 1, static_cast<long>(p.x / u))];
  std::size_t dense = 0, covered = 0;
  for (const auto& [id, c] : cells)
    if (static_cast<double>(c) >= u * u * n / 2) {
      ++dense;
      covered += c;
    }
  const auto& js = r.json.at("steps").at("cells");
  CHECK(js.at("dense_cells").get<std::size_t>() == dense);
  CHECK(js.at("covered").get<std::size_t>() == covered);
  CHECK(static_cast<double>(covered) >= n / 2);
  CHECK(static_cast<double>(dense) >= 1 / (8 * u * u));
  CHECK(static_cast<double>(dense) <= 8 / (u * u));
  REQUIRE(find_gate(r, "pencil concentration mu_P mu_L^2 <= c0 exp(-|log w_f|^0.9) w_f^2 eta") != nullptr);
  REQUIRE(r.has_prediction);
  CHECK(r.actual.area <= r.predicted_delta);
  CHECK(r.json.at("steps").at("homogeneity").at("max_count").get<double>() ==
        static_cast<double>(oracle::anchored_window_max(oracle::copy(P), 1 / std::sqrt(n))));
}

TEST_CASE("clustered input is not homogeneous") {
  std::vector<Point> pts;
  const auto U = gen_uniform(400, 1);
  for (std::size_t i = 0; i < U.size(); ++i) {
    const auto& p = U[i];
    pts.push_back(i < 20 ? Point{0.5 + 0.001 * p.x, 0.5 + 0.001 * p.y} : p);
  }
  try {
    pipeline_homogeneous(PointSet(pts), 0.05);
    FAIL("expected HomogeneityFailed");
  } catch (const DomainError& e) {
    CHECK(e.kind() == ErrorKind::HomogeneityFailed);
  }
}

TEST_CASE("uniform 4096 seed 0 fails homogeneity") {
  const auto U = gen_uniform(4096, 0);
  MESSAGE("max n^-1/2 window count: " << oracle::anchored_window_max(oracle::copy(U), 1.0 / 64));
  bool thrown = false;
  try {
    pipeline_homogeneous(U, 0.05);
  } catch (const DomainError& e) {
    thrown = e.kind() == ErrorKind::HomogeneityFailed;
  }
  CHECK(thrown);
}
