#include <doctest.h>

#include <cmath>

#include "heilbronn/configs.hpp"
#include "heilbronn/error.hpp"
#include "heilbronn/incidence.hpp"
#include "oracles.hpp"

using namespace heilbronn;

namespace {

std::vector<Line> lines_of(const LineSet& L) { return L.lines; }

LineSet single(Line l) {
  LineSet L;
  L.lines.push_back(l);
  return L;
}

}  // namespace

TEST_CASE("eta profile") {
  CHECK(eta(0.0) == 1.0);
  CHECK(eta(0.4) == 1.0);
  CHECK(eta(0.7) == 0.0);
  CHECK(eta(0.6) == 0.0);
  CHECK(eta(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (double t = 0.0; t <= 0.8; t += 1e-4) {
    CHECK(eta(t) == eta(-t));
    CHECK(eta(t) <= prev);
    CHECK(prev - eta(t) < 2e-3);  // no jumps
    prev = eta(t);
  }
}

TEST_CASE("smoothed incidences of a single pair") {
  const PointSet P({{0.3, 0.4}});
  const auto on = single(make_line({0.1, 0.4}, 0.0));
  for (double w : {0.5, 0.01, 1e-6}) {
    const auto c = smoothed_incidences(w, P, on);
    CHECK(c.incidences == 1.0);
    CHECK(c.normalized == doctest::Approx(1.0 / w).epsilon(1e-15));
  }
  const double w = 0.05;
  const auto off = single(make_line({0.1, 0.4 + 0.6 * w}, 0.0));
  CHECK(smoothed_incidences(w, P, off).incidences == 0.0);
  CHECK_THROWS_AS(smoothed_incidences(w, PointSet{}, on), DomainError);
  CHECK_THROWS_AS(smoothed_incidences(w, P, LineSet{}), DomainError);
}

TEST_CASE("hard count sandwich on the st example") {
  const auto st = gen_st_example(30, false, 0);
  const auto P = oracle::copy(st.points);
  const auto L = lines_of(st.lines);
  const double n = static_cast<double>(P.size());
  for (double w : {0.1, 0.01, std::pow(n, -2.0 / 3), 1e-3}) {
    const double I = smoothed_incidences(w, st.points, st.lines).incidences;
    CHECK(static_cast<double>(oracle::hard_count(0.8 * w, P, L)) <= I);
    CHECK(I <= static_cast<double>(oracle::hard_count(1.2 * w, P, L)));
    CHECK(hard_count(0.8 * w, st.points, st.lines) == oracle::hard_count(0.8 * w, P, L));
  }
}

TEST_CASE("incidences grow with w") {
  const auto P = gen_uniform(200, 3);
  const auto L = lines_from_pairs(P, 0.1);
  double prev = 0.0;
  for (double w = 1e-4; w < 0.5; w *= 1.7) {
    const double I = smoothed_incidences(w, P, L).incidences;
    CHECK(I >= prev);
    prev = I;
  }
}

TEST_CASE("point concentration") {
  const PointSet tight({{0.5, 0.5}, {0.51, 0.5}, {0.5, 0.51}, {0.9, 0.9}});
  CHECK(concentration_points(tight, 0.05) == 3);
  CHECK(concentration_points(gen_jittered_grid(100, 0.0, 0), 0.05) == 1);

  const auto U = gen_uniform(1000, 0);
  CHECK(concentration_points(U, 0.1) == oracle::anchored_window_max(oracle::copy(U), 0.1));

  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto V = gen_uniform(300, s);
    for (double w : {0.02, 0.07, 0.3}) {
      const auto win = max_points_window(V.points(), w);
      CHECK(win.count == oracle::anchored_window_max(oracle::copy(V), w));
      CHECK(oracle::count_in(oracle::copy(V), win.square.x0, win.square.y0, w) == win.count);
    }
  }
}

TEST_CASE("point concentration on a 2000-point set") {
  const auto U = gen_uniform(2000, 7);
  for (double w : {0.01, 0.05})
    CHECK(concentration_points(U, w) == oracle::anchored_window_max(oracle::copy(U), w));
}

TEST_CASE("tube family size and covering") {
  for (double w : {0.1, 0.03}) {
    const TubeFamily f(w);
    const double expected = 4e4 / (w * w);
    CHECK(static_cast<double>(f.size()) <= 8 * expected);
    CHECK(static_cast<double>(f.size()) >= expected / 8);
    CHECK(f.member_width() == doctest::Approx(w / 2));
  }

  const auto R = gen_uniform(400, 13);
  for (std::size_t i = 0; i + 1 < R.size(); i += 2) {
    const double w = 0.01 + 0.2 * R[i + 1].y;
    const TubeFamily f(w);
    const Line l = make_line(R[i], R[i + 1].x * kPi);
    const Strip T{l, w};
    const auto [j, k] = f.nearest(l);
    const Strip member = f.tube(j, k);
    CHECK(line_in_tube(l, member));
    CHECK(tube_in_tube(member, T));
  }
}

TEST_CASE("line concentration") {
  LineSet same;
  for (int i = 0; i < 7; ++i) same.lines.push_back(make_line({0.2 + 0.1 * i, 0.3 + 0.1 * i}, kPi / 4));
  CHECK(concentration_lines(same, TubeFamily(0.05)) == 7);

  LineSet cross;
  cross.lines.push_back(make_line({0.5, 0.5}, 0.0));
  cross.lines.push_back(make_line({0.5, 0.5}, kPi / 2));
  CHECK(concentration_lines(cross, TubeFamily(0.01)) == 1);

  const auto st = gen_st_example(30, false, 0);
  const double n = static_cast<double>(st.points.size());
  const double w = 1 / std::sqrt(n);
  const double ml = static_cast<double>(concentration_lines(st.lines, TubeFamily(w)));
  const double model = std::max(1.0, w * w * static_cast<double>(st.lines.size()));
  MESSAGE("st M_L at n^-1/2: " << ml << " model " << model);
  CHECK(ml <= 4 * model);
  CHECK(ml >= model / 4);
}

TEST_CASE("line and point concentration match a full family scan") {
  const auto P = gen_uniform(120, 17);
  const auto L = lines_from_pairs(P, 0.25);
  for (double w : {0.3, 0.15}) {
    const TubeFamily f(w, 10);
    CHECK(max_lines_in_tube(L, f).count == oracle::family_max_lines(lines_of(L), f));
    CHECK(max_points_in_tube(P.points(), f).count == oracle::family_max_points(oracle::copy(P), f));
  }
  // the reported tube really holds that many lines
  const TubeFamily f(0.2, 10);
  const auto t = max_lines_in_tube(L, f);
  std::size_t c = 0;
  for (const auto& l : L.lines)
    if (line_in_tube(l, t.tube)) ++c;
  CHECK(c == t.count);
}

TEST_CASE("error term") {
  CHECK(err_term(0.1, 1, 1, 1000, 1000) == doctest::Approx(std::sqrt(1e-6 * 1e3)).epsilon(1e-12));
  CHECK(err_term(0.1, 1, 1, 1000, 1000) == doctest::Approx(0.0316228).epsilon(1e-6));
  CHECK(err_term(0.05, 3, 2, 500, 700) / err_term(0.1, 3, 2, 500, 700) ==
        doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));
  CHECK_THROWS_AS(err_term(0.0, 1, 1, 1, 1), DomainError);

  const auto st = gen_st_example(30, false, 0);
  const double n = static_cast<double>(st.points.size());
  const double w = std::pow(n, -2.0 / 3);
  const auto e = profile_entry(st.points, st.lines, w);
  const double model = std::max(std::sqrt(w), 1 / (n * std::pow(w, 1.5)));
  MESSAGE("st Err at n^-2/3: " << e.err << " model " << model);
  CHECK(e.err <= 8 * model);
  CHECK(e.err >= model / 8);
}

TEST_CASE("scale profile structure") {
  const auto P = gen_uniform(300, 2);
  const auto L = lines_from_pairs(P, 0.1);
  const auto prof = scale_profile(P, L, 0.1, 1e-3, 10);
  REQUIRE(prof.entries.size() == 3);
  CHECK(prof.entries[0].w == doctest::Approx(0.1));
  CHECK(prof.entries[1].w == doctest::Approx(0.01));
  CHECK(prof.entries[2].w == doctest::Approx(0.001));
  for (const auto& e : prof.entries) {
    const double B = e.incidences / (e.w * 300.0 * static_cast<double>(L.size()));
    CHECK(std::abs(e.normalized - B) <= 1e-12 * B);
    const double err = std::sqrt(static_cast<double>(e.m_points) / 300.0 * static_cast<double>(e.m_lines) /
                                 static_cast<double>(L.size()) / (e.w * e.w * e.w));
    CHECK(std::abs(e.err - err) <= 1e-12 * err);
    CHECK(e.m_points == concentration_points(P, e.w));
  }
  REQUIRE(prof.entries[0].ratio.has_value());
  CHECK(*prof.entries[0].ratio ==
        doctest::Approx(std::abs(prof.entries[0].normalized - prof.entries[1].normalized) / prof.entries[0].err));
  CHECK_FALSE(prof.entries[2].ratio.has_value());

  const auto two = scale_profile(P, L, 0.1, 0.01, 2);
  CHECK(two.entries.size() == 4);  // 0.1, 0.05, 0.025, 0.0125
  CHECK_THROWS_AS(scale_profile(P, L, 0.5, 1e-30, 2), DomainError);
  CHECK_THROWS_AS(scale_profile(P, L, 0.1, 0.2, 10), DomainError);

  const std::string csv = profile_csv(prof);
  CHECK(csv.rfind("w,I,B,M_P,M_L,Err,ratio\n", 0) == 0);
}

TEST_CASE("st profile shape") {
  const auto st = gen_st_example(30, false, 0);
  const double n = static_cast<double>(st.points.size());
  const double w_min = std::pow(n, -2.0 / 3) / 10;
  const auto prof = scale_profile(st.points, st.lines, 0.1, w_min, 10);
  for (const auto& e : prof.entries) {
    if (e.w < 4 * std::pow(n, -2.0 / 3)) continue;
    const double model = std::max(1.0, std::pow(n, -2.0 / 3) / e.w);
    CHECK(e.normalized <= 8 * model);
    CHECK(e.normalized >= model / 8);
  }
  const auto hl = highlow_ratio(prof);
  MESSAGE("st max high-low ratio: " << hl.max_ratio);
  CHECK(hl.max_ratio <= 100);

  // geometric sum over K = 10^j
  for (std::size_t i = 0; i < prof.entries.size(); ++i)
    for (std::size_t j = i + 1; j < prof.entries.size(); ++j) {
      const double K = std::pow(10.0, static_cast<double>(j - i));
      const double diff = std::abs(prof.entries[i].normalized - prof.entries[j].normalized);
      CHECK(diff <= 2 * std::pow(K, 1.5) * hl.max_ratio * prof.entries[i].err * (1 + 1e-12));
    }
}

TEST_CASE("perturbed st example has no fine incidences") {
  const auto st = gen_st_example(30, true, 0);
  const double n = static_cast<double>(st.points.size());
  CHECK(smoothed_incidences(std::pow(n, -2.0 / 3) / 4, st.points, st.lines).incidences == 0.0);
}

TEST_CASE("high-low ratio") {
  const auto P = gen_uniform(100, 1);
  const auto empty = scale_profile(P, LineSet{}, 0.1, 1e-3, 10);
  const auto hl = highlow_ratio(empty);
  CHECK(hl.max_ratio == 0.0);
  for (const auto& [w, r] : hl.ratios) CHECK(r == 0.0);

  const auto L = lines_from_pairs(P, 0.2);
  CHECK_THROWS_AS(highlow_ratio(scale_profile(P, L, 0.1, 0.01, 2)), DomainError);

  const auto U = gen_uniform(500, 0);
  const auto LU = lines_from_pairs(U, 0.05);
  const double nn = 500;
  const auto r = highlow_ratio(scale_profile(U, LU, 0.1, std::pow(nn, -2.0 / 3), 10));
  CHECK(r.max_ratio <= 100);
}

TEST_CASE("rich line buckets") {
  const PointSet P({{0.1, 0.1}, {0.2, 0.12}, {0.3, 0.09}, {0.8, 0.8}});
  LineSet L;
  L.lines.push_back(make_line({0, 0.5}, 0.0));  // no points nearby
  L.lines.push_back(make_line({0, 0.1}, 0.0));
  const auto b = rich_line_buckets(P, L, 0.1);
  REQUIRE(b.empty.size() == 1);
  CHECK(b.empty[0] == 0);

  // all of P inside one strip
  const PointSet Q({{0.1, 0.5}, {0.4, 0.5}, {0.7, 0.5}});
  const double w = 0.05;
  const auto c = rich_line_buckets(Q, single(make_line({0, 0.5}, 0.0)), w);
  REQUIRE(c.buckets.size() == 1);
  CHECK(std::ldexp(1.0, c.buckets.begin()->first) >= 1 / w);

  const auto st = gen_st_example(30, false, 0);
  const auto sb = rich_line_buckets(st.points, st.lines, 0.01);
  std::size_t total = sb.empty.size();
  for (const auto& [j, idx] : sb.buckets) {
    total += idx.size();
    for (std::size_t l : idx) {
      std::size_t c = 0;
      for (const auto& p : st.points.points())
        if (oracle::normal_form_distance(p, st.lines.lines[l]) < 0.005) ++c;
      const double r = static_cast<double>(c) / (0.01 * static_cast<double>(st.points.size()));
      CHECK(r >= std::ldexp(1.0, j - 1));
      CHECK(r < std::ldexp(1.0, j));
    }
  }
  CHECK(total == st.lines.size());
}

TEST_CASE("sandwich and monotonicity on random triples") {
  for (std::uint64_t s = 0; s < 12; ++s) {
    const auto P = gen_uniform(40 + 10 * s, 100 + s);
    const auto L = lines_from_pairs(P, 0.3);
    const auto pv = oracle::copy(P);
    const double w = 0.002 * static_cast<double>(s + 1);
    const double I = smoothed_incidences(w, P, L).incidences;
    CHECK(static_cast<double>(oracle::hard_count(0.8 * w, pv, L.lines)) <= I);
    CHECK(I <= static_cast<double>(oracle::hard_count(1.2 * w, pv, L.lines)));
  }
}
