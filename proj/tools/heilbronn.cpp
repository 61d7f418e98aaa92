#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heilbronn/error.hpp"
#include "heilbronn/exponents.hpp"
#include "heilbronn/incidence.hpp"
#include "heilbronn/io.hpp"
#include "heilbronn/parallel.hpp"
#include "heilbronn/pipeline.hpp"
#include "heilbronn/regularity.hpp"
#include "heilbronn/report.hpp"
#include "heilbronn/triangles.hpp"

using namespace heilbronn;

namespace {

struct Common {
  unsigned threads = 0;
  bool deterministic = true;
  std::string out;
};

// Point input plus an optional line source: a lines file or pair lines at distance <= u.
struct Inputs {
  std::string points;
  std::string lines;
  double pair_u = 0.0;
  bool exact = false;
};

void emit(const Common& common, const std::string& command, Json config, Json result) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  config["threads"] = common.threads;
  config["deterministic"] = common.deterministic;
  doc["config"] = std::move(config);
  doc["result"] = std::move(result);
  if (!common.deterministic) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["timestamp_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  }
  const std::string text = doc.dump(2) + "\n";
  if (common.out.empty() || common.out == "-") std::cout << text;
  else write_file_atomic(common.out, text);
}

LineSet load_lines(const Inputs& in, const PointSet& points) {
  if (!in.lines.empty()) {
    LineSet lines = read_lines_file(in.lines);
    lines.validate(&points);
    return lines;
  }
  if (in.pair_u > 0.0) return lines_from_pairs(points, in.pair_u);
  throw DomainError(ErrorKind::EmptySets, "need --lines or --pair-u");
}

Json input_config(const Inputs& in) {
  Json j{{"in", in.points}};
  if (!in.lines.empty()) j["lines"] = in.lines;
  else j["pair_u"] = in.pair_u;
  return j;
}

void add_line_source(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--in", in.points, "points file")->required();
  auto* lines = cmd->add_option("--lines", in.lines, "lines file");
  cmd->add_option("--pair-u", in.pair_u, "use lines through point pairs at distance <= u")->excludes(lines);
}

// Every line goes to the closest center; the pencil check then rejects lines
// that are far from all of them.
LineSet group_by_centers(LineSet lines, const PointSet& centers) {
  lines.groups.assign(lines.size(), 0);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = point_line_distance(centers[c], lines.lines[i]);
      if (d < best) {
        best = d;
        lines.groups[i] = static_cast<std::int64_t>(c);
      }
    }
  }
  return lines;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heilbronn triangle lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--threads", common.threads, "worker cap (0 = all cores); results do not depend on it");
  app.add_flag("--deterministic,!--no-deterministic", common.deterministic, "omit timestamps (default on)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a configuration");
  std::string kind;
  std::int64_t p = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double jitter = 0.4;
  int st_k = 30;
  bool perturb = false;
  std::string gen_out, lines_out;
  gen->add_option("--kind", kind)->required()->check(CLI::IsMember({"erdos", "uniform", "jittered", "st"}));
  gen->add_option("--p", p, "prime for erdos");
  gen->add_option("--n", n, "point count for uniform / jittered");
  gen->add_option("--seed", seed);
  gen->add_option("--jitter", jitter);
  gen->add_option("--k", st_k, "grid side for st");
  gen->add_flag("--perturb", perturb);
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--lines-out", lines_out, "st lines file");

  // min-triangle
  auto* mt = app.add_subcommand("min-triangle", "minimum triangle area");
  Inputs mt_in;
  std::string method = "fast";
  mt->add_option("--in", mt_in.points)->required();
  mt->add_flag("--exact", mt_in.exact, "exact rational areas (implies brute force)");
  mt->add_option("--method", method)->check(CLI::IsMember({"fast", "brute"}));
  mt->add_option("--out", common.out);

  // profile / highlow
  Inputs pr_in;
  double w_max = 0.1, w_min = 0.001;
  int ladder = 10, divisor = 100;
  std::string csv_out;
  auto* profile = app.add_subcommand("profile", "multiscale incidence profile");
  add_line_source(profile, pr_in);
  profile->add_option("--w-max", w_max);
  profile->add_option("--w-min", w_min);
  profile->add_option("--ladder", ladder)->check(CLI::IsMember({2, 10}));
  profile->add_option("--divisor", divisor, "tube family step divisor");
  profile->add_option("--csv", csv_out);
  profile->add_option("--out", common.out);
  auto* highlow = app.add_subcommand("highlow", "high-low ratios on the factor-10 ladder");
  add_line_source(highlow, pr_in);
  highlow->add_option("--w-max", w_max);
  highlow->add_option("--w-min", w_min);
  highlow->add_option("--divisor", divisor);
  highlow->add_option("--out", common.out);

  // extract
  auto* extract = app.add_subcommand("extract", "regular squares, covers and rectangles");
  std::string mode = "square";
  std::string ex_in;
  double s = 1.0, u_min = 0.0, u_max = 0.25, eps = 0.05, area_floor = 0.0;
  extract->add_option("--in", ex_in)->required();
  extract->add_option("--mode", mode)->check(CLI::IsMember({"square", "cover", "rectangle"}));
  extract->add_option("--s", s);
  extract->add_option("--u-min", u_min, "0 = n^-1/2");
  extract->add_option("--u-max", u_max);
  extract->add_option("--eps", eps);
  extract->add_option("--area-floor", area_floor, "0 = 1/n");
  extract->add_option("--out", common.out);

  // directions
  auto* directions = app.add_subcommand("directions", "direction regularity of a line set");
  Inputs dir_in;
  double sigma = 0.95, delta = 0.0, max_length = M_PI;
  add_line_source(directions, dir_in);
  directions->add_option("--sigma", sigma);
  directions->add_option("--delta", delta, "0 = |L|^-1");
  directions->add_option("--max-length", max_length);
  directions->add_option("--out", common.out);

  // pencil
  auto* pencil = app.add_subcommand("pencil", "pencil concentration statistics");
  Inputs pen_in;
  std::string centers_path;
  double w_f = 0.1, eta_angle = 0.1, c0 = 1.0;
  add_line_source(pencil, pen_in);
  pencil->add_option("--centers", centers_path, "points file of pencil centers")->required();
  pencil->add_option("--w-f", w_f);
  pencil->add_option("--eta", eta_angle);
  pencil->add_option("--c0", c0);
  pencil->add_option("--out", common.out);

  // exponents
  auto* exps = app.add_subcommand("exponents", "exponent system");
  std::string gamma0 = "8/7", s2 = "21/22", a = "0", b = "0";
  std::optional<std::string> alpha, beta;
  bool do_optimize = false;
  int rounds = 0;
  double resolution = 1e-3;
  std::vector<double> s2_grid;
  exps->add_option("--gamma0", gamma0);
  exps->add_option("--s2", s2);
  exps->add_option("--a", a, "alpha = 3/7 + a");
  exps->add_option("--b", b, "beta = 4/7 - b");
  exps->add_option("--alpha", alpha);
  exps->add_option("--beta", beta);
  exps->add_flag("--optimize", do_optimize);
  exps->add_option("--s2-grid", s2_grid, "s2 values for --optimize (default 0.51.. up to the cap)");
  exps->add_option("--iterate", rounds, "fixed-point rounds starting from gamma0");
  exps->add_option("--resolution", resolution);
  exps->add_option("--out", common.out);

  // pipelines
  std::string pl_in;
  double pl_eps = 0.05;
  KpsOptions kps;
  HomogeneousOptions hom;
  auto add_constants = [](CLI::App* cmd, ChainConstants& c) {
    cmd->add_option("--c0", c.c0);
    cmd->add_option("--c-hyp", c.hypothesis);
    cmd->add_option("--c-dir", c.direction);
    cmd->add_option("--c-highlow", c.highlow);
    cmd->add_option("--c-delta", c.delta);
  };
  auto* pk = app.add_subcommand("pipeline-kps", "measured regularity chain");
  pk->add_option("--in", pl_in)->required();
  pk->add_option("--eps", pl_eps);
  pk->add_option("--u-max", kps.u_max);
  pk->add_option("--u-min", kps.u_min);
  pk->add_option("--divisor", kps.tube_divisor);
  add_constants(pk, kps.constants);
  pk->add_option("--out", common.out);
  auto* ph = app.add_subcommand("pipeline-homogeneous", "cell scheme for homogeneous sets");
  ph->add_option("--in", pl_in)->required();
  ph->add_option("--eps", pl_eps);
  ph->add_option("--homogeneity-limit", hom.homogeneity_limit);
  ph->add_option("--divisor", hom.tube_divisor);
  add_constants(ph, hom.constants);
  ph->add_option("--out", common.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_max_threads(common.threads);
  try {
    if (gen->parsed()) {
      PointSet pts;
      LineSet lines;
      Json cfg{{"kind", kind}, {"seed", seed}, {"out", gen_out}};
      if (kind == "erdos") {
        pts = gen_erdos(p);
        cfg["p"] = p;
      } else if (kind == "uniform") {
        pts = gen_uniform(n, seed);
        cfg["n"] = n;
      } else if (kind == "jittered") {
        pts = gen_jittered_grid(n, jitter, seed);
        cfg["n"] = n;
        cfg["jitter"] = jitter;
      } else {
        auto st = gen_st_example(st_k, perturb, seed);
        pts = std::move(st.points);
        lines = std::move(st.lines);
        cfg["k"] = st_k;
        cfg["perturb"] = perturb;
      }
      write_file_atomic(gen_out, points_to_string(pts));
      if (!lines_out.empty()) {
        write_file_atomic(lines_out, lines_to_string(lines));
        cfg["lines_out"] = lines_out;
      }
      Json res = point_set_summary(pts);
      if (!lines.empty()) res["line_count"] = lines.size();
      emit(common, "gen", cfg, res);
    } else if (mt->parsed()) {
      const PointSet pts = read_points_file(mt_in.points, mt_in.exact);
      const bool brute = mt_in.exact || method == "brute";
      const TriangleWitness w = brute ? min_triangle_brute(pts, mt_in.exact) : min_triangle_fast(pts);
      Json res = to_json(w);
      res["points"] = point_set_summary(pts);
      emit(common, "min-triangle", {{"in", mt_in.points}, {"exact", mt_in.exact}, {"method", brute ? "brute" : "fast"}},
           res);
    } else if (profile->parsed() || highlow->parsed()) {
      const bool hl = highlow->parsed();
      const PointSet pts = read_points_file(pr_in.points);
      const LineSet lines = load_lines(pr_in, pts);
      const ScaleProfile prof = scale_profile(pts, lines, w_max, w_min, hl ? 10 : ladder, divisor);
      Json cfg = input_config(pr_in);
      cfg["w_max"] = w_max;
      cfg["w_min"] = w_min;
      cfg["ladder"] = hl ? 10 : ladder;
      cfg["divisor"] = divisor;
      if (hl) {
        Json res = to_json(highlow_ratio(prof));
        res["profile"] = to_json(prof);
        emit(common, "highlow", cfg, res);
      } else {
        if (!csv_out.empty()) {
          write_file_atomic(csv_out, profile_csv(prof));
          cfg["csv"] = csv_out;
        }
        emit(common, "profile", cfg, to_json(prof));
      }
    } else if (extract->parsed()) {
      const PointSet pts = read_points_file(ex_in);
      const double nn = static_cast<double>(pts.size());
      const double lo = u_min > 0.0 ? u_min : 1.0 / std::sqrt(std::max(1.0, nn));
      Json cfg{{"in", ex_in}, {"mode", mode}};
      Json res;
      if (mode == "square") {
        res = to_json(extract_square(pts, s, lo, u_max));
        cfg.update({{"s", s}, {"u_min", lo}, {"u_max", u_max}});
      } else if (mode == "cover") {
        res = to_json(extract_cover(pts, s, lo, u_max));
        cfg.update({{"s", s}, {"u_min", lo}, {"u_max", u_max}});
      } else {
        const double floor = area_floor > 0.0 ? area_floor : 1.0 / std::max(1.0, nn);
        res = to_json(extract_rectangle(pts, s, eps, floor));
        cfg.update({{"s2", s}, {"eps", eps}, {"area_floor", floor}});
      }
      emit(common, "extract", cfg, res);
    } else if (directions->parsed()) {
      const PointSet pts = read_points_file(dir_in.points);
      const LineSet lines = load_lines(dir_in, pts);
      const double d = delta > 0.0 ? delta : 1.0 / static_cast<double>(std::max<std::size_t>(1, lines.size()));
      Json cfg = input_config(dir_in);
      cfg.update({{"sigma", sigma}, {"delta", d}, {"max_length", max_length}});
      Json res = to_json(direction_regularity(lines, sigma, d, max_length));
      res["line_count"] = lines.size();
      emit(common, "directions", cfg, res);
    } else if (pencil->parsed()) {
      const PointSet pts = read_points_file(pen_in.points);
      const PointSet centers = read_points_file(centers_path);
      const LineSet lines = group_by_centers(load_lines(pen_in, pts), centers);
      Json cfg = input_config(pen_in);
      cfg.update({{"centers", centers_path}, {"w_f", w_f}, {"eta", eta_angle}, {"c0", c0}});
      emit(common, "pencil", cfg, to_json(pencil_stats(pts, centers, lines, w_f, eta_angle, c0)));
    } else if (exps->parsed()) {
      Json cfg{{"gamma0", gamma0}, {"resolution", resolution}};
      Json res;
      if (rounds > 0) {
        cfg["iterate"] = rounds;
        Json seq = Json::array();
        for (const auto& r : iterate_fixed_point(to_double(parse_rational(gamma0)), rounds, resolution))
          seq.push_back(to_json(r));
        res = {{"rounds", seq}};
      } else if (do_optimize) {
        const double g0 = to_double(parse_rational(gamma0));
        const auto grid = s2_grid.empty() ? default_s2_grid(g0) : s2_grid;
        cfg["optimize"] = true;
        cfg["s2_grid"] = grid;
        res = to_json(optimize(g0, grid, resolution));
      } else {
        const Rational g0 = parse_rational(gamma0), s2q = parse_rational(s2);
        ExactExponentParams params;
        if (alpha || beta) {
          if (!alpha || !beta) throw DomainError(ErrorKind::InfeasibleParams, "--alpha and --beta go together");
          params = {g0, s2q, parse_rational(*alpha), parse_rational(*beta)};
          cfg.update({{"s2", s2}, {"alpha", *alpha}, {"beta", *beta}});
        } else {
          params = params_from_ab(g0, s2q, parse_rational(a), parse_rational(b));
          cfg.update({{"s2", s2}, {"a", a}, {"b", b}});
        }
        res = to_json(guaranteed_gamma1(params));
      }
      emit(common, "exponents", cfg, res);
    } else if (pk->parsed() || ph->parsed()) {
      const bool is_kps = pk->parsed();
      const PointSet pts = read_points_file(pl_in);
      const PipelineReport rep = is_kps ? pipeline_kps(pts, pl_eps, kps) : pipeline_homogeneous(pts, pl_eps, hom);
      const ChainConstants& c = is_kps ? kps.constants : hom.constants;
      Json cfg{{"in", pl_in},
               {"eps", pl_eps},
               {"constants",
                {{"c0", c.c0}, {"hypothesis", c.hypothesis}, {"direction", c.direction}, {"highlow", c.highlow},
                 {"delta", c.delta}}}};
      if (is_kps) cfg.update({{"u_max", kps.u_max}, {"u_min", kps.u_min}, {"divisor", kps.tube_divisor}});
      else cfg.update({{"homogeneity_limit", hom.homogeneity_limit}, {"divisor", hom.tube_divisor}});
      // GateFailed is a finding, not an error: still exit 0.
      emit(common, is_kps ? "pipeline-kps" : "pipeline-homogeneous", cfg, rep.json);
    }
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
