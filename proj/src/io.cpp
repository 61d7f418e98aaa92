#include "heilbronn/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heilbronn/error.hpp"

namespace heilbronn {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::map<std::string, std::string> parse_header(const std::string& line, const std::string& magic) {
  std::istringstream ss(line);
  std::string hash, name, version;
  ss >> hash >> name >> version;
  if (hash != "#" || name != magic || version != "v1")
    throw DomainError(ErrorKind::Parse, "expected '# " + magic + " v1' header");
  std::map<std::string, std::string> kv;
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw DomainError(ErrorKind::Parse, "malformed header field '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError(ErrorKind::Parse, "not an unsigned integer: '" + s + "'");
  }
}

bool content_line(std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return false;
  return line[first] != '#';
}

}  // namespace

void write_points(std::ostream& out, const PointSet& points) {
  out << "# heilbronn-points v1 n=" << points.size() << " generator=" << to_string(points.generator())
      << " seed=" << points.seed() << '\n';
  for (const Point& p : points.points()) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
}

std::string points_to_string(const PointSet& points) {
  std::ostringstream ss;
  write_points(ss, points);
  return ss.str();
}

PointSet read_points(std::istream& in, bool exact) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError(ErrorKind::Parse, "empty points file");
  const auto header = parse_header(line, "heilbronn-points");
  const std::size_t n = header.count("n") ? parse_u64(header.at("n")) : 0;
  const Generator gen = header.count("generator") ? parse_generator(header.at("generator")) : Generator::File;
  const std::uint64_t seed = header.count("seed") ? parse_u64(header.at("seed")) : 0;
  std::vector<Point> pts;
  while (std::getline(in, line)) {
    if (!content_line(line)) continue;
    std::istringstream ss(line);
    Point p;
    std::string extra;
    if (!(ss >> p.x >> p.y) || (ss >> extra)) throw DomainError(ErrorKind::Parse, "bad point line '" + line + "'");
    pts.push_back(p);
  }
  if (header.count("n") && pts.size() != n)
    throw DomainError(ErrorKind::Parse, "header declares " + std::to_string(n) + " points, file has " +
                                            std::to_string(pts.size()));
  std::optional<LatticeShadow> shadow;
  if (exact) {
    shadow = rationalize(pts, 1000000);
    if (!shadow) throw DomainError(ErrorKind::NotRational, "coordinates have no small-denominator form");
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = shadow->point(i);
  }
  return PointSet(std::move(pts), gen, seed, {}, std::move(shadow));
}

PointSet read_points_file(const std::string& path, bool exact) {
  std::ifstream in(path);
  if (!in) throw DomainError(ErrorKind::Io, "cannot open " + path);
  return read_points(in, exact);
}

void write_lines(std::ostream& out, const LineSet& lines) {
  out << "# heilbronn-lines v1 n=" << lines.size() << " source_n=" << lines.source_size << '\n';
  for (const Line& l : lines.lines) {
    out << format_double(l.anchor.x) << ' ' << format_double(l.anchor.y) << ' ' << format_double(l.theta);
    if (l.provenance) out << ' ' << l.provenance->first << ' ' << l.provenance->second;
    out << '\n';
  }
}

std::string lines_to_string(const LineSet& lines) {
  std::ostringstream ss;
  write_lines(ss, lines);
  return ss.str();
}

LineSet read_lines(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError(ErrorKind::Parse, "empty lines file");
  const auto header = parse_header(line, "heilbronn-lines");
  LineSet out;
  if (header.count("source_n")) out.source_size = parse_u64(header.at("source_n"));
  while (std::getline(in, line)) {
    if (!content_line(line)) continue;
    std::istringstream ss(line);
    Point a;
    double theta = 0.0;
    if (!(ss >> a.x >> a.y >> theta)) throw DomainError(ErrorKind::Parse, "bad line record '" + line + "'");
    Line l = make_line(a, theta);
    std::size_t i = 0, j = 0;
    if (ss >> i) {
      if (!(ss >> j)) throw DomainError(ErrorKind::Parse, "provenance needs two indices: '" + line + "'");
      l.provenance = std::make_pair(i, j);
    }
    out.lines.push_back(l);
  }
  if (header.count("n") && out.lines.size() != parse_u64(header.at("n")))
    throw DomainError(ErrorKind::Parse, "line count does not match header");
  out.validate();
  return out;
}

LineSet read_lines_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError(ErrorKind::Io, "cannot open " + path);
  return read_lines(in);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw DomainError(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw DomainError(ErrorKind::Io, "rename to " + path + " failed: " + ec.message());
}

}  // namespace heilbronn
