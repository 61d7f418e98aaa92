#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heilbronn/geometry.hpp"
#include "heilbronn/rational.hpp"

namespace heilbronn {

enum class Generator { Erdos, Uniform, JitteredGrid, StGrid, File };

std::string to_string(Generator g);
Generator parse_generator(const std::string& tag);

/// Counter-based source ("splitmix64-counter"): value k of stream `seed` is a
/// pure function of (seed, k), so generation order and threading never change
/// the output.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + 0x9e3779b97f4a7c15ULL * (counter + 1)); }
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
};

/// Configuration of points in the unit square with provenance.
class PointSet {
 public:
  using Params = std::map<std::string, std::string>;

  PointSet() = default;
  /// Validates that every point lies in [0,1]^2 and that no two points are
  /// closer than 1e-15 (DuplicatePoints / OutOfRange otherwise).
  PointSet(std::vector<Point> points, Generator generator = Generator::File, std::uint64_t seed = 0,
           Params params = {}, std::optional<LatticeShadow> exact = std::nullopt);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }
  Generator generator() const { return generator_; }
  std::uint64_t seed() const { return seed_; }
  const Params& params() const { return params_; }
  const std::optional<LatticeShadow>& exact() const { return exact_; }

  PointSet subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<Point> points_;
  Generator generator_ = Generator::File;
  std::uint64_t seed_ = 0;
  Params params_;
  std::optional<LatticeShadow> exact_;
};

struct LineSet {
  std::vector<Line> lines;
  /// Number of points in the originating PointSet (0 when unknown).
  std::size_t source_size = 0;
  /// Optional partition label per line (cell id, pencil id).
  std::vector<std::int64_t> groups;

  std::size_t size() const { return lines.size(); }
  bool empty() const { return lines.empty(); }
  bool grouped() const { return !groups.empty(); }
  /// Checks provenance indices against source_size and the 1e-12 incidence
  /// tolerance when the source points are supplied.
  void validate(const PointSet* source = nullptr) const;
};

bool is_prime(std::int64_t p);

PointSet gen_erdos(std::int64_t p);
PointSet gen_uniform(std::size_t n, std::uint64_t seed);
PointSet gen_jittered_grid(std::size_t n, double jitter, std::uint64_t seed);

struct StExample {
  PointSet points;
  LineSet lines;
  /// Grid-unit bracket on max(|qx|,|qy|) for the direction vectors used.
  int min_step = 0;
  int max_step = 0;
};

StExample gen_st_example(int k, bool perturb, std::uint64_t seed);

struct PairMode {
  /// nullopt: all pairs; otherwise pairs restricted to cells of this side.
  std::optional<double> square_side;
};

/// Lines spanned by point pairs at distance <= u, deduplicated.
LineSet lines_from_pairs(const PointSet& points, double u, PairMode mode = {});

/// Two lines coincide if their angles differ by < 1e-12 (mod pi) and each
/// anchor lies within 1e-12 of the other line.
bool same_line(const Line& a, const Line& b);

/// Drops repeated lines (keeping first occurrence), preserving order.
std::vector<std::size_t> dedup_lines(std::span<const Line> lines);

}  // namespace heilbronn
