#pragma once

#include <iosfwd>
#include <string>

#include "heilbronn/configs.hpp"

namespace heilbronn {

/// Shortest round-trip decimal with at least 17 significant digits.
std::string format_double(double v);

/// "heilbronn-points v1": header line then one "x y" pair per line.
void write_points(std::ostream& out, const PointSet& points);
std::string points_to_string(const PointSet& points);
/// Reads a points file. With exact = true, coordinates are rationalized
/// (denominators up to 10^6) and attached as the exact shadow, or NotRational.
PointSet read_points(std::istream& in, bool exact = false);
PointSet read_points_file(const std::string& path, bool exact = false);

/// "heilbronn-lines v1": header line then "ax ay theta [i j]" per line.
void write_lines(std::ostream& out, const LineSet& lines);
std::string lines_to_string(const LineSet& lines);
LineSet read_lines(std::istream& in);
LineSet read_lines_file(const std::string& path);

/// Writes to path via a temporary sibling file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace heilbronn
