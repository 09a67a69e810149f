#pragma once

// Point files: one point per line as three decimal numbers, '#' starts a comment.
// Coordinates are multiplied by 10^scale and must then be integers.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "alpha3d/kernel.hpp"

namespace alpha3d {

inline constexpr int kMaxScale = 18;

struct PointSet {
  std::vector<ExactPoint> points;  // labels 1..n in line order
  int scale = 0;
  std::string source;

  std::size_t size() const { return points.size(); }
};

/// Throws InputError on malformed lines, non-integral scaled values, out-of-range
/// coordinates and repeated points (naming both lines).
PointSet parse_points(std::string_view text, int scale, std::string source = {});
PointSet read_points(const std::filesystem::path& path, int scale);

/// Exact value of a decimal literal such as "-1.25e3".
Rational parse_decimal(std::string_view token);

}  // namespace alpha3d
