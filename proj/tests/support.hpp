#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "alpha3d/kernel.hpp"

namespace testing {

using alpha3d::ExactPoint;

inline std::vector<ExactPoint> points(std::initializer_list<std::array<std::int64_t, 3>> coords) {
  std::vector<ExactPoint> out;
  std::uint32_t index = 1;
  for (const auto& c : coords) out.push_back(ExactPoint::make(index++, c[0], c[1], c[2]));
  return out;
}

inline std::vector<ExactPoint> from_coords(const std::vector<std::array<std::int64_t, 3>>& coords) {
  std::vector<ExactPoint> out;
  std::uint32_t index = 1;
  for (const auto& c : coords) out.push_back(ExactPoint::make(index++, c[0], c[1], c[2]));
  return out;
}

// Distinct random integer points in [lo, hi]^3.
inline std::vector<std::array<std::int64_t, 3>> random_coords(std::mt19937_64& rng, std::size_t n,
                                                              std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  std::set<std::array<std::int64_t, 3>> seen;
  std::vector<std::array<std::int64_t, 3>> out;
  while (out.size() < n) {
    std::array<std::int64_t, 3> c{dist(rng), dist(rng), dist(rng)};
    if (seen.insert(c).second) out.push_back(c);
  }
  return out;
}

// The four-point fixture used across modules.
inline std::vector<ExactPoint> fixture_p() {
  return points({{0, 0, 0}, {6, 0, 0}, {1, 4, 0}, {2, 1, 7}});
}

}  // namespace testing
