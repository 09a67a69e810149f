#pragma once

// FamilyBundle: everything a viewer needs to replay the alpha family without geometry.
// The JSON layout is described in docs/bundle-format.md.

#include <filesystem>
#include <string>
#include <string_view>

#include "alpha3d/alpha_complex.hpp"
#include "alpha3d/point_set.hpp"
#include "alpha3d/signatures.hpp"
#include "alpha3d/triangulation.hpp"

namespace alpha3d {

inline constexpr const char* kBundleFormat = "alpha3d-family";
inline constexpr int kBundleVersion = 1;

struct BuildStats {
  KernelCounters kernel;
  FlipCounters flips;
  PostprocessReport postprocess;
};

struct StageTimes {
  double build = 0;
  double postprocess = 0;
  double classify = 0;
  double signatures = 0;

  double total() const { return build + postprocess + classify + signatures; }
};

struct FamilyBundle {
  int version = kBundleVersion;
  int scale = 0;
  std::string source;
  AlphaComplex family;
  Signatures signatures;
  BuildStats stats;

  std::size_t n() const { return family.vertex_count(); }
};

/// Triangulate, postprocess, classify and compute signatures. Throws InputError for
/// fewer than four points and DegenerateInputError for flat input.
FamilyBundle build_bundle(const PointSet& points, StageTimes* times = nullptr);

/// Deterministic JSON text, newline-terminated.
std::string to_json(const FamilyBundle& bundle);
/// Throws InputError on malformed JSON, schema mismatch or inconsistent indices.
FamilyBundle from_json(std::string_view text);

FamilyBundle read_bundle(const std::filesystem::path& path);
void write_bundle(const FamilyBundle& bundle, const std::filesystem::path& path);

}  // namespace alpha3d
