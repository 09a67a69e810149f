#pragma once

// OFF and OBJ output of one member of the family.

#include <string>
#include <string_view>

#include "alpha3d/bundle.hpp"

namespace alpha3d {

enum class MeshFormat { Off, Obj };

/// "off" or "obj", any case. Throws InputError otherwise.
MeshFormat parse_mesh_format(std::string_view name);

struct ClassFilter {
  bool interior = false;
  bool regular = true;
  bool singular = true;

  /// Comma separated subset of interior, regular, singular.
  static ClassFilter parse(std::string_view list);
  bool accepts(SimplexClass c) const;
};

struct MeshOptions {
  MeshFormat format = MeshFormat::Off;
  ClassFilter classes;
  bool double_singular = false;  // emit singular triangles once per side
};

struct MeshCounts {
  std::size_t vertices = 0;
  std::size_t faces = 0;
  std::size_t lines = 0;
  std::size_t points = 0;
};

/// All n points become mesh vertices, in original units. Triangles of the selected classes
/// follow; regular ones face outward. OBJ adds singular edges as lines and singular
/// vertices as points. Throws PreconditionError for a bad interval.
std::string export_mesh(const FamilyBundle& bundle, std::size_t interval, const MeshOptions& options,
                        MeshCounts* counts = nullptr);

}  // namespace alpha3d
