#pragma once

// Step functions over the alpha spectrum, one value per open interval.

#include <array>
#include <cstddef>
#include <vector>

#include "alpha3d/alpha_complex.hpp"

namespace alpha3d {

/// counts[dimension][class] holds one series; tetrahedra are only ever interior.
using FaceCounts = std::array<std::array<std::vector<std::size_t>, 3>, 4>;

struct Signatures {
  std::vector<std::size_t> components;
  std::vector<Rational> volume;
  std::vector<double> area;
  FaceCounts face_counts;

  std::size_t length() const { return components.size(); }
};

/// Connected components of each complex, by union-find over edges in order of entry.
std::vector<std::size_t> components_signature(const AlphaComplex& a);
/// Sum of the volumes of the tetrahedra in each complex.
std::vector<Rational> volume_signature(const AlphaComplex& a);
/// Area of regular triangles plus twice the area of singular ones.
std::vector<double> area_signature(const AlphaComplex& a);
FaceCounts face_count_signature(const AlphaComplex& a);

Signatures compute_signatures(const AlphaComplex& a);

/// Area of a triangle given by labels.
double triangle_area(const AlphaComplex& a, const SimplexKey& triangle);
/// Six times the volume of a tetrahedron given by labels.
Integer tetrahedron_volume6(const AlphaComplex& a, const SimplexKey& tetrahedron);

}  // namespace alpha3d
