#pragma once

// The family of alpha complexes of a Delaunay triangulation.
//
// Every simplex gets one record with its squared radius, attachment flag and the
// two squared radii at which it turns regular and interior. The spectrum is the
// sorted list of distinct squared radii of unattached simplices, framed by 0 and
// infinity; interval i is the open range between entries i and i + 1.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "alpha3d/kernel.hpp"
#include "alpha3d/triangulation.hpp"

namespace alpha3d {

enum class SimplexClass : std::uint8_t { Interior, Regular, Singular };

const char* class_name(SimplexClass c);

inline constexpr std::size_t kNoThreshold = static_cast<std::size_t>(-1);

struct IntervalRecord {
  SimplexKey key;
  std::optional<RadiusSq> rho_sq;  // absent for vertices
  bool attached = false;
  bool on_hull = false;
  RadiusSq mu_lo_sq;
  RadiusSq mu_hi_sq;
  // Spectrum positions; rho_index is kNoThreshold for vertices and attached simplices.
  std::size_t rho_index = kNoThreshold;
  std::size_t mu_lo_index = 0;
  std::size_t mu_hi_index = 0;

  int dimension() const { return key.dimension(); }
  /// First interval in which the simplex belongs to the complex.
  std::size_t entry_index() const;
  /// Class in interval `interval`, or nothing if the simplex is not in that complex.
  std::optional<SimplexClass> classify(std::size_t interval) const;
};

class Spectrum {
 public:
  Spectrum() = default;
  /// Sorts and merges `thresholds`, then adds the 0 and infinity sentinels.
  explicit Spectrum(std::vector<RadiusSq> thresholds);

  std::size_t size() const { return values_.size(); }
  std::size_t interval_count() const { return values_.size() - 1; }
  std::size_t threshold_count() const { return values_.size() - 2; }
  const RadiusSq& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<RadiusSq>& values() const { return values_; }
  /// sqrt of each entry as a double; infinity for the last.
  const std::vector<double>& alpha() const { return alpha_; }

  /// Position of an exact entry. Throws InternalError when absent.
  std::size_t index_of(const RadiusSq& value) const;
  /// Interval containing alpha^2. Throws OnThresholdError when it equals an entry.
  std::size_t interval_of(const Rational& alpha_sq) const;
  std::size_t interval_of_alpha(double alpha) const;
  /// A squared alpha strictly inside the interval.
  Rational representative(std::size_t interval) const;

 private:
  std::vector<RadiusSq> values_;
  std::vector<double> alpha_;
};

struct ComplexView {
  std::size_t interval = 0;
  std::array<std::vector<std::pair<SimplexKey, SimplexClass>>, 4> simplices;

  std::size_t count(int dimension, SimplexClass c) const;
  std::size_t size() const;
  bool contains(const SimplexKey& key) const;
};

struct ShapeBoundary {
  /// Vertex labels ordered so the normal points away from the tetrahedron behind the triangle.
  std::vector<std::array<std::uint32_t, 3>> regular_triangles;
  std::vector<SimplexKey> singular_triangles;
  std::vector<SimplexKey> singular_edges;
  std::vector<SimplexKey> singular_vertices;
};

class AlphaComplex {
 public:
  /// Classifies every simplex of a built (and postprocessed) triangulation.
  static AlphaComplex classify_all(const Triangulation& t);
  /// Reassembles a family from stored records; validates indices and face closure.
  static AlphaComplex from_records(std::vector<ExactPoint> points, std::array<std::vector<IntervalRecord>, 4> records,
                                   Spectrum spectrum);

  const Spectrum& spectrum() const { return spectrum_; }
  const std::vector<ExactPoint>& points() const { return points_; }
  std::size_t vertex_count() const { return points_.size(); }

  const std::vector<IntervalRecord>& records(int dimension) const { return records_[dimension]; }
  std::size_t record_count() const;
  /// Throws PreconditionError for simplices outside the triangulation.
  const IntervalRecord& record(const SimplexKey& key) const;
  std::optional<std::size_t> find(const SimplexKey& key) const;  // index within its dimension
  /// Indices of the (d + 1)-simplices having simplex `index` of dimension d as a face.
  const std::vector<std::uint32_t>& cofaces(int dimension, std::size_t index) const {
    return up_[dimension][index];
  }
  /// Indices of the d-1 faces of simplex `index` of dimension d >= 1.
  std::vector<std::uint32_t> faces(int dimension, std::size_t index) const;

  /// Throws PreconditionError for an index outside [0, interval_count).
  ComplexView complex_at(std::size_t interval) const;
  /// Throws OnThresholdError when alpha^2 equals a threshold.
  ComplexView complex_at(const Rational& alpha_sq) const;
  ComplexView complex_at_alpha(double alpha) const;

  ShapeBoundary shape_boundary(const ComplexView& view) const;

 private:
  void index_records();

  std::vector<ExactPoint> points_;  // by label - 1
  std::array<std::vector<IntervalRecord>, 4> records_;
  std::array<std::vector<std::vector<std::uint32_t>>, 3> up_;
  std::array<std::unordered_map<SimplexKey, std::uint32_t, SimplexKeyHash>, 4> index_;
  Spectrum spectrum_;
};

}  // namespace alpha3d
