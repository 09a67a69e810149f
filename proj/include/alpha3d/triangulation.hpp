#pragma once

// Delaunay triangulation by incremental flipping, stored as a triangle-edge structure.
//
// Each triangle record holds its three vertices and, for each of its six directed
// edges, the next triangle around that edge. Tetrahedra are implicit: for a pair
// (u->w, apex x) whose ring successor has apex y, (u, w, x, y) is a positively
// oriented tetrahedron. Vertex 0 is a symbolic point at infinity, so the convex hull
// is bounded by "ghost" tetrahedra and every triangle has two sides.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "alpha3d/kernel.hpp"

namespace alpha3d {

/// Sorted labels of a simplex with one to four vertices.
struct SimplexKey {
  std::array<std::uint32_t, 4> v{};
  std::uint8_t size = 0;

  SimplexKey() = default;
  /// Sorts the labels; throws PreconditionError on repeats or a bad size.
  SimplexKey(std::initializer_list<std::uint32_t> labels);
  template <std::size_t N>
  static SimplexKey of(const std::array<std::uint32_t, N>& labels) {
    static_assert(N >= 1 && N <= 4);
    SimplexKey k;
    k.size = N;
    for (std::size_t i = 0; i < N; ++i) k.v[i] = labels[i];
    k.normalize();
    return k;
  }

  int dimension() const { return size - 1; }
  std::uint32_t operator[](std::size_t i) const { return v[i]; }
  const std::uint32_t* begin() const { return v.data(); }
  const std::uint32_t* end() const { return v.data() + size; }
  /// The face obtained by dropping position i.
  SimplexKey without(std::size_t i) const;
  bool contains(std::uint32_t label) const;
  std::string to_string() const;

  friend bool operator==(const SimplexKey& a, const SimplexKey& b) {
    return a.size == b.size && a.v == b.v;
  }
  friend auto operator<=>(const SimplexKey& a, const SimplexKey& b) {
    if (auto c = a.size <=> b.size; c != 0) return c;
    return a.v <=> b.v;
  }

 private:
  void normalize();
};

struct SimplexKeyHash {
  std::size_t operator()(const SimplexKey& k) const noexcept;
};

/// A triangle plus one of its six directed edges.
struct TriangleEdgePair {
  std::uint32_t bits = 0;

  static TriangleEdgePair make(std::uint32_t triangle, std::uint32_t version) {
    return {triangle << 3 | version};
  }
  std::uint32_t triangle() const { return bits >> 3; }
  std::uint32_t version() const { return bits & 7; }
  TriangleEdgePair sym() const { return {bits ^ 1}; }
  /// Next directed edge in the same edge ring (same orientation).
  TriangleEdgePair enext() const {
    const std::uint32_t v = version();
    return make(triangle(), v % 2 == 0 ? (v + 2) % 6 : (v + 4) % 6);
  }
  friend bool operator==(TriangleEdgePair, TriangleEdgePair) = default;
};

struct TriangleRecord {
  std::array<std::uint32_t, 3> vertex;
  std::array<std::uint32_t, 6> next;  // TriangleEdgePair bits, indexed by version
};
static_assert(sizeof(TriangleRecord) == 36, "triangle records are meant to stay at 36 bytes");

struct FlipCounters {
  std::uint64_t triangle_to_edge = 0;
  std::uint64_t edge_to_triangle = 0;
  std::uint64_t unflippable = 0;
  std::uint64_t hull_facets_replaced = 0;
  std::uint64_t visibility_scans = 0;  // insertions that needed a full hull scan
};

struct PostprocessReport {
  std::size_t flat_before = 0;
  std::size_t removed = 0;
  std::size_t flat_remaining = 0;
};

/// Simplices of the triangulation by dimension, sorted, with convex-hull marks.
struct Enumeration {
  std::array<std::vector<SimplexKey>, 4> simplices;
  std::array<std::vector<bool>, 4> on_hull;

  std::size_t count(int dimension) const { return simplices[dimension].size(); }
};

class Triangulation {
 public:
  static constexpr std::uint32_t kInfinite = 0;

  /// Incremental-flip construction. `points` carry labels 1..n in any order.
  /// Throws InputError for n < 4 or repeated coordinates.
  static Triangulation build(std::vector<ExactPoint> points);

  /// A triangulation given by its tetrahedra (labels). The union must be convex;
  /// faces used by one tetrahedron get a ghost on their other side.
  static Triangulation from_tetrahedra(std::vector<ExactPoint> points,
                                       const std::vector<std::array<std::uint32_t, 4>>& tetrahedra);

  /// Points indexed by label - 1.
  const std::vector<ExactPoint>& points() const { return by_label_; }
  const ExactPoint& point(std::uint32_t label) const { return by_label_.at(label - 1); }
  std::size_t vertex_count() const { return by_label_.size(); }

  /// Pass a triangle key; false iff the opposite apex lies inside the other tetrahedron's
  /// circumsphere. Throws PreconditionError for hull triangles or unknown keys.
  bool locally_delaunay(const SimplexKey& triangle) const;

  /// Replaces the triangle by the edge joining its two apexes (two tetrahedra become three).
  /// Throws InternalError unless the triangle is interior, not locally Delaunay and the
  /// union of its tetrahedra is convex.
  void flip_triangle_to_edge(const SimplexKey& triangle);

  /// Replaces the three tetrahedra around an edge by two. Throws PreconditionError when the
  /// edge does not have exactly three incident tetrahedra, or they do not form a convex union.
  void flip_edge_to_triangle(const SimplexKey& edge);

  /// Removes zero-volume tetrahedra lying in a supporting plane of the convex hull.
  /// Throws DegenerateInputError if every tetrahedron is flat.
  PostprocessReport postprocess_flat_tets();

  Enumeration enumerate() const;
  std::vector<std::array<std::uint32_t, 4>> tetrahedra() const;  // sorted labels
  bool contains(const SimplexKey& simplex) const;
  std::size_t flat_tetrahedron_count() const;

  /// Ring and orientation invariants; returns one message per violation.
  std::vector<std::string> check_structure() const;
  /// Interior triangles failing the locally-Delaunay test.
  std::vector<SimplexKey> non_delaunay_triangles() const;

  const FlipCounters& counters() const { return counters_; }
  std::size_t triangle_capacity() const { return records_.size(); }

 private:
  using Pair = TriangleEdgePair;
  using Tet = std::array<std::uint32_t, 4>;  // internal ids, positively oriented
  using Face = std::array<std::uint32_t, 3>;

  Triangulation() = default;
  void init_points(std::vector<ExactPoint> points);

  const ExactPoint& vertex_point(std::uint32_t v) const { return sorted_[v - 1]; }
  std::uint32_t label(std::uint32_t v) const { return v == kInfinite ? 0 : sorted_[v - 1].index; }
  std::uint32_t internal(std::uint32_t label) const;
  Sign orient(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) const;
  bool tet_is_flat(const Tet& t) const;

  std::uint32_t org(Pair p) const;
  std::uint32_t dest(Pair p) const;
  std::uint32_t apex(Pair p) const;
  Pair fnext(Pair p) const { return {records_[p.triangle()].next[p.version()]}; }
  bool alive(std::uint32_t triangle) const;

  static std::uint64_t face_key(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  std::uint32_t find_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) const;  // or npos
  std::uint32_t add_face(std::uint32_t a, std::uint32_t b, std::uint32_t c);
  void remove_face(std::uint32_t triangle);
  /// Pair on face {a,b,c} with directed edge u->w; the face must exist.
  Pair pair_of(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t u, std::uint32_t w) const;
  Pair pair_on(std::uint32_t triangle, std::uint32_t u, std::uint32_t w) const;
  std::size_t ring_size(Pair p) const;

  /// Swaps a set of tetrahedra for another filling the same region, rebuilding rings.
  void replace(const std::vector<Tet>& removed, const std::vector<Tet>& added);

  /// Rebuilds the structure from finite tetrahedra, closing it with ghosts.
  void assemble(std::vector<Tet> tets);

  void insert_vertex(std::uint32_t v);
  std::vector<Face> visible_hull_faces(std::uint32_t v);
  bool visible(const Face& f, std::uint32_t v) const;
  Face hull_neighbor(const Face& f, int edge) const;

  enum class FlipResult { Done, Unflippable, NotNeeded };
  FlipResult try_flip(const Face& f, std::uint32_t protect, std::vector<Face>& pushed);
  void flip23(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d, std::uint32_t e,
              std::vector<Face>* link);
  bool flip32(std::uint32_t x, std::uint32_t y, std::uint32_t z, std::vector<Face>* link);

  using Plane = std::array<Wide, 4>;  // primitive normal and offset
  std::optional<Plane> plane_through(std::uint32_t a, std::uint32_t b, std::uint32_t c) const;
  bool on_supporting_plane(const Tet& t, const std::set<Plane>& planes) const;

  std::vector<Tet> all_tets(bool include_ghosts) const;
  bool is_hull_face(std::uint32_t triangle) const;

  std::vector<ExactPoint> by_label_;
  std::vector<ExactPoint> sorted_;        // internal id v lives at v - 1
  std::vector<std::uint32_t> internal_;   // label - 1 -> internal id
  std::vector<TriangleRecord> records_;
  std::vector<std::uint32_t> free_;
  std::unordered_map<std::uint64_t, std::uint32_t> faces_;
  std::vector<Face> last_hull_faces_;
  FlipCounters counters_;
};

}  // namespace alpha3d
