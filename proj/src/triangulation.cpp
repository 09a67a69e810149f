#include "alpha3d/triangulation.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_set>

namespace alpha3d {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kDead = std::numeric_limits<std::uint32_t>::max();
constexpr std::uint32_t kMaxVertices = (1u << 21) - 2;

constexpr std::array<int, 6> kOrgPos{0, 1, 1, 2, 2, 0};
constexpr std::array<int, 6> kDestPos{1, 0, 2, 1, 0, 2};
constexpr std::array<int, 6> kApexPos{2, 2, 0, 0, 1, 1};

// Even permutations (u, w, x, y) of a tetrahedron, one per edge u-w.
constexpr std::array<std::array<int, 4>, 6> kEdgeViews{{
    {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 2, 0, 3}, {1, 3, 2, 0}, {2, 3, 0, 1}}};

template <std::size_t N>
std::array<std::uint32_t, N> sorted(std::array<std::uint32_t, N> a) {
  std::sort(a.begin(), a.end());
  return a;
}

// The tetrahedron on the far side of face k of a positive tetrahedron, with infinity as apex.
std::array<std::uint32_t, 4> ghost_for_face(const std::array<std::uint32_t, 4>& t, int k) {
  std::array<std::uint32_t, 4> g = t;
  g[k] = Triangulation::kInfinite;
  std::swap(g[(k + 1) % 4], g[(k + 2) % 4]);
  return g;
}

// Face (a, b, c) of a ghost such that (a, b, c, infinity) is positive.
std::array<std::uint32_t, 3> hull_face_of_ghost(const std::array<std::uint32_t, 4>& g) {
  std::array<std::uint32_t, 3> f{};
  int k = 0;
  for (int i = 0, j = 0; i < 4; ++i) {
    if (g[i] == Triangulation::kInfinite) {
      k = i;
    } else {
      f[j++] = g[i];
    }
  }
  if ((3 - k) % 2 == 1) std::swap(f[0], f[1]);
  return f;
}

}  // namespace

// ---------------------------------------------------------------------------
// SimplexKey

SimplexKey::SimplexKey(std::initializer_list<std::uint32_t> labels) {
  if (labels.size() < 1 || labels.size() > 4) throw PreconditionError("simplex keys hold 1 to 4 labels");
  size = static_cast<std::uint8_t>(labels.size());
  std::copy(labels.begin(), labels.end(), v.begin());
  normalize();
}

void SimplexKey::normalize() {
  std::sort(v.begin(), v.begin() + size);
  for (std::size_t i = size; i < 4; ++i) v[i] = 0;
  for (std::size_t i = 1; i < size; ++i) {
    if (v[i] == v[i - 1]) throw PreconditionError("simplex key repeats label " + std::to_string(v[i]));
  }
}

SimplexKey SimplexKey::without(std::size_t i) const {
  SimplexKey k;
  k.size = static_cast<std::uint8_t>(size - 1);
  for (std::size_t a = 0, b = 0; a < size; ++a) {
    if (a != i) k.v[b++] = v[a];
  }
  return k;
}

bool SimplexKey::contains(std::uint32_t label) const {
  return std::find(begin(), end(), label) != end();
}

std::string SimplexKey::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < size; ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s + ")";
}

std::size_t SimplexKeyHash::operator()(const SimplexKey& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL * (k.size + 1);
  for (std::size_t i = 0; i < k.size; ++i) {
    h ^= k.v[i] + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------
// Setup and lookups

void Triangulation::init_points(std::vector<ExactPoint> points) {
  const std::size_t n = points.size();
  if (n < 4) throw InputError("a triangulation needs at least 4 points, got " + std::to_string(n));
  if (n > kMaxVertices) throw InputError("too many points for the triangle structure");
  by_label_.assign(n, ExactPoint{});
  std::vector<bool> seen(n, false);
  for (const ExactPoint& p : points) {
    if (p.index < 1 || p.index > n || seen[p.index - 1]) {
      throw PreconditionError("point labels must be a permutation of 1..n");
    }
    seen[p.index - 1] = true;
    by_label_[p.index - 1] = p;
  }
  sorted_ = by_label_;
  std::sort(sorted_.begin(), sorted_.end(),
            [](const ExactPoint& a, const ExactPoint& b) { return a.coords < b.coords; });
  for (std::size_t i = 1; i < n; ++i) {
    if (sorted_[i].coords == sorted_[i - 1].coords) {
      throw InputError("points " + std::to_string(std::min(sorted_[i - 1].index, sorted_[i].index)) +
                       " and " + std::to_string(std::max(sorted_[i - 1].index, sorted_[i].index)) +
                       " coincide");
    }
  }
  internal_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) internal_[sorted_[i].index - 1] = static_cast<std::uint32_t>(i + 1);
}

std::uint32_t Triangulation::internal(std::uint32_t lbl) const {
  if (lbl < 1 || lbl > internal_.size()) throw PreconditionError("unknown point label " + std::to_string(lbl));
  return internal_[lbl - 1];
}

Sign Triangulation::orient(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) const {
  return orientation(vertex_point(a), vertex_point(b), vertex_point(c), vertex_point(d));
}

bool Triangulation::tet_is_flat(const Tet& t) const {
  return orientation_determinant(vertex_point(t[0]), vertex_point(t[1]), vertex_point(t[2]),
                                 vertex_point(t[3])) == 0;
}

std::uint32_t Triangulation::org(Pair p) const { return records_[p.triangle()].vertex[kOrgPos[p.version()]]; }
std::uint32_t Triangulation::dest(Pair p) const { return records_[p.triangle()].vertex[kDestPos[p.version()]]; }
std::uint32_t Triangulation::apex(Pair p) const { return records_[p.triangle()].vertex[kApexPos[p.version()]]; }

bool Triangulation::alive(std::uint32_t triangle) const {
  return triangle < records_.size() && records_[triangle].vertex[0] != kDead;
}

std::uint64_t Triangulation::face_key(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  const auto s = sorted<3>({a, b, c});
  return std::uint64_t{s[0]} << 42 | std::uint64_t{s[1]} << 21 | s[2];
}

std::uint32_t Triangulation::find_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) const {
  const auto it = faces_.find(face_key(a, b, c));
  return it == faces_.end() ? kNone : it->second;
}

std::uint32_t Triangulation::add_face(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  std::uint32_t t;
  if (!free_.empty()) {
    t = free_.back();
    free_.pop_back();
  } else {
    t = static_cast<std::uint32_t>(records_.size());
    records_.emplace_back();
  }
  records_[t].vertex = {a, b, c};
  for (std::uint32_t v = 0; v < 6; ++v) records_[t].next[v] = Pair::make(t, v).bits;
  faces_.emplace(face_key(a, b, c), t);
  return t;
}

void Triangulation::remove_face(std::uint32_t t) {
  const auto& v = records_[t].vertex;
  faces_.erase(face_key(v[0], v[1], v[2]));
  records_[t].vertex = {kDead, kDead, kDead};
  free_.push_back(t);
}

TriangleEdgePair Triangulation::pair_on(std::uint32_t t, std::uint32_t u, std::uint32_t w) const {
  const auto& v = records_[t].vertex;
  for (std::uint32_t version = 0; version < 6; ++version) {
    if (v[kOrgPos[version]] == u && v[kDestPos[version]] == w) return Pair::make(t, version);
  }
  throw InternalError("directed edge is not on the triangle");
}

TriangleEdgePair Triangulation::pair_of(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t u,
                                        std::uint32_t w) const {
  const std::uint32_t t = find_face(a, b, c);
  if (t == kNone) throw InternalError("missing triangle in the face table");
  return pair_on(t, u, w);
}

std::size_t Triangulation::ring_size(Pair p) const {
  std::size_t n = 1;
  for (Pair q = fnext(p); q != p; q = fnext(q)) {
    if (++n > records_.size() + 1) throw InternalError("triangle ring does not close");
  }
  return n;
}

// ---------------------------------------------------------------------------
// Structural replacement

void Triangulation::replace(const std::vector<Tet>& removed, const std::vector<Tet>& added) {
  std::vector<std::uint64_t> kept;
  kept.reserve(added.size() * 4);
  for (const Tet& t : added) {
    for (int k = 0; k < 4; ++k) {
      const std::uint32_t a = t[(k + 1) % 4], b = t[(k + 2) % 4], c = t[(k + 3) % 4];
      kept.push_back(face_key(a, b, c));
      if (find_face(a, b, c) == kNone) add_face(a, b, c);
    }
  }
  for (const Tet& t : added) {
    for (const auto& view : kEdgeViews) {
      const std::uint32_t u = t[view[0]], w = t[view[1]], x = t[view[2]], y = t[view[3]];
      const Pair p = pair_of(u, w, x, u, w);
      const Pair q = pair_of(u, w, y, u, w);
      records_[p.triangle()].next[p.version()] = q.bits;
      const Pair qs = q.sym();
      records_[qs.triangle()].next[qs.version()] = p.sym().bits;
    }
  }
  std::sort(kept.begin(), kept.end());
  for (const Tet& t : removed) {
    for (int k = 0; k < 4; ++k) {
      const std::uint32_t a = t[(k + 1) % 4], b = t[(k + 2) % 4], c = t[(k + 3) % 4];
      if (std::binary_search(kept.begin(), kept.end(), face_key(a, b, c))) continue;
      const std::uint32_t f = find_face(a, b, c);
      if (f != kNone) remove_face(f);
    }
  }
}

// ---------------------------------------------------------------------------
// Construction

Triangulation Triangulation::build(std::vector<ExactPoint> points) {
  Triangulation t;
  t.init_points(std::move(points));
  const std::uint32_t n = static_cast<std::uint32_t>(t.sorted_.size());
  t.records_.reserve(8 * n);
  t.faces_.reserve(8 * n);

  Tet seed{1, 2, 3, 4};
  if (t.orient(1, 2, 3, 4).negative()) seed = {2, 1, 3, 4};
  std::vector<Tet> added{seed};
  for (int k = 0; k < 4; ++k) added.push_back(ghost_for_face(seed, k));
  t.replace({}, added);
  for (int k = 0; k < 4; ++k) {
    const Tet g = ghost_for_face(seed, k);
    t.last_hull_faces_.push_back(hull_face_of_ghost(g));
  }
  for (std::uint32_t v = 5; v <= n; ++v) t.insert_vertex(v);
  return t;
}

Triangulation Triangulation::from_tetrahedra(std::vector<ExactPoint> points,
                                             const std::vector<std::array<std::uint32_t, 4>>& tetrahedra) {
  Triangulation t;
  t.init_points(std::move(points));
  std::vector<Tet> tets;
  for (const auto& labels : tetrahedra) {
    Tet tet{t.internal(labels[0]), t.internal(labels[1]), t.internal(labels[2]), t.internal(labels[3])};
    if (t.orient(tet[0], tet[1], tet[2], tet[3]).negative()) std::swap(tet[0], tet[1]);
    tets.push_back(tet);
  }
  t.assemble(std::move(tets));
  return t;
}

void Triangulation::assemble(std::vector<Tet> added) {
  records_.clear();
  free_.clear();
  faces_.clear();
  last_hull_faces_.clear();
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::size_t, int>>> uses;
  for (std::size_t i = 0; i < added.size(); ++i) {
    const Tet& tet = added[i];
    for (int k = 0; k < 4; ++k) {
      uses[face_key(tet[(k + 1) % 4], tet[(k + 2) % 4], tet[(k + 3) % 4])].emplace_back(i, k);
    }
  }
  const std::size_t finite = added.size();
  for (const auto& [key, list] : uses) {
    if (list.size() > 2) throw PreconditionError("a triangle is shared by more than two tetrahedra");
    if (list.size() == 1) added.push_back(ghost_for_face(added[list[0].first], list[0].second));
  }
  std::sort(added.begin() + static_cast<std::ptrdiff_t>(finite), added.end());
  replace({}, added);
}

bool Triangulation::visible(const Face& f, std::uint32_t v) const {
  return orient(f[0], f[1], f[2], v).positive();
}

Triangulation::Face Triangulation::hull_neighbor(const Face& f, int edge) const {
  const std::uint32_t u = f[edge], w = f[(edge + 1) % 3], x = f[(edge + 2) % 3];
  const Pair p = pair_of(u, w, x, u, w);
  const Pair g = fnext(p);
  if (apex(g) != kInfinite) throw InternalError("hull face without a ghost tetrahedron");
  return Face{w, u, apex(fnext(g))};
}

bool Triangulation::is_hull_face(std::uint32_t t) const {
  const auto& v = records_[t].vertex;
  if (v[0] == kInfinite || v[1] == kInfinite || v[2] == kInfinite) return false;
  const Pair p = Pair::make(t, 0);
  return apex(fnext(p)) == kInfinite || apex(fnext(p.sym())) == kInfinite;
}

std::vector<Triangulation::Face> Triangulation::visible_hull_faces(std::uint32_t v) {
  std::vector<Face> start;
  for (const Face& f : last_hull_faces_) {
    if (find_face(f[0], f[1], f[2]) != kNone && visible(f, v)) {
      start.push_back(f);
      break;
    }
  }
  if (start.empty()) {
    ++counters_.visibility_scans;
    for (std::uint32_t t = 0; t < records_.size() && start.empty(); ++t) {
      if (!alive(t) || !is_hull_face(t)) continue;
      const Pair p = Pair::make(t, 0);
      Face f{org(p), dest(p), apex(p)};
      if (apex(fnext(p)) != kInfinite) f = {dest(p), org(p), apex(p)};
      if (visible(f, v)) start.push_back(f);
    }
    if (start.empty()) throw InternalError("inserted point sees no hull face");
  }
  std::unordered_set<std::uint64_t> seen{face_key(start[0][0], start[0][1], start[0][2])};
  std::vector<Face> result;
  std::vector<Face> queue = start;
  while (!queue.empty()) {
    const Face f = queue.back();
    queue.pop_back();
    result.push_back(f);
    for (int e = 0; e < 3; ++e) {
      const Face g = hull_neighbor(f, e);
      if (seen.insert(face_key(g[0], g[1], g[2])).second && visible(g, v)) queue.push_back(g);
    }
  }
  return result;
}

void Triangulation::insert_vertex(std::uint32_t v) {
  const std::vector<Face> faces = visible_hull_faces(v);
  std::unordered_set<std::uint64_t> visible_keys;
  for (const Face& f : faces) visible_keys.insert(face_key(f[0], f[1], f[2]));

  std::vector<Tet> removed;
  std::vector<Tet> added;
  std::vector<Face> hull;
  for (const Face& f : faces) {
    removed.push_back({f[0], f[1], f[2], kInfinite});
    added.push_back({f[0], f[1], f[2], v});
  }
  for (const Face& f : faces) {
    for (int e = 0; e < 3; ++e) {
      const Face g = hull_neighbor(f, e);
      if (visible_keys.count(face_key(g[0], g[1], g[2]))) continue;
      const std::uint32_t a = f[e], b = f[(e + 1) % 3];
      added.push_back({a, b, v, kInfinite});
      hull.push_back({a, b, v});
    }
  }
  replace(removed, added);
  counters_.hull_facets_replaced += faces.size();
  last_hull_faces_ = std::move(hull);

  std::vector<Face> stack(faces.rbegin(), faces.rend());
  std::vector<Face> pushed;
  while (!stack.empty()) {
    const Face f = stack.back();
    stack.pop_back();
    pushed.clear();
    if (try_flip(f, v, pushed) == FlipResult::Done) {
      stack.insert(stack.end(), pushed.begin(), pushed.end());
    }
  }
}

// ---------------------------------------------------------------------------
// Flips

Triangulation::FlipResult Triangulation::try_flip(const Face& f, std::uint32_t protect,
                                                  std::vector<Face>& pushed) {
  if (f[0] == kInfinite || f[1] == kInfinite || f[2] == kInfinite) return FlipResult::NotNeeded;
  const std::uint32_t t = find_face(f[0], f[1], f[2]);
  if (t == kNone) return FlipResult::NotNeeded;
  const std::uint32_t a = f[0], b = f[1], c = f[2];
  const Pair p = pair_on(t, a, b);
  const std::uint32_t e = apex(fnext(p));
  const std::uint32_t d = apex(fnext(p.sym()));
  if (d == kInfinite || e == kInfinite) return FlipResult::NotNeeded;
  if (in_sphere(vertex_point(a), vertex_point(b), vertex_point(c), vertex_point(e), vertex_point(d))
          .negative()) {
    return FlipResult::NotNeeded;
  }
  const std::array<std::uint32_t, 3> ring{a, b, c};
  int negatives = 0;
  int reflex = -1;
  for (int i = 0; i < 3; ++i) {
    if (orient(ring[i], ring[(i + 1) % 3], d, e).negative()) {
      ++negatives;
      reflex = i;
    }
  }
  std::vector<Face> link;
  if (negatives == 0) {
    flip23(a, b, c, d, e, &link);
  } else if (negatives != 1 || !flip32(ring[reflex], ring[(reflex + 1) % 3], ring[(reflex + 2) % 3], &link)) {
    ++counters_.unflippable;
    return FlipResult::Unflippable;
  }
  for (const Face& g : link) {
    if (g[0] != protect && g[1] != protect && g[2] != protect) pushed.push_back(g);
  }
  return FlipResult::Done;
}

void Triangulation::flip23(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d,
                           std::uint32_t e, std::vector<Face>* link) {
  replace({{a, b, c, e}, {b, a, c, d}}, {{a, b, d, e}, {b, c, d, e}, {c, a, d, e}});
  ++counters_.triangle_to_edge;
  if (link) {
    *link = {{a, b, d}, {a, b, e}, {b, c, d}, {b, c, e}, {c, a, d}, {c, a, e}};
  }
}

bool Triangulation::flip32(std::uint32_t x, std::uint32_t y, std::uint32_t z, std::vector<Face>* link) {
  const Pair p = pair_of(x, y, z, x, y);
  if (ring_size(p) != 3) return false;
  const std::uint32_t c1 = apex(p);
  const std::uint32_t c2 = apex(fnext(p));
  const std::uint32_t c3 = apex(fnext(fnext(p)));
  if (c1 == kInfinite || c2 == kInfinite || c3 == kInfinite) return false;
  if (!orient(c1, c2, c3, y).positive() || !orient(c2, c1, c3, x).positive()) return false;
  replace({{x, y, c1, c2}, {x, y, c2, c3}, {x, y, c3, c1}}, {{c1, c2, c3, y}, {c2, c1, c3, x}});
  ++counters_.edge_to_triangle;
  if (link) {
    *link = {{x, c1, c2}, {x, c2, c3}, {x, c3, c1}, {y, c1, c2}, {y, c2, c3}, {y, c3, c1}};
  }
  return true;
}

// ---------------------------------------------------------------------------
// Public flips and queries

bool Triangulation::locally_delaunay(const SimplexKey& key) const {
  if (key.size != 3) throw PreconditionError("locally_delaunay takes a triangle");
  const std::uint32_t a = internal(key[0]), b = internal(key[1]), c = internal(key[2]);
  const std::uint32_t t = find_face(a, b, c);
  if (t == kNone) throw PreconditionError("triangle " + key.to_string() + " is not in the triangulation");
  const Pair p = pair_on(t, a, b);
  const std::uint32_t e = apex(fnext(p));
  const std::uint32_t d = apex(fnext(p.sym()));
  if (d == kInfinite || e == kInfinite) {
    throw PreconditionError("triangle " + key.to_string() + " is on the convex hull");
  }
  return in_sphere(vertex_point(a), vertex_point(b), vertex_point(c), vertex_point(e), vertex_point(d))
      .negative();
}

void Triangulation::flip_triangle_to_edge(const SimplexKey& key) {
  if (key.size != 3) throw PreconditionError("flip_triangle_to_edge takes a triangle");
  bool delaunay;
  try {
    delaunay = locally_delaunay(key);
  } catch (const PreconditionError& e) {
    throw InternalError(std::string("triangle-to-edge flip: ") + e.what());
  }
  if (delaunay) throw InternalError("triangle-to-edge flip on a locally Delaunay triangle");
  const std::uint32_t a = internal(key[0]), b = internal(key[1]), c = internal(key[2]);
  const Pair p = pair_of(a, b, c, a, b);
  const std::uint32_t e = apex(fnext(p));
  const std::uint32_t d = apex(fnext(p.sym()));
  if (!orient(a, b, d, e).positive() || !orient(b, c, d, e).positive() || !orient(c, a, d, e).positive()) {
    throw InternalError("triangle-to-edge flip on a non-convex pair of tetrahedra");
  }
  flip23(a, b, c, d, e, nullptr);
}

void Triangulation::flip_edge_to_triangle(const SimplexKey& key) {
  if (key.size != 2) throw PreconditionError("flip_edge_to_triangle takes an edge");
  const std::uint32_t x = internal(key[0]), y = internal(key[1]);
  for (std::uint32_t t = 0; t < records_.size(); ++t) {
    if (!alive(t)) continue;
    const auto& v = records_[t].vertex;
    if (std::find(v.begin(), v.end(), x) == v.end() || std::find(v.begin(), v.end(), y) == v.end()) continue;
    const std::uint32_t z = v[0] != x && v[0] != y ? v[0] : (v[1] != x && v[1] != y ? v[1] : v[2]);
    if (!flip32(x, y, z, nullptr)) {
      throw PreconditionError("edge " + key.to_string() + " cannot be flipped to a triangle");
    }
    return;
  }
  throw PreconditionError("edge " + key.to_string() + " is not in the triangulation");
}

std::vector<Triangulation::Tet> Triangulation::all_tets(bool include_ghosts) const {
  std::vector<Tet> out;
  for (std::uint32_t t = 0; t < records_.size(); ++t) {
    if (!alive(t)) continue;
    const Pair p = Pair::make(t, 0);
    const std::uint32_t a = org(p), b = dest(p), c = apex(p);
    const std::uint32_t top = std::max({a, b, c});
    const std::uint32_t y = apex(fnext(p));
    const std::uint32_t z = apex(fnext(p.sym()));
    // Each tetrahedron is reported once, from the face opposite its largest vertex.
    if (y > top && (include_ghosts || std::min({a, b, c}) != kInfinite)) out.push_back({a, b, c, y});
    if (z > top && (include_ghosts || std::min({a, b, c}) != kInfinite)) out.push_back({b, a, c, z});
  }
  return out;
}

std::vector<std::array<std::uint32_t, 4>> Triangulation::tetrahedra() const {
  std::vector<std::array<std::uint32_t, 4>> out;
  for (const Tet& t : all_tets(false)) out.push_back(sorted<4>({label(t[0]), label(t[1]), label(t[2]), label(t[3])}));
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Triangulation::flat_tetrahedron_count() const {
  std::size_t n = 0;
  for (const Tet& t : all_tets(false)) n += tet_is_flat(t);
  return n;
}

bool Triangulation::contains(const SimplexKey& key) const {
  for (std::uint32_t l : key) {
    if (l < 1 || l > internal_.size()) return false;
  }
  switch (key.size) {
    case 1: return true;
    case 2: {
      const std::uint32_t x = internal(key[0]), y = internal(key[1]);
      for (std::uint32_t t = 0; t < records_.size(); ++t) {
        if (!alive(t)) continue;
        const auto& v = records_[t].vertex;
        if (std::find(v.begin(), v.end(), x) != v.end() && std::find(v.begin(), v.end(), y) != v.end()) return true;
      }
      return false;
    }
    case 3: return find_face(internal(key[0]), internal(key[1]), internal(key[2])) != kNone;
    case 4: {
      const std::uint32_t a = internal(key[0]), b = internal(key[1]), c = internal(key[2]), d = internal(key[3]);
      const std::uint32_t t = find_face(a, b, c);
      if (t == kNone) return false;
      const Pair p = Pair::make(t, 0);
      return apex(fnext(p)) == d || apex(fnext(p.sym())) == d;
    }
    default: return false;
  }
}

Enumeration Triangulation::enumerate() const {
  const std::uint32_t n = static_cast<std::uint32_t>(sorted_.size());
  std::vector<bool> hull_vertex(n + 1, false);
  std::unordered_map<std::uint64_t, bool> edges;
  std::vector<std::pair<SimplexKey, bool>> triangles;
  std::unordered_set<std::uint64_t> hull_faces;
  for (std::uint32_t t = 0; t < records_.size(); ++t) {
    if (!alive(t)) continue;
    const auto v = records_[t].vertex;
    if (v[0] == kInfinite || v[1] == kInfinite || v[2] == kInfinite) continue;
    const bool hull = is_hull_face(t);
    triangles.emplace_back(SimplexKey::of<3>({label(v[0]), label(v[1]), label(v[2])}), hull);
    if (hull) hull_faces.insert(face_key(v[0], v[1], v[2]));
    for (int i = 0; i < 3; ++i) {
      const auto e = sorted<2>({v[i], v[(i + 1) % 3]});
      bool& flag = edges[std::uint64_t{e[0]} << 32 | e[1]];
      flag = flag || hull;
      if (hull) hull_vertex[v[i]] = true;
    }
  }
  Enumeration out;
  auto emit = [&](int dim, std::vector<std::pair<SimplexKey, bool>>& list) {
    std::sort(list.begin(), list.end());
    for (auto& [k, h] : list) {
      out.simplices[dim].push_back(k);
      out.on_hull[dim].push_back(h);
    }
  };
  std::vector<std::pair<SimplexKey, bool>> list;
  for (std::uint32_t v = 1; v <= n; ++v) list.emplace_back(SimplexKey{label(v)}, hull_vertex[v]);
  emit(0, list);
  list.clear();
  for (const auto& [key, hull] : edges) {
    list.emplace_back(SimplexKey{label(static_cast<std::uint32_t>(key >> 32)), label(static_cast<std::uint32_t>(key))},
                      hull);
  }
  emit(1, list);
  emit(2, triangles);
  list.clear();
  for (const Tet& t : all_tets(false)) {
    bool hull = false;
    for (int k = 0; k < 4; ++k) hull = hull || hull_faces.count(face_key(t[(k + 1) % 4], t[(k + 2) % 4], t[(k + 3) % 4]));
    list.emplace_back(SimplexKey::of<4>({label(t[0]), label(t[1]), label(t[2]), label(t[3])}), hull);
  }
  emit(3, list);
  return out;
}

// ---------------------------------------------------------------------------
// Flat tetrahedra

PostprocessReport Triangulation::postprocess_flat_tets() {
  PostprocessReport report;
  const std::vector<Tet> finite = all_tets(false);
  std::vector<bool> flat(finite.size());
  for (std::size_t i = 0; i < finite.size(); ++i) {
    flat[i] = tet_is_flat(finite[i]);
    report.flat_before += flat[i];
  }
  if (!finite.empty() && report.flat_before == finite.size()) {
    const int rank = affine_rank(by_label_);
    throw DegenerateInputError(rank, "all points lie in a common " +
                                         std::string(rank <= 1 ? "line" : "plane") +
                                         " (affine rank " + std::to_string(rank) + ")");
  }
  if (report.flat_before == 0) return report;

  // Supporting planes of the hull, from the hull triangles that are not collinear.
  std::set<Plane> planes;
  for (std::uint32_t t = 0; t < records_.size(); ++t) {
    if (!alive(t) || !is_hull_face(t)) continue;
    const auto& v = records_[t].vertex;
    if (auto plane = plane_through(v[0], v[1], v[2])) planes.insert(*plane);
  }

  std::vector<Tet> kept;
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (flat[i] && on_supporting_plane(finite[i], planes)) {
      ++report.removed;
    } else {
      kept.push_back(finite[i]);
    }
  }
  report.flat_remaining = report.flat_before - report.removed;
  if (report.removed > 0) assemble(std::move(kept));
  return report;
}

std::optional<Triangulation::Plane> Triangulation::plane_through(std::uint32_t a, std::uint32_t b,
                                                                 std::uint32_t c) const {
  const auto& pa = vertex_point(a).coords;
  const auto& pb = vertex_point(b).coords;
  const auto& pc = vertex_point(c).coords;
  std::array<Wide, 3> u{}, w{};
  for (int i = 0; i < 3; ++i) {
    u[i] = Wide{pb[i]} - pa[i];
    w[i] = Wide{pc[i]} - pa[i];
  }
  Plane plane{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0], 0};
  if (plane[0] == 0 && plane[1] == 0 && plane[2] == 0) return std::nullopt;
  UWide g = 0;
  for (int i = 0; i < 3; ++i) {
    UWide x = static_cast<UWide>(plane[i] < 0 ? -plane[i] : plane[i]);
    while (x != 0) {
      const UWide r = g % x;
      g = x;
      x = r;
    }
  }
  const Wide sign = (plane[0] != 0 ? plane[0] : plane[1] != 0 ? plane[1] : plane[2]) < 0 ? -1 : 1;
  for (int i = 0; i < 3; ++i) plane[i] = plane[i] / static_cast<Wide>(g) * sign;
  plane[3] = plane[0] * pa[0] + plane[1] * pa[1] + plane[2] * pa[2];
  return plane;
}

bool Triangulation::on_supporting_plane(const Tet& t, const std::set<Plane>& planes) const {
  for (int k = 0; k < 4; ++k) {
    if (auto plane = plane_through(t[(k + 1) % 4], t[(k + 2) % 4], t[(k + 3) % 4])) return planes.count(*plane) > 0;
  }
  // All four points on one line: any supporting plane through that line will do.
  auto contains = [&](const Plane& plane, std::uint32_t v) {
    const auto& p = vertex_point(v).coords;
    return plane[0] * p[0] + plane[1] * p[1] + plane[2] * p[2] == plane[3];
  };
  return std::any_of(planes.begin(), planes.end(),
                     [&](const Plane& plane) { return contains(plane, t[0]) && contains(plane, t[1]); });
}

// ---------------------------------------------------------------------------
// Audits

std::vector<std::string> Triangulation::check_structure() const {
  std::vector<std::string> problems;
  auto name = [&](Pair p) {
    std::ostringstream s;
    s << "pair " << label(org(p)) << "->" << label(dest(p)) << " apex " << label(apex(p));
    return s.str();
  };
  std::size_t live = 0;
  for (std::uint32_t t = 0; t < records_.size(); ++t) {
    if (!alive(t)) continue;
    ++live;
    const auto& v = records_[t].vertex;
    const auto it = faces_.find(face_key(v[0], v[1], v[2]));
    if (it == faces_.end() || it->second != t) problems.push_back("triangle missing from the face table");
    for (std::uint32_t version = 0; version < 6; ++version) {
      const Pair p = Pair::make(t, version);
      const Pair q = fnext(p);
      if (!alive(q.triangle())) {
        problems.push_back(name(p) + " links to a dead triangle");
        continue;
      }
      if (org(q) != org(p) || dest(q) != dest(p)) problems.push_back(name(p) + " links across edges");
      if (fnext(fnext(q).sym()) != p.sym() && fnext(q.sym()) != p.sym()) {
        problems.push_back(name(p) + " has no inverse link");
      }
      std::size_t length = 1;
      Pair r = q;
      while (r != p && length <= records_.size()) {
        r = fnext(r);
        ++length;
      }
      if (r != p) {
        problems.push_back(name(p) + " ring does not close");
      } else if (length < 3) {
        problems.push_back(name(p) + " ring shorter than three");
      }
      // The tetrahedron (org, dest, apex, y) must be seen the same way from the other edges.
      const std::uint32_t y = apex(q);
      if (apex(fnext(p.enext())) != y || apex(fnext(p.enext().enext())) != y) {
        problems.push_back(name(p) + " disagrees with its edge ring about the tetrahedron");
      }
    }
  }
  if (live != faces_.size()) problems.push_back("face table size differs from live triangles");
  if (!problems.empty()) return problems;
  for (const Tet& t : all_tets(false)) {
    if (!orient(t[0], t[1], t[2], t[3]).positive()) {
      problems.push_back("tetrahedron " + SimplexKey::of<4>({label(t[0]), label(t[1]), label(t[2]), label(t[3])}).to_string() +
                         " is negatively oriented");
    }
  }
  return problems;
}

std::vector<SimplexKey> Triangulation::non_delaunay_triangles() const {
  std::vector<SimplexKey> out;
  for (std::uint32_t t = 0; t < records_.size(); ++t) {
    if (!alive(t)) continue;
    const auto& v = records_[t].vertex;
    if (v[0] == kInfinite || v[1] == kInfinite || v[2] == kInfinite || is_hull_face(t)) continue;
    const SimplexKey key = SimplexKey::of<3>({label(v[0]), label(v[1]), label(v[2])});
    if (!locally_delaunay(key)) out.push_back(key);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace alpha3d
