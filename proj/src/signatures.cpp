#include "alpha3d/signatures.hpp"

#include <cmath>
#include <numeric>

#include "alpha3d/errors.hpp"

namespace alpha3d {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

int class_slot(SimplexClass c) { return static_cast<int>(c); }

}  // namespace

double triangle_area(const AlphaComplex& a, const SimplexKey& k) {
  const auto& p = a.points();
  return std::sqrt(cross_norm_sq(p[k[0] - 1], p[k[1] - 1], p[k[2] - 1]).get_d()) / 2;
}

Integer tetrahedron_volume6(const AlphaComplex& a, const SimplexKey& k) {
  const auto& p = a.points();
  return abs(to_integer(orientation_determinant(p[k[0] - 1], p[k[1] - 1], p[k[2] - 1], p[k[3] - 1])));
}

std::vector<std::size_t> components_signature(const AlphaComplex& a) {
  const std::size_t intervals = a.spectrum().interval_count();
  std::vector<std::vector<const SimplexKey*>> entering(intervals);
  for (const auto& r : a.records(1)) entering[r.entry_index()].push_back(&r.key);
  UnionFind uf(a.vertex_count());
  std::size_t count = a.vertex_count();
  std::vector<std::size_t> out;
  out.reserve(intervals);
  for (std::size_t i = 0; i < intervals; ++i) {
    for (const SimplexKey* e : entering[i]) count -= uf.unite((*e)[0] - 1, (*e)[1] - 1);
    out.push_back(count);
  }
  return out;
}

std::vector<Rational> volume_signature(const AlphaComplex& a) {
  const std::size_t intervals = a.spectrum().interval_count();
  std::vector<Integer> added(intervals, 0);
  for (const auto& r : a.records(3)) added[r.rho_index] += tetrahedron_volume6(a, r.key);
  std::vector<Rational> out;
  out.reserve(intervals);
  Integer running = 0;
  for (std::size_t i = 0; i < intervals; ++i) {
    running += added[i];
    out.emplace_back(running, 6);
    out.back().canonicalize();
  }
  return out;
}

std::vector<double> area_signature(const AlphaComplex& a) {
  const std::size_t intervals = a.spectrum().interval_count();
  // Weights: two while singular, one while regular, none once interior.
  std::vector<long double> delta(intervals + 1, 0);
  for (const auto& r : a.records(2)) {
    const long double area = triangle_area(a, r.key);
    if (!r.attached && r.rho_index < r.mu_lo_index) {
      delta[r.rho_index] += 2 * area;
      delta[r.mu_lo_index] -= area;
    } else {
      delta[r.mu_lo_index] += area;
    }
    if (r.mu_hi_index < intervals) delta[r.mu_hi_index] -= area;
  }
  std::vector<double> out;
  out.reserve(intervals);
  long double running = 0;
  for (std::size_t i = 0; i < intervals; ++i) {
    running += delta[i];
    out.push_back(std::max(0.0, static_cast<double>(running)));
  }
  return out;
}

FaceCounts face_count_signature(const AlphaComplex& a) {
  const std::size_t intervals = a.spectrum().interval_count();
  std::array<std::array<std::vector<long>, 3>, 4> delta;
  for (auto& row : delta)
    for (auto& series : row) series.assign(intervals + 1, 0);
  auto span = [&](int d, SimplexClass c, std::size_t from, std::size_t to) {
    to = std::min(to, intervals);
    if (from >= to) return;
    ++delta[d][class_slot(c)][from];
    --delta[d][class_slot(c)][to];
  };
  for (int d = 0; d < 4; ++d) {
    for (const auto& r : a.records(d)) {
      if (d == 3) {
        span(d, SimplexClass::Interior, r.rho_index, intervals);
        continue;
      }
      const std::size_t singular_from = d == 0 ? 0 : (r.attached ? r.mu_lo_index : r.rho_index);
      span(d, SimplexClass::Singular, singular_from, r.mu_lo_index);
      span(d, SimplexClass::Regular, r.mu_lo_index, r.mu_hi_index);
      span(d, SimplexClass::Interior, r.mu_hi_index, intervals);
    }
  }
  FaceCounts out;
  for (int d = 0; d < 4; ++d) {
    for (int c = 0; c < 3; ++c) {
      long running = 0;
      out[d][c].reserve(intervals);
      for (std::size_t i = 0; i < intervals; ++i) {
        running += delta[d][c][i];
        out[d][c].push_back(static_cast<std::size_t>(running));
      }
    }
  }
  return out;
}

Signatures compute_signatures(const AlphaComplex& a) {
  Signatures s;
  s.components = components_signature(a);
  s.volume = volume_signature(a);
  s.area = area_signature(a);
  s.face_counts = face_count_signature(a);
  return s;
}

}  // namespace alpha3d
