#include "alpha3d/alpha_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "alpha3d/errors.hpp"

namespace alpha3d {

const char* class_name(SimplexClass c) {
  switch (c) {
    case SimplexClass::Interior: return "interior";
    case SimplexClass::Regular: return "regular";
    case SimplexClass::Singular: return "singular";
  }
  return "?";
}

std::size_t IntervalRecord::entry_index() const {
  if (dimension() == 0) return 0;
  if (dimension() == 3 || !attached) return rho_index;
  return mu_lo_index;
}

std::optional<SimplexClass> IntervalRecord::classify(std::size_t interval) const {
  switch (dimension()) {
    case 3:
      if (interval >= rho_index) return SimplexClass::Interior;
      return std::nullopt;
    case 0:
      if (interval >= mu_hi_index) return SimplexClass::Interior;
      if (interval >= mu_lo_index) return SimplexClass::Regular;
      return SimplexClass::Singular;
    default:
      if (interval >= mu_hi_index) return SimplexClass::Interior;
      if (interval >= mu_lo_index) return SimplexClass::Regular;
      if (!attached && interval >= rho_index) return SimplexClass::Singular;
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------

Spectrum::Spectrum(std::vector<RadiusSq> thresholds) {
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  values_.reserve(thresholds.size() + 2);
  values_.emplace_back(Rational(0));
  for (auto& t : thresholds) {
    if (t.is_infinite() || sgn(t.value()) <= 0) throw InternalError("spectrum thresholds must be positive and finite");
    values_.push_back(std::move(t));
  }
  values_.push_back(RadiusSq::infinity());
  alpha_.reserve(values_.size());
  for (const auto& v : values_) {
    alpha_.push_back(v.is_infinite() ? std::numeric_limits<double>::infinity() : std::sqrt(v.to_double()));
  }
}

std::size_t Spectrum::index_of(const RadiusSq& value) const {
  const auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it == values_.end() || *it != value) throw InternalError("value " + value.to_string() + " is not in the spectrum");
  return static_cast<std::size_t>(it - values_.begin());
}

std::size_t Spectrum::interval_of(const Rational& alpha_sq) const {
  if (sgn(alpha_sq) < 0) throw PreconditionError("alpha^2 must not be negative");
  const RadiusSq probe(alpha_sq);
  const auto it = std::upper_bound(values_.begin(), values_.end(), probe);
  const std::size_t below = static_cast<std::size_t>(it - values_.begin()) - 1;
  if (below > 0 && values_[below] == probe) {
    throw OnThresholdError("alpha^2 = " + probe.to_string() + " is the threshold at spectrum index " +
                           std::to_string(below) + "; pick interval " + std::to_string(below - 1) + " or " +
                           std::to_string(below) + " instead");
  }
  return below;
}

std::size_t Spectrum::interval_of_alpha(double alpha) const {
  if (std::isnan(alpha) || alpha < 0) throw PreconditionError("alpha must be a non-negative number");
  if (std::isinf(alpha)) return interval_count() - 1;
  const Rational a(alpha);
  return interval_of(a * a);
}

Rational Spectrum::representative(std::size_t interval) const {
  if (interval >= interval_count()) throw PreconditionError("interval " + std::to_string(interval) + " out of range");
  const Rational& lo = values_[interval].value();
  if (values_[interval + 1].is_infinite()) return lo + 1;
  return (lo + values_[interval + 1].value()) / 2;
}

// ---------------------------------------------------------------------------

std::size_t ComplexView::count(int dimension, SimplexClass c) const {
  const auto& list = simplices[dimension];
  return static_cast<std::size_t>(
      std::count_if(list.begin(), list.end(), [c](const auto& entry) { return entry.second == c; }));
}

std::size_t ComplexView::size() const {
  std::size_t n = 0;
  for (const auto& list : simplices) n += list.size();
  return n;
}

bool ComplexView::contains(const SimplexKey& key) const {
  if (key.size < 1 || key.size > 4) return false;
  const auto& list = simplices[key.dimension()];
  const auto it = std::lower_bound(list.begin(), list.end(), key,
                                   [](const auto& entry, const SimplexKey& k) { return entry.first < k; });
  return it != list.end() && it->first == key;
}

// ---------------------------------------------------------------------------

namespace {

const RadiusSq& entry_value(const IntervalRecord& r) {
  return r.attached ? r.mu_lo_sq : *r.rho_sq;
}

}  // namespace

AlphaComplex AlphaComplex::classify_all(const Triangulation& t) {
  AlphaComplex a;
  a.points_ = t.points();
  const Enumeration e = t.enumerate();
  for (int d = 0; d < 4; ++d) {
    a.records_[d].resize(e.count(d));
    for (std::size_t i = 0; i < e.count(d); ++i) {
      a.records_[d][i].key = e.simplices[d][i];
      a.records_[d][i].on_hull = e.on_hull[d][i];
    }
  }
  a.index_records();
  auto pt = [&](std::uint32_t label) -> const ExactPoint& { return a.points_[label - 1]; };

  for (auto& r : a.records_[3]) {
    const auto& k = r.key;
    r.rho_sq = rho_sq_tetrahedron(pt(k[0]), pt(k[1]), pt(k[2]), pt(k[3]));
    r.mu_lo_sq = r.mu_hi_sq = *r.rho_sq;
  }

  for (int d = 2; d >= 0; --d) {
    for (std::size_t i = 0; i < a.records_[d].size(); ++i) {
      IntervalRecord& r = a.records_[d][i];
      const auto& k = r.key;
      const auto& up = a.up_[d][i];
      if (up.empty()) throw InternalError("simplex " + k.to_string() + " has no coface");
      if (d == 2) r.rho_sq = rho_sq_triangle(pt(k[0]), pt(k[1]), pt(k[2]));
      if (d == 1) r.rho_sq = rho_sq_edge(pt(k[0]), pt(k[1]));
      std::optional<RadiusSq> lo, hi;
      for (std::uint32_t j : up) {
        const IntervalRecord& c = a.records_[d + 1][j];
        if (d > 0 && !r.attached) {
          std::uint32_t other = 0;
          for (std::uint32_t l : c.key) {
            if (!k.contains(l)) other = l;
          }
          const Sign inside = d == 2 ? triangle_attached(pt(k[0]), pt(k[1]), pt(k[2]), pt(other))
                                     : edge_attached(pt(k[0]), pt(k[1]), pt(other));
          r.attached = inside.positive();
        }
        const RadiusSq& v = entry_value(c);
        if (!lo || v < *lo) lo = v;
        if (!hi || c.mu_hi_sq > *hi) hi = c.mu_hi_sq;
      }
      r.mu_lo_sq = *lo;
      r.mu_hi_sq = r.on_hull ? RadiusSq::infinity() : *hi;
    }
  }

  std::vector<RadiusSq> thresholds;
  for (int d = 1; d < 4; ++d) {
    for (const auto& r : a.records_[d]) {
      if (!r.attached) thresholds.push_back(*r.rho_sq);
    }
  }
  a.spectrum_ = Spectrum(std::move(thresholds));
  for (int d = 0; d < 4; ++d) {
    for (auto& r : a.records_[d]) {
      if (d > 0 && !r.attached) r.rho_index = a.spectrum_.index_of(*r.rho_sq);
      r.mu_lo_index = a.spectrum_.index_of(r.mu_lo_sq);
      r.mu_hi_index = a.spectrum_.index_of(r.mu_hi_sq);
    }
  }
  return a;
}

void AlphaComplex::index_records() {
  for (int d = 0; d < 4; ++d) {
    index_[d].clear();
    index_[d].reserve(records_[d].size());
    for (std::size_t i = 0; i < records_[d].size(); ++i) {
      if (records_[d][i].key.dimension() != d) throw InputError("record " + records_[d][i].key.to_string() + " filed under the wrong dimension");
      for (std::uint32_t l : records_[d][i].key) {
        if (l < 1 || l > points_.size()) throw InputError("record " + records_[d][i].key.to_string() + " names an unknown point");
      }
      if (!index_[d].emplace(records_[d][i].key, static_cast<std::uint32_t>(i)).second) {
        throw InputError("record " + records_[d][i].key.to_string() + " appears twice");
      }
    }
    if (d < 3) up_[d].assign(records_[d].size(), {});
  }
  for (int d = 1; d < 4; ++d) {
    for (std::size_t i = 0; i < records_[d].size(); ++i) {
      const SimplexKey& key = records_[d][i].key;
      for (std::size_t k = 0; k < key.size; ++k) {
        const auto it = index_[d - 1].find(key.without(k));
        if (it == index_[d - 1].end()) throw InputError("face " + key.without(k).to_string() + " is missing");
        up_[d - 1][it->second].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
}

AlphaComplex AlphaComplex::from_records(std::vector<ExactPoint> points,
                                        std::array<std::vector<IntervalRecord>, 4> records, Spectrum spectrum) {
  AlphaComplex a;
  a.points_ = std::move(points);
  a.records_ = std::move(records);
  a.spectrum_ = std::move(spectrum);
  if (a.records_[0].size() != a.points_.size()) throw InputError("expected one vertex record per point");
  a.index_records();
  const std::size_t size = a.spectrum_.size();
  for (int d = 0; d < 4; ++d) {
    for (const auto& r : a.records_[d]) {
      const bool has_rho = d > 0 && (d == 3 || !r.attached);
      if (r.mu_lo_index >= size || r.mu_hi_index >= size || r.mu_lo_index > r.mu_hi_index ||
          (has_rho && (r.rho_index >= size || r.rho_index > r.mu_lo_index)) || (!has_rho && r.rho_index != kNoThreshold)) {
        throw InputError("record " + r.key.to_string() + " has inconsistent threshold indices");
      }
    }
  }
  return a;
}

std::size_t AlphaComplex::record_count() const {
  std::size_t n = 0;
  for (const auto& r : records_) n += r.size();
  return n;
}

std::optional<std::size_t> AlphaComplex::find(const SimplexKey& key) const {
  if (key.size < 1 || key.size > 4) return std::nullopt;
  const auto& index = index_[key.dimension()];
  const auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const IntervalRecord& AlphaComplex::record(const SimplexKey& key) const {
  const auto i = find(key);
  if (!i) throw PreconditionError("simplex " + key.to_string() + " is not in the triangulation");
  return records_[key.dimension()][*i];
}

std::vector<std::uint32_t> AlphaComplex::faces(int dimension, std::size_t index) const {
  if (dimension < 1 || dimension > 3) throw PreconditionError("faces needs a dimension between 1 and 3");
  const SimplexKey& key = records_[dimension][index].key;
  std::vector<std::uint32_t> out;
  for (std::size_t k = 0; k < key.size; ++k) out.push_back(index_[dimension - 1].at(key.without(k)));
  return out;
}

ComplexView AlphaComplex::complex_at(std::size_t interval) const {
  if (interval >= spectrum_.interval_count()) {
    throw PreconditionError("interval index " + std::to_string(interval) + " is out of range [0, " +
                            std::to_string(spectrum_.interval_count()) + ")");
  }
  ComplexView view;
  view.interval = interval;
  for (int d = 0; d < 4; ++d) {
    for (const auto& r : records_[d]) {
      if (auto c = r.classify(interval)) view.simplices[d].emplace_back(r.key, *c);
    }
  }
  return view;
}

ComplexView AlphaComplex::complex_at(const Rational& alpha_sq) const {
  return complex_at(spectrum_.interval_of(alpha_sq));
}

ComplexView AlphaComplex::complex_at_alpha(double alpha) const {
  return complex_at(spectrum_.interval_of_alpha(alpha));
}

ShapeBoundary AlphaComplex::shape_boundary(const ComplexView& view) const {
  ShapeBoundary out;
  auto pt = [&](std::uint32_t label) -> const ExactPoint& { return points_[label - 1]; };
  for (const auto& [key, c] : view.simplices[2]) {
    if (c == SimplexClass::Singular) {
      out.singular_triangles.push_back(key);
      continue;
    }
    if (c != SimplexClass::Regular) continue;
    const std::size_t i = index_[2].at(key);
    std::optional<std::uint32_t> behind;
    for (std::uint32_t j : up_[2][i]) {
      if (records_[3][j].classify(view.interval)) behind = j;
    }
    if (!behind) throw InternalError("regular triangle " + key.to_string() + " bounds no tetrahedron");
    std::uint32_t apex = 0;
    for (std::uint32_t l : records_[3][*behind].key) {
      if (!key.contains(l)) apex = l;
    }
    std::array<std::uint32_t, 3> tri{key[0], key[1], key[2]};
    if (orientation(pt(tri[0]), pt(tri[1]), pt(tri[2]), pt(apex)).negative()) std::swap(tri[0], tri[1]);
    out.regular_triangles.push_back(tri);
  }
  for (const auto& [key, c] : view.simplices[1]) {
    if (c == SimplexClass::Singular) out.singular_edges.push_back(key);
  }
  for (const auto& [key, c] : view.simplices[0]) {
    if (c == SimplexClass::Singular) out.singular_vertices.push_back(key);
  }
  return out;
}

}  // namespace alpha3d
