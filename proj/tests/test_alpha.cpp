#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "alpha3d/alpha_complex.hpp"
#include "alpha3d/errors.hpp"
#include "alpha3d/triangulation.hpp"
#include "oracles.hpp"

using namespace alpha3d;
using namespace testing;

namespace {

Rational q(long num, long den = 1) { return Rational(num, den); }

AlphaComplex family(const std::vector<ExactPoint>& p) {
  Triangulation t = Triangulation::build(p);
  t.postprocess_flat_tets();
  return AlphaComplex::classify_all(t);
}

const std::vector<Rational>& fixture_spectrum() {
  static const std::vector<Rational> values{q(17, 4),     q(9),          q(41, 4),     q(697, 64),
                                            q(27, 2),     q(59, 4),      q(3009, 196), q(33, 2),
                                            q(891, 50),   q(26609, 1420), q(29401, 1568)};
  return values;
}

void check_closed(const ComplexView& v) {
  const auto all = keys(v);
  for (const SimplexKey& k : all) {
    if (k.size == 1) continue;
    for (std::size_t i = 0; i < k.size; ++i) REQUIRE(all.count(k.without(i)));
  }
}

}  // namespace

TEST_SUITE("alpha") {

TEST_CASE("fixture records") {
  const AlphaComplex a = family(testing::fixture_p());
  CHECK(a.record_count() == 15);
  const IntervalRecord& t123 = a.record({1, 2, 3});
  CHECK(*t123.rho_sq == RadiusSq(q(697, 64)));
  CHECK_FALSE(t123.attached);
  CHECK(t123.on_hull);
  CHECK(t123.mu_lo_sq == RadiusSq(q(29401, 1568)));
  CHECK(t123.mu_hi_sq.is_infinite());

  const IntervalRecord& e13 = a.record({1, 3});
  CHECK(*e13.rho_sq == RadiusSq(q(17, 4)));
  CHECK_FALSE(e13.attached);
  CHECK(e13.on_hull);
  CHECK(e13.mu_lo_sq == RadiusSq(q(697, 64)));

  const IntervalRecord& v1 = a.record({1});
  CHECK_FALSE(v1.rho_sq.has_value());
  CHECK(v1.mu_lo_sq == RadiusSq(q(17, 4)));
  CHECK(v1.on_hull);
  CHECK(v1.mu_hi_sq.is_infinite());

  const IntervalRecord& tet = a.record({1, 2, 3, 4});
  CHECK(*tet.rho_sq == RadiusSq(q(29401, 1568)));
  CHECK(tet.mu_lo_sq == tet.mu_hi_sq);
  CHECK(tet.mu_lo_sq == *tet.rho_sq);
  CHECK_FALSE(tet.attached);
  for (int d = 1; d <= 2; ++d)
    for (const auto& r : a.records(d)) CHECK_FALSE(r.attached);
  CHECK_THROWS_AS(a.record({1, 5}), PreconditionError);
}

TEST_CASE("fixture spectrum") {
  const AlphaComplex a = family(testing::fixture_p());
  const Spectrum& s = a.spectrum();
  REQUIRE(s.size() == 13);
  CHECK(s[0] == RadiusSq(q(0)));
  CHECK(s[12].is_infinite());
  for (std::size_t i = 0; i < 11; ++i) CHECK(s[i + 1] == RadiusSq(fixture_spectrum()[i]));
  CHECK(s.interval_count() == 12);
  CHECK(s.alpha()[1] == doctest::Approx(std::sqrt(17.0 / 4)));
  CHECK(std::isinf(s.alpha()[12]));
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double a2 = s.alpha()[i] * s.alpha()[i];
    CHECK(std::abs(a2 - s[i].to_double()) <= 1e-12 * s[i].to_double());
  }
}

TEST_CASE("fixture complexes") {
  const AlphaComplex a = family(testing::fixture_p());
  const ComplexView first = a.complex_at(std::size_t{0});
  CHECK(first.size() == 4);
  CHECK(first.count(0, SimplexClass::Singular) == 4);

  const std::size_t t123 = a.spectrum().index_of(RadiusSq(q(697, 64)));
  const ComplexView after = a.complex_at(t123);
  auto m = as_map(after);
  CHECK(m.at(SimplexKey{1, 2, 3}) == SimplexClass::Singular);
  const ShapeBoundary b = a.shape_boundary(after);
  CHECK(b.singular_triangles == std::vector<SimplexKey>{SimplexKey{1, 2, 3}});
  CHECK(b.regular_triangles.empty());

  const ComplexView last = a.complex_at(std::size_t{11});
  CHECK(last.count(3, SimplexClass::Interior) == 1);
  CHECK(last.count(2, SimplexClass::Regular) == 4);
  CHECK(last.count(1, SimplexClass::Regular) == 6);
  CHECK(last.count(0, SimplexClass::Regular) == 4);
  CHECK(last.size() == 15);
  const ShapeBoundary hull = a.shape_boundary(last);
  CHECK(hull.regular_triangles.size() == 4);
  CHECK(hull.singular_triangles.empty());
  CHECK(hull.singular_edges.empty());
  CHECK(hull.singular_vertices.empty());
  const auto& p = a.points();
  for (const auto& tri : hull.regular_triangles) {
    std::uint32_t apex = 10;
    for (std::uint32_t l = 1; l <= 4; ++l)
      if (l != tri[0] && l != tri[1] && l != tri[2]) apex = l;
    CHECK(orientation(p[tri[0] - 1], p[tri[1] - 1], p[tri[2] - 1], p[apex - 1]).positive());
  }
  const ShapeBoundary start = a.shape_boundary(first);
  CHECK(start.singular_vertices.size() == 4);
  CHECK(start.regular_triangles.empty());

  for (std::size_t i = 0; i + 1 < a.spectrum().interval_count(); ++i) {
    if (i + 1 >= 11) break;
    CHECK(as_map(a.complex_at(i)).count(SimplexKey{1, 2, 3}) == (i >= t123));
  }
}

TEST_CASE("alpha lookups") {
  const AlphaComplex a = family(testing::fixture_p());
  CHECK(a.complex_at(q(1)).interval == 0);
  CHECK(a.complex_at(q(0)).interval == 0);
  CHECK(a.complex_at(q(5)).interval == 1);
  CHECK(a.complex_at(q(100)).interval == 11);
  CHECK(a.complex_at_alpha(2.5).interval == 1);
  CHECK(a.complex_at_alpha(3.1).interval == 2);
  CHECK(a.complex_at_alpha(INFINITY).interval == 11);
  CHECK_THROWS_AS(a.complex_at(q(9)), OnThresholdError);
  CHECK_THROWS_AS(a.complex_at_alpha(3.0), OnThresholdError);
  CHECK_THROWS_AS(a.complex_at(q(697, 64)), OnThresholdError);
  CHECK_THROWS_AS(a.complex_at(std::size_t{12}), PreconditionError);
  CHECK_THROWS_AS(a.complex_at(q(-1)), PreconditionError);
  CHECK(a.spectrum().representative(0) > 0);
  CHECK(a.spectrum().representative(0) < q(17, 4));
}

TEST_CASE("table rows and partition") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = testing::from_coords(testing::random_coords(rng, 6 + trial % 10, 0, 100));
    const AlphaComplex a = family(p);
    const std::size_t last = a.spectrum().size() - 1;
    for (int d = 0; d < 4; ++d) {
      for (const auto& r : a.records(d)) {
        CHECK(r.mu_lo_sq <= r.mu_hi_sq);
        if (d == 3) {
          CHECK(r.mu_lo_sq == *r.rho_sq);
          CHECK_FALSE(r.attached);
        }
        if ((d == 1 || d == 2) && !r.attached) CHECK(*r.rho_sq <= r.mu_lo_sq);
        if (r.on_hull && d < 3) CHECK(r.mu_hi_index == last);
        if (d == 1 || d == 2) CHECK((r.rho_index == kNoThreshold) == r.attached);
        // Walk the intervals: absent, then singular, regular and interior in that order.
        int stage = 0;
        for (std::size_t i = 0; i < a.spectrum().interval_count(); ++i) {
          const auto c = r.classify(i);
          const int now = !c ? 0 : *c == SimplexClass::Singular ? 1 : *c == SimplexClass::Regular ? 2 : 3;
          CHECK(now >= stage);
          stage = now;
          if (r.attached) CHECK(now != 1);
          if (r.on_hull && d < 3) CHECK(now != 3);
        }
      }
    }
  }
}

TEST_CASE("first principles agreement") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + trial % 6;
    auto p = testing::from_coords(testing::random_coords(rng, n, 0, trial % 2 ? 20 : 1000));
    Triangulation t = Triangulation::build(p);
    t.postprocess_flat_tets();
    const AlphaComplex a = AlphaComplex::classify_all(t);
    for (std::size_t i = 0; i < a.spectrum().interval_count(); ++i) {
      REQUIRE(as_map(a.complex_at(i)) == first_principles(t, a.spectrum().representative(i)));
    }
  }
}

TEST_CASE("empty diametral balls only on delaunay edges") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = testing::from_coords(testing::random_coords(rng, 8, 0, 50));
    Triangulation t = Triangulation::build(p);
    for (std::uint32_t i = 0; i < p.size(); ++i)
      for (std::uint32_t j = i + 1; j < p.size(); ++j) {
        bool empty = true;
        for (std::uint32_t k = 0; k < p.size() && empty; ++k)
          if (k != i && k != j) empty = !edge_attached(p[i], p[j], p[k]).positive();
        if (empty) CHECK(t.contains(SimplexKey{i + 1, j + 1}));
      }
  }
}

TEST_CASE("exposed triangles match the boundary") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = testing::from_coords(testing::random_coords(rng, 5 + trial % 4, 0, 1000));
    const AlphaComplex a = family(p);
    for (std::size_t i = 0; i < a.spectrum().interval_count(); ++i) {
      const double alpha_sq = a.spectrum().representative(i).get_d();
      const double alpha = std::sqrt(alpha_sq);
      const ComplexView view = a.complex_at(i);
      const auto classes = as_map(view);
      for (const auto& r : a.records(2)) {
        std::array<double, 3> x[3];
        for (int v = 0; v < 3; ++v)
          for (int c = 0; c < 3; ++c) x[v][c] = static_cast<double>(p[r.key[v] - 1].coords[c]);
        std::array<double, 3> u{}, w{}, n{};
        for (int c = 0; c < 3; ++c) {
          u[c] = x[1][c] - x[0][c];
          w[c] = x[2][c] - x[0][c];
        }
        n = {u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
        const double nn = n[0] * n[0] + n[1] * n[1] + n[2] * n[2];
        const double uu = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
        const double ww = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        // circumcenter = x0 + (|u|^2 (w x n) + |w|^2 (n x u)) / (2 |n|^2)
        std::array<double, 3> wxn{w[1] * n[2] - w[2] * n[1], w[2] * n[0] - w[0] * n[2], w[0] * n[1] - w[1] * n[0]};
        std::array<double, 3> nxu{n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
        std::array<double, 3> center{};
        for (int c = 0; c < 3; ++c) center[c] = x[0][c] + (uu * wxn[c] + ww * nxu[c]) / (2 * nn);
        const double rho_sq = r.rho_sq->to_double();
        bool exposed = false;
        bool ambiguous = std::abs(alpha_sq - rho_sq) < 1e-9 * alpha_sq;
        if (alpha_sq > rho_sq && !ambiguous) {
          const double h = std::sqrt(alpha_sq - rho_sq) / std::sqrt(nn);
          for (double side : {-1.0, 1.0}) {
            bool empty = true;
            for (const auto& q : p) {
              if (r.key.contains(q.index)) continue;
              double d2 = 0;
              for (int c = 0; c < 3; ++c) {
                const double diff = static_cast<double>(q.coords[c]) - (center[c] + side * h * n[c]);
                d2 += diff * diff;
              }
              if (std::abs(std::sqrt(d2) - alpha) < 1e-7 * alpha) ambiguous = true;
              if (d2 < alpha_sq) empty = false;
            }
            exposed = exposed || empty;
          }
        }
        if (ambiguous) continue;
        const auto it = classes.find(r.key);
        const bool boundary = it != classes.end() && it->second != SimplexClass::Interior;
        CHECK(exposed == boundary);
      }
    }
  }
}

TEST_CASE("nesting, closure and endpoints") {
  std::mt19937_64 rng(3);
  std::vector<std::vector<ExactPoint>> inputs;
  for (int trial = 0; trial < 15; ++trial) {
    inputs.push_back(testing::from_coords(testing::random_coords(rng, 8 + trial * 3, 0, trial % 3 ? 1000 : 4)));
  }
  inputs.push_back(testing::points({{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {4, 4, 0}, {0, 0, 4}, {4, 0, 4}, {0, 4, 4}, {4, 4, 4}}));
  for (const auto& p : inputs) {
    const AlphaComplex a = family(p);
    std::set<SimplexKey> previous;
    const std::size_t intervals = a.spectrum().interval_count();
    CHECK(intervals - 1 <= 2 * p.size() * p.size() - 5 * p.size());
    for (std::size_t i = 0; i < intervals; ++i) {
      const ComplexView v = a.complex_at(i);
      check_closed(v);
      const auto now = keys(v);
      CHECK(std::includes(now.begin(), now.end(), previous.begin(), previous.end()));
      if (i > 0) CHECK(now != previous);
      previous = now;
    }
    const ComplexView first = a.complex_at(std::size_t{0});
    CHECK(first.size() == p.size());
    CHECK(first.count(0, SimplexClass::Singular) == p.size());
    CHECK(previous.size() == a.record_count());
  }
}

TEST_CASE("two separated tetrahedra") {
  std::vector<std::array<std::int64_t, 3>> c;
  for (const auto& pt : testing::fixture_p()) c.push_back(pt.coords);
  for (const auto& pt : testing::fixture_p()) c.push_back({pt.coords[0] + 1000, pt.coords[1], pt.coords[2]});
  const AlphaComplex a = family(testing::from_coords(c));
  const std::size_t i = a.spectrum().interval_of(q(20));
  const ComplexView v = a.complex_at(i);
  const ShapeBoundary b = a.shape_boundary(v);
  CHECK(b.regular_triangles.size() == 8);
  CHECK(v.count(3, SimplexClass::Interior) == 2);
  // Each shell is closed: every edge is used once in each direction.
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
  for (const auto& tri : b.regular_triangles)
    for (int k = 0; k < 3; ++k) ++directed[{tri[k], tri[(k + 1) % 3]}];
  for (const auto& [edge, count] : directed) {
    CHECK(count == 1);
    CHECK(directed.count({edge.second, edge.first}) == 1);
  }
}

}
