#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "alpha3d/errors.hpp"
#include "alpha3d/kernel.hpp"
#include "alpha3d/triangulation.hpp"
#include "oracles.hpp"

using namespace alpha3d;
using namespace testing;

namespace {

std::array<std::size_t, 4> counts(const Triangulation& t) {
  const Enumeration e = t.enumerate();
  return {e.count(0), e.count(1), e.count(2), e.count(3)};
}

std::size_t hull_count(const Enumeration& e, int dim) {
  return static_cast<std::size_t>(std::count(e.on_hull[dim].begin(), e.on_hull[dim].end(), true));
}

void check_sound(const Triangulation& t) {
  const auto problems = t.check_structure();
  CHECK_MESSAGE(problems.empty(), (problems.empty() ? "" : problems.front()));
}

}  // namespace

TEST_SUITE("delaunay") {

TEST_CASE("single tetrahedron") {
  Triangulation t = Triangulation::build(testing::fixture_p());
  CHECK(counts(t) == std::array<std::size_t, 4>{4, 6, 4, 1});
  const Enumeration e = t.enumerate();
  for (int d = 0; d < 4; ++d) CHECK(hull_count(e, d) == e.count(d));
  CHECK(t.tetrahedra() == Tets{{1, 2, 3, 4}});
  check_sound(t);
}

TEST_CASE("interior point gives its star") {
  auto p = testing::points({{0, 0, 0}, {6, 0, 0}, {1, 4, 0}, {2, 1, 7}, {2, 1, 2}});
  Triangulation t = Triangulation::build(p);
  CHECK(counts(t) == std::array<std::size_t, 4>{5, 10, 10, 4});
  CHECK(t.tetrahedra() == brute_force_delaunay(p));
  for (const auto& tet : t.tetrahedra()) CHECK(std::find(tet.begin(), tet.end(), 5u) != tet.end());
  const Enumeration e = t.enumerate();
  CHECK(hull_count(e, 2) == 4);
  CHECK(hull_count(e, 3) == 4);
  CHECK(hull_count(e, 0) == 4);
  check_sound(t);
}

TEST_CASE("cube corners match the oracle") {
  auto p = cube();
  Triangulation t = Triangulation::build(p);
  check_sound(t);
  CHECK(t.tetrahedra() == brute_force_delaunay(p));
  CHECK(t.non_delaunay_triangles().empty());
  t.postprocess_flat_tets();
  check_sound(t);
  CHECK(t.flat_tetrahedron_count() == 0);
  const std::size_t tets = t.tetrahedra().size();
  CHECK((tets == 5 || tets == 6));
  Rational volume = 0;
  for (const auto& tet : t.tetrahedra()) {
    const Integer det = to_integer(orientation_determinant(t.point(tet[0]), t.point(tet[1]), t.point(tet[2]),
                                                           t.point(tet[3])));
    volume += Rational(abs(det)) / 6;
  }
  CHECK(volume == 64);
}

TEST_CASE("oracle equivalence on random sets") {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 5 + trial % 8;
    auto p = testing::from_coords(testing::random_coords(rng, n, 0, 1000));
    Triangulation t = Triangulation::build(p);
    REQUIRE(t.tetrahedra() == brute_force_delaunay(p));
    CHECK(t.check_structure().empty());
    CHECK(t.non_delaunay_triangles().empty());
  }
}

TEST_CASE("oracle equivalence on degenerate small grids") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 5 + trial % 6;
    auto p = testing::from_coords(testing::random_coords(rng, n, 0, 2));
    if (affine_rank(p) < 3) continue;
    Triangulation t = Triangulation::build(p);
    REQUIRE(t.tetrahedra() == brute_force_delaunay(p));
    CHECK(t.check_structure().empty());
    CHECK(t.non_delaunay_triangles().empty());
  }
}

TEST_CASE("insertion order does not matter for generic input") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto coords = testing::random_coords(rng, 30, 0, 1000);
    KernelCounters before = kernel_stats().snapshot();
    Triangulation a = Triangulation::build(testing::from_coords(coords));
    const KernelCounters used = kernel_stats().snapshot().since(before);
    bool depth_zero = true;
    for (Predicate kind : {Predicate::Orientation, Predicate::InSphere}) {
      const auto k = static_cast<std::size_t>(kind);
      depth_zero = depth_zero && used.depth_histogram[k][0] == used.calls[k];
    }
    std::vector<std::size_t> perm(coords.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::array<std::int64_t, 3>> shuffled;
    for (std::size_t i : perm) shuffled.push_back(coords[i]);
    Triangulation b = Triangulation::build(testing::from_coords(shuffled));
    if (!depth_zero) continue;
    std::set<std::array<std::array<std::int64_t, 3>, 4>> ga, gb;
    for (const auto& t : a.tetrahedra()) {
      std::array<std::array<std::int64_t, 3>, 4> g;
      for (int i = 0; i < 4; ++i) g[i] = a.point(t[i]).coords;
      std::sort(g.begin(), g.end());
      ga.insert(g);
    }
    for (const auto& t : b.tetrahedra()) {
      std::array<std::array<std::int64_t, 3>, 4> g;
      for (int i = 0; i < 4; ++i) g[i] = b.point(t[i]).coords;
      std::sort(g.begin(), g.end());
      gb.insert(g);
    }
    CHECK(ga == gb);
  }
}

TEST_CASE("euler characteristic, hull size and simplex bounds") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + trial * 3;
    auto p = testing::from_coords(testing::random_coords(rng, n, 0, 500));
    Triangulation t = Triangulation::build(p);
    const Enumeration e = t.enumerate();
    const auto c = counts(t);
    CHECK(static_cast<long>(c[0]) - static_cast<long>(c[1]) + static_cast<long>(c[2]) - static_cast<long>(c[3]) == 1);
    CHECK(hull_count(e, 2) == 2 * hull_count(e, 0) - 4);
    CHECK(c[1] <= (n * n - n) / 2);
    CHECK(c[2] <= n * n - 3 * n);
    CHECK(c[3] <= (n * n - 3 * n - 2) / 2);
  }
}

TEST_CASE("locally delaunay") {
  auto base = testing::points({{4, 0, 0}, {-4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {0, 0, -12}});
  Triangulation outside = Triangulation::from_tetrahedra(base, {{1, 2, 3, 4}, {1, 2, 3, 5}});
  CHECK(outside.locally_delaunay({1, 2, 3}));
  CHECK_THROWS_AS(outside.locally_delaunay({1, 2, 4}), PreconditionError);
  CHECK_THROWS_AS(outside.locally_delaunay({2, 4, 5}), PreconditionError);

  auto inner = testing::points({{4, 0, 0}, {-4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {0, 1, -1}});
  Triangulation inside = Triangulation::from_tetrahedra(inner, {{1, 2, 3, 4}, {1, 2, 3, 5}});
  CHECK_FALSE(inside.locally_delaunay({1, 2, 3}));

  auto on = testing::points({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, -1, 0}});
  Triangulation cospherical = Triangulation::from_tetrahedra(on, {{1, 2, 3, 4}, {1, 2, 3, 5}});
  const bool first = cospherical.locally_delaunay({1, 2, 3});
  CHECK(first == cospherical.locally_delaunay({1, 2, 3}));
  const Sign s = in_sphere(on[0], on[1], on[2], on[3], on[4]);
  CHECK(s.depth >= 1);
  CHECK(first == s.negative());
}

TEST_CASE("two-to-three flip and its inverse") {
  auto p = testing::points({{4, 0, 0}, {-4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {0, 1, -1}});
  Triangulation t = Triangulation::from_tetrahedra(p, {{1, 2, 3, 4}, {1, 2, 3, 5}});
  const auto before = counts(t);
  CHECK(before == std::array<std::size_t, 4>{5, 9, 7, 2});
  t.flip_triangle_to_edge({1, 2, 3});
  check_sound(t);
  const auto after = counts(t);
  CHECK(after[1] == before[1] + 1);
  CHECK(after[2] == before[2] + 2);
  CHECK(after[3] == before[3] + 1);
  CHECK(t.contains({4, 5}));
  CHECK_FALSE(t.contains({1, 2, 3}));
  CHECK(t.tetrahedra() == Tets{{1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}});
  CHECK(t.non_delaunay_triangles().empty());

  t.flip_edge_to_triangle({4, 5});
  check_sound(t);
  CHECK(counts(t) == before);
  CHECK(t.tetrahedra() == Tets{{1, 2, 3, 4}, {1, 2, 3, 5}});
  CHECK_THROWS_AS(t.flip_edge_to_triangle({4, 5}), PreconditionError);
  CHECK_THROWS_AS(t.flip_edge_to_triangle({1, 2}), PreconditionError);
  CHECK_THROWS_AS(t.flip_triangle_to_edge({1, 2, 4}), InternalError);
}

TEST_CASE("triangle-to-edge flip refuses delaunay or non-convex pairs") {
  auto far = testing::points({{4, 0, 0}, {-4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {0, 0, -12}});
  Triangulation t = Triangulation::from_tetrahedra(far, {{1, 2, 3, 4}, {1, 2, 3, 5}});
  CHECK_THROWS_AS(t.flip_triangle_to_edge({1, 2, 3}), InternalError);
  auto reflex = testing::points({{4, 0, 0}, {-4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {30, 1, -1}});
  Triangulation r = Triangulation::from_tetrahedra(reflex, {{1, 2, 3, 4}, {1, 2, 3, 5}});
  if (!r.locally_delaunay({1, 2, 3})) CHECK_THROWS_AS(r.flip_triangle_to_edge({1, 2, 3}), InternalError);
}

TEST_CASE("random flips keep the structure sound") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto p = testing::from_coords(testing::random_coords(rng, 25, 0, 1000));
    Triangulation t = Triangulation::build(p);
    int flips = 0;
    for (int step = 0; step < 60; ++step) {
      const Enumeration e = t.enumerate();
      const auto& edges = e.simplices[1];
      const SimplexKey edge = edges[rng() % edges.size()];
      try {
        t.flip_edge_to_triangle(edge);
        ++flips;
      } catch (const PreconditionError&) {
        continue;
      }
      REQUIRE(t.check_structure().empty());
      CHECK(!t.contains(edge));
    }
    for (int round = 0; round < 200; ++round) {
      bool changed = false;
      for (const SimplexKey& tri : t.non_delaunay_triangles()) {
        try {
          t.flip_triangle_to_edge(tri);
        } catch (const InternalError&) {
          continue;
        }
        REQUIRE(t.check_structure().empty());
        changed = true;
        break;
      }
      if (!changed) break;
    }
    CHECK(flips > 0);
    Triangulation fresh = Triangulation::build(p);
    if (t.non_delaunay_triangles().empty()) CHECK(t.tetrahedra() == fresh.tetrahedra());
  }
}

TEST_CASE("input errors") {
  CHECK_THROWS_AS(Triangulation::build(testing::points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}})), InputError);
  CHECK_THROWS_AS(Triangulation::build(testing::points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}})),
                  InputError);
  try {
    Triangulation::build(testing::points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
  } catch (const InputError& e) {
    const std::string what = e.what();
    CHECK(what.find('2') != std::string::npos);
    CHECK(what.find('4') != std::string::npos);
  }
}

TEST_CASE("postprocess removes flat hull tetrahedra") {
  auto p = testing::points({{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {4, 4, 0}, {2, 2, 5}});
  Triangulation t = Triangulation::build(p);
  CHECK(t.tetrahedra() == brute_force_delaunay(p));
  const std::size_t flat = t.flat_tetrahedron_count();
  const PostprocessReport r = t.postprocess_flat_tets();
  CHECK(r.flat_before == flat);
  CHECK(r.flat_remaining == 0);
  CHECK(t.flat_tetrahedron_count() == 0);
  check_sound(t);
  for (const auto& tet : t.tetrahedra()) {
    CHECK(orientation(t.point(tet[0]), t.point(tet[1]), t.point(tet[2]), t.point(tet[3])).depth == 0);
  }
  CHECK(t.tetrahedra().size() == 2);
  const Enumeration e = t.enumerate();
  CHECK(hull_count(e, 2) == 6);
}

TEST_CASE("postprocess on a square face appended to a tetrahedron") {
  auto p = testing::points({{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {4, 4, 0}, {1, 1, 6}, {3, 2, 5}, {2, 3, 7}});
  Triangulation t = Triangulation::build(p);
  t.postprocess_flat_tets();
  CHECK(t.flat_tetrahedron_count() == 0);
  check_sound(t);
  for (const auto& tet : t.tetrahedra()) {
    CHECK(orientation(t.point(tet[0]), t.point(tet[1]), t.point(tet[2]), t.point(tet[3])).depth == 0);
  }
}

TEST_CASE("postprocess on random grid subsets") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int hi = 2 + trial % 3;
    const std::size_t n = std::min<std::size_t>(5 + trial % 30, static_cast<std::size_t>((hi + 1) * (hi + 1) * (hi + 1)));
    auto p = testing::from_coords(testing::random_coords(rng, n, 0, hi));
    if (affine_rank(p) < 3) continue;
    Triangulation t = Triangulation::build(p);
    const PostprocessReport r = t.postprocess_flat_tets();
    REQUIRE(t.check_structure().empty());
    CHECK(r.flat_remaining == 0);
    CHECK(t.non_delaunay_triangles().empty());
    const auto c = counts(t);
    CHECK(static_cast<long>(c[0]) - static_cast<long>(c[1]) + static_cast<long>(c[2]) - static_cast<long>(c[3]) == 1);
  }
}

TEST_CASE("postprocess is a no-op on generic input") {
  std::mt19937_64 rng(3);
  auto p = testing::from_coords(testing::random_coords(rng, 40, 0, 100000));
  Triangulation t = Triangulation::build(p);
  const auto before = t.tetrahedra();
  const PostprocessReport r = t.postprocess_flat_tets();
  CHECK(r.flat_before == 0);
  CHECK(r.removed == 0);
  CHECK(t.tetrahedra() == before);
}

TEST_CASE("coplanar and collinear input") {
  Triangulation plane = Triangulation::build(testing::points({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {3, 2, 0}}));
  try {
    plane.postprocess_flat_tets();
    FAIL("expected a degenerate-input error");
  } catch (const DegenerateInputError& e) {
    CHECK(e.affine_rank() == 2);
  }
  Triangulation line = Triangulation::build(testing::points({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {3, 3, 3}}));
  try {
    line.postprocess_flat_tets();
    FAIL("expected a degenerate-input error");
  } catch (const DegenerateInputError& e) {
    CHECK(e.affine_rank() == 1);
  }
}

TEST_CASE("degenerate inputs") {
  std::vector<std::vector<ExactPoint>> inputs{cube(), grid(4, 1)};
  inputs.push_back(sphere20());
  REQUIRE(inputs.back().size() == 20);
  for (const auto& p : inputs) {
    Triangulation t = Triangulation::build(p);
    check_sound(t);
    CHECK(t.non_delaunay_triangles().empty());
    if (p.size() <= 20) CHECK(t.tetrahedra() == brute_force_delaunay(p));
    const PostprocessReport r = t.postprocess_flat_tets();
    check_sound(t);
    CHECK(t.non_delaunay_triangles().empty());
    CHECK(r.flat_remaining == 0);
    CHECK(t.flat_tetrahedron_count() == 0);
  }
}

}
