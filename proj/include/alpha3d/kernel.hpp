#pragma once

// Exact arithmetic and perturbed geometric predicates.
//
// Every sign decision made by the triangulator and the interval classifier
// goes through this header. Points carry exact integer coordinates; each
// predicate first evaluates its polynomial on the raw data and, when that
// vanishes, walks the symbolically perturbed expansion (see sos_schedule.hpp)
// until a nonzero coefficient decides the sign.

#include <array>
#include <atomic>
#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include <gmpxx.h>

#include "alpha3d/errors.hpp"

namespace alpha3d {

using Integer = mpz_class;
using Rational = mpq_class;
__extension__ typedef __int128 Wide;
__extension__ typedef unsigned __int128 UWide;

/// Largest coordinate magnitude accepted after scaling (signed 32-bit range).
inline constexpr std::int64_t kMaxCoordinate = 2147483647;

Integer to_integer(Wide value);

/// A labelled input point with exact coordinates and its cached lifted value.
struct ExactPoint {
  std::uint32_t index = 0;  // 1-based label, also the perturbation rank
  std::array<std::int64_t, 3> coords{};
  Wide lifted = 0;  // x^2 + y^2 + z^2

  /// Throws InputError when a coordinate exceeds kMaxCoordinate.
  static ExactPoint make(std::uint32_t index, std::int64_t x, std::int64_t y, std::int64_t z);

  /// pi_{i,j}: column 0 is the constant 1, 1..3 the coordinates, 4 the lifted value.
  Integer column(int j) const;
};

struct Sign {
  enum Value : std::int8_t { Negative = -1, Positive = 1 };

  Value value = Positive;
  std::uint32_t depth = 0;

  bool positive() const noexcept { return value == Positive; }
  bool negative() const noexcept { return value == Negative; }
  int as_int() const noexcept { return value; }

  friend bool operator==(const Sign&, const Sign&) = default;
};

/// A squared radius: an exact non-negative rational, or the formal top element.
class RadiusSq {
 public:
  RadiusSq() = default;
  explicit RadiusSq(Rational value);

  static RadiusSq infinity();

  bool is_infinite() const noexcept { return infinite_; }
  /// Precondition: finite.
  const Rational& value() const;
  double to_double() const;
  /// "p/q", "n" or "inf".
  std::string to_string() const;
  static RadiusSq parse(const std::string& text);

  friend std::strong_ordering operator<=>(const RadiusSq& a, const RadiusSq& b);
  friend bool operator==(const RadiusSq& a, const RadiusSq& b);

 private:
  Rational value_ = 0;
  bool infinite_ = false;
};

// ---------------------------------------------------------------------------
// Statistics

enum class Predicate : std::uint8_t { Orientation, InSphere, EdgeAttached, TriangleAttached };
inline constexpr std::size_t kPredicateKinds = 4;
inline constexpr std::size_t kDepthBuckets = 16;  // deeper evaluations share the last bucket

const char* predicate_name(Predicate kind);

struct KernelCounters {
  std::array<std::uint64_t, kPredicateKinds> calls{};
  std::array<std::array<std::uint64_t, kDepthBuckets>, kPredicateKinds> depth_histogram{};
  std::array<std::uint64_t, kPredicateKinds> max_depth{};
  std::uint64_t filter_hits = 0;
  std::uint64_t long_add_sub = 0;
  std::uint64_t long_multiply = 0;

  std::uint64_t total_calls() const;
  /// Mean evaluation depth of one predicate kind.
  double mean_depth(Predicate kind) const;
  /// Counters accumulated since `earlier`; max_depth is taken from *this.
  KernelCounters since(const KernelCounters& earlier) const;
};

class KernelStats {
 public:
  void record(Predicate kind, std::uint32_t depth) noexcept;
  void count_arithmetic(std::uint64_t add_sub, std::uint64_t multiply) noexcept;
  void count_filter_hit() noexcept;
  KernelCounters snapshot() const;
  void reset() noexcept;

 private:
  std::array<std::atomic<std::uint64_t>, kPredicateKinds> calls_{};
  std::array<std::array<std::atomic<std::uint64_t>, kDepthBuckets>, kPredicateKinds> depth_{};
  std::array<std::atomic<std::uint64_t>, kPredicateKinds> max_depth_{};
  std::atomic<std::uint64_t> filter_hits_{0};
  std::atomic<std::uint64_t> add_sub_{0};
  std::atomic<std::uint64_t> multiply_{0};
};

/// Process-wide counters shared by all predicate calls.
KernelStats& kernel_stats();

// ---------------------------------------------------------------------------
// Sign of a perturbed polynomial

/// Walks `length` coefficients in schedule order; `coefficient_sign(t)` returns
/// the sign (-1, 0, +1) of term t. The first nonzero term decides.
template <std::invocable<std::size_t> SignOfTerm>
Sign sos_sign(std::size_t length, SignOfTerm&& coefficient_sign, std::size_t first = 0) {
  for (std::size_t t = first; t < length; ++t) {
    const int s = coefficient_sign(t);
    if (s != 0) {
      return Sign{s > 0 ? Sign::Positive : Sign::Negative, static_cast<std::uint32_t>(t)};
    }
  }
  throw InternalError("perturbed polynomial vanished identically");
}

Sign sos_sign(std::span<const Integer> coefficients);

// ---------------------------------------------------------------------------
// Predicates. Arguments must carry pairwise distinct indices.

/// Sign of det[p 1] over the four rows; Positive means pu lies on the positive side of (pi, pj, pk).
Sign orientation(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                 const ExactPoint& pu);

/// Positive iff pv lies inside the sphere through the first four points.
Sign in_sphere(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
               const ExactPoint& pu, const ExactPoint& pv);

/// Positive iff pk lies inside the open diametral ball of edge {pi, pj}.
Sign edge_attached(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk);

/// Positive iff pu lies inside the open smallest circumsphere of triangle {pi, pj, pk}.
Sign triangle_attached(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                       const ExactPoint& pu);

RadiusSq rho_sq_edge(const ExactPoint& pi, const ExactPoint& pj);
RadiusSq rho_sq_triangle(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk);
RadiusSq rho_sq_tetrahedron(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                            const ExactPoint& pu);

/// Unperturbed det[p 1] of four points (six times the signed volume, negated).
Wide orientation_determinant(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                             const ExactPoint& pu);

/// Squared norm of (pj - pi) x (pk - pi), i.e. four times the squared triangle area.
Integer cross_norm_sq(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk);

/// Exact determinant of an n x n row-major matrix (fraction-free elimination).
Integer determinant(std::span<const Integer> matrix, std::size_t n);

/// Minor M^{rows}_{columns}: determinant of [pi_{r,c}] for the listed rows and columns.
Integer minor(std::span<const ExactPoint* const> rows, std::span<const int> columns);

/// Dimension of the affine hull of the points (-1 for an empty list).
int affine_rank(std::span<const ExactPoint> points);

}  // namespace alpha3d
