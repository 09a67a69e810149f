#include "alpha3d/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "alpha3d/sos_schedule.hpp"

namespace alpha3d {

Integer to_integer(Wide value) {
  const bool negative = value < 0;
  UWide magnitude = negative ? -static_cast<UWide>(value)
                                         : static_cast<UWide>(value);
  Integer result = static_cast<unsigned long>(magnitude >> 64);
  result <<= 64;
  result += static_cast<unsigned long>(magnitude & 0xffffffffffffffffULL);
  if (negative) result = -result;
  return result;
}

ExactPoint ExactPoint::make(std::uint32_t index, std::int64_t x, std::int64_t y, std::int64_t z) {
  for (std::int64_t c : {x, y, z}) {
    if (c > kMaxCoordinate || c < -kMaxCoordinate) {
      throw InputError("coordinate " + std::to_string(c) + " exceeds the supported integer range");
    }
  }
  ExactPoint p;
  p.index = index;
  p.coords = {x, y, z};
  p.lifted = Wide(x) * x + Wide(y) * y + Wide(z) * z;
  return p;
}

Integer ExactPoint::column(int j) const {
  switch (j) {
    case 0: return 1;
    case 1:
    case 2:
    case 3: return static_cast<long>(coords[j - 1]);
    case 4: return to_integer(lifted);
    default: throw PreconditionError("column index out of range");
  }
}

// ---------------------------------------------------------------------------

RadiusSq::RadiusSq(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (sgn(value_) < 0) throw PreconditionError("negative squared radius");
}

RadiusSq RadiusSq::infinity() {
  RadiusSq r;
  r.infinite_ = true;
  return r;
}

const Rational& RadiusSq::value() const {
  if (infinite_) throw PreconditionError("infinite radius has no finite value");
  return value_;
}

double RadiusSq::to_double() const {
  return infinite_ ? HUGE_VAL : value_.get_d();
}

std::string RadiusSq::to_string() const { return infinite_ ? "inf" : value_.get_str(); }

RadiusSq RadiusSq::parse(const std::string& text) {
  if (text == "inf") return infinity();
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0 || sgn(q.get_den()) <= 0) {
    throw InputError("malformed rational '" + text + "'");
  }
  q.canonicalize();
  if (sgn(q) < 0) throw InputError("negative squared radius '" + text + "'");
  return RadiusSq(q);
}

std::strong_ordering operator<=>(const RadiusSq& a, const RadiusSq& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
  const int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

bool operator==(const RadiusSq& a, const RadiusSq& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------------------------

const char* predicate_name(Predicate kind) {
  switch (kind) {
    case Predicate::Orientation: return "orientation";
    case Predicate::InSphere: return "in_sphere";
    case Predicate::EdgeAttached: return "edge_attached";
    case Predicate::TriangleAttached: return "triangle_attached";
  }
  return "?";
}

std::uint64_t KernelCounters::total_calls() const {
  std::uint64_t total = 0;
  for (auto c : calls) total += c;
  return total;
}

double KernelCounters::mean_depth(Predicate kind) const {
  const auto k = static_cast<std::size_t>(kind);
  if (calls[k] == 0) return 0.0;
  double sum = 0;
  for (std::size_t d = 0; d < kDepthBuckets; ++d) sum += double(d) * double(depth_histogram[k][d]);
  return sum / double(calls[k]);
}

KernelCounters KernelCounters::since(const KernelCounters& earlier) const {
  KernelCounters diff = *this;
  for (std::size_t k = 0; k < kPredicateKinds; ++k) {
    diff.calls[k] -= earlier.calls[k];
    for (std::size_t d = 0; d < kDepthBuckets; ++d) {
      diff.depth_histogram[k][d] -= earlier.depth_histogram[k][d];
    }
  }
  diff.filter_hits -= earlier.filter_hits;
  diff.long_add_sub -= earlier.long_add_sub;
  diff.long_multiply -= earlier.long_multiply;
  return diff;
}

void KernelStats::record(Predicate kind, std::uint32_t depth) noexcept {
  const auto k = static_cast<std::size_t>(kind);
  calls_[k].fetch_add(1, std::memory_order_relaxed);
  depth_[k][std::min<std::size_t>(depth, kDepthBuckets - 1)].fetch_add(1, std::memory_order_relaxed);
  std::uint64_t seen = max_depth_[k].load(std::memory_order_relaxed);
  while (depth > seen &&
         !max_depth_[k].compare_exchange_weak(seen, depth, std::memory_order_relaxed)) {
  }
}

void KernelStats::count_arithmetic(std::uint64_t add_sub, std::uint64_t multiply) noexcept {
  add_sub_.fetch_add(add_sub, std::memory_order_relaxed);
  multiply_.fetch_add(multiply, std::memory_order_relaxed);
}

void KernelStats::count_filter_hit() noexcept { filter_hits_.fetch_add(1, std::memory_order_relaxed); }

KernelCounters KernelStats::snapshot() const {
  KernelCounters c;
  for (std::size_t k = 0; k < kPredicateKinds; ++k) {
    c.calls[k] = calls_[k].load(std::memory_order_relaxed);
    c.max_depth[k] = max_depth_[k].load(std::memory_order_relaxed);
    for (std::size_t d = 0; d < kDepthBuckets; ++d) {
      c.depth_histogram[k][d] = depth_[k][d].load(std::memory_order_relaxed);
    }
  }
  c.filter_hits = filter_hits_.load(std::memory_order_relaxed);
  c.long_add_sub = add_sub_.load(std::memory_order_relaxed);
  c.long_multiply = multiply_.load(std::memory_order_relaxed);
  return c;
}

void KernelStats::reset() noexcept {
  for (std::size_t k = 0; k < kPredicateKinds; ++k) {
    calls_[k] = 0;
    max_depth_[k] = 0;
    for (auto& d : depth_[k]) d = 0;
  }
  filter_hits_ = 0;
  add_sub_ = 0;
  multiply_ = 0;
}

KernelStats& kernel_stats() {
  static KernelStats stats;
  return stats;
}

Sign sos_sign(std::span<const Integer> coefficients) {
  return sos_sign(coefficients.size(), [&](std::size_t t) { return sgn(coefficients[t]); });
}

// ---------------------------------------------------------------------------

namespace {

template <typename T>
int sign_of(const T& v) {
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

Sign make_sign(int s, std::uint32_t depth) {
  return Sign{s > 0 ? Sign::Positive : Sign::Negative, depth};
}

Sign flipped(Sign s, bool flip) {
  if (flip) s.value = s.positive() ? Sign::Negative : Sign::Positive;
  return s;
}

// Sorts rows by index; returns true for an odd permutation.
template <std::size_t N>
bool sort_rows(std::array<const ExactPoint*, N>& rows) {
  bool odd = false;
  for (std::size_t a = 1; a < N; ++a) {
    for (std::size_t b = a; b > 0 && rows[b - 1]->index >= rows[b]->index; --b) {
      if (rows[b - 1]->index == rows[b]->index) {
        throw PreconditionError("predicate arguments repeat point index " +
                                std::to_string(rows[b]->index));
      }
      std::swap(rows[b - 1], rows[b]);
      odd = !odd;
    }
  }
  return odd;
}

template <std::size_t N>
void require_distinct(std::array<const ExactPoint*, N> rows) {
  sort_rows(rows);
}

using Vec3 = std::array<std::int64_t, 3>;

Vec3 sub(const ExactPoint& a, const ExactPoint& b) {
  return {a.coords[0] - b.coords[0], a.coords[1] - b.coords[1], a.coords[2] - b.coords[2]};
}

std::int64_t max_abs(std::initializer_list<Vec3> vs) {
  std::int64_t m = 0;
  for (const Vec3& v : vs) {
    for (std::int64_t c : v) m = std::max(m, c < 0 ? -c : c);
  }
  return m;
}

template <typename N>
N det3(const std::array<std::array<N, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <typename N>
N det4(const std::array<std::array<N, 4>, 4>& m) {
  N total = 0;
  for (int c = 0; c < 4; ++c) {
    std::array<std::array<N, 3>, 3> sub_matrix;
    for (int r = 1; r < 4; ++r) {
      for (int k = 0, s = 0; k < 4; ++k) {
        if (k != c) sub_matrix[r - 1][s++] = m[r][k];
      }
    }
    const N term = m[0][c] * det3(sub_matrix);
    if (c % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

int raw_orientation_sign(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                         const ExactPoint& pu) {
  return sign_of(orientation_determinant(pi, pj, pk, pu));
}

Sign perturbed_orientation(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                           const ExactPoint& pu) {
  const int raw = raw_orientation_sign(pi, pj, pk, pu);
  std::array<const ExactPoint*, 4> rows{&pi, &pj, &pk, &pu};
  const bool odd = sort_rows(rows);
  if (raw != 0) return make_sign(raw, 0);
  return flipped(sos::orientation_schedule().evaluate(rows, 1), odd);
}

constexpr std::int64_t kLiftedFastBound = std::int64_t{1} << 23;

int raw_lifted_sign(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                    const ExactPoint& pu, const ExactPoint& pv) {
  const std::array<Vec3, 4> d{sub(pi, pv), sub(pj, pv), sub(pk, pv), sub(pu, pv)};
  if (max_abs({d[0], d[1], d[2], d[3]}) < kLiftedFastBound) {
    kernel_stats().count_filter_hit();
    std::array<std::array<Wide, 4>, 4> m;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] = d[r][c];
      m[r][3] = Wide(d[r][0]) * d[r][0] + Wide(d[r][1]) * d[r][1] + Wide(d[r][2]) * d[r][2];
    }
    return sign_of(det4(m));
  }
  std::array<std::array<Integer, 4>, 4> m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) m[r][c] = static_cast<long>(d[r][c]);
    m[r][3] = m[r][0] * m[r][0] + m[r][1] * m[r][1] + m[r][2] * m[r][2];
  }
  kernel_stats().count_arithmetic(60, 64);
  return sgn(Integer(det4(m)));
}

Sign perturbed_lifted(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                      const ExactPoint& pu, const ExactPoint& pv) {
  const int raw = raw_lifted_sign(pi, pj, pk, pu, pv);
  std::array<const ExactPoint*, 5> rows{&pi, &pj, &pk, &pu, &pv};
  const bool odd = sort_rows(rows);
  if (raw != 0) return make_sign(raw, 0);
  return flipped(sos::lifted_orientation_schedule().evaluate(rows, 1), odd);
}

// Query position among rows sorted by index.
template <std::size_t N>
int query_position(const std::array<const ExactPoint*, N>& sorted, const ExactPoint& query) {
  for (std::size_t r = 0; r < N; ++r) {
    if (sorted[r] == &query) return static_cast<int>(r);
  }
  throw InternalError("query row lost while sorting");
}

template <typename N>
int triangle_attachment_raw(const Vec3& a, const Vec3& b, const Vec3& q) {
  // Center of the circle through 0, a, b is C / (2|n|^2) with n = a x b; the query q
  // lies inside its smallest sphere iff |q - c|^2 < |c|^2.
  auto cross = [](const std::array<N, 3>& x, const std::array<N, 3>& y) {
    return std::array<N, 3>{x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2],
                            x[0] * y[1] - x[1] * y[0]};
  };
  auto dot = [](const std::array<N, 3>& x, const std::array<N, 3>& y) {
    return N(x[0] * y[0] + x[1] * y[1] + x[2] * y[2]);
  };
  const std::array<N, 3> A{N(a[0]), N(a[1]), N(a[2])};
  const std::array<N, 3> B{N(b[0]), N(b[1]), N(b[2])};
  const std::array<N, 3> Q{N(q[0]), N(q[1]), N(q[2])};
  const std::array<N, 3> n = cross(A, B);
  const N aa = dot(A, A);
  const N bb = dot(B, B);
  const std::array<N, 3> bn = cross(B, n);
  const std::array<N, 3> na = cross(n, A);
  std::array<N, 3> C;
  for (int c = 0; c < 3; ++c) C[c] = aa * bn[c] + bb * na[c];
  const N value = dot(C, Q) - dot(Q, Q) * dot(n, n);
  return sign_of(value);
}

}  // namespace

// ---------------------------------------------------------------------------

Sign orientation(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                 const ExactPoint& pu) {
  require_distinct<4>({&pi, &pj, &pk, &pu});
  const Sign s = perturbed_orientation(pi, pj, pk, pu);
  kernel_stats().record(Predicate::Orientation, s.depth);
  return s;
}

Sign in_sphere(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
               const ExactPoint& pu, const ExactPoint& pv) {
  require_distinct<5>({&pi, &pj, &pk, &pu, &pv});
  const Sign o = perturbed_orientation(pi, pj, pk, pu);
  const Sign l = perturbed_lifted(pi, pj, pk, pu, pv);
  const Sign s = make_sign(o.as_int() * l.as_int(), std::max(o.depth, l.depth));
  kernel_stats().record(Predicate::InSphere, s.depth);
  return s;
}

Sign edge_attached(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk) {
  std::array<const ExactPoint*, 3> rows{&pi, &pj, &pk};
  sort_rows(rows);
  const Vec3 a = sub(pk, pi);
  const Vec3 b = sub(pk, pj);
  const Wide dot = Wide(a[0]) * b[0] + Wide(a[1]) * b[1] + Wide(a[2]) * b[2];
  Sign s;
  if (dot != 0) {
    s = make_sign(-sign_of(dot), 0);
  } else {
    s = sos::edge_attachment_schedule(query_position(rows, pk)).evaluate(rows, 1);
  }
  kernel_stats().record(Predicate::EdgeAttached, s.depth);
  return s;
}

constexpr std::int64_t kTriangleFastBound = std::int64_t{1} << 19;

Sign triangle_attached(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                       const ExactPoint& pu) {
  std::array<const ExactPoint*, 4> rows{&pi, &pj, &pk, &pu};
  sort_rows(rows);
  if (cross_norm_sq(pi, pj, pk) == 0) {
    throw DegenerateSimplexError("triangle attachment on collinear points");
  }
  const Vec3 a = sub(pj, pi);
  const Vec3 b = sub(pk, pi);
  const Vec3 q = sub(pu, pi);
  int raw;
  if (max_abs({a, b, q}) < kTriangleFastBound) {
    kernel_stats().count_filter_hit();
    raw = triangle_attachment_raw<Wide>(a, b, q);
  } else {
    kernel_stats().count_arithmetic(40, 60);
    raw = triangle_attachment_raw<Integer>(a, b, q);
  }
  Sign s;
  if (raw != 0) {
    s = make_sign(raw, 0);
  } else {
    s = sos::triangle_attachment_schedule(query_position(rows, pu)).evaluate(rows, 1);
  }
  kernel_stats().record(Predicate::TriangleAttached, s.depth);
  return s;
}

RadiusSq rho_sq_edge(const ExactPoint& pi, const ExactPoint& pj) {
  require_distinct<2>({&pi, &pj});
  const Vec3 d = sub(pi, pj);
  const Wide len = Wide(d[0]) * d[0] + Wide(d[1]) * d[1] + Wide(d[2]) * d[2];
  return RadiusSq(Rational(to_integer(len), 4));
}

RadiusSq rho_sq_triangle(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk) {
  require_distinct<3>({&pi, &pj, &pk});
  const Integer area = cross_norm_sq(pi, pj, pk);
  if (area == 0) throw DegenerateSimplexError("circumradius of collinear points");
  auto len = [](const ExactPoint& a, const ExactPoint& b) {
    const Vec3 d = sub(a, b);
    return to_integer(Wide(d[0]) * d[0] + Wide(d[1]) * d[1] + Wide(d[2]) * d[2]);
  };
  const Integer numerator = len(pi, pj) * len(pj, pk) * len(pk, pi);
  kernel_stats().count_arithmetic(0, 3);
  return RadiusSq(Rational(numerator, 4 * area));
}

RadiusSq rho_sq_tetrahedron(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                            const ExactPoint& pu) {
  require_distinct<4>({&pi, &pj, &pk, &pu});
  const std::array<const ExactPoint*, 4> rows{&pi, &pj, &pk, &pu};
  auto m = [&](std::array<int, 4> columns) { return minor(rows, columns); };
  const Integer m1230 = m({1, 2, 3, 0});
  if (m1230 == 0) throw DegenerateSimplexError("circumradius of coplanar points");
  const Integer m2340 = m({2, 3, 4, 0});
  const Integer m1340 = m({1, 3, 4, 0});
  const Integer m1240 = m({1, 2, 4, 0});
  const Integer m1234 = m({1, 2, 3, 4});
  const Integer numerator = m2340 * m2340 + m1340 * m1340 + m1240 * m1240 + 4 * m1230 * m1234;
  kernel_stats().count_arithmetic(4, 6);
  return RadiusSq(Rational(numerator, 4 * m1230 * m1230));
}

Wide orientation_determinant(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk,
                             const ExactPoint& pu) {
  const Vec3 a = sub(pi, pu);
  const Vec3 b = sub(pj, pu);
  const Vec3 c = sub(pk, pu);
  return det3<Wide>({{{a[0], a[1], a[2]}, {b[0], b[1], b[2]}, {c[0], c[1], c[2]}}});
}

Integer cross_norm_sq(const ExactPoint& pi, const ExactPoint& pj, const ExactPoint& pk) {
  const Vec3 a = sub(pj, pi);
  const Vec3 b = sub(pk, pi);
  const Integer x = to_integer(Wide(a[1]) * b[2] - Wide(a[2]) * b[1]);
  const Integer y = to_integer(Wide(a[2]) * b[0] - Wide(a[0]) * b[2]);
  const Integer z = to_integer(Wide(a[0]) * b[1] - Wide(a[1]) * b[0]);
  return x * x + y * y + z * z;
}

Integer determinant(std::span<const Integer> matrix, std::size_t n) {
  if (matrix.size() != n * n) throw PreconditionError("determinant needs a square matrix");
  if (n == 0) return 1;
  std::vector<Integer> m(matrix.begin(), matrix.end());
  auto at = [&](std::size_t r, std::size_t c) -> Integer& { return m[r * n + c]; };
  int sign = 1;
  Integer previous = 1;
  std::uint64_t multiplies = 0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && at(swap_row, k) == 0) ++swap_row;
      if (swap_row == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(at(k, c), at(swap_row, c));
      sign = -sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      for (std::size_t c = k + 1; c < n; ++c) {
        at(r, c) = (at(r, c) * at(k, k) - at(r, k) * at(k, c)) / previous;
        multiplies += 2;
      }
    }
    previous = at(k, k);
  }
  kernel_stats().count_arithmetic(multiplies / 2, multiplies);
  return sign * at(n - 1, n - 1);
}

Integer minor(std::span<const ExactPoint* const> rows, std::span<const int> columns) {
  if (rows.size() != columns.size()) throw PreconditionError("minor needs a square selection");
  std::vector<Integer> m;
  m.reserve(rows.size() * columns.size());
  for (const ExactPoint* p : rows) {
    for (int c : columns) m.push_back(p->column(c));
  }
  return determinant(m, rows.size());
}

int affine_rank(std::span<const ExactPoint> points) {
  if (points.empty()) return -1;
  std::vector<std::array<Integer, 3>> rows;
  for (std::size_t r = 1; r < points.size(); ++r) {
    const Vec3 d = sub(points[r], points[0]);
    rows.push_back({Integer(static_cast<long>(d[0])), Integer(static_cast<long>(d[1])),
                    Integer(static_cast<long>(d[2]))});
  }
  int rank = 0;
  for (int c = 0; c < 3 && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Integer f = rows[r][c];
      const Integer g = rows[rank][c];
      for (int k = 0; k < 3; ++k) rows[r][k] = rows[r][k] * g - rows[rank][k] * f;
    }
    ++rank;
  }
  return rank;
}

}  // namespace alpha3d
