#include "alpha3d/sos_schedule.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace alpha3d::sos {

bool Monomial::is_constant() const {
  return std::all_of(exponent.begin(), exponent.end(), [](std::uint8_t e) { return e == 0; });
}

bool Monomial::has_epsilon() const {
  return std::any_of(exponent.begin() + kRawVariables, exponent.end(),
                     [](std::uint8_t e) { return e != 0; });
}

bool Monomial::has_raw() const {
  return std::any_of(exponent.begin(), exponent.begin() + kRawVariables,
                     [](std::uint8_t e) { return e != 0; });
}

Monomial Monomial::epsilon_part() const {
  Monomial m = *this;
  std::fill(m.exponent.begin(), m.exponent.begin() + kRawVariables, 0);
  return m;
}

Monomial Monomial::raw_part() const {
  Monomial m = *this;
  std::fill(m.exponent.begin() + kRawVariables, m.exponent.end(), 0);
  return m;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial m;
  for (int v = 0; v < kVariables; ++v) {
    m.exponent[v] = static_cast<std::uint8_t>(exponent[v] + other.exponent[v]);
  }
  return m;
}

std::string Monomial::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int v = 0; v < kVariables; ++v) {
    if (exponent[v] == 0) continue;
    if (!first) out << '*';
    first = false;
    const bool eps = v >= kRawVariables;
    const int local = eps ? v - kRawVariables : v;
    out << (eps ? "e" : "p") << '(' << local / kColumns << ',' << local % kColumns + 1 << ')';
    if (exponent[v] > 1) out << '^' << int(exponent[v]);
  }
  return first ? "1" : out.str();
}

bool epsilon_precedes(const Monomial& a, const Monomial& b) {
  for (int rank = kRawVariables - 1; rank >= 0; --rank) {
    const int row = rank / kColumns;
    const int column = kColumns - rank % kColumns;
    const int v = epsilon_variable(row, column);
    if (a.exponent[v] != b.exponent[v]) return a.exponent[v] < b.exponent[v];
  }
  return false;
}

Polynomial Polynomial::constant(std::int64_t value) {
  Polynomial p;
  if (value != 0) p.terms_[Monomial{}] = value;
  return p;
}

Polynomial Polynomial::variable(int index) {
  Polynomial p;
  Monomial m;
  m.exponent[index] = 1;
  p.terms_[m] = 1;
  return p;
}

Polynomial Polynomial::perturbed(int row, int column) {
  if (column == 0) return constant(1);
  return variable(raw_variable(row, column)) + variable(epsilon_variable(row, column));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial sum = *this;
  for (const auto& [m, c] : other.terms_) {
    auto [it, inserted] = sum.terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) sum.terms_.erase(it);
    }
  }
  return sum;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other.scaled(-1); }

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial product;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) {
      auto [it, inserted] = product.terms_.try_emplace(ma * mb, ca * cb);
      if (!inserted) {
        it->second += ca * cb;
        if (it->second == 0) product.terms_.erase(it);
      }
    }
  }
  return product;
}

Polynomial Polynomial::scaled(std::int64_t factor) const {
  Polynomial p;
  if (factor == 0) return p;
  for (const auto& [m, c] : terms_) p.terms_[m] = c * factor;
  return p;
}

bool Polynomial::is_nonzero_constant() const {
  return terms_.size() == 1 && terms_.begin()->first.is_constant();
}

Polynomial determinant(const std::vector<std::vector<Polynomial>>& matrix) {
  const std::size_t n = matrix.size();
  if (n == 0) return Polynomial::constant(1);
  if (n == 1) return matrix[0][0];
  Polynomial det;
  for (std::size_t c = 0; c < n; ++c) {
    if (matrix[0][c].is_zero()) continue;
    std::vector<std::vector<Polynomial>> sub;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(matrix[r][k]);
      }
      sub.push_back(std::move(row));
    }
    const Polynomial term = matrix[0][c] * determinant(sub);
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

CompiledPolynomial CompiledPolynomial::compile(const Polynomial& p) {
  CompiledPolynomial compiled;
  for (const auto& [m, c] : p.terms()) {
    Product product{c, {}};
    for (int v = 0; v < kRawVariables; ++v) {
      for (int e = 0; e < m.exponent[v]; ++e) product.factors.push_back(static_cast<std::uint8_t>(v));
    }
    compiled.products.push_back(std::move(product));
  }
  return compiled;
}

Integer CompiledPolynomial::evaluate(std::span<const Integer> values) const {
  Integer sum = 0;
  Integer product;
  std::uint64_t adds = 0;
  std::uint64_t multiplies = 0;
  for (const Product& p : products) {
    product = static_cast<long>(p.coefficient);
    for (std::uint8_t v : p.factors) product *= values[v];
    sum += product;
    multiplies += p.factors.size();
    ++adds;
  }
  kernel_stats().count_arithmetic(adds, multiplies);
  return sum;
}

Schedule Schedule::expand(const Polynomial& perturbed, bool truncate) {
  std::map<Monomial, Polynomial> grouped;
  for (const auto& [m, c] : perturbed.terms()) {
    Polynomial raw = Polynomial::constant(c);
    for (int v = 0; v < kRawVariables; ++v) {
      for (int e = 0; e < m.exponent[v]; ++e) raw = raw * Polynomial::variable(v);
    }
    Polynomial& slot = grouped[m.epsilon_part()];
    slot = slot + raw;
  }
  std::vector<std::pair<Monomial, Polynomial>> ordered;
  for (auto& [eps, coefficient] : grouped) {
    if (!coefficient.is_zero()) ordered.emplace_back(eps, std::move(coefficient));
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return epsilon_precedes(a.first, b.first); });
  // The unperturbed value always occupies term 0, even when it vanishes identically.
  if (ordered.empty() || ordered.front().first.has_epsilon()) {
    ordered.insert(ordered.begin(), {Monomial{}, Polynomial{}});
  }

  Schedule schedule;
  for (auto& [eps, coefficient] : ordered) {
    const bool decisive = coefficient.is_nonzero_constant();
    ScheduleTerm term{eps, coefficient, CompiledPolynomial::compile(coefficient)};
    schedule.terms_.push_back(std::move(term));
    if (truncate && decisive) break;
  }
  return schedule;
}

Sign Schedule::evaluate(std::span<const ExactPoint* const> rows, std::size_t first) const {
  const std::vector<Integer> values = raw_values(rows);
  return sos_sign(
      terms_.size(),
      [&](std::size_t t) { return sgn(terms_[t].compiled.evaluate(values)); }, first);
}

std::vector<Integer> raw_values(std::span<const ExactPoint* const> rows) {
  std::vector<Integer> values(kRawVariables);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 1; c <= kColumns; ++c) values[raw_variable(static_cast<int>(r), c)] = rows[r]->column(c);
  }
  return values;
}

namespace {

using Matrix = std::vector<std::vector<Polynomial>>;

Matrix perturbed_rows(std::initializer_list<int> rows, std::initializer_list<int> columns) {
  Matrix m;
  for (int r : rows) {
    std::vector<Polynomial> row;
    for (int c : columns) row.push_back(Polynomial::perturbed(r, c));
    m.push_back(std::move(row));
  }
  return m;
}

Polynomial minor_of(std::initializer_list<int> rows, std::initializer_list<int> columns) {
  return determinant(perturbed_rows(rows, columns));
}

}  // namespace

Polynomial orientation_polynomial() { return minor_of({0, 1, 2, 3}, {1, 2, 3, 0}); }

Polynomial lifted_orientation_polynomial() { return minor_of({0, 1, 2, 3, 4}, {1, 2, 3, 4, 0}); }

Polynomial edge_attachment_polynomial(int query_row) {
  std::array<int, 2> base{};
  for (int r = 0, b = 0; r < 3; ++r) {
    if (r != query_row) base[b++] = r;
  }
  const int i = base[0];
  const int j = base[1];
  const int k = query_row;
  Polynomial sum;
  for (int l = 1; l <= 3; ++l) {
    const Polynomial ij = minor_of({i, j}, {l, 0});
    const Polynomial ik_jk = minor_of({i, k}, {l, 0}) + minor_of({j, k}, {l, 0});
    sum = sum + ij * ij - ik_jk * ik_jk;
  }
  return sum;
}

Polynomial triangle_attachment_polynomial(int query_row) {
  std::array<int, 3> base{};
  for (int r = 0, b = 0; r < 4; ++r) {
    if (r != query_row) base[b++] = r;
  }
  const int i = base[0];
  const int j = base[1];
  const int k = base[2];
  const int u = query_row;
  return minor_of({i, j, k, u}, {2, 3, 4, 0}) * minor_of({i, j, k}, {2, 3, 0}) +
         minor_of({i, j, k, u}, {1, 3, 4, 0}) * minor_of({i, j, k}, {1, 3, 0}) +
         minor_of({i, j, k, u}, {1, 2, 4, 0}) * minor_of({i, j, k}, {1, 2, 0}) -
         (minor_of({i, j, k, u}, {1, 2, 3, 0}) * minor_of({i, j, k}, {1, 2, 3})).scaled(2);
}

namespace {

template <std::size_t N>
const Schedule& cached(std::array<Schedule, N>& slots, std::array<std::once_flag, N>& flags,
                       std::size_t slot, Polynomial (*make)(int)) {
  std::call_once(flags[slot], [&] { slots[slot] = Schedule::expand(make(static_cast<int>(slot))); });
  return slots[slot];
}

Polynomial orientation_for(int) { return orientation_polynomial(); }
Polynomial lifted_for(int) { return lifted_orientation_polynomial(); }

}  // namespace

const Schedule& orientation_schedule() {
  static std::array<Schedule, 1> slots;
  static std::array<std::once_flag, 1> flags;
  return cached(slots, flags, 0, orientation_for);
}

const Schedule& lifted_orientation_schedule() {
  static std::array<Schedule, 1> slots;
  static std::array<std::once_flag, 1> flags;
  return cached(slots, flags, 0, lifted_for);
}

const Schedule& edge_attachment_schedule(int query_row) {
  static std::array<Schedule, 3> slots;
  static std::array<std::once_flag, 3> flags;
  return cached(slots, flags, static_cast<std::size_t>(query_row), edge_attachment_polynomial);
}

const Schedule& triangle_attachment_schedule(int query_row) {
  static std::array<Schedule, 4> slots;
  static std::array<std::once_flag, 4> flags;
  return cached(slots, flags, static_cast<std::size_t>(query_row), triangle_attachment_polynomial);
}

}  // namespace alpha3d::sos
