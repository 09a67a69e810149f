#pragma once

// Term schedules for symbolically perturbed predicates.
//
// Row r of a predicate matrix holds the point with the r-th smallest index.
// Each perturbable entry pi_{r,c} (c = 1..4) is replaced by pi_{r,c} + eps_{r,c},
// and eps_{r,c} carries rank 4r + (4 - c): lower rank means a larger
// infinitesimal. A monomial prod eps_k^{e_k} behaves like eps^(sum e_k D^k) for
// an unbounded base D, so monomials compare by their exponent vectors read from
// the highest rank downward. A schedule is the expanded polynomial with its
// eps-monomials in that order, cut after the first coefficient that is a
// nonzero constant.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "alpha3d/kernel.hpp"

namespace alpha3d::sos {

inline constexpr int kMaxRows = 5;
inline constexpr int kColumns = 4;  // perturbable columns 1..4
inline constexpr int kRawVariables = kMaxRows * kColumns;
inline constexpr int kVariables = 2 * kRawVariables;

constexpr int raw_variable(int row, int column) { return row * kColumns + (column - 1); }
constexpr int epsilon_variable(int row, int column) {
  return kRawVariables + row * kColumns + (column - 1);
}
/// Rank of an epsilon symbol; smaller rank is a larger perturbation.
constexpr int epsilon_rank(int row, int column) { return row * kColumns + (kColumns - column); }

struct Monomial {
  std::array<std::uint8_t, kVariables> exponent{};

  bool is_constant() const;
  bool has_epsilon() const;
  bool has_raw() const;
  Monomial epsilon_part() const;
  Monomial raw_part() const;
  Monomial operator*(const Monomial& other) const;
  std::string to_string() const;

  friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// True when eps-monomial a is strictly larger than b as an infinitesimal, i.e. comes first.
bool epsilon_precedes(const Monomial& a, const Monomial& b);

class Polynomial {
 public:
  Polynomial() = default;
  static Polynomial constant(std::int64_t value);
  static Polynomial variable(int index);
  /// pi_{row,column}(eps); column 0 is the constant 1.
  static Polynomial perturbed(int row, int column);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(std::int64_t factor) const;

  bool is_zero() const { return terms_.empty(); }
  /// Nonzero constant (no variables at all).
  bool is_nonzero_constant() const;
  const std::map<Monomial, std::int64_t>& terms() const { return terms_; }

 private:
  std::map<Monomial, std::int64_t> terms_;
};

Polynomial determinant(const std::vector<std::vector<Polynomial>>& matrix);

/// Coefficient polynomial over raw variables, flattened for evaluation.
struct CompiledPolynomial {
  struct Product {
    std::int64_t coefficient;
    std::vector<std::uint8_t> factors;  // raw variable indices, repeated by exponent
  };
  std::vector<Product> products;

  static CompiledPolynomial compile(const Polynomial& p);
  /// values[v] is the value of raw variable v.
  Integer evaluate(std::span<const Integer> values) const;
};

struct ScheduleTerm {
  Monomial epsilon;
  Polynomial coefficient;  // over raw variables only
  CompiledPolynomial compiled;
};

class Schedule {
 public:
  /// Expands a perturbed polynomial. With truncate, the list stops at the first
  /// term whose coefficient is a nonzero constant.
  static Schedule expand(const Polynomial& perturbed, bool truncate = true);

  const std::vector<ScheduleTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Sign of the perturbed polynomial for rows ordered by increasing index,
  /// starting the walk at term `first`.
  Sign evaluate(std::span<const ExactPoint* const> rows, std::size_t first = 0) const;

 private:
  std::vector<ScheduleTerm> terms_;
};

/// Raw variable values for rows (coords and lifted value per row).
std::vector<Integer> raw_values(std::span<const ExactPoint* const> rows);

// Perturbed predicate polynomials over rows 0..n-1 (rows sorted by index).
Polynomial orientation_polynomial();          // det[x y z 1], 4 rows
Polynomial lifted_orientation_polynomial();   // det[x y z w 1], 5 rows
Polynomial edge_attachment_polynomial(int query_row);      // 3 rows
Polynomial triangle_attachment_polynomial(int query_row);  // 4 rows

const Schedule& orientation_schedule();
const Schedule& lifted_orientation_schedule();
const Schedule& edge_attachment_schedule(int query_row);
const Schedule& triangle_attachment_schedule(int query_row);

}  // namespace alpha3d::sos
