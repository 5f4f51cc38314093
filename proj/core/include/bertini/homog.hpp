// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bertini/field.hpp"
#include "bertini/monomial.hpp"

namespace bertini {

/// A point of P^n over some finite field, stored with its first nonzero
/// coordinate equal to 1.
class ProjPoint {
 public:
  ProjPoint() = default;
  /// Normalizes; throws DomainError for the zero vector.
  ProjPoint(FieldPtr field, std::vector<std::uint32_t> coords);

  const FieldPtr& field() const { return field_; }
  int n() const { return static_cast<int>(coords_.size()) - 1; }
  std::span<const std::uint32_t> coords() const { return coords_; }
  std::uint32_t operator[](std::size_t i) const { return coords_[i]; }
  /// Index of the first nonzero coordinate (the affine chart).
  int chart() const;

  /// Coordinatewise image in an extension.
  ProjPoint embed(const FieldPtr& target) const;
  /// Coordinatewise q-power Frobenius, q the order of `base`.
  ProjPoint frobenius(const Field& base) const;

  std::string to_string() const;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) {
    return a.field_ == b.field_ && a.coords_ == b.coords_;
  }
  /// Coordinate order: chart first (earlier chart sorts first), then packed
  /// coordinates lexicographically.
  friend bool operator<(const ProjPoint& a, const ProjPoint& b);

 private:
  FieldPtr field_;
  std::vector<std::uint32_t> coords_;
};

/// Dense homogeneous polynomial of degree d in x0..xn over F_q; coefficient
/// i belongs to MonomialBasis::get(n, d).exps(i).
class HomogPoly {
 public:
  HomogPoly() = default;
  HomogPoly(FieldPtr field, int n, int d);
  HomogPoly(FieldPtr field, int n, int d, std::vector<std::uint32_t> coeffs);

  static HomogPoly monomial(FieldPtr field, std::span<const int> exps, std::uint32_t coeff = 1);
  static HomogPoly variable(FieldPtr field, int n, int i);
  static HomogPoly constant(FieldPtr field, int n, std::uint32_t c);

  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return coeffs_.size(); }
  const MonomialBasis& basis() const { return MonomialBasis::get(n_, d_); }

  FieldElem coeff(std::size_t i) const { return field_->elem(coeffs_[i]); }
  std::uint32_t raw(std::size_t i) const { return coeffs_[i]; }
  std::span<const std::uint32_t> coeffs() const { return coeffs_; }
  std::vector<std::uint32_t>& mutable_coeffs() { return coeffs_; }
  void set(std::size_t i, std::uint32_t v) { coeffs_[i] = v; }
  std::uint32_t coeff_of(std::span<const int> exps) const;

  bool is_zero() const;
  std::size_t term_count() const;

  HomogPoly operator+(const HomogPoly& b) const;
  HomogPoly operator-(const HomogPoly& b) const;
  HomogPoly operator-() const;
  HomogPoly operator*(const HomogPoly& b) const;
  HomogPoly scaled(std::uint32_t c) const;
  HomogPoly pow(int k) const;

  /// Formal partial derivative; the exponent is read as a field scalar.
  /// Throws DomainError for d == 0.
  HomogPoly diff(int var) const;

  /// Value at a point whose field contains this polynomial's field. With
  /// normalized points this is the chart-normalized value x_j^{-d} f.
  FieldElem eval(const ProjPoint& pt) const;
  /// Evaluation at raw coordinates in `at`, which must contain field().
  std::uint32_t eval_in(const Field& at, std::span<const std::uint32_t> coords) const;

  HomogPoly embed(const FieldPtr& target) const;
  /// Coefficientwise q-power Frobenius over `base` (for forms over extensions).
  HomogPoly frobenius(const Field& base) const;
  /// Applies x_i -> x_{perm[i]}.
  HomogPoly permuted(std::span<const int> perm) const;

  /// Text form: terms "c*x0^a0*x1^a1" joined by " + ", graded-lex order.
  std::string to_string() const;

  /// Parses the text form. Accepts omitted unit coefficients, omitted ^1,
  /// integer coefficients (prime fields; also reduced mod p elsewhere) and
  /// g^k for powers of the primitive element. `degree` is required only for
  /// the zero polynomial.
  static HomogPoly parse(std::string_view text, FieldPtr field, int n,
                         std::optional<int> degree = std::nullopt);

  friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.d_ == b.d_ && a.coeffs_ == b.coeffs_;
  }

 private:
  FieldPtr field_;
  int n_ = 0;
  int d_ = 0;
  std::vector<std::uint32_t> coeffs_;
};

/// Quotient h with f = g*h when g divides f, decided by solving the linear
/// system f = g*h in the coefficients of h. Throws DomainError for g == 0.
std::optional<HomogPoly> poly_divides(const HomogPoly& g, const HomogPoly& f);

/// All normalized points of P^n(F) in coordinate order.
std::vector<ProjPoint> projective_points(const FieldPtr& field, int n);
std::uint64_t projective_point_count(std::uint64_t q, int n);

}  // namespace bertini
