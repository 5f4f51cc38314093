// SPDX-License-Identifier: Apache-2.0
#pragma once

// Arithmetic over A = F_q[t] localized at (t), its fraction field
// K = F_q(t), and hypersurfaces of P^n_A with their two fibers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bertini/homog.hpp"
#include "bertini/ideal.hpp"
#include "bertini/scheme.hpp"

namespace bertini {

/// Polynomial in t over F_q, low degree first, no trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(FieldPtr field) : field_(std::move(field)) {}
  UPoly(FieldPtr field, std::vector<std::uint32_t> coeffs);

  static UPoly constant(FieldPtr field, std::uint32_t c);
  /// c * t^k
  static UPoly monomial(FieldPtr field, std::uint32_t c, int k);

  const FieldPtr& field() const { return field_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::uint32_t coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }
  std::uint32_t lead() const { return c_.empty() ? 0 : c_.back(); }
  /// t-adic order; throws DomainError on zero.
  int valuation() const;
  std::uint32_t at_zero() const { return coeff(0); }
  std::uint32_t eval(std::uint32_t a) const;

  UPoly operator+(const UPoly& b) const;
  UPoly operator-(const UPoly& b) const;
  UPoly operator-() const;
  UPoly operator*(const UPoly& b) const;
  UPoly scaled(std::uint32_t c) const;
  UPoly shifted(int k) const;  // t^k * this, or exact division for k < 0
  std::pair<UPoly, UPoly> divmod(const UPoly& b) const;
  UPoly monic() const;

  std::string to_string() const;
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  FieldPtr field_;
  std::vector<std::uint32_t> c_;
};

/// Monic gcd (zero when both are zero).
UPoly gcd(UPoly a, UPoly b);

/// Element of K = F_q(t) in lowest terms with monic denominator.
class RatFunc {
 public:
  RatFunc() = default;
  explicit RatFunc(FieldPtr field) : num_(field), den_(UPoly::constant(field, 1)) {}
  RatFunc(UPoly num);
  RatFunc(UPoly num, UPoly den);

  static RatFunc constant(FieldPtr field, std::uint32_t c) { return RatFunc(UPoly::constant(std::move(field), c)); }
  static RatFunc t(FieldPtr field, int k = 1) { return RatFunc(UPoly::monomial(std::move(field), 1, k)); }

  const FieldPtr& field() const { return num_.field(); }
  const UPoly& num() const { return num_; }
  const UPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == den_; }
  /// v(num) - v(den); throws DomainError on zero.
  int valuation() const { return num_.valuation() - den_.valuation(); }
  /// Lies in A (denominator not divisible by t).
  bool is_regular() const { return den_.at_zero() != 0; }
  /// Image in the residue field; requires is_regular().
  std::uint32_t residue() const;

  RatFunc operator+(const RatFunc& b) const;
  RatFunc operator-(const RatFunc& b) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& b) const;
  RatFunc operator/(const RatFunc& b) const;
  RatFunc inv() const;

  std::string to_string() const;
  friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

 private:
  UPoly num_;
  UPoly den_;
};

/// Field operations of F_q(t) for Echelon.
struct RatFuncOps {
  using value_type = RatFunc;
  FieldPtr field;

  value_type zero() const { return RatFunc(field); }
  value_type one() const { return RatFunc::constant(field, 1); }
  bool is_zero(const value_type& a) const { return a.is_zero(); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const { return a.inv(); }
  value_type from_int(std::int64_t k) const { return RatFunc::constant(field, field->from_int(k)); }
};

/// Element of A = F_q[t]_(t): num/den with den(0) != 0.
class DvrElem {
 public:
  DvrElem() = default;
  explicit DvrElem(RatFunc r);
  DvrElem(UPoly num, UPoly den) : DvrElem(RatFunc(std::move(num), std::move(den))) {}

  static DvrElem constant(FieldPtr field, std::uint32_t c) { return DvrElem(RatFunc::constant(std::move(field), c)); }
  /// Parses "1+t", "t^2/(1+t)", ...
  static DvrElem parse(std::string_view text, FieldPtr field);

  const RatFunc& value() const { return r_; }
  const UPoly& num() const { return r_.num(); }
  const UPoly& den() const { return r_.den(); }
  bool is_zero() const { return r_.is_zero(); }
  int valuation() const { return r_.valuation(); }
  bool is_unit() const { return !r_.is_zero() && r_.num().at_zero() != 0; }
  std::uint32_t residue() const { return r_.residue(); }

  DvrElem operator+(const DvrElem& b) const { return DvrElem(r_ + b.r_); }
  DvrElem operator-(const DvrElem& b) const { return DvrElem(r_ - b.r_); }
  DvrElem operator*(const DvrElem& b) const { return DvrElem(r_ * b.r_); }
  /// a / b when v(a) >= v(b); throws DomainError otherwise.
  DvrElem divide(const DvrElem& b) const;

  std::string to_string() const { return r_.to_string(); }
  friend bool operator==(const DvrElem& a, const DvrElem& b) { return a.r_ == b.r_; }

 private:
  RatFunc r_;
};

class DvrPoint {
 public:
  DvrPoint() = default;
  /// Throws DomainError when every coordinate is zero.
  explicit DvrPoint(std::vector<DvrElem> coords);

  int n() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<DvrElem>& coords() const { return c_; }
  /// Divided by t^l, l the least coordinate valuation: some coordinate is a unit.
  DvrPoint normalized() const;
  /// Same point of P^n(K).
  bool same_point(const DvrPoint& other) const;
  DvrPoint scaled(const DvrElem& u) const;
  std::string to_string() const;

 private:
  std::vector<DvrElem> c_;
};

/// Reduction of the normalized representative modulo t.
ProjPoint specialize_point(const DvrPoint& P);

/// [a_0 : a_1 + t c_1 : ... : a_N + t c_N] where a is x scaled so that its
/// first nonzero coordinate (the one kept fixed) is 1, lifted with constant
/// coefficients; c lists the perturbations of the other N coordinates in order.
DvrPoint psi_x(const ProjPoint& x, const std::vector<DvrElem>& c);

/// Homogeneous form over K. Forms over A are those whose coefficients are
/// all regular.
class KForm {
 public:
  KForm() = default;
  KForm(FieldPtr field, int n, int d);
  KForm(FieldPtr field, int n, int d, std::vector<RatFunc> coeffs);

  /// Constant lift of a form over F_q.
  static KForm lift(const HomogPoly& f);
  /// Terms like "x0*x3 + t*x3^2", "(1+t)/(1+t^2)*x0"; the form must be
  /// homogeneous. A bare "t" is a form of degree 0.
  static KForm parse(std::string_view text, FieldPtr field, int n);

  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }
  int degree() const { return d_; }
  std::size_t size() const { return c_.size(); }
  const MonomialBasis& basis() const { return MonomialBasis::get(n_, d_); }
  const RatFunc& coeff(std::size_t i) const { return c_[i]; }
  const std::vector<RatFunc>& coeffs() const { return c_; }
  void set(std::size_t i, RatFunc v) { c_[i] = std::move(v); }

  bool is_zero() const;
  bool is_integral() const;
  /// Least coefficient valuation; throws DomainError on the zero form.
  int min_valuation() const;
  /// Coefficients mod t; requires is_integral().
  HomogPoly reduce() const;

  KForm operator+(const KForm& b) const;
  KForm operator-(const KForm& b) const;
  KForm operator*(const KForm& b) const;
  KForm scaled(const RatFunc& c) const;
  KForm diff(int var) const;
  RatFunc eval(const std::vector<RatFunc>& pt) const;
  RatFunc eval(const DvrPoint& P) const;

  std::string to_string() const;
  friend bool operator==(const KForm& a, const KForm& b) {
    return a.n_ == b.n_ && a.d_ == b.d_ && a.c_ == b.c_;
  }

 private:
  FieldPtr field_;
  int n_ = 0;
  int d_ = 0;
  std::vector<RatFunc> c_;
};

/// Hypersurface of P^n_A: coefficients in A, not all in (t).
class DvrHypersurface {
 public:
  DvrHypersurface() = default;
  /// Throws DomainError when a coefficient is not in A or all lie in (t).
  explicit DvrHypersurface(KForm f);

  int degree() const { return f_.degree(); }
  int n() const { return f_.n(); }
  const KForm& generic() const { return f_; }
  HomogPoly special() const { return f_.reduce(); }
  std::string to_string() const { return f_.to_string(); }

 private:
  KForm f_;
};

/// (generic fiber over F_q(t), special fiber over F_q)
std::pair<KForm, HomogPoly> fiberwise(const DvrHypersurface& H);

/// Rank of the degree-D piece of the ideal generated by forms over K.
std::size_t graded_rank_K(const FieldPtr& field, int n, const std::vector<KForm>& gens, int D);

/// V(gens) empty over the algebraic closure of K, decided by the rank of the
/// piece at the Macaulay degree.
bool is_empty_projective_K(const FieldPtr& field, int n, const std::vector<KForm>& gens);

std::vector<std::vector<KForm>> jacobian(const std::vector<KForm>& gens);
std::vector<KForm> minors(const std::vector<std::vector<KForm>>& M, int k);

/// Degree-d piece of an ideal over A as an A-submodule of S'_d, in echelon
/// form over A. Pivots are chosen at a least-valuation entry among the
/// remaining rows; each pivot entry is t^v exactly.
struct AModule {
  FieldPtr field;
  int n = 0;
  int d = 0;
  std::vector<std::vector<RatFunc>> rows;
  std::vector<std::size_t> pivots;
  std::vector<int> pivot_valuation;

  std::size_t rank() const { return rows.size(); }
  /// Rank over F_q of the rows reduced mod t.
  std::size_t residue_rank() const;
  /// Every pivot a unit: S'_d / I_d has no t-torsion.
  bool saturated() const;
  std::vector<HomogPoly> reductions() const;
  /// Coefficients over A of f in the row basis, nullopt when f is not in the
  /// A-span.
  std::optional<std::vector<RatFunc>> coordinates(const KForm& f) const;
  bool contains(const KForm& f) const { return coordinates(f).has_value(); }
  KForm row_form(std::size_t i) const;
};

/// Generators must have coefficients in A.
AModule a_piece(const FieldPtr& field, int n, const std::vector<KForm>& gens, int d);

struct FlatDegree {
  int d = 0;
  std::size_t rank_K = 0;        // rank of I_d over A
  std::size_t rank_k = 0;        // rank of I_d mod t
  std::size_t special_rank = 0;  // dim of the saturated special piece
  int max_pivot_valuation = 0;
  bool torsion_free = false;     // t I_d = t S'_d cap I_d
  bool spans_special = false;    // I_d mod t = I^{Z_s}_d
  bool ok() const { return torsion_free && spans_special; }
};

struct FlatReport {
  std::vector<FlatDegree> degrees;
  bool ok() const;
  nlohmann::json to_json() const;
};

/// Z given by generators over A, assumed to have no vertical component.
FlatReport check_flat_restriction(const FieldPtr& field, int n, const std::vector<KForm>& gens, int d_lo, int d_hi);

enum class LiftPredicate { Smooth, Flat, Reduced, Irreducible, ContainsZ };
std::string to_string(LiftPredicate p);
LiftPredicate lift_predicate_from_string(const std::string& s);

struct LiftProblem {
  FieldPtr field;
  int n = 2;
  std::vector<KForm> X;  // generators over A, empty for P^n_A
  int m = 2;             // relative dimension of X
  std::vector<KForm> Z;  // imposed containment, empty for none
  int d = 1;
  std::size_t count = 5;
  int box_degree = 2;              // perturbations t*g(t), deg g <= box_degree
  std::uint64_t max_lifts = 4096;  // lifts tried per special candidate
  std::vector<LiftPredicate> predicates;
  int threads = 1;

  /// Throws DomainError on a malformed problem.
  void validate() const;
};

struct LiftCertificate {
  HomogPoly f_s;
  DvrHypersurface H;
  std::vector<UPoly> perturbation;  // one g_i per basis element of I^Z_d
  std::map<std::string, Verdict> special;
  std::map<std::string, Verdict> generic;
  std::vector<std::string> notes;

  bool ok() const;
  nlohmann::json to_json() const;
};

struct LiftResult {
  std::vector<LiftCertificate> lifts;
  std::uint64_t special_candidates = 0;  // members of I^{Z_s}_d examined
  std::uint64_t special_passed = 0;
  std::uint64_t lifts_tried = 0;
  std::map<std::string, std::uint64_t> rejected;  // "special:<p>" or "generic:<p>"

  nlohmann::json to_json() const;
};

/// Verdicts of every requested predicate on both fibers of H, from scratch.
LiftCertificate verify_lift(const LiftProblem& problem, const DvrHypersurface& H);

LiftResult lift_search(const LiftProblem& problem);

}  // namespace bertini
