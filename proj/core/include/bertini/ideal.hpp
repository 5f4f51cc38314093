// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bertini/field.hpp"
#include "bertini/homog.hpp"

namespace bertini {

/// A closed point of P^n over a base field F_q: the least point (coordinate
/// order) of a Frobenius orbit, written over its residue field F_{q^degree}.
struct ClosedPoint {
  ProjPoint rep;
  int degree = 1;
};

/// Closed point containing a geometric point given over any extension of `base`.
ClosedPoint closed_point_of(const ProjPoint& p, const FieldPtr& base);
/// All geometric points in the orbit, over the residue field.
std::vector<ProjPoint> conjugates(const ClosedPoint& w, const FieldPtr& base);

/// Closed subscheme of P^n over F_q. Either an ideal (gens; no gens means
/// all of P^n) or a reduced finite set of closed points. Points given in the
/// constructor may be any geometric representatives; they are normalized to
/// closed points and deduplicated.
class SubschemeSpec {
 public:
  SubschemeSpec() = default;
  static SubschemeSpec ambient(FieldPtr field, int n);
  static SubschemeSpec empty(FieldPtr field, int n);
  static SubschemeSpec from_ideal(FieldPtr field, int n, std::vector<HomogPoly> gens);
  static SubschemeSpec from_points(FieldPtr field, int n, const std::vector<ProjPoint>& points);

  const FieldPtr& field() const { return field_; }
  int n() const { return n_; }
  bool is_point_set() const { return points_.has_value(); }
  const std::vector<ClosedPoint>& points() const;
  /// Ideal generators; for point sets they are derived from the vanishing
  /// pieces up to degree sum(deg w) (the regularity bound for reduced points).
  const std::vector<HomogPoly>& gens() const;
  /// True for the empty point set or an ideal containing a nonzero constant.
  bool is_trivially_empty() const;
  /// Sum of residue degrees (point sets only).
  int total_degree() const;

  /// Union of generator lists (the sum of ideals, i.e. intersection).
  SubschemeSpec intersect(const SubschemeSpec& other) const;
  SubschemeSpec with(const HomogPoly& f) const;
  SubschemeSpec permuted(const std::vector<int>& perm) const;

  std::string to_string() const;

 private:
  FieldPtr field_;
  int n_ = 0;
  mutable std::optional<std::vector<HomogPoly>> gens_;
  std::optional<std::vector<ClosedPoint>> points_;
};

/// An echelonized subspace of S_d over F_q. Rows are in reduced row echelon
/// form with increasing pivot columns.
struct GradedPiece {
  FieldPtr field;
  int n = 0;
  int d = 0;
  std::vector<std::vector<std::uint32_t>> basis;
  std::vector<std::size_t> pivots;

  std::size_t rank() const { return basis.size(); }
  std::size_t ambient_dim() const;
  bool contains(const HomogPoly& f) const;
  /// Member sum_i c_i basis_i for the coefficient vector c.
  HomogPoly member(const std::vector<std::uint32_t>& c) const;
  HomogPoly basis_poly(std::size_t i) const;
};

GradedPiece make_piece(const FieldPtr& field, int n, int d, std::vector<std::vector<std::uint32_t>> rows);
/// Span of {m*g : g in gens, deg m = d - deg g}.
GradedPiece graded_piece(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int d);
/// rank of the span above, with early exit once it fills S_d.
std::size_t graded_rank(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int d);
/// H^0(P^n, I_Z(d)): evaluation kernel for point sets; for ideals the
/// degree-d piece of the saturation (I : m^infinity).
GradedPiece vanishing_piece(const SubschemeSpec& Z, int d);
/// S_1 * I_d as an echelonized piece of S_{d+1}.
GradedPiece linear_multiples(const GradedPiece& piece);

/// Least c with S_1 I^Z_d = I^Z_{d+1} for every d in [c, d_max).
std::optional<int> stabilization_degree(const SubschemeSpec& Z, int d_max);

enum class Verdict { False, True, Inconclusive, NotEvaluated };
std::string to_string(Verdict v);

struct EmptinessVerdict {
  enum class Status { Empty, Nonempty, Inconclusive } status = Status::Inconclusive;
  std::optional<ProjPoint> witness;
  /// "macaulay" when decided by the Hilbert function at D*, "witness" when
  /// a point was found first, "no_generators" for the trivial cases.
  std::string certificate;
  int degree = 0;           // D*
  std::size_t hilbert = 0;  // HF(D*)

  bool empty() const { return status == Status::Empty; }
  bool nonempty() const { return status == Status::Nonempty; }
};

struct EmptinessOptions {
  bool want_witness = true;
  /// 0 selects max(4, sum of generator degrees).
  int r_cap = 0;
};

/// D* = sum over the n+1 largest generator degrees of (deg - 1), plus 1.
int macaulay_degree(int n, const std::vector<HomogPoly>& gens);
EmptinessVerdict is_empty_projective(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens,
                                     EmptinessOptions opts = {});

/// First point of V(gens) over F_{q^r}, r = 1..r_max, if any.
std::optional<ProjPoint> find_point(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int r_max);

/// HF(D) = dim S_D - rank I_D for the ideal generated by gens.
std::size_t hilbert_function(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int D);

struct DimensionResult {
  bool decided = false;
  int dim = -1;                   // -1 for the empty scheme
  std::vector<std::int64_t> poly;  // Hilbert polynomial values on the window
  int window_start = 0;
  std::int64_t leading_degree = 0;  // (dim)! * leading coefficient, the degree of V
};

/// Projective dimension of V(gens) from the eventual growth of HF over a
/// window of `width` consecutive degrees. The window starts past every
/// generator degree and is pushed up (to `max_start`) until the values fit
/// a polynomial. Empty schemes are detected exactly through D*.
DimensionResult hilbert_dim(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int width = 6,
                            int max_start = 0);

/// Values of x_j^{-d} f at each closed point of Y (j the chart of the
/// representative), each in its residue field.
std::vector<FieldElem> restrict_to_finite(const HomogPoly& f, const SubschemeSpec& Y);

/// Closed points of a zero-dimensional scheme given by an ideal. Searches
/// residue degrees up to r_max until the found degrees add up to the
/// Hilbert polynomial; Inconclusive is thrown otherwise.
std::vector<ClosedPoint> closed_points_of_finite(const SubschemeSpec& Y, int r_max = 6);

}  // namespace bertini
