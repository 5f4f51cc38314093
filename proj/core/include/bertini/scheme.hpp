// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bertini/ideal.hpp"

namespace bertini {

/// Points of V(I) over F_{q^r}, normalized, each once.
std::vector<ProjPoint> rational_points(const SubschemeSpec& I, int r);
std::uint64_t rational_point_count(const SubschemeSpec& I, int r);

/// a[r-1] = #X(F_{q^r}), b[r-1] = number of closed points of degree r.
struct PointCensus {
  std::uint64_t q = 0;
  int dim = 0;
  std::vector<std::uint64_t> a;
  std::vector<std::uint64_t> b;
  /// Degree of the scheme (1 for P^n); scales the tail bound a_r <= C q^{r dim}.
  std::uint64_t degree = 1;

  int depth() const { return static_cast<int>(a.size()); }
};

int moebius(int n);
/// Closed-point counts from point counts by Moebius inversion. Throws
/// InternalError when a count is not a nonnegative integer.
PointCensus census_from_counts(std::uint64_t q, int dim, std::vector<std::uint64_t> a);
/// Point counts of P^n over F_q, r = 1..B, in closed form.
PointCensus projective_space_census(std::uint64_t q, int n, int B);
/// Enumerates #X(F_{q^r}) for r = 1..B (ambient spaces use the closed form).
PointCensus closed_point_counts(const SubschemeSpec& I, int B);

/// Partials d g_i / d x_j as a matrix of forms.
std::vector<std::vector<HomogPoly>> jacobian(const std::vector<HomogPoly>& gens);
/// All k x k minors of a matrix of forms (rows of homogeneous entries).
std::vector<HomogPoly> minors(const std::vector<std::vector<HomogPoly>>& M, int k);
/// gens + extra + (c+1)-minors of the Jacobian of gens + extra, where c is
/// the codimension of V(gens). Its zero set is the singular locus of
/// V(gens, extra) viewed as a scheme of pure dimension n - c - |extra|.
std::vector<HomogPoly> singular_ideal(int n, const std::vector<HomogPoly>& gens, int codim,
                                      const std::vector<HomogPoly>& extra = {});

/// Embedding dimension n - rank Jac(P) of V(gens) at a point on it.
int edim_at(const SubschemeSpec& X, const ProjPoint& P);

/// The data of a section problem: ambient X of pure dimension m, imposed
/// containment Z, finite avoidance set T. `components` optionally lists the
/// irreducible components of X (needed for the Cartier check when X is
/// reducible).
struct SectionProblem {
  SubschemeSpec X;
  SubschemeSpec Z;
  SubschemeSpec T;
  int m = 0;
  std::vector<SubschemeSpec> components;

  static SectionProblem plane(FieldPtr field, int n);
  int n() const { return X.n(); }
  const FieldPtr& field() const { return X.field(); }
  int codim() const { return X.n() - m; }
  /// Checks X cap Z cap T is empty; throws DomainError otherwise.
  void validate() const;
};

struct PredicateResult {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<ProjPoint> witness;
  std::string note;

  bool is_true() const { return verdict == Verdict::True; }
  bool is_false() const { return verdict == Verdict::False; }
};

enum class SmoothMode { Exact, Bounded };

/// X cap H_f smooth of dimension m - 1. Exact mode decides emptiness of the
/// singular ideal; bounded mode searches singular points over F_{q^r},
/// r <= bound, and reports "smooth up to degree bound".
PredicateResult is_smooth_section(const SectionProblem& problem, const HomogPoly& f,
                                  SmoothMode mode = SmoothMode::Exact, int bound = 3);

/// X cap H_f is smooth at every point outside the finite set Y.
PredicateResult is_smooth_away_from(const SectionProblem& problem, const HomogPoly& f, const SubschemeSpec& Y);

/// f squarefree (hypersurface of P^n reduced). Over a perfect field this is
/// the same over F_q and over its closure, so the search stays over F_q.
PredicateResult is_reduced_section(const HomogPoly& f);

/// No factor of degree 1..d/2 over F_q; geometric: none over F_{q^r} either.
/// A geometric factor g with field of definition F_{q^r} has r distinct
/// conjugates dividing f, so r * deg g <= d; if f is irreducible over F_q
/// the conjugates of g multiply to f, hence r * deg g = d.
PredicateResult is_irreducible_section(const HomogPoly& f, bool geometric);

/// All nonzero factors g with deg g = e and leading coefficient 1 over `over`
/// dividing f (f embedded); at most `limit` are returned.
std::vector<HomogPoly> find_factors(const HomogPoly& f, const FieldPtr& over, int e, std::size_t limit = 1);

struct GoodFlags {
  PredicateResult g1, g2, g3, smooth;
};
/// (G1) T cap X cap H_f empty, (G2) H_f contains no component of X, (G3)
/// H_f contains no component of X_sing. `smooth` is evaluated only when X
/// is smooth.
GoodFlags is_good_section(const SectionProblem& problem, const HomogPoly& f);

/// Every stratum E_J (J a subset of the components, J empty meaning U)
/// meets H_f in a smooth scheme of dimension dim E_J - 1 (empty when that
/// is negative).
PredicateResult is_snc_section(const SubschemeSpec& U, const std::vector<SubschemeSpec>& E, const HomogPoly& f);

/// For a surface f in P^3: the singular locus has dimension <= 0.
PredicateResult is_normal_R1_section(const HomogPoly& f);

struct SectionReport {
  HomogPoly f;
  std::vector<std::pair<std::string, PredicateResult>> flags;

  void set(const std::string& name, PredicateResult r) { flags.emplace_back(name, std::move(r)); }
  nlohmann::json to_json() const;
};

/// Evaluates every applicable predicate. Predicates that need X = P^n are
/// only run when X has no equations.
SectionReport section_report(const SectionProblem& problem, const HomogPoly& f);

}  // namespace bertini
