// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bertini/scheme.hpp"
#include "bertini/zeta.hpp"

namespace bertini {

enum class PredicateKind {
  True,
  Avoid,            // f misses every point of W
  Contain,          // f vanishes on W
  Smooth,           // X cap H_f smooth
  TaylorSmooth,     // f|_Y in T and X cap H_f smooth away from Y
  Snc,              // H_f snc relative to the components E
  Reduced,          // f squarefree
  Irreducible,      // f irreducible over F_q
  GeomIrreducible,  // f irreducible over the algebraic closure
  Integral,         // irreducible and reduced
  Normal,           // surface in P^3 with finite singular locus
};
std::string to_string(PredicateKind k);
PredicateKind predicate_from_string(const std::string& s);

struct PredicateSpec {
  PredicateKind kind = PredicateKind::True;
  SubschemeSpec W;
  SubschemeSpec Y;
  /// Allowed restrictions f|_Y, one tuple per allowed value: entry i is the
  /// packed value at the i-th closed point of Y in its residue field. Empty
  /// means no condition.
  std::vector<std::vector<std::uint32_t>> taylor;
  std::vector<SubschemeSpec> E;
};

struct Experiment {
  std::string name;
  SectionProblem problem;
  PredicateSpec predicate;
  /// Counted jointly with the primary predicate (extras "secondary", "both").
  std::optional<PredicateSpec> secondary;
  int d_lo = 1;
  int d_hi = 1;
  int threads = 1;
  bool subsample = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double max_inconclusive = 0.1;
  int B = 12;

  /// Throws DomainError on a malformed experiment.
  void validate() const;
};

struct DegreeRow {
  int d = 0;
  std::size_t rank = 0;          // dim I^Z_d
  std::uint64_t size = 0;        // q^rank
  std::uint64_t evaluated = 0;   // size, or the sample count
  std::uint64_t hits = 0;
  std::uint64_t inconclusive = 0;
  std::map<std::string, std::uint64_t> extra;
  Rational empirical;            // hits / evaluated
  double half_width = 0;         // binomial 95% half-width (subsample mode)
};

struct DensityReport {
  std::string name;
  std::string predicate;
  std::uint64_t q = 0;
  int n = 0;
  bool subsample = false;
  std::uint64_t seed = 0;
  std::vector<DegreeRow> rows;
  std::optional<DensityPrediction> prediction;

  /// Exact predicted value when available, else the truncated one.
  std::optional<double> predicted() const;
  std::optional<double> abs_dev(const DegreeRow& row) const;
  nlohmann::json to_json() const;
  /// d,size,hits,inconclusive,empirical_num,empirical_den,predicted,abs_dev
  std::string to_csv() const;
};

/// Per-degree enumeration of I^Z_d: calls `visit` on every member, in the
/// coefficient order of the echelon basis (single-threaded).
void for_each_member(const GradedPiece& piece, const std::function<void(const HomogPoly&)>& visit);

/// Prediction matching the experiment's predicate; nullopt when none applies.
std::optional<DensityPrediction> predict_for(const Experiment& e);

DensityReport run_census(const Experiment& e);

struct Tolerance {
  std::map<int, double> per_degree;
  /// Require |dev(d_hi)| <= |dev(d_lo)|.
  bool trend = false;
};

struct DegreeVerdict {
  int d = 0;
  double abs_dev = 0;
  std::optional<double> tolerance;
  bool ok = true;
};

struct Comparison {
  std::vector<DegreeVerdict> degrees;
  bool trend_ok = true;
  bool ok = true;

  nlohmann::json to_json() const;
};

Comparison compare_report(const DensityReport& report, const DensityPrediction& prediction, const Tolerance& tol);

}  // namespace bertini
