// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "bertini/scheme.hpp"

namespace bertini {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& r);
Rational rational_from_string(const std::string& s);
double to_double(const Rational& r);

/// A truncated Euler product and a bound on its distance to the full product.
struct ZetaValue {
  double value = 1.0;
  double error = 0.0;
  int B = 0;
};

/// prod_{r<=B} (1 - q^{-rs})^{-b_r}. Throws DomainError when s <= dim (the
/// product diverges) or B exceeds the census depth. The bound uses
/// b_r <= a_r <= C q^{r dim}, C = degree * q / (q - 1).
ZetaValue zeta_truncated(const PointCensus& census, int s, int B);
/// Same product inverted, 1 / zeta_B(s), with its own error bound.
ZetaValue inverse_zeta_truncated(const PointCensus& census, int s, int B);

/// Point counts of a locally closed set in the form
///   a_r = sum_k c_k q^{kr} + sum_w deg(w) [deg(w) | r] + (enumerated part)_r
/// where the closed-point list carries signed multiplicities. Strata built
/// from projective and linear spaces and finite point sets stay exact;
/// anything enumerated is only available to depth().
class ZetaSpec {
 public:
  ZetaSpec() = default;
  explicit ZetaSpec(std::uint64_t q) : q_(q) {}

  static ZetaSpec projective_space(std::uint64_t q, int n);
  static ZetaSpec closed_points(std::uint64_t q, const std::vector<int>& degrees);
  static ZetaSpec enumerated(const PointCensus& census);
  /// Exact where the shape allows (ambient, linear, finite), enumerated to
  /// `depth` otherwise.
  static ZetaSpec of(const SubschemeSpec& S, int depth);

  /// Counts add over disjoint unions and subtract for closed subsets.
  ZetaSpec operator+(const ZetaSpec& o) const;
  ZetaSpec operator-(const ZetaSpec& o) const;

  std::uint64_t q() const { return q_; }
  int dim() const;
  bool exact() const { return extra_a_.empty() && extra_dim_ < 0; }
  /// Largest usable truncation: unbounded when exact.
  int depth() const;

  /// 1/zeta(s) as a rational product, or nullopt when an enumerated part is present.
  std::optional<Rational> inverse_exact(int s) const;
  /// Census to depth B (clipped where q^{rB} would overflow).
  PointCensus census(int B) const;
  ZetaValue inverse_truncated(int s, int B) const;

  nlohmann::json to_json() const;

 private:
  std::uint64_t q_ = 0;
  std::map<int, std::int64_t> poly_;    // k -> c_k
  std::map<int, std::int64_t> points_;  // residue degree -> signed count
  std::vector<std::int64_t> extra_a_;
  int extra_dim_ = -1;
  std::uint64_t extra_degree_ = 0;
};

enum class Formula { Avoidance, PoonenProduct, TaylorScaled, Zero, One };
std::string to_string(Formula f);

struct DensityPrediction {
  Formula formula = Formula::One;
  std::optional<Rational> exact;
  double value = 1.0;
  double error = 0.0;  // truncation bound; 0 when exact
  int B = 0;
  nlohmann::json inputs = nlohmann::json::object();

  nlohmann::json to_json() const;
};

/// f misses every closed point of the finite set W (Z cap W must be empty).
DensityPrediction predict_avoidance(const SubschemeSpec& W, const SubschemeSpec& Z);
/// f vanishes on the positive-dimensional W, not inside Z: density 0.
DensityPrediction predict_containment(const SubschemeSpec& W, const SubschemeSpec& Z);
/// Density 1 predictions (irreducibility, integrality, normality); `reason`
/// is echoed into the inputs.
DensityPrediction predict_one(const std::string& reason);

/// One piece of the stratified product: the open part U_i minus V_i
/// (weighted at m_i + 1) and the edim strata (V_i)_e, e = 0..m_i-1
/// (weighted at m_i - e).
struct PoonenStratum {
  ZetaSpec open;
  int m = 0;
  std::vector<ZetaSpec> edim_strata;
};

/// (taylor_ratio) * prod_i [zeta_{U_i - V_i}(m_i+1) prod_e zeta_{(V_i)_e}(m_i-e)]^{-1}.
DensityPrediction predict_poonen(const Rational& taylor_ratio, const std::vector<PoonenStratum>& strata, int B);

/// Smooth sections of X (ambient or a smooth complete intersection given by
/// its ideal) containing the finite scheme Z, smooth away from the finite
/// reduced Y, with restriction to Y in a set of `taylor_count` allowed values
/// out of q^{deg Y}.
DensityPrediction predict_smooth(const SectionProblem& problem, const SubschemeSpec& Y, std::uint64_t taylor_count,
                                 int B);

/// snc sections of U = P^n relative to the divisors E: strata E'_J = E_J
/// minus the other components, each weighted at m - |J| + 1.
DensityPrediction predict_snc(const FieldPtr& field, int n, const std::vector<SubschemeSpec>& E, int B);

}  // namespace bertini
