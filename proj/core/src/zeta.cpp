// SPDX-License-Identifier: Apache-2.0
#include "bertini/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <limits>
#include <sstream>

#include "bertini/errors.hpp"

namespace bertini {

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

Rational rational_from_string(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(s));
  return Rational(boost::multiprecision::cpp_int(s.substr(0, slash)), boost::multiprecision::cpp_int(s.substr(slash + 1)));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

Rational qpow(std::uint64_t q, int e) {
  boost::multiprecision::cpp_int p = 1;
  for (int i = 0; i < std::abs(e); ++i) p *= q;
  return e >= 0 ? Rational(p) : Rational(1) / Rational(p);
}

Rational rpow(const Rational& x, std::int64_t e) {
  Rational out = 1;
  Rational base = e >= 0 ? x : Rational(1) / x;
  for (std::int64_t i = 0; i < std::abs(e); ++i) out *= base;
  return out;
}

// log of the truncated product prod_{r<=B} (1 - q^{-rs})^{b_r}
long double log_inverse_partial(const PointCensus& c, int s, int B) {
  long double acc = 0;
  const long double q = static_cast<long double>(c.q);
  for (int r = 1; r <= B; ++r) {
    if (c.b[r - 1] == 0) continue;
    acc += static_cast<long double>(c.b[r - 1]) * std::log1p(-std::pow(q, -static_cast<long double>(r) * s));
  }
  return acc;
}

// Upper bound on log(zeta / zeta_B).
long double tail_bound(const PointCensus& c, int s, int B) {
  if (c.dim < 0) return 0;
  const long double q = static_cast<long double>(c.q);
  const long double C = static_cast<long double>(std::max<std::uint64_t>(1, c.degree)) * q / (q - 1);
  const int gap = s - c.dim;
  return 2 * C * std::pow(q, -static_cast<long double>(B + 1) * gap) / (1 - std::pow(q, -static_cast<long double>(gap)));
}

void check_truncation(const PointCensus& c, int s, int B) {
  if (c.q < 2) throw DomainError("census has no field order");
  if (c.dim >= 0 && s <= c.dim)
    throw DomainError("zeta(" + std::to_string(s) + ") diverges for a scheme of dimension " + std::to_string(c.dim));
  if (B < 0 || B > c.depth())
    throw DomainError("truncation B = " + std::to_string(B) + " exceeds census depth " + std::to_string(c.depth()));
}

}  // namespace

ZetaValue zeta_truncated(const PointCensus& census, int s, int B) {
  check_truncation(census, s, B);
  const long double zb = std::exp(-log_inverse_partial(census, s, B));
  const long double t = tail_bound(census, s, B);
  return {static_cast<double>(zb), static_cast<double>(zb * std::expm1(t)), B};
}

ZetaValue inverse_zeta_truncated(const PointCensus& census, int s, int B) {
  check_truncation(census, s, B);
  const long double inv = std::exp(log_inverse_partial(census, s, B));
  const long double t = tail_bound(census, s, B);
  return {static_cast<double>(inv), static_cast<double>(inv * -std::expm1(-t)), B};
}

// ---------------------------------------------------------------- ZetaSpec

ZetaSpec ZetaSpec::projective_space(std::uint64_t q, int n) {
  ZetaSpec z(q);
  for (int k = 0; k <= n; ++k) z.poly_[k] = 1;
  return z;
}

ZetaSpec ZetaSpec::closed_points(std::uint64_t q, const std::vector<int>& degrees) {
  ZetaSpec z(q);
  for (int e : degrees) {
    if (e < 1) throw DomainError("closed point degree must be positive");
    ++z.points_[e];
  }
  return z;
}

ZetaSpec ZetaSpec::enumerated(const PointCensus& census) {
  ZetaSpec z(census.q);
  z.extra_a_.assign(census.a.begin(), census.a.end());
  z.extra_dim_ = census.dim;
  z.extra_degree_ = census.degree;
  if (census.dim < 0) z.extra_a_.clear();
  return z;
}

ZetaSpec ZetaSpec::of(const SubschemeSpec& S, int depth) {
  const std::uint64_t q = S.field()->order();
  if (S.is_trivially_empty()) return ZetaSpec(q);
  if (S.is_point_set()) {
    std::vector<int> deg;
    for (const auto& w : S.points()) deg.push_back(w.degree);
    return closed_points(q, deg);
  }
  if (S.gens().empty()) return projective_space(q, S.n());
  if (std::all_of(S.gens().begin(), S.gens().end(), [](const HomogPoly& g) { return g.degree() == 1; })) {
    const int rank = static_cast<int>(graded_rank(S.field(), S.n(), S.gens(), 1));
    return S.n() - rank >= 0 ? projective_space(q, S.n() - rank) : ZetaSpec(q);
  }
  const auto dim = hilbert_dim(S.field(), S.n(), S.gens());
  if (dim.decided && dim.dim < 0) return ZetaSpec(q);
  if (dim.decided && dim.dim == 0) {
    try {
      std::vector<int> deg;
      for (const auto& w : closed_points_of_finite(S)) deg.push_back(w.degree);
      return closed_points(q, deg);
    } catch (const Inconclusive&) {
      // non-reduced: fall through to counting
    }
  }
  return enumerated(closed_point_counts(S, depth));
}

ZetaSpec ZetaSpec::operator+(const ZetaSpec& o) const {
  if (q_ != o.q_) throw DomainError("zeta strata over different fields");
  ZetaSpec z = *this;
  for (auto [k, c] : o.poly_) z.poly_[k] += c;
  for (auto [e, c] : o.points_) z.points_[e] += c;
  if (!o.extra_a_.empty() || o.extra_dim_ >= 0) {
    if (z.extra_a_.empty() && z.extra_dim_ < 0) {
      z.extra_a_ = o.extra_a_;
    } else {
      z.extra_a_.resize(std::min(z.extra_a_.size(), o.extra_a_.size()));
      for (std::size_t i = 0; i < z.extra_a_.size(); ++i) z.extra_a_[i] += o.extra_a_[i];
    }
    z.extra_dim_ = std::max(z.extra_dim_, o.extra_dim_);
    z.extra_degree_ += o.extra_degree_;
  }
  std::erase_if(z.poly_, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(z.points_, [](const auto& kv) { return kv.second == 0; });
  return z;
}

ZetaSpec ZetaSpec::operator-(const ZetaSpec& o) const {
  ZetaSpec neg = o;
  for (auto& [k, c] : neg.poly_) c = -c;
  for (auto& [e, c] : neg.points_) c = -c;
  for (auto& a : neg.extra_a_) a = -a;
  // a closed subset does not raise the dimension or degree of the difference
  neg.extra_degree_ = 0;
  neg.extra_dim_ = std::min(neg.extra_dim_, extra_dim_ >= 0 ? extra_dim_ : dim());
  return *this + neg;
}

int ZetaSpec::dim() const {
  int d = -1;
  for (auto [k, c] : poly_)
    if (c != 0) d = std::max(d, k);
  for (auto [e, c] : points_)
    if (c != 0) d = std::max(d, 0);
  return std::max(d, extra_dim_);
}

int ZetaSpec::depth() const {
  if (exact()) return std::numeric_limits<int>::max();
  return static_cast<int>(extra_a_.size());
}

std::optional<Rational> ZetaSpec::inverse_exact(int s) const {
  if (!exact()) return std::nullopt;
  if (dim() >= 0 && s <= dim())
    throw DomainError("zeta(" + std::to_string(s) + ") diverges for a stratum of dimension " + std::to_string(dim()));
  Rational out = 1;
  for (auto [k, c] : poly_) out *= rpow(Rational(1) - qpow(q_, k - s), c);
  for (auto [e, c] : points_) out *= rpow(Rational(1) - qpow(q_, -e * s), c);
  return out;
}

PointCensus ZetaSpec::census(int B) const {
  if (B > depth()) throw DomainError("truncation B = " + std::to_string(B) + " exceeds census depth " + std::to_string(depth()));
  PointCensus c;
  c.q = q_;
  c.dim = dim();
  std::uint64_t C = extra_degree_;
  for (auto [k, m] : poly_) C += static_cast<std::uint64_t>(std::abs(m));
  for (auto [e, m] : points_) C += static_cast<std::uint64_t>(e) * static_cast<std::uint64_t>(std::abs(m));
  c.degree = std::max<std::uint64_t>(1, C);
  std::vector<std::uint64_t> a;
  for (int r = 1; r <= B; ++r) {
    __int128 total = 0;
    bool overflow = false;
    for (auto [k, m] : poly_) {
      __int128 p = 1;
      for (int i = 0; i < k * r && !overflow; ++i) {
        p *= static_cast<__int128>(q_);
        overflow = p > (static_cast<__int128>(1) << 100);
      }
      total += p * m;
    }
    for (auto [e, m] : points_)
      if (r % e == 0) total += static_cast<__int128>(e) * m;
    if (!extra_a_.empty()) total += extra_a_[r - 1];
    if (overflow || total < 0 || total > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max())) break;
    a.push_back(static_cast<std::uint64_t>(total));
  }
  auto out = census_from_counts(q_, c.dim, std::move(a));
  out.degree = c.degree;
  return out;
}

ZetaValue ZetaSpec::inverse_truncated(int s, int B) const {
  auto c = census(B);
  return inverse_zeta_truncated(c, s, c.depth());
}

nlohmann::json ZetaSpec::to_json() const {
  nlohmann::json j;
  j["q"] = q_;
  j["dim"] = dim();
  j["exact"] = exact();
  nlohmann::json poly = nlohmann::json::object();
  for (auto [k, c] : poly_) poly[std::to_string(k)] = c;
  j["poly"] = poly;
  nlohmann::json pts = nlohmann::json::object();
  for (auto [e, c] : points_) pts[std::to_string(e)] = c;
  j["closed_points"] = pts;
  if (!exact()) j["enumerated"] = extra_a_;
  return j;
}

// ---------------------------------------------------------------- predictions

std::string to_string(Formula f) {
  switch (f) {
    case Formula::Avoidance: return "avoidance";
    case Formula::PoonenProduct: return "poonen_product";
    case Formula::TaylorScaled: return "taylor_scaled";
    case Formula::Zero: return "zero";
    case Formula::One: return "one";
  }
  return "?";
}

nlohmann::json DensityPrediction::to_json() const {
  nlohmann::json j;
  j["formula"] = to_string(formula);
  j["exact"] = exact ? nlohmann::json(to_string(*exact)) : nlohmann::json(nullptr);
  j["value"] = value;
  j["error_bound"] = error;
  j["B"] = B;
  j["inputs"] = inputs;
  return j;
}

namespace {

DensityPrediction exact_prediction(Formula f, const Rational& v, nlohmann::json inputs) {
  DensityPrediction p;
  p.formula = f;
  p.exact = v;
  p.value = to_double(v);
  p.inputs = std::move(inputs);
  return p;
}

bool same_closed_point(const ClosedPoint& a, const ClosedPoint& b) { return a.degree == b.degree && a.rep == b.rep; }

}  // namespace

DensityPrediction predict_avoidance(const SubschemeSpec& W, const SubschemeSpec& Z) {
  const auto pts = closed_points_of_finite(W);
  const std::uint64_t q = W.field()->order();
  Rational v = 1;
  std::vector<int> degrees;
  for (const auto& w : pts) {
    if (!Z.is_trivially_empty()) {
      bool on_z = std::all_of(Z.gens().begin(), Z.gens().end(), [&](const HomogPoly& g) { return g.eval(w.rep).is_zero(); });
      if (on_z) throw DomainError("Z meets the avoided point " + w.rep.to_string());
    }
    v *= Rational(1) - qpow(q, -w.degree);
    degrees.push_back(w.degree);
  }
  return exact_prediction(Formula::Avoidance, v, {{"residue_degrees", degrees}, {"q", q}});
}

DensityPrediction predict_containment(const SubschemeSpec& W, const SubschemeSpec& Z) {
  const auto dim = hilbert_dim(W.field(), W.n(), W.gens());
  if (!dim.decided) throw Inconclusive("dimension of " + W.to_string() + " undecided");
  if (dim.dim < 1) throw DomainError("containment density is 0 only for positive-dimensional W");
  if (!Z.is_trivially_empty()) {
    // W must not lie inside Z: some generator of Z is not in the saturation of W.
    bool inside = true;
    for (const auto& g : Z.gens())
      if (!vanishing_piece(W, g.degree()).contains(g)) inside = false;
    if (inside) throw DomainError("W lies inside Z");
  }
  return exact_prediction(Formula::Zero, 0, {{"W", W.to_string()}, {"dim_W", dim.dim}});
}

DensityPrediction predict_one(const std::string& reason) {
  return exact_prediction(Formula::One, 1, {{"reason", reason}});
}

DensityPrediction predict_poonen(const Rational& taylor_ratio, const std::vector<PoonenStratum>& strata, int B) {
  if (taylor_ratio < 0 || taylor_ratio > 1) throw DomainError("Taylor ratio outside [0, 1]");
  DensityPrediction p;
  p.formula = taylor_ratio == 1 ? Formula::PoonenProduct : Formula::TaylorScaled;
  p.B = B;
  std::optional<Rational> exact = taylor_ratio;
  long double value = to_double(taylor_ratio);
  long double rel = 0;  // accumulated relative error bound
  nlohmann::json factors = nlohmann::json::array();
  auto apply = [&](const ZetaSpec& z, int s, const std::string& role, int m) {
    if (z.dim() < 0) return;
    const int depth = std::min(B, z.depth());
    const auto t = z.inverse_truncated(s, depth);
    value *= t.value;
    if (t.value > 0) rel = (1 + rel) * (1 + t.error / t.value) - 1;
    if (exact) {
      auto e = z.inverse_exact(s);
      if (e) *exact *= *e;
      else exact.reset();
    }
    factors.push_back({{"role", role}, {"m", m}, {"s", s}, {"zeta", z.to_json()}, {"inverse_truncated", t.value},
                       {"B", t.B}});
  };
  for (const auto& st : strata) {
    if (st.m < 0) throw DomainError("stratum dimension must be nonnegative");
    apply(st.open, st.m + 1, "open", st.m);
    if (st.edim_strata.size() > static_cast<std::size_t>(st.m) &&
        std::any_of(st.edim_strata.begin() + st.m, st.edim_strata.end(), [](const ZetaSpec& z) { return z.dim() >= 0; }))
      throw DomainError("Z has embedding dimension >= m at some point");
    for (std::size_t e = 0; e < st.edim_strata.size() && e < static_cast<std::size_t>(st.m); ++e)
      apply(st.edim_strata[e], st.m - static_cast<int>(e), "edim_" + std::to_string(e), st.m);
  }
  p.exact = exact;
  p.value = static_cast<double>(value);
  p.error = static_cast<double>(value * rel);
  p.inputs = {{"taylor_ratio", to_string(taylor_ratio)}, {"factors", factors}};
  if (exact) p.value = to_double(*exact);
  if (exact) p.error = 0;
  return p;
}

DensityPrediction predict_smooth(const SectionProblem& problem, const SubschemeSpec& Y, std::uint64_t taylor_count,
                                 int B) {
  const FieldPtr& F = problem.field();
  const std::uint64_t q = F->order();
  const int depth = std::min(B, 6);

  auto on = [](const SubschemeSpec& S, const ClosedPoint& w) {
    if (S.is_point_set())
      return std::any_of(S.points().begin(), S.points().end(), [&](const ClosedPoint& o) { return same_closed_point(o, w); });
    return std::all_of(S.gens().begin(), S.gens().end(), [&](const HomogPoly& g) { return g.eval(w.rep).is_zero(); });
  };

  std::vector<ClosedPoint> ypts;
  if (!Y.is_trivially_empty()) ypts = closed_points_of_finite(Y);
  std::vector<int> ydeg;
  int ytotal = 0;
  for (const auto& y : ypts)
    if (on(problem.X, y)) {
      ydeg.push_back(y.degree);
      ytotal += y.degree;
    }

  // V = Z cap X minus Y, stratified by the embedding dimension of Z.
  std::vector<std::vector<int>> vdeg(static_cast<std::size_t>(problem.n() + 1));
  std::vector<int> all_v;
  if (!problem.Z.is_trivially_empty() && !(problem.Z.gens().empty() && !problem.Z.is_point_set())) {
    std::vector<HomogPoly> g = problem.X.gens();
    g.insert(g.end(), problem.Z.gens().begin(), problem.Z.gens().end());
    auto ZX = problem.Z.is_point_set() ? problem.Z : SubschemeSpec::from_ideal(F, problem.n(), g);
    for (const auto& w : closed_points_of_finite(ZX)) {
      if (!on(problem.X, w)) continue;
      if (std::any_of(ypts.begin(), ypts.end(), [&](const ClosedPoint& y) { return same_closed_point(y, w); })) continue;
      const int e = problem.Z.is_point_set() ? 0 : edim_at(problem.Z, w.rep);
      vdeg[static_cast<std::size_t>(e)].push_back(w.degree);
      all_v.push_back(w.degree);
    }
  } else if (!problem.Z.is_trivially_empty()) {
    throw DomainError("Z = ambient space leaves nothing to count");
  }

  PoonenStratum st;
  st.m = problem.m;
  st.open = ZetaSpec::of(problem.X, depth) - ZetaSpec::closed_points(q, ydeg) - ZetaSpec::closed_points(q, all_v);
  for (const auto& d : vdeg) st.edim_strata.push_back(ZetaSpec::closed_points(q, d));

  Rational ratio = Rational(taylor_count) / qpow(q, ytotal);
  auto p = predict_poonen(ratio, {st}, B);
  p.inputs["m"] = problem.m;
  p.inputs["taylor_count"] = taylor_count;
  p.inputs["h0_Y"] = to_string(qpow(q, ytotal));
  return p;
}

DensityPrediction predict_snc(const FieldPtr& field, int n, const std::vector<SubschemeSpec>& E, int B) {
  const int k = static_cast<int>(E.size());
  if (k > 12) throw DomainError("too many divisor components");
  const std::uint64_t q = field->order();
  const int depth = std::min(B, 6);
  // E_K for every subset K, then E'_J by inclusion-exclusion over supersets.
  std::vector<ZetaSpec> closed(std::size_t{1} << k);
  for (std::uint32_t K = 0; K < closed.size(); ++K) {
    std::vector<HomogPoly> g;
    for (int i = 0; i < k; ++i)
      if (K >> i & 1) g.insert(g.end(), E[i].gens().begin(), E[i].gens().end());
    closed[K] = ZetaSpec::of(SubschemeSpec::from_ideal(field, n, g), depth);
  }
  std::vector<PoonenStratum> strata;
  for (std::uint32_t J = 0; J < closed.size(); ++J) {
    ZetaSpec open(q);
    for (std::uint32_t K = J; K < closed.size(); K = (K + 1) | J) {
      if ((std::popcount(K) - std::popcount(J)) % 2) open = open - closed[K];
      else open = open + closed[K];
    }
    PoonenStratum st;
    st.m = n - std::popcount(J);
    st.open = open;
    if (st.m >= 0) strata.push_back(st);
    else if (open.dim() >= 0) throw DomainError("components meet in more than expected dimension");
  }
  auto p = predict_poonen(1, strata, B);
  p.inputs["components"] = k;
  return p;
}

}  // namespace bertini
