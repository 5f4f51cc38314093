// SPDX-License-Identifier: Apache-2.0
#include "bertini/density.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "bertini/caps.hpp"
#include "bertini/errors.hpp"

namespace bertini {

namespace {

const std::vector<std::pair<PredicateKind, const char*>> kKindNames = {
    {PredicateKind::True, "true"},
    {PredicateKind::Avoid, "avoid"},
    {PredicateKind::Contain, "contain"},
    {PredicateKind::Smooth, "smooth"},
    {PredicateKind::TaylorSmooth, "taylor_smooth"},
    {PredicateKind::Snc, "snc"},
    {PredicateKind::Reduced, "reduced"},
    {PredicateKind::Irreducible, "irreducible"},
    {PredicateKind::GeomIrreducible, "geometrically_irreducible"},
    {PredicateKind::Integral, "integral"},
    {PredicateKind::Normal, "normal"},
};

}  // namespace

std::string to_string(PredicateKind k) {
  for (auto [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

PredicateKind predicate_from_string(const std::string& s) {
  for (auto [kind, name] : kKindNames)
    if (s == name) return kind;
  throw DomainError("unknown predicate '" + s + "'");
}

namespace {

std::uint64_t checked_power(std::uint64_t q, std::size_t k) {
  unsigned __int128 v = 1;
  for (std::size_t i = 0; i < k; ++i) {
    v *= q;
    if (v > Caps::current().census)
      throw CapExceeded("enumeration of " + std::to_string(q) + "^" + std::to_string(k) +
                        " elements exceeds BERTINI_CENSUS_CAP");
  }
  return static_cast<std::uint64_t>(v);
}

bool is_ambient(const SubschemeSpec& X) { return !X.is_point_set() && X.gens().empty(); }

// ---------------------------------------------------------------- linear data

// A linear map S_d -> E given by the images of the monomials.
struct Functional {
  FieldPtr E;
  std::vector<std::uint32_t> coef;
};

std::uint32_t monomial_value(const Field& E, std::span<const std::uint32_t> x, std::span<const std::uint8_t> e) {
  std::uint32_t v = 1;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i]) v = E.mul(v, E.pow(x[i], e[i]));
  return v;
}

Functional evaluation_at(const ProjPoint& P, int d) {
  const auto& B = MonomialBasis::get(P.n(), d);
  Functional L{P.field(), std::vector<std::uint32_t>(B.size())};
  for (std::size_t m = 0; m < B.size(); ++m) L.coef[m] = monomial_value(*P.field(), P.coords(), B.exps(m));
  return L;
}

// d/dx_j of each monomial, evaluated at P
Functional partial_at(const ProjPoint& P, int d, int j) {
  const auto& B = MonomialBasis::get(P.n(), d);
  const Field& E = *P.field();
  Functional L{P.field(), std::vector<std::uint32_t>(B.size(), 0)};
  for (std::size_t m = 0; m < B.size(); ++m) {
    auto ex = B.exps(m);
    if (ex[j] == 0) continue;
    std::vector<std::uint8_t> lowered(ex.begin(), ex.end());
    --lowered[j];
    L.coef[m] = E.mul(E.from_int(ex[j]), monomial_value(E, P.coords(), lowered));
  }
  return L;
}

std::vector<ClosedPoint> low_degree_points(const FieldPtr& F, int n, int rmax, std::uint64_t budget) {
  std::vector<ClosedPoint> out;
  for (int r = 1; r <= rmax; ++r) {
    const std::uint64_t qr = checked_power(F->order(), static_cast<std::size_t>(r));
    if (projective_point_count(qr, n) > budget) break;
    FieldPtr E = F->extension(static_cast<std::uint32_t>(r));
    std::set<ProjPoint> seen;
    for (const auto& p : projective_points(E, n)) {
      ClosedPoint w = closed_point_of(p, F);
      if (w.degree == r && seen.insert(w.rep).second) out.push_back(w);
    }
  }
  return out;
}

bool same_point(const ClosedPoint& a, const ClosedPoint& b) { return a.degree == b.degree && a.rep == b.rep; }

// ---------------------------------------------------------------- evaluators

constexpr std::size_t kMaxExtras = 4;

struct Outcome {
  Verdict verdict = Verdict::False;
  std::array<bool, kMaxExtras> extra{};
};

class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual Outcome eval(const HomogPoly& f, const std::uint32_t* lin) const = 0;

  std::vector<Functional> functionals;
  std::vector<std::string> extras;
  bool needs_form = true;
};

Outcome verdict_only(Verdict v) {
  Outcome o;
  o.verdict = v;
  return o;
}

class TrueEval final : public Evaluator {
 public:
  TrueEval() { needs_form = false; }
  Outcome eval(const HomogPoly&, const std::uint32_t*) const override { return verdict_only(Verdict::True); }
};

class AvoidEval final : public Evaluator {
 public:
  AvoidEval(const SubschemeSpec& W, int d) {
    needs_form = false;
    for (const auto& w : closed_points_of_finite(W)) functionals.push_back(evaluation_at(w.rep, d));
  }
  Outcome eval(const HomogPoly&, const std::uint32_t* lin) const override {
    for (std::size_t j = 0; j < functionals.size(); ++j)
      if (lin[j] == 0) return verdict_only(Verdict::False);
    return verdict_only(Verdict::True);
  }
};

// f in V <=> every non-pivot coordinate of f minus its pivot combination vanishes
class ContainEval final : public Evaluator {
 public:
  ContainEval(const SubschemeSpec& W, int d) {
    needs_form = false;
    GradedPiece V = vanishing_piece(W, d);
    const Field& F = *V.field;
    const std::size_t N = V.ambient_dim();
    std::vector<bool> pivot(N, false);
    for (auto p : V.pivots) pivot[p] = true;
    for (std::size_t j = 0; j < N; ++j) {
      if (pivot[j]) continue;
      Functional L{V.field, std::vector<std::uint32_t>(N, 0)};
      L.coef[j] = 1;
      for (std::size_t i = 0; i < V.rank(); ++i) L.coef[V.pivots[i]] = F.neg(V.basis[i][j]);
      functionals.push_back(std::move(L));
    }
  }
  Outcome eval(const HomogPoly&, const std::uint32_t* lin) const override {
    for (std::size_t j = 0; j < functionals.size(); ++j)
      if (lin[j] != 0) return verdict_only(Verdict::False);
    return verdict_only(Verdict::True);
  }
};

// Smooth sections, optionally with a Taylor condition on Y and smoothness
// only required off Y. Low-degree singular points are caught by linear
// signatures (f and its partials at each closed point); the rest goes to
// the exact tests.
class SmoothEval final : public Evaluator {
 public:
  SmoothEval(const SectionProblem& problem, const PredicateSpec& spec, int d, bool taylor)
      : problem_(problem), taylor_(taylor), Y_(spec.Y) {
    const FieldPtr& F = problem.field();
    const int n = problem.n();
    std::vector<ClosedPoint> ypts;
    if (taylor_ && !Y_.is_trivially_empty()) ypts = closed_points_of_finite(Y_);
    if (taylor_) {
      for (const auto& y : ypts) functionals.push_back(evaluation_at(y.rep, d));
      ny_ = ypts.size();
      if (d >= 1)
        for (const auto& y : ypts)
          for (int j = 0; j <= n; ++j) functionals.push_back(partial_at(y.rep, d, j));
      ylin_ = functionals.size();
      for (const auto& t : spec.taylor) {
        if (t.size() != ny_) throw DomainError("Taylor value tuple has the wrong length");
        allowed_.insert(t);
      }
    }
    if (is_ambient(problem.X) && d >= 1) {
      for (const auto& w : low_degree_points(F, n, 3, 4096)) {
        if (std::any_of(ypts.begin(), ypts.end(), [&](const ClosedPoint& y) { return same_point(y, w); })) continue;
        functionals.push_back(evaluation_at(w.rep, d));
        for (int j = 0; j <= n; ++j) functionals.push_back(partial_at(w.rep, d, j));
        ++npoints_;
      }
    }
  }

  Outcome eval(const HomogPoly& f, const std::uint32_t* lin) const override {
    if (f.is_zero()) return verdict_only(Verdict::False);
    if (taylor_ && !allowed_.empty()) {
      std::vector<std::uint32_t> t(lin, lin + ny_);
      if (!allowed_.count(t)) return verdict_only(Verdict::False);
    }
    const std::size_t stride = static_cast<std::size_t>(problem_.n()) + 2;
    const std::uint32_t* sig = lin + ylin_;
    for (std::size_t p = 0; p < npoints_; ++p, sig += stride)
      if (std::all_of(sig, sig + stride, [](std::uint32_t v) { return v == 0; })) return verdict_only(Verdict::False);
    if (taylor_ && singular_on_Y(f, lin)) return verdict_only(is_smooth_away_from(problem_, f, Y_).verdict);
    const auto J = singular_ideal(problem_.n(), problem_.X.gens(), problem_.codim(), {f});
    auto v = is_empty_projective(problem_.field(), problem_.n(), J, {false, 0});
    if (v.empty()) return verdict_only(Verdict::True);
    if (v.nonempty()) return verdict_only(Verdict::False);
    return verdict_only(Verdict::Inconclusive);
  }

 private:
  // Some point of Y may be singular on V(f). Otherwise smoothness off Y is
  // plain smoothness. Only tracked for X = P^n (partials of f alone).
  bool singular_on_Y(const HomogPoly& f, const std::uint32_t* lin) const {
    if (!is_ambient(problem_.X) || f.degree() < 1) return true;
    const std::size_t k = static_cast<std::size_t>(problem_.n()) + 1;
    for (std::size_t y = 0; y < ny_; ++y) {
      if (lin[y] != 0) continue;
      const std::uint32_t* dv = lin + ny_ + y * k;
      if (std::all_of(dv, dv + k, [](std::uint32_t v) { return v == 0; })) return true;
    }
    return false;
  }

  const SectionProblem& problem_;
  bool taylor_;
  SubschemeSpec Y_;
  std::size_t ny_ = 0;
  std::size_t ylin_ = 0;
  std::size_t npoints_ = 0;
  std::set<std::vector<std::uint32_t>> allowed_;
};

class SncEval final : public Evaluator {
 public:
  SncEval(const SectionProblem& problem, const PredicateSpec& spec) : U_(problem.X), E_(spec.E) {}
  Outcome eval(const HomogPoly& f, const std::uint32_t*) const override {
    if (f.is_zero()) return verdict_only(Verdict::False);
    return verdict_only(is_snc_section(U_, E_, f).verdict);
  }

 private:
  SubschemeSpec U_;
  std::vector<SubschemeSpec> E_;
};

class NormalEval final : public Evaluator {
 public:
  Outcome eval(const HomogPoly& f, const std::uint32_t*) const override {
    if (f.is_zero() || f.degree() < 1) return verdict_only(Verdict::False);
    return verdict_only(is_normal_R1_section(f).verdict);
  }
};

// ---------------------------------------------------------------- factor sieve

class Bitmap {
 public:
  explicit Bitmap(std::uint64_t size) : bits_((size + 63) / 64, 0) {}
  void set(std::uint64_t i) { bits_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint64_t i) const { return bits_[i >> 6] >> (i & 63) & 1; }

 private:
  std::vector<std::uint64_t> bits_;
};

std::uint64_t form_index(std::span<const std::uint32_t> c, std::uint64_t q) {
  std::uint64_t idx = 0;
  for (std::size_t m = c.size(); m-- > 0;) idx = idx * q + c[m];
  return idx;
}

// Calls visit(g) for every nonzero form of degree e over K whose first
// nonzero coefficient is 1.
void for_each_normalized(const FieldPtr& K, int n, int e, const std::function<void(const HomogPoly&)>& visit) {
  const std::size_t N = MonomialBasis::get(n, e).size();
  checked_power(K->order(), N);
  const std::uint32_t q = K->order();
  HomogPoly g(K, n, e);
  for (std::size_t lead = 0; lead < N; ++lead) {
    auto& c = g.mutable_coeffs();
    std::fill(c.begin(), c.end(), 0);
    c[lead] = 1;
    while (true) {
      visit(g);
      std::size_t k = N;
      while (k > lead + 1) {
        if (++c[k - 1] < q) break;
        c[k - 1] = 0;
        --k;
      }
      if (k == lead + 1) break;
    }
  }
}

// Marks g*h for every nonzero h of degree d - deg g. The product is linear
// in h, so it is updated one coordinate at a time.
void mark_multiples(const HomogPoly& g, int d, Bitmap& bm) {
  const FieldPtr& F = g.field();
  const Field& K = *F;
  const int n = g.n();
  const int e = d - g.degree();
  const auto& Be = MonomialBasis::get(n, e);
  const std::size_t Nh = Be.size();
  const std::size_t N = MonomialBasis::get(n, d).size();
  checked_power(K.order(), Nh);
  const auto& table = MonomialBasis::product_table(n, g.degree(), e);
  // columns of the multiplication map h -> g*h
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> col(Nh);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.raw(i) == 0) continue;
    for (std::size_t m = 0; m < Nh; ++m) col[m].emplace_back(table[i * Nh + m], g.raw(i));
  }
  const std::uint32_t q = K.order();
  std::vector<std::uint32_t> h(Nh, 0), prod(N, 0);
  while (true) {
    std::size_t i = 0;
    for (; i < Nh; ++i) {
      const std::uint32_t old = h[i];
      const std::uint32_t nw = old + 1 < q ? old + 1 : 0;
      const std::uint32_t delta = K.sub(nw, old);
      h[i] = nw;
      for (auto [t, c] : col[i]) prod[t] = K.add(prod[t], K.mul(delta, c));
      if (nw != 0) break;
    }
    if (i == Nh) break;
    bm.set(form_index(prod, q));
  }
}

class SieveEval final : public Evaluator {
 public:
  SieveEval(const SectionProblem& problem, PredicateKind kind, int d)
      : kind_(kind), q_(problem.field()->order()),
        size_(checked_power(q_, MonomialBasis::get(problem.n(), d).size())),
        reducible_(size_), square_(size_), norm_(size_) {
    const FieldPtr& F = problem.field();
    const int n = problem.n();
    extras = {"irreducible", "geometrically_irreducible", "conjugate_split", "reduced"};
    for (int e = 1; 2 * e <= d; ++e) {
      for_each_normalized(F, n, e, [&](const HomogPoly& g) {
        mark_multiples(g, d, reducible_);
        mark_multiples(g * g, d, square_);
      });
    }
    // A geometric factor with r conjugates forces f = c * N(g), deg g = d / r.
    for (int r = 2; r <= d; ++r) {
      if (d % r) continue;
      FieldPtr E = F->extension(static_cast<std::uint32_t>(r));
      const Embedding& emb = embedding(F, E);
      for_each_normalized(E, n, d / r, [&](const HomogPoly& g) {
        HomogPoly nrm = g, gi = g;
        for (int i = 1; i < r; ++i) {
          gi = gi.frobenius(*F);
          nrm = nrm * gi;
        }
        std::vector<std::uint32_t> c(nrm.size());
        for (std::size_t m = 0; m < c.size(); ++m) {
          auto pre = emb.preimage(nrm.raw(m));
          if (!pre) throw InternalError("norm form is not defined over the base field");
          c[m] = *pre;
        }
        for (std::uint32_t s = 1; s < q_; ++s) {
          std::vector<std::uint32_t> sc(c.size());
          for (std::size_t m = 0; m < c.size(); ++m) sc[m] = F->mul(s, c[m]);
          norm_.set(form_index(sc, q_));
        }
      });
    }
  }

  Outcome eval(const HomogPoly& f, const std::uint32_t*) const override {
    Outcome o;
    if (f.is_zero()) return o;
    const std::uint64_t idx = form_index(f.coeffs(), q_);
    const bool irr = !reducible_.test(idx);
    const bool geo = irr && !norm_.test(idx);
    const bool red = !square_.test(idx);
    o.extra = {irr, geo, irr && !geo, red};
    bool hit = false;
    switch (kind_) {
      case PredicateKind::Reduced: hit = red; break;
      case PredicateKind::Irreducible: hit = irr; break;
      case PredicateKind::GeomIrreducible: hit = geo; break;
      case PredicateKind::Integral: hit = irr && red; break;
      default: throw InternalError("sieve used for a non-factorization predicate");
    }
    o.verdict = hit ? Verdict::True : Verdict::False;
    return o;
  }

 private:
  PredicateKind kind_;
  std::uint64_t q_;
  std::uint64_t size_;
  Bitmap reducible_, square_, norm_;
};

std::unique_ptr<Evaluator> make_evaluator(const SectionProblem& problem, const PredicateSpec& spec, int d) {
  switch (spec.kind) {
    case PredicateKind::True: return std::make_unique<TrueEval>();
    case PredicateKind::Avoid: return std::make_unique<AvoidEval>(spec.W, d);
    case PredicateKind::Contain: return std::make_unique<ContainEval>(spec.W, d);
    case PredicateKind::Smooth: return std::make_unique<SmoothEval>(problem, spec, d, false);
    case PredicateKind::TaylorSmooth: return std::make_unique<SmoothEval>(problem, spec, d, true);
    case PredicateKind::Snc: return std::make_unique<SncEval>(problem, spec);
    case PredicateKind::Normal: return std::make_unique<NormalEval>();
    case PredicateKind::Reduced:
    case PredicateKind::Irreducible:
    case PredicateKind::GeomIrreducible:
    case PredicateKind::Integral: return std::make_unique<SieveEval>(problem, spec.kind, d);
  }
  throw InternalError("unhandled predicate");
}

// ---------------------------------------------------------------- enumeration

struct Counters {
  std::uint64_t evaluated = 0, hits = 0, inconclusive = 0, secondary = 0, both = 0;
  std::array<std::uint64_t, kMaxExtras> extra{};

  Counters& operator+=(const Counters& o) {
    evaluated += o.evaluated;
    hits += o.hits;
    inconclusive += o.inconclusive;
    secondary += o.secondary;
    both += o.both;
    for (std::size_t i = 0; i < kMaxExtras; ++i) extra[i] += o.extra[i];
    return *this;
  }
};

// The census of one degree: basis of I^Z_d, evaluators and the images of
// each basis row under every registered functional.
class DegreeCensus {
 public:
  DegreeCensus(const Experiment& e, int d) : F_(e.problem.field()), n_(e.problem.n()), d_(d) {
    piece_ = vanishing_piece(e.problem.Z, d);
    primary_ = make_evaluator(e.problem, e.predicate, d);
    if (e.secondary) secondary_ = make_evaluator(e.problem, *e.secondary, d);
    needs_form_ = primary_->needs_form || (secondary_ && secondary_->needs_form);
    for (const auto* ev : {primary_.get(), secondary_.get()}) {
      if (!ev) continue;
      offsets_.push_back(funcs_.size());
      for (const auto& L : ev->functionals) funcs_.push_back(&L);
    }
    const std::size_t k = piece_.rank();
    contrib_.assign(k, std::vector<std::uint32_t>(funcs_.size(), 0));
    for (std::size_t j = 0; j < funcs_.size(); ++j) {
      const Functional& L = *funcs_[j];
      const Field& E = *L.E;
      const Embedding& emb = embedding(F_, L.E);
      embeds_.push_back(&emb);
      for (std::size_t i = 0; i < k; ++i) {
        std::uint32_t v = 0;
        for (std::size_t m = 0; m < L.coef.size(); ++m)
          if (piece_.basis[i][m]) v = E.add(v, E.mul(emb(piece_.basis[i][m]), L.coef[m]));
        contrib_[i][j] = v;
      }
    }
    char2_ = F_->characteristic() == 2;
  }

  std::size_t rank() const { return piece_.rank(); }
  const Evaluator& primary() const { return *primary_; }

  // Exhaustive enumeration of the members whose top `top` digits spell `chunk`.
  Counters run_chunk(std::uint64_t chunk, std::size_t top) const {
    const std::size_t k = rank();
    const std::uint32_t q = F_->order();
    std::vector<std::uint32_t> c(k, 0);
    for (std::size_t i = k - top; i < k; ++i) {
      c[i] = static_cast<std::uint32_t>(chunk % q);
      chunk /= q;
    }
    State s = state_of(c);
    Counters out;
    const std::size_t inner = k - top;
    while (true) {
      tally(s, out);
      std::size_t i = 0;
      for (; i < inner; ++i) {
        const std::uint32_t old = c[i];
        const std::uint32_t nw = old + 1 < q ? old + 1 : 0;
        c[i] = nw;
        apply(s, i, F_->sub(nw, old));
        if (nw != 0) break;
      }
      if (i == inner) break;
    }
    return out;
  }

  Counters run_samples(std::uint64_t seed, std::uint64_t chunk, std::uint64_t count) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(d_), static_cast<std::uint32_t>(chunk),
                      static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint32_t q = F_->order();
    Counters out;
    std::vector<std::uint32_t> c(rank());
    for (std::uint64_t s = 0; s < count; ++s) {
      for (auto& x : c) x = static_cast<std::uint32_t>(rng() % q);
      tally(state_of(c), out);
    }
    return out;
  }

 private:
  struct State {
    HomogPoly f;
    std::vector<std::uint32_t> lin;
  };

  State state_of(const std::vector<std::uint32_t>& c) const {
    State s{HomogPoly(F_, n_, d_), std::vector<std::uint32_t>(funcs_.size(), 0)};
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i]) apply(s, i, c[i]);
    return s;
  }

  void apply(State& s, std::size_t i, std::uint32_t delta) const {
    const Field& F = *F_;
    if (needs_form_) {
      auto& fc = s.f.mutable_coeffs();
      const auto& row = piece_.basis[i];
      for (std::size_t m = 0; m < fc.size(); ++m)
        if (row[m]) fc[m] = F.add(fc[m], F.mul(delta, row[m]));
    }
    const auto& ci = contrib_[i];
    if (char2_ && delta == 1) {
      for (std::size_t j = 0; j < ci.size(); ++j) s.lin[j] ^= ci[j];
      return;
    }
    for (std::size_t j = 0; j < ci.size(); ++j) {
      const Field& E = *funcs_[j]->E;
      s.lin[j] = E.add(s.lin[j], E.mul((*embeds_[j])(delta), ci[j]));
    }
  }

  void tally(const State& s, Counters& out) const {
    ++out.evaluated;
    Outcome a = primary_->eval(s.f, s.lin.data());
    if (a.verdict == Verdict::True) ++out.hits;
    else if (a.verdict == Verdict::Inconclusive) ++out.inconclusive;
    for (std::size_t i = 0; i < kMaxExtras; ++i) out.extra[i] += a.extra[i];
    if (secondary_) {
      Outcome b = secondary_->eval(s.f, s.lin.data() + offsets_[1]);
      if (b.verdict == Verdict::True) {
        ++out.secondary;
        if (a.verdict == Verdict::True) ++out.both;
      }
    }
  }

  FieldPtr F_;
  int n_, d_;
  GradedPiece piece_;
  std::unique_ptr<Evaluator> primary_, secondary_;
  bool needs_form_ = true;
  bool char2_ = false;
  std::vector<const Functional*> funcs_;
  std::vector<std::size_t> offsets_;
  std::vector<const Embedding*> embeds_;
  std::vector<std::vector<std::uint32_t>> contrib_;
};

// Runs jobs 0..count-1 on `threads` workers; results are stored by job
// index so the merge order never depends on scheduling.
std::vector<Counters> run_jobs(std::uint64_t count, int threads, const std::function<Counters(std::uint64_t)>& job) {
  std::vector<Counters> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i; (i = next.fetch_add(1)) < count;) {
      try {
        out[i] = job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int w = static_cast<int>(std::min<std::uint64_t>(std::max(1, threads), count));
  std::vector<std::thread> pool;
  for (int t = 1; t < w; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

}  // namespace

void for_each_member(const GradedPiece& piece, const std::function<void(const HomogPoly&)>& visit) {
  const Field& F = *piece.field;
  const std::size_t k = piece.rank();
  checked_power(F.order(), k);
  std::vector<std::uint32_t> c(k, 0);
  while (true) {
    visit(piece.member(c));
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (++c[i] < F.order()) break;
      c[i] = 0;
    }
    if (i == k) break;
  }
}

void Experiment::validate() const {
  problem.validate();
  if (d_lo < 0 || d_hi < d_lo) throw DomainError("degree range must satisfy 0 <= d_lo <= d_hi");
  if (threads < 1) throw DomainError("threads must be >= 1");
  if (subsample && samples == 0) throw DomainError("subsample mode needs a positive sample count");
  if (max_inconclusive < 0 || max_inconclusive > 1) throw DomainError("max_inconclusive must lie in [0, 1]");
  const FieldPtr& F = problem.field();
  for (const auto* spec : {&predicate, secondary ? &*secondary : nullptr}) {
    if (!spec) continue;
    switch (spec->kind) {
      case PredicateKind::Avoid:
      case PredicateKind::Contain:
        if (!spec->W.field() || spec->W.field() != F || spec->W.n() != problem.n())
          throw DomainError(to_string(spec->kind) + " needs W over the problem's field and ambient space");
        break;
      case PredicateKind::TaylorSmooth:
        if (!spec->Y.field() || spec->Y.field() != F || spec->Y.n() != problem.n())
          throw DomainError("taylor_smooth needs Y over the problem's field and ambient space");
        break;
      case PredicateKind::Snc:
        if (spec->E.empty()) throw DomainError("snc needs at least one boundary component");
        break;
      case PredicateKind::Reduced:
      case PredicateKind::Irreducible:
      case PredicateKind::GeomIrreducible:
      case PredicateKind::Integral:
        if (!is_ambient(problem.X)) throw DomainError(to_string(spec->kind) + " is decided for X = P^n only");
        if (d_lo < 1) throw DomainError("factorization predicates need d >= 1");
        break;
      case PredicateKind::Normal:
        if (!is_ambient(problem.X) || problem.n() != 3) throw DomainError("normal is decided for surfaces in P^3");
        if (d_lo < 1) throw DomainError("normal needs d >= 1");
        break;
      default: break;
    }
  }
  if (!problem.Z.is_trivially_empty()) {
    auto c = stabilization_degree(problem.Z, d_hi + 1);
    if (c && d_lo < *c)
      throw DomainError("d_lo = " + std::to_string(d_lo) + " is below the stabilization degree " + std::to_string(*c));
  }
}

std::optional<DensityPrediction> predict_for(const Experiment& e) {
  const auto& p = e.predicate;
  const auto& Z = e.problem.Z;
  const std::uint64_t q = e.problem.field()->order();
  try {
    switch (p.kind) {
      case PredicateKind::True: return predict_one("constant predicate");
      case PredicateKind::Avoid: return predict_avoidance(p.W, Z);
      case PredicateKind::Contain: return predict_containment(p.W, Z);
      case PredicateKind::Smooth:
        return predict_smooth(e.problem, SubschemeSpec::empty(e.problem.field(), e.problem.n()), 1, e.B);
      case PredicateKind::TaylorSmooth: {
        std::uint64_t count = p.taylor.size();
        if (p.taylor.empty()) {
          int deg = 0;
          if (!p.Y.is_trivially_empty())
            for (const auto& y : closed_points_of_finite(p.Y)) deg += y.degree;
          count = checked_power(q, static_cast<std::size_t>(deg));
        }
        return predict_smooth(e.problem, p.Y, count, e.B);
      }
      case PredicateKind::Snc:
        if (!is_ambient(e.problem.X) || !Z.is_trivially_empty()) return std::nullopt;
        return predict_snc(e.problem.field(), e.problem.n(), p.E, e.B);
      case PredicateKind::Reduced:
      case PredicateKind::Irreducible:
      case PredicateKind::GeomIrreducible:
      case PredicateKind::Integral: {
        if (!Z.is_trivially_empty()) {
          auto dim = hilbert_dim(Z.field(), Z.n(), Z.gens());
          if (!dim.decided || dim.dim > e.problem.n() - 2) return std::nullopt;
        }
        return predict_one(to_string(p.kind) + " sections with Z of codimension >= 2");
      }
      case PredicateKind::Normal: return predict_one("normal surface sections");
    }
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const Inconclusive&) {
    return std::nullopt;
  }
  return std::nullopt;
}

DensityReport run_census(const Experiment& e) {
  e.validate();
  DensityReport rep;
  rep.name = e.name;
  rep.predicate = to_string(e.predicate.kind);
  rep.q = e.problem.field()->order();
  rep.n = e.problem.n();
  rep.subsample = e.subsample;
  rep.seed = e.seed;
  rep.prediction = predict_for(e);
  const std::uint64_t q = rep.q;

  for (int d = e.d_lo; d <= e.d_hi; ++d) {
    DegreeCensus census(e, d);
    DegreeRow row;
    row.d = d;
    row.rank = census.rank();
    Counters total;
    if (!e.subsample) {
      row.size = checked_power(q, row.rank);
      std::size_t top = 0;
      std::uint64_t chunks = 1;
      while (top < row.rank && chunks < 256) {
        chunks *= q;
        ++top;
      }
      for (const auto& c : run_jobs(chunks, e.threads, [&](std::uint64_t i) { return census.run_chunk(i, top); }))
        total += c;
      if (total.evaluated != row.size) throw InternalError("census visited the wrong number of members");
    } else {
      unsigned __int128 size = 1;
      for (std::size_t i = 0; i < row.rank && size <= std::numeric_limits<std::uint64_t>::max(); ++i) size *= q;
      row.size = size > std::numeric_limits<std::uint64_t>::max() ? 0 : static_cast<std::uint64_t>(size);
      constexpr std::uint64_t kBatch = 4096;
      const std::uint64_t jobs = (e.samples + kBatch - 1) / kBatch;
      auto parts = run_jobs(jobs, e.threads, [&](std::uint64_t i) {
        return census.run_samples(e.seed, i, std::min(kBatch, e.samples - i * kBatch));
      });
      for (const auto& c : parts) total += c;
    }
    row.evaluated = total.evaluated;
    row.hits = total.hits;
    row.inconclusive = total.inconclusive;
    const auto& names = census.primary().extras;
    for (std::size_t i = 0; i < names.size(); ++i) row.extra[names[i]] = total.extra[i];
    if (e.secondary) {
      row.extra["secondary"] = total.secondary;
      row.extra["both"] = total.both;
    }
    row.empirical = Rational(row.hits) / Rational(row.evaluated);
    if (e.subsample) {
      const double p = to_double(row.empirical);
      row.half_width = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(row.evaluated));
    }
    if (static_cast<double>(row.inconclusive) > e.max_inconclusive * static_cast<double>(row.evaluated))
      throw Inconclusive(to_string(e.predicate.kind) + " was inconclusive on " + std::to_string(row.inconclusive) +
                         " of " + std::to_string(row.evaluated) + " forms at d = " + std::to_string(d));
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------- reports

std::optional<double> DensityReport::predicted() const {
  if (!prediction) return std::nullopt;
  return prediction->exact ? to_double(*prediction->exact) : prediction->value;
}

std::optional<double> DensityReport::abs_dev(const DegreeRow& row) const {
  if (!prediction) return std::nullopt;
  if (prediction->exact) return to_double(abs(row.empirical - *prediction->exact));
  return std::abs(to_double(row.empirical) - prediction->value);
}

nlohmann::json DensityReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["predicate"] = predicate;
  j["q"] = q;
  j["n"] = n;
  j["mode"] = subsample ? "subsample" : "exhaustive";
  if (subsample) j["seed"] = seed;
  j["zero_form"] = "included";
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json x;
    x["d"] = r.d;
    x["rank"] = r.rank;
    x["size"] = r.size;
    x["evaluated"] = r.evaluated;
    x["hits"] = r.hits;
    x["inconclusive"] = r.inconclusive;
    x["empirical"] = to_string(r.empirical);
    x["empirical_value"] = to_double(r.empirical);
    if (subsample) x["half_width"] = r.half_width;
    nlohmann::json extra = nlohmann::json::object();
    for (const auto& [k, v] : r.extra) extra[k] = v;
    x["extra"] = extra;
    auto dev = abs_dev(r);
    x["abs_dev"] = dev ? nlohmann::json(*dev) : nlohmann::json(nullptr);
    rows_j.push_back(std::move(x));
  }
  j["rows"] = rows_j;
  j["prediction"] = prediction ? prediction->to_json() : nlohmann::json(nullptr);
  return j;
}

std::string DensityReport::to_csv() const {
  std::ostringstream os;
  os << "d,size,hits,inconclusive,empirical_num,empirical_den,predicted,abs_dev\n";
  const auto pred = predicted();
  for (const auto& r : rows) {
    os << r.d << ',' << r.evaluated << ',' << r.hits << ',' << r.inconclusive << ',' << numerator(r.empirical) << ','
       << denominator(r.empirical) << ',';
    if (pred) os << fmt(*pred);
    os << ',';
    if (auto dev = abs_dev(r)) os << fmt(*dev);
    os << '\n';
  }
  return os.str();
}

nlohmann::json Comparison::to_json() const {
  nlohmann::json j;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& d : degrees)
    rows.push_back({{"d", d.d},
                    {"abs_dev", d.abs_dev},
                    {"tolerance", d.tolerance ? nlohmann::json(*d.tolerance) : nlohmann::json(nullptr)},
                    {"ok", d.ok}});
  j["degrees"] = rows;
  j["trend_ok"] = trend_ok;
  j["ok"] = ok;
  return j;
}

Comparison compare_report(const DensityReport& report, const DensityPrediction& prediction, const Tolerance& tol) {
  Comparison c;
  for (const auto& r : report.rows) {
    DegreeVerdict v;
    v.d = r.d;
    v.abs_dev = prediction.exact ? to_double(abs(r.empirical - *prediction.exact))
                                 : std::abs(to_double(r.empirical) - prediction.value);
    if (auto it = tol.per_degree.find(r.d); it != tol.per_degree.end()) {
      v.tolerance = it->second;
      v.ok = v.abs_dev <= it->second;
    }
    c.ok = c.ok && v.ok;
    c.degrees.push_back(v);
  }
  if (tol.trend && c.degrees.size() >= 2) c.trend_ok = c.degrees.back().abs_dev <= c.degrees.front().abs_dev;
  c.ok = c.ok && c.trend_ok;
  return c;
}

}  // namespace bertini
