// SPDX-License-Identifier: Apache-2.0
#include "bertini/ideal.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bertini/errors.hpp"
#include "bertini/linalg.hpp"

namespace bertini {

// ---------------------------------------------------------------- closed points

ClosedPoint closed_point_of(const ProjPoint& p, const FieldPtr& base) {
  const FieldPtr& F = p.field();
  if (F->characteristic() != base->characteristic() || F->degree() % base->degree() != 0)
    throw DomainError("point is not defined over an extension of " + base->name());
  std::vector<ProjPoint> orbit{p};
  for (ProjPoint cur = p.frobenius(*base); !(cur == p); cur = cur.frobenius(*base)) orbit.push_back(cur);
  const int e = static_cast<int>(orbit.size());
  FieldPtr R = base->extension(static_cast<std::uint32_t>(e));
  const auto& emb = embedding(R, F);
  std::optional<ProjPoint> best;
  for (const auto& pt : orbit) {
    std::vector<std::uint32_t> c(pt.coords().size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto pre = emb.preimage(pt[i]);
      if (!pre) throw InternalError("Frobenius orbit left its residue field");
      c[i] = *pre;
    }
    ProjPoint q(R, std::move(c));
    if (!best || q < *best) best = std::move(q);
  }
  return ClosedPoint{*best, e};
}

std::vector<ProjPoint> conjugates(const ClosedPoint& w, const FieldPtr& base) {
  std::vector<ProjPoint> out{w.rep};
  for (ProjPoint cur = w.rep.frobenius(*base); !(cur == w.rep); cur = cur.frobenius(*base)) out.push_back(cur);
  return out;
}

// ---------------------------------------------------------------- pieces

std::size_t GradedPiece::ambient_dim() const { return MonomialBasis::get(n, d).size(); }

bool GradedPiece::contains(const HomogPoly& f) const {
  if (f.degree() != d || f.n() != n) return false;
  std::vector<std::uint32_t> v(f.coeffs().begin(), f.coeffs().end());
  const Field& F = *field;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const std::uint32_t c = v[pivots[i]];
    if (c == 0) continue;
    for (std::size_t j = pivots[i]; j < v.size(); ++j)
      if (basis[i][j]) v[j] = F.sub(v[j], F.mul(c, basis[i][j]));
  }
  return std::all_of(v.begin(), v.end(), [](std::uint32_t x) { return x == 0; });
}

HomogPoly GradedPiece::member(const std::vector<std::uint32_t>& c) const {
  HomogPoly f(field, n, d);
  auto& out = f.mutable_coeffs();
  const Field& F = *field;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (c[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j)
      if (basis[i][j]) out[j] = F.add(out[j], F.mul(c[i], basis[i][j]));
  }
  return f;
}

HomogPoly GradedPiece::basis_poly(std::size_t i) const { return HomogPoly(field, n, d, basis[i]); }

GradedPiece make_piece(const FieldPtr& field, int n, int d, std::vector<std::vector<std::uint32_t>> rows) {
  const std::size_t N = MonomialBasis::get(n, d).size();
  FqEchelon E(*field, N);
  for (const auto& r : rows) {
    if (E.full()) break;
    E.insert(r);
  }
  GradedPiece P{field, n, d, E.rref(), {}};
  for (const auto& r : P.basis) {
    std::size_t lead = 0;
    while (r[lead] == 0) ++lead;
    P.pivots.push_back(lead);
  }
  return P;
}

namespace {

// Rows m*g for g in gens, fed to a callback as sparse (col, val) lists.
template <class Fn>
void for_each_multiple(const Field& F, int n, const std::vector<HomogPoly>& gens, int d, Fn&& fn) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;
  for (const auto& g : gens) {
    if (g.degree() > d || g.is_zero()) continue;
    const int k = d - g.degree();
    const std::size_t M = MonomialBasis::get(n, k).size();
    const auto& table = MonomialBasis::product_table(n, g.degree(), k);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g.raw(i)) support.push_back(i);
    for (std::size_t j = 0; j < M; ++j) {
      entries.clear();
      for (auto i : support) entries.emplace_back(table[i * M + j], g.raw(i));
      if (!fn(entries)) return;
    }
  }
  (void)F;
}

}  // namespace

GradedPiece graded_piece(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int d) {
  const std::size_t N = MonomialBasis::get(n, d).size();
  FqEchelon E(*field, N);
  for_each_multiple(*field, n, gens, d, [&](const auto& entries) {
    E.insert_sparse(entries);
    return !E.full();
  });
  GradedPiece P{field, n, d, E.rref(), {}};
  for (const auto& r : P.basis) {
    std::size_t lead = 0;
    while (r[lead] == 0) ++lead;
    P.pivots.push_back(lead);
  }
  return P;
}

std::size_t graded_rank(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int d) {
  const std::size_t N = MonomialBasis::get(n, d).size();
  FqEchelon E(*field, N);
  for_each_multiple(*field, n, gens, d, [&](const auto& entries) {
    E.insert_sparse(entries);
    return !E.full();
  });
  return E.rank();
}

GradedPiece linear_multiples(const GradedPiece& piece) {
  std::vector<std::vector<std::uint32_t>> rows;
  for (std::size_t i = 0; i < piece.rank(); ++i) {
    HomogPoly b = piece.basis_poly(i);
    for (int v = 0; v <= piece.n; ++v) {
      HomogPoly m = b * HomogPoly::variable(piece.field, piece.n, v);
      rows.emplace_back(m.coeffs().begin(), m.coeffs().end());
    }
  }
  return make_piece(piece.field, piece.n, piece.d + 1, std::move(rows));
}

namespace {

// Linear conditions cutting out the forms of degree d vanishing at w:
// Tr(gamma^j * m(P)) for j < deg w, gamma the primitive element of k(w).
void point_conditions(const Field& base, const ClosedPoint& w, int d, std::vector<std::vector<std::uint32_t>>& out) {
  const Field& R = *w.rep.field();
  const auto& B = MonomialBasis::get(w.rep.n(), d);
  const int n = w.rep.n();
  std::vector<std::uint32_t> values(B.size());
  for (std::size_t m = 0; m < B.size(); ++m) {
    auto e = B.exps(m);
    std::uint32_t v = 1;
    for (int i = 0; i <= n; ++i) v = R.mul(v, R.pow(w.rep[i], e[i]));
    values[m] = v;
  }
  if (w.degree == 1 && &R == &base) {
    out.push_back(std::move(values));
    return;
  }
  const FieldPtr basep = base.self();
  std::uint32_t gj = 1;
  for (int j = 0; j < w.degree; ++j) {
    std::vector<std::uint32_t> row(B.size());
    for (std::size_t m = 0; m < B.size(); ++m) row[m] = trace_to(R, R.mul(gj, values[m]), basep);
    out.push_back(std::move(row));
    gj = R.mul(gj, R.primitive());
  }
}

GradedPiece kernel_piece(const FieldPtr& field, int n, int d, const std::vector<std::vector<std::uint32_t>>& conds) {
  const std::size_t N = MonomialBasis::get(n, d).size();
  Echelon<FqOps> E(FqOps{field.get()}, N);
  for (const auto& r : conds) E.insert(r);
  return make_piece(field, n, d, E.nullspace());
}

GradedPiece saturated_piece(const SubschemeSpec& Z, int d) {
  const FieldPtr& F = Z.field();
  const int n = Z.n();
  const auto& gens = Z.gens();
  const std::size_t N = MonomialBasis::get(n, d).size();
  if (gens.empty()) return make_piece(F, n, d, {});
  int kmax = 2;
  for (const auto& g : gens) kmax += g.degree();
  GradedPiece prev = graded_piece(F, n, gens, d);
  int stable = 0;
  for (int k = 1; k <= kmax && prev.rank() < N; ++k) {
    // kernel of S_d -> (S_{d+k} / I_{d+k})^{n+1}, f -> (x_i^k f)
    GradedPiece big = graded_piece(F, n, gens, d + k);
    Echelon<FqOps> E(FqOps{F.get()}, MonomialBasis::get(n, d + k).size());
    for (auto& r : big.basis) E.insert(r);
    const auto& Bd = MonomialBasis::get(n, d);
    const auto& Bk = MonomialBasis::get(n, d + k);
    std::vector<std::vector<std::uint32_t>> images;  // per (i, monomial)
    std::vector<std::uint8_t> e(n + 1);
    std::vector<std::vector<std::uint32_t>> conds;
    for (int i = 0; i <= n; ++i) {
      std::vector<std::vector<std::uint32_t>> cols(N);
      for (std::size_t m = 0; m < N; ++m) {
        auto em = Bd.exps(m);
        std::copy(em.begin(), em.end(), e.begin());
        e[i] = static_cast<std::uint8_t>(e[i] + k);
        std::vector<std::uint32_t> v(Bk.size(), 0);
        v[Bk.rank_unchecked(e.data())] = 1;
        E.reduce(v);
        cols[m] = std::move(v);
      }
      // transpose: one condition per coordinate of S_{d+k}
      for (std::size_t c = 0; c < Bk.size(); ++c) {
        std::vector<std::uint32_t> row(N);
        bool any = false;
        for (std::size_t m = 0; m < N; ++m) {
          row[m] = cols[m][c];
          any |= row[m] != 0;
        }
        if (any) conds.push_back(std::move(row));
      }
    }
    GradedPiece cur = kernel_piece(F, n, d, conds);
    if (cur.rank() == prev.rank()) {
      if (++stable >= 2) return cur;
    } else {
      stable = 0;
    }
    prev = std::move(cur);
  }
  return prev;
}

}  // namespace

GradedPiece vanishing_piece(const SubschemeSpec& Z, int d) {
  if (!Z.is_point_set()) return saturated_piece(Z, d);
  std::vector<std::vector<std::uint32_t>> conds;
  for (const auto& w : Z.points()) point_conditions(*Z.field(), w, d, conds);
  return kernel_piece(Z.field(), Z.n(), d, conds);
}

std::optional<int> stabilization_degree(const SubschemeSpec& Z, int d_max) {
  if (d_max < 1) throw DomainError("stabilization_degree needs d_max >= 1");
  std::vector<GradedPiece> I;
  for (int d = 0; d <= d_max; ++d) I.push_back(vanishing_piece(Z, d));
  std::optional<int> c;
  for (int d = d_max - 1; d >= 0; --d) {
    if (linear_multiples(I[d]).rank() != I[d + 1].rank()) break;
    c = d;
  }
  return c;
}

// ---------------------------------------------------------------- SubschemeSpec

SubschemeSpec SubschemeSpec::ambient(FieldPtr field, int n) { return from_ideal(std::move(field), n, {}); }

SubschemeSpec SubschemeSpec::empty(FieldPtr field, int n) { return from_points(std::move(field), n, {}); }

SubschemeSpec SubschemeSpec::from_ideal(FieldPtr field, int n, std::vector<HomogPoly> gens) {
  SubschemeSpec s;
  s.field_ = std::move(field);
  s.n_ = n;
  for (const auto& g : gens) {
    if (g.field() != s.field_ || g.n() != n) throw DomainError("generator over the wrong ring");
  }
  std::erase_if(gens, [](const HomogPoly& g) { return g.is_zero(); });
  s.gens_ = std::move(gens);
  return s;
}

SubschemeSpec SubschemeSpec::from_points(FieldPtr field, int n, const std::vector<ProjPoint>& points) {
  SubschemeSpec s;
  s.field_ = std::move(field);
  s.n_ = n;
  std::vector<ClosedPoint> cps;
  for (const auto& p : points) {
    if (p.n() != n) throw DomainError("point in the wrong projective space");
    ClosedPoint w = closed_point_of(p, s.field_);
    bool dup = std::any_of(cps.begin(), cps.end(), [&](const ClosedPoint& o) { return o.rep == w.rep; });
    if (!dup) cps.push_back(std::move(w));
  }
  std::sort(cps.begin(), cps.end(), [](const ClosedPoint& a, const ClosedPoint& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.rep < b.rep;
  });
  s.points_ = std::move(cps);

  // generators: new elements of I_d beyond S_1 I_{d-1}, d <= total degree
  std::vector<HomogPoly> gens;
  const int N = s.total_degree();
  if (N == 0) {
    gens.push_back(HomogPoly::constant(s.field_, n, 1));
  } else {
    GradedPiece prev = make_piece(s.field_, n, 0, {});
    for (int d = 1; d <= N; ++d) {
      GradedPiece cur = vanishing_piece(s, d);
      GradedPiece lower = linear_multiples(prev);
      FqEchelon E(*s.field_, cur.ambient_dim());
      for (const auto& r : lower.basis) E.insert(r);
      for (std::size_t i = 0; i < cur.rank() && E.rank() < cur.rank(); ++i)
        if (E.insert(cur.basis[i])) gens.push_back(cur.basis_poly(i));
      prev = std::move(cur);
    }
  }
  s.gens_ = std::move(gens);
  return s;
}

const std::vector<ClosedPoint>& SubschemeSpec::points() const {
  if (!points_) throw DomainError("subscheme is not given as a point set");
  return *points_;
}

const std::vector<HomogPoly>& SubschemeSpec::gens() const { return *gens_; }

bool SubschemeSpec::is_trivially_empty() const {
  if (points_) return points_->empty();
  return std::any_of(gens_->begin(), gens_->end(), [](const HomogPoly& g) { return g.degree() == 0 && !g.is_zero(); });
}

int SubschemeSpec::total_degree() const {
  int t = 0;
  for (const auto& w : points()) t += w.degree;
  return t;
}

SubschemeSpec SubschemeSpec::intersect(const SubschemeSpec& other) const {
  if (other.field_ != field_ || other.n_ != n_) throw DomainError("intersecting subschemes of different spaces");
  if (points_ && other.points_) {
    std::vector<ProjPoint> common;
    for (const auto& w : *points_)
      for (const auto& v : *other.points_)
        if (w.rep == v.rep) common.push_back(w.rep);
    return from_points(field_, n_, common);
  }
  auto all = gens();
  all.insert(all.end(), other.gens().begin(), other.gens().end());
  return from_ideal(field_, n_, std::move(all));
}

SubschemeSpec SubschemeSpec::with(const HomogPoly& f) const {
  auto g = gens();
  g.push_back(f);
  return from_ideal(field_, n_, std::move(g));
}

SubschemeSpec SubschemeSpec::permuted(const std::vector<int>& perm) const {
  if (points_) {
    std::vector<ProjPoint> pts;
    for (const auto& w : *points_) {
      std::vector<std::uint32_t> c(n_ + 1);
      for (int i = 0; i <= n_; ++i) c[perm[i]] = w.rep[i];
      pts.emplace_back(w.rep.field(), std::move(c));
    }
    return from_points(field_, n_, pts);
  }
  std::vector<HomogPoly> g;
  for (const auto& h : *gens_) g.push_back(h.permuted(perm));
  return from_ideal(field_, n_, std::move(g));
}

std::string SubschemeSpec::to_string() const {
  std::string s;
  if (points_) {
    s = "points: [";
    for (std::size_t i = 0; i < points_->size(); ++i) {
      if (i) s += ", ";
      s += (*points_)[i].rep.to_string();
    }
    return s + "]";
  }
  s = "ideal: [";
  for (std::size_t i = 0; i < gens_->size(); ++i) {
    if (i) s += ", ";
    s += (*gens_)[i].to_string();
  }
  return s + "]";
}

// ---------------------------------------------------------------- emptiness

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::NotEvaluated: return "not-evaluated";
    default: return "inconclusive";
  }
}

int macaulay_degree(int n, const std::vector<HomogPoly>& gens) {
  std::vector<int> degs;
  for (const auto& g : gens)
    if (!g.is_zero()) degs.push_back(g.degree());
  std::sort(degs.rbegin(), degs.rend());
  int D = 1;
  for (std::size_t i = 0; i < degs.size() && i < static_cast<std::size_t>(n + 1); ++i) D += degs[i] - 1;
  return D;
}

std::optional<ProjPoint> find_point(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int r_max) {
  for (int r = 1; r <= r_max; ++r) {
    FieldPtr E = field->extension(static_cast<std::uint32_t>(r));
    std::vector<ProjPoint> pts;
    try {
      pts = projective_points(E, n);
    } catch (const CapExceeded&) {
      return std::nullopt;
    }
    std::vector<HomogPoly> lifted;
    for (const auto& g : gens) lifted.push_back(g.embed(E));
    for (const auto& p : pts) {
      bool zero = true;
      for (const auto& g : lifted) {
        if (g.eval_in(*E, p.coords()) != 0) {
          zero = false;
          break;
        }
      }
      if (zero) return p;
    }
  }
  return std::nullopt;
}

EmptinessVerdict is_empty_projective(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens,
                                     EmptinessOptions opts) {
  EmptinessVerdict v;
  std::vector<HomogPoly> nz;
  int degsum = 0;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    if (g.degree() == 0) {
      v.status = EmptinessVerdict::Status::Empty;
      v.certificate = "unit";
      return v;
    }
    degsum += g.degree();
    nz.push_back(g);
  }
  const int r_cap = opts.r_cap > 0 ? opts.r_cap : std::max(4, degsum);
  v.degree = macaulay_degree(n, nz);
  if (static_cast<int>(nz.size()) < n + 1) {
    // fewer than n+1 equations always have a common zero
    v.status = EmptinessVerdict::Status::Nonempty;
    v.certificate = nz.empty() ? "no_generators" : "dimension";
    v.hilbert = hilbert_function(field, n, nz, v.degree);
  } else {
    v.hilbert = hilbert_function(field, n, nz, v.degree);
    v.certificate = "macaulay";
    v.status = v.hilbert == 0 ? EmptinessVerdict::Status::Empty : EmptinessVerdict::Status::Nonempty;
  }
  if (v.nonempty() && opts.want_witness) v.witness = find_point(field, n, nz, r_cap);
  return v;
}

std::size_t hilbert_function(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int D) {
  return MonomialBasis::get(n, D).size() - graded_rank(field, n, gens, D);
}

DimensionResult hilbert_dim(const FieldPtr& field, int n, const std::vector<HomogPoly>& gens, int width,
                            int max_start) {
  DimensionResult res;
  std::vector<HomogPoly> nz;
  int maxdeg = 0;
  for (const auto& g : gens) {
    if (g.is_zero()) continue;
    if (g.degree() == 0) {
      res.decided = true;
      return res;
    }
    maxdeg = std::max(maxdeg, g.degree());
    nz.push_back(g);
  }
  if (nz.empty()) {
    res.decided = true;
    res.dim = n;
    res.leading_degree = 1;
    return res;
  }
  const int Dstar = macaulay_degree(n, nz);
  if (static_cast<int>(nz.size()) >= n + 1 && hilbert_function(field, n, nz, Dstar) == 0) {
    res.decided = true;
    return res;
  }
  if (width < 3) width = 3;
  int start = std::max(maxdeg + 1, Dstar);
  if (max_start <= 0) max_start = start + 3 * width;
  for (; start <= max_start; start += std::max(1, width / 2)) {
    std::vector<std::int64_t> hf;
    for (int D = start; D < start + width; ++D)
      hf.push_back(static_cast<std::int64_t>(hilbert_function(field, n, nz, D)));
    if (std::all_of(hf.begin(), hf.end(), [](std::int64_t x) { return x == 0; })) {
      res.decided = true;
      res.window_start = start;
      res.poly = hf;
      return res;
    }
    // smallest k whose k-th differences are constant on the window, with at
    // least two vanishing (k+1)-th differences as evidence
    std::vector<std::int64_t> diff = hf;
    for (int k = 0; k + 3 <= width && k <= n; ++k) {
      std::vector<std::int64_t> next;
      for (std::size_t i = 0; i + 1 < diff.size(); ++i) next.push_back(diff[i + 1] - diff[i]);
      if (std::all_of(next.begin(), next.end(), [](std::int64_t x) { return x == 0; })) {
        if (diff[0] <= 0) break;  // negative leading coefficient: not yet polynomial
        res.decided = true;
        res.dim = k;
        res.poly = hf;
        res.window_start = start;
        res.leading_degree = diff[0];
        return res;
      }
      diff = std::move(next);
    }
  }
  return res;
}

// ---------------------------------------------------------------- restriction

std::vector<ClosedPoint> closed_points_of_finite(const SubschemeSpec& Y, int r_max) {
  if (Y.is_point_set()) return Y.points();
  const auto dim = hilbert_dim(Y.field(), Y.n(), Y.gens());
  if (!dim.decided) throw Inconclusive("dimension of " + Y.to_string() + " could not be decided");
  if (dim.dim < 0) return {};
  if (dim.dim > 0) throw DomainError(Y.to_string() + " is not finite");
  const std::int64_t target = dim.leading_degree;
  std::vector<ClosedPoint> found;
  std::int64_t total = 0;
  for (int r = 1; r <= r_max && total < target; ++r) {
    FieldPtr E = Y.field()->extension(static_cast<std::uint32_t>(r));
    std::vector<HomogPoly> lifted;
    for (const auto& g : Y.gens()) lifted.push_back(g.embed(E));
    for (const auto& p : projective_points(E, Y.n())) {
      bool zero = std::all_of(lifted.begin(), lifted.end(), [&](const HomogPoly& g) { return g.eval_in(*E, p.coords()) == 0; });
      if (!zero) continue;
      ClosedPoint w = closed_point_of(p, Y.field());
      if (w.degree != r) continue;  // found at its own degree
      if (std::any_of(found.begin(), found.end(), [&](const ClosedPoint& o) { return o.rep == w.rep; })) continue;
      total += w.degree;
      found.push_back(std::move(w));
    }
  }
  if (total != target)
    throw Inconclusive("closed points of " + Y.to_string() + " account for degree " + std::to_string(total) +
                       " of " + std::to_string(target));
  return found;
}

std::vector<FieldElem> restrict_to_finite(const HomogPoly& f, const SubschemeSpec& Y) {
  std::vector<FieldElem> out;
  for (const auto& w : closed_points_of_finite(Y)) out.push_back(f.eval(w.rep));
  return out;
}

}  // namespace bertini
