// SPDX-License-Identifier: Apache-2.0
#include "bertini/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "bertini/caps.hpp"
#include "bertini/errors.hpp"
#include "bertini/linalg.hpp"

namespace bertini {

// ---------------------------------------------------------------- points

std::vector<ProjPoint> rational_points(const SubschemeSpec& I, int r) {
  if (r < 1) throw DomainError("extension degree must be positive");
  FieldPtr E = I.field()->extension(static_cast<std::uint32_t>(r));
  std::vector<ProjPoint> out;
  if (I.is_point_set()) {
    for (const auto& w : I.points()) {
      if (r % w.degree != 0) continue;
      for (const auto& p : conjugates(w, I.field())) out.push_back(p.embed(E));
    }
  } else {
    std::vector<HomogPoly> lifted;
    for (const auto& g : I.gens()) lifted.push_back(g.embed(E));
    for (auto& p : projective_points(E, I.n())) {
      const bool on = std::all_of(lifted.begin(), lifted.end(),
                                  [&](const HomogPoly& g) { return g.eval_in(*E, p.coords()) == 0; });
      if (on) out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t rational_point_count(const SubschemeSpec& I, int r) {
  if (!I.is_point_set() && I.gens().empty()) return projective_space_census(I.field()->order(), I.n(), r).a.back();
  return rational_points(I, r).size();
}

int moebius(int n) {
  if (n < 1) throw DomainError("moebius needs n >= 1");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

PointCensus census_from_counts(std::uint64_t q, int dim, std::vector<std::uint64_t> a) {
  PointCensus c;
  c.q = q;
  c.dim = dim;
  c.a = std::move(a);
  for (int r = 1; r <= c.depth(); ++r) {
    __int128 acc = 0;
    for (int e = 1; e <= r; ++e)
      if (r % e == 0) acc += static_cast<__int128>(moebius(r / e)) * static_cast<__int128>(c.a[e - 1]);
    if (acc < 0 || acc % r != 0)
      throw InternalError("point counts are not consistent with closed points at degree " + std::to_string(r));
    c.b.push_back(static_cast<std::uint64_t>(acc / r));
  }
  return c;
}

PointCensus projective_space_census(std::uint64_t q, int n, int B) {
  std::vector<std::uint64_t> a;
  for (int r = 1; r <= B; ++r) {
    unsigned __int128 qr = 1;
    for (int i = 0; i < r; ++i) qr *= q;
    unsigned __int128 total = 0, pw = 1;
    for (int i = 0; i <= n; ++i) {
      total += pw;
      pw *= qr;
      if (pw >> 64) {
        if (i < n) throw DomainError("point count of P^" + std::to_string(n) + " over F_{q^" + std::to_string(r) + "} overflows");
      }
    }
    if (total >> 64) throw DomainError("point count overflows");
    a.push_back(static_cast<std::uint64_t>(total));
  }
  return census_from_counts(q, n, std::move(a));
}

PointCensus closed_point_counts(const SubschemeSpec& I, int B) {
  if (B < 1) throw DomainError("closed_point_counts needs B >= 1");
  const std::uint64_t q = I.field()->order();
  if (!I.is_point_set() && I.gens().empty()) return projective_space_census(q, I.n(), B);
  if (I.is_trivially_empty()) {
    PointCensus c{q, -1, std::vector<std::uint64_t>(B, 0), std::vector<std::uint64_t>(B, 0)};
    return c;
  }
  if (I.is_point_set()) {
    std::vector<std::uint64_t> b(B, 0), a(B, 0);
    for (const auto& w : I.points())
      if (w.degree <= B) ++b[w.degree - 1];
    for (int r = 1; r <= B; ++r)
      for (int e = 1; e <= r; ++e)
        if (r % e == 0) a[r - 1] += static_cast<std::uint64_t>(e) * b[e - 1];
    PointCensus c{q, 0, std::move(a), std::move(b)};
    c.degree = static_cast<std::uint64_t>(std::max(1, I.total_degree()));
    return c;
  }
  const auto dim = hilbert_dim(I.field(), I.n(), I.gens());
  std::vector<std::uint64_t> a;
  for (int r = 1; r <= B; ++r) a.push_back(rational_points(I, r).size());
  auto c = census_from_counts(q, dim.decided ? dim.dim : I.n(), std::move(a));
  if (dim.decided && dim.leading_degree > 0) c.degree = static_cast<std::uint64_t>(dim.leading_degree);
  return c;
}

// ---------------------------------------------------------------- Jacobians

std::vector<std::vector<HomogPoly>> jacobian(const std::vector<HomogPoly>& gens) {
  std::vector<std::vector<HomogPoly>> M;
  for (const auto& g : gens) {
    if (g.degree() == 0) throw DomainError("Jacobian of a constant");
    std::vector<HomogPoly> row;
    for (int j = 0; j <= g.n(); ++j) row.push_back(g.diff(j));
    M.push_back(std::move(row));
  }
  return M;
}

namespace {

HomogPoly determinant(const std::vector<std::vector<HomogPoly>>& M, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  const FieldPtr& F = M[rows[0]][0].field();
  const int n = M[rows[0]][0].n();
  int deg = 0;
  for (int r : rows) deg += M[r][0].degree();
  HomogPoly det(F, n, deg);
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) inversions += perm[i] > perm[j];
    HomogPoly term = M[rows[0]][cols[perm[0]]];
    bool zero = term.is_zero();
    for (int i = 1; i < k && !zero; ++i) {
      const auto& e = M[rows[i]][cols[perm[i]]];
      if (e.is_zero()) zero = true;
      else term = term * e;
    }
    if (zero) continue;
    det = (inversions % 2) ? det - term : det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

void subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

std::vector<HomogPoly> minors(const std::vector<std::vector<HomogPoly>>& M, int k) {
  std::vector<HomogPoly> out;
  if (M.empty() || k < 1) return out;
  const int rows = static_cast<int>(M.size());
  const int cols = static_cast<int>(M[0].size());
  if (k > rows || k > cols) return out;
  std::vector<std::vector<int>> rs, cs;
  subsets(rows, k, rs);
  subsets(cols, k, cs);
  for (const auto& r : rs)
    for (const auto& c : cs) {
      HomogPoly d = determinant(M, r, c);
      if (d.is_zero()) continue;
      if (std::find(out.begin(), out.end(), d) == out.end()) out.push_back(std::move(d));
    }
  return out;
}

std::vector<HomogPoly> singular_ideal(int n, const std::vector<HomogPoly>& gens, int codim,
                                      const std::vector<HomogPoly>& extra) {
  std::vector<HomogPoly> all;
  for (const auto& g : gens)
    if (!g.is_zero()) all.push_back(g);
  for (const auto& g : extra) all.push_back(g);
  std::vector<HomogPoly> out = all;
  std::erase_if(out, [](const HomogPoly& g) { return g.is_zero(); });
  const int k = codim + static_cast<int>(extra.size());
  if (k == 0) return {HomogPoly::constant(gens.empty() ? extra.at(0).field() : gens[0].field(), n, 1)};
  std::vector<HomogPoly> nonconst;
  for (const auto& g : all)
    if (g.degree() > 0) nonconst.push_back(g);
  if (k > n + 1 || k > static_cast<int>(nonconst.size())) return out;
  for (auto& m : minors(jacobian(nonconst), k)) out.push_back(std::move(m));
  return out;
}

int edim_at(const SubschemeSpec& X, const ProjPoint& P) {
  const int n = X.n();
  const Field& E = *P.field();
  for (const auto& g : X.gens())
    if (g.eval_in(E, P.coords()) != 0) throw DomainError(P.to_string() + " is not on " + X.to_string());
  Echelon<FqOps> ech(FqOps{&E}, static_cast<std::size_t>(n + 1));
  for (const auto& g : X.gens()) {
    if (g.degree() == 0) continue;
    std::vector<std::uint32_t> row(n + 1);
    for (int j = 0; j <= n; ++j) row[j] = g.diff(j).eval_in(E, P.coords());
    ech.insert(std::move(row));
  }
  return n - static_cast<int>(ech.rank());
}

// ---------------------------------------------------------------- problems

SectionProblem SectionProblem::plane(FieldPtr field, int n) {
  SectionProblem p;
  p.X = SubschemeSpec::ambient(field, n);
  p.Z = SubschemeSpec::empty(field, n);
  p.T = SubschemeSpec::empty(field, n);
  p.m = n;
  return p;
}

void SectionProblem::validate() const {
  if (Z.field() != X.field() || T.field() != X.field()) throw DomainError("problem mixes fields");
  if (Z.n() != X.n() || T.n() != X.n()) throw DomainError("problem mixes ambient spaces");
  if (Z.is_trivially_empty() || T.is_trivially_empty()) return;
  std::vector<HomogPoly> g = X.gens();
  g.insert(g.end(), Z.gens().begin(), Z.gens().end());
  g.insert(g.end(), T.gens().begin(), T.gens().end());
  auto v = is_empty_projective(X.field(), X.n(), g, {true, 2});
  if (!v.empty())
    throw DomainError("X, Z and T have a common point" + (v.witness ? " " + v.witness->to_string() : std::string()));
}

namespace {

PredicateResult make(Verdict v, std::optional<ProjPoint> w = std::nullopt, std::string note = {}) {
  return PredicateResult{v, std::move(w), std::move(note)};
}

constexpr EmptinessOptions kPredicateSearch{true, 2};

bool on_all(const std::vector<HomogPoly>& gens, const ProjPoint& p) {
  return std::all_of(gens.begin(), gens.end(), [&](const HomogPoly& g) { return g.eval_in(*p.field(), p.coords()) == 0; });
}

}  // namespace

PredicateResult is_smooth_section(const SectionProblem& problem, const HomogPoly& f, SmoothMode mode, int bound) {
  const auto J = singular_ideal(problem.n(), problem.X.gens(), problem.codim(), {f});
  if (mode == SmoothMode::Bounded) {
    auto w = find_point(problem.field(), problem.n(), J, bound);
    if (w) return make(Verdict::False, w);
    return make(Verdict::True, std::nullopt, "smooth up to degree " + std::to_string(bound));
  }
  auto v = is_empty_projective(problem.field(), problem.n(), J, kPredicateSearch);
  if (v.empty()) return make(Verdict::True, std::nullopt, v.certificate);
  if (v.nonempty()) return make(Verdict::False, v.witness, v.certificate);
  return make(Verdict::Inconclusive);
}

PredicateResult is_smooth_away_from(const SectionProblem& problem, const HomogPoly& f, const SubschemeSpec& Y) {
  const FieldPtr& F = problem.field();
  const int n = problem.n();
  const auto J = singular_ideal(n, problem.X.gens(), problem.codim(), {f});
  const auto& Ygens = Y.gens();
  // quick search for a singular point off Y
  for (int r = 1; r <= 2; ++r) {
    FieldPtr E = F->extension(static_cast<std::uint32_t>(r));
    if (projective_point_count(E->order(), n) > 1u << 16) break;
    std::vector<HomogPoly> Jl, Yl;
    for (const auto& g : J) Jl.push_back(g.embed(E));
    for (const auto& g : Ygens) Yl.push_back(g.embed(E));
    for (const auto& p : projective_points(E, n))
      if (on_all(Jl, p) && !on_all(Yl, p)) return make(Verdict::False, p, "singular point off Y");
  }
  auto ev = is_empty_projective(F, n, J, {false, 0});
  if (ev.empty()) return make(Verdict::True, std::nullopt, "smooth");

  // Find D with HF(D) = HF(D+1) = c <= D past the generator degrees. Then HF
  // is constant from D on (persistence), V(J) is finite of length c, and J
  // agrees with its saturation in degrees >= D.
  int maxdeg = 0;
  for (const auto& g : J) maxdeg = std::max(maxdeg, g.degree());
  const int Dmax = 2 * ev.degree + 6;
  std::size_t hf = hilbert_function(F, n, J, maxdeg);
  int D = -1;
  std::size_t c = 0;
  for (int t = maxdeg; t < Dmax; ++t) {
    const std::size_t next = hilbert_function(F, n, J, t + 1);
    if (next == hf && hf <= static_cast<std::size_t>(t)) {
      D = t;
      c = hf;
      break;
    }
    hf = next;
  }
  if (D < 0) {
    auto dim = hilbert_dim(F, n, J);
    if (dim.decided && dim.dim >= 1) return make(Verdict::False, find_point(F, n, J, 2), "singular locus has positive dimension");
    return make(Verdict::Inconclusive, std::nullopt, "Hilbert function did not settle");
  }
  if (c == 0) return make(Verdict::True, std::nullopt, "smooth");
  // A saturated ideal of constant Hilbert polynomial c is c-regular, so with
  // c <= D the pieces of J and J^sat agree from D on. h vanishes on V(J) iff
  // h^c lies in J^sat, so one membership h^K in J_{K deg h} decides it.
  for (const auto& h : Ygens) {
    if (h.degree() == 0) return make(Verdict::False, std::nullopt, "singular point off Y");
    const int K = std::max(static_cast<int>(c), (D + h.degree() - 1) / h.degree());
    if (!graded_piece(F, n, J, K * h.degree()).contains(h.pow(K)))
      return make(Verdict::False, std::nullopt, "singular point off Y");
  }
  return make(Verdict::True, std::nullopt, "singular locus inside Y");
}

std::vector<HomogPoly> find_factors(const HomogPoly& f, const FieldPtr& over, int e, std::size_t limit) {
  std::vector<HomogPoly> out;
  if (e < 1 || e > f.degree()) return out;
  const HomogPoly fe = f.embed(over);
  const int n = f.n();
  const std::size_t N = MonomialBasis::get(n, e).size();
  const std::uint64_t q = over->order();
  // candidates: first nonzero coefficient 1
  long double count = 0;
  for (std::size_t lp = 0; lp < N; ++lp) count += std::pow(static_cast<long double>(q), static_cast<long double>(N - 1 - lp));
  if (count > static_cast<long double>(Caps::current().census))
    throw CapExceeded("factor search over " + over->name() + " in degree " + std::to_string(e) + " exceeds the census cap");
  HomogPoly g(over, n, e);
  for (std::size_t lp = 0; lp < N; ++lp) {
    auto& c = g.mutable_coeffs();
    std::fill(c.begin(), c.end(), 0);
    c[lp] = 1;
    while (true) {
      if (auto quo = poly_divides(g, fe)) {
        out.push_back(g);
        if (out.size() >= limit) return out;
      }
      std::size_t k = N;
      while (k > lp + 1) {
        if (++c[k - 1] < q) break;
        c[k - 1] = 0;
        --k;
      }
      if (k == lp + 1) break;
    }
  }
  return out;
}

PredicateResult is_reduced_section(const HomogPoly& f) {
  if (f.is_zero()) throw DomainError("the zero form defines no hypersurface");
  const int d = f.degree();
  const int n = f.n();
  const FieldPtr& F = f.field();
  const std::size_t q = F->order();
  for (int e = 1; 2 * e <= d; ++e) {
    const std::size_t N = MonomialBasis::get(n, e).size();
    HomogPoly g(F, n, e);
    for (std::size_t lp = 0; lp < N; ++lp) {
      auto& c = g.mutable_coeffs();
      std::fill(c.begin(), c.end(), 0);
      c[lp] = 1;
      while (true) {
        if (poly_divides(g * g, f)) return make(Verdict::False, std::nullopt, "square factor " + g.to_string());
        std::size_t k = N;
        while (k > lp + 1) {
          if (++c[k - 1] < q) break;
          c[k - 1] = 0;
          --k;
        }
        if (k == lp + 1) break;
      }
    }
  }
  return make(Verdict::True);
}

PredicateResult is_irreducible_section(const HomogPoly& f, bool geometric) {
  if (f.is_zero()) throw DomainError("the zero form defines no hypersurface");
  const int d = f.degree();
  if (d < 1) throw DomainError("irreducibility needs degree >= 1");
  const FieldPtr& F = f.field();
  for (int e = 1; 2 * e <= d; ++e) {
    auto fs = find_factors(f, F, e, 1);
    if (!fs.empty()) return make(Verdict::False, std::nullopt, "factor " + fs[0].to_string());
  }
  if (!geometric) return make(Verdict::True);
  for (int r = 2; r <= d; ++r) {
    if (d % r != 0) continue;
    FieldPtr E = F->extension(static_cast<std::uint32_t>(r));
    auto fs = find_factors(f, E, d / r, 1);
    if (!fs.empty()) return make(Verdict::False, std::nullopt, "factor " + fs[0].to_string() + " over " + E->name());
  }
  return make(Verdict::True);
}

GoodFlags is_good_section(const SectionProblem& problem, const HomogPoly& f) {
  GoodFlags out;
  const FieldPtr& F = problem.field();
  const int n = problem.n();
  // G1
  if (problem.T.is_trivially_empty()) {
    out.g1 = make(Verdict::True, std::nullopt, "T empty");
  } else {
    auto g = problem.X.gens();
    g.insert(g.end(), problem.T.gens().begin(), problem.T.gens().end());
    g.push_back(f);
    auto v = is_empty_projective(F, n, g, kPredicateSearch);
    out.g1 = v.empty() ? make(Verdict::True) : make(Verdict::False, v.witness);
  }
  // G2
  {
    std::vector<SubschemeSpec> comps = problem.components;
    if (comps.empty()) comps.push_back(problem.X);
    out.g2 = make(Verdict::True);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& C = comps[i];
      auto dc = hilbert_dim(F, n, C.gens());
      auto cf = C.gens();
      cf.push_back(f);
      auto dcf = hilbert_dim(F, n, cf);
      if (!dc.decided || !dcf.decided) {
        out.g2 = make(Verdict::Inconclusive);
        break;
      }
      if (dc.dim >= 0 && dcf.dim == dc.dim) {
        out.g2 = make(Verdict::False, find_point(F, n, C.gens(), 1), "contains component " + std::to_string(i));
        break;
      }
    }
  }
  // G3 and the smoothness flag
  std::vector<HomogPoly> sing;
  if (!problem.X.gens().empty()) sing = singular_ideal(n, problem.X.gens(), problem.codim());
  const bool X_smooth = sing.empty() || is_empty_projective(F, n, sing, {false, 0}).empty();
  if (X_smooth) {
    out.g3 = make(Verdict::True, std::nullopt, "X smooth");
    out.smooth = is_smooth_section(problem, f);
  } else {
    auto ds = hilbert_dim(F, n, sing);
    auto sf = sing;
    sf.push_back(f);
    auto dsf = hilbert_dim(F, n, sf);
    if (!ds.decided || !dsf.decided) out.g3 = make(Verdict::Inconclusive);
    else if (dsf.dim < ds.dim) out.g3 = make(Verdict::True);
    else out.g3 = make(Verdict::False, find_point(F, n, sf, 2));
    out.smooth = make(Verdict::NotEvaluated, std::nullopt, "X singular");
  }
  return out;
}

PredicateResult is_snc_section(const SubschemeSpec& U, const std::vector<SubschemeSpec>& E, const HomogPoly& f) {
  const FieldPtr& F = U.field();
  const int n = U.n();
  const int r = static_cast<int>(E.size());
  if (r > 16) throw DomainError("too many boundary components");
  // deepest strata first, so the witness names the most specific failure
  std::vector<unsigned> order(1u << r);
  for (unsigned J = 0; J < order.size(); ++J) order[J] = J;
  std::stable_sort(order.begin(), order.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) > std::popcount(b); });
  for (unsigned J : order) {
    std::vector<HomogPoly> g = U.gens();
    for (int i = 0; i < r; ++i)
      if (J >> i & 1) g.insert(g.end(), E[i].gens().begin(), E[i].gens().end());
    auto dim = hilbert_dim(F, n, g);
    if (!dim.decided) return make(Verdict::Inconclusive, std::nullopt, "stratum dimension undecided");
    if (dim.dim < 0) continue;
    std::vector<HomogPoly> test;
    if (dim.dim == 0) {
      test = g;
      test.push_back(f);
    } else {
      test = singular_ideal(n, g, n - dim.dim, {f});
    }
    auto v = is_empty_projective(F, n, test, kPredicateSearch);
    if (!v.empty()) {
      std::string which = "stratum {";
      for (int i = 0; i < r; ++i)
        if (J >> i & 1) which += (which.back() == '{' ? "" : ",") + std::to_string(i + 1);
      return make(Verdict::False, v.witness, which + "}");
    }
  }
  return make(Verdict::True);
}

PredicateResult is_normal_R1_section(const HomogPoly& f) {
  if (f.n() != 3) throw DomainError("normality is decided for surfaces in P^3");
  if (f.is_zero() || f.degree() < 1) throw DomainError("normality needs a nonzero form of positive degree");
  std::vector<HomogPoly> J{f};
  for (int i = 0; i <= 3; ++i) J.push_back(f.diff(i));
  auto dim = hilbert_dim(f.field(), 3, J);
  if (!dim.decided) return make(Verdict::Inconclusive);
  if (dim.dim <= 0) return make(Verdict::True, std::nullopt, "singular locus of dimension " + std::to_string(dim.dim));
  return make(Verdict::False, find_point(f.field(), 3, J, 1),
              "singular locus of dimension " + std::to_string(dim.dim));
}

nlohmann::json SectionReport::to_json() const {
  nlohmann::json j;
  j["f"] = f.to_string();
  nlohmann::json flags_j = nlohmann::json::object(), wit = nlohmann::json::object();
  for (const auto& [name, r] : flags) {
    flags_j[name] = to_string(r.verdict);
    if (r.witness) wit[name] = r.witness->to_string();
    else if (!r.note.empty() && r.verdict == Verdict::False) wit[name] = r.note;
  }
  j["flags"] = flags_j;
  j["witnesses"] = wit;
  return j;
}

SectionReport section_report(const SectionProblem& problem, const HomogPoly& f) {
  SectionReport rep{f, {}};
  auto good = is_good_section(problem, f);
  rep.set("G1", good.g1);
  rep.set("G2", good.g2);
  rep.set("G3", good.g3);
  rep.set("smooth", good.smooth);
  const bool ambient = problem.X.gens().empty() && !f.is_zero() && f.degree() >= 1;
  const auto skip = make(Verdict::NotEvaluated);
  rep.set("reduced", ambient ? is_reduced_section(f) : skip);
  rep.set("irreducible", ambient ? is_irreducible_section(f, false) : skip);
  rep.set("geom_irreducible", ambient ? is_irreducible_section(f, true) : skip);
  rep.set("normal_R1", ambient && problem.n() == 3 ? is_normal_R1_section(f) : skip);
  return rep;
}

}  // namespace bertini
