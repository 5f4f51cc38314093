#include <gtest/gtest.h>

#include <set>

#include "bertini/density.hpp"
#include "bertini/errors.hpp"

using namespace bertini;

namespace {
HomogPoly P(const std::string& s, const FieldPtr& F, int n = 2) { return HomogPoly::parse(s, F, n); }
SubschemeSpec ideal(std::initializer_list<const char*> ss, const FieldPtr& F, int n = 2) {
  std::vector<HomogPoly> g;
  for (auto s : ss) g.push_back(P(s, F, n));
  return SubschemeSpec::from_ideal(F, n, g);
}
SubschemeSpec points(const FieldPtr& F, std::vector<std::vector<std::uint32_t>> cs) {
  std::vector<ProjPoint> ps;
  for (auto& c : cs) ps.emplace_back(F, c);
  return SubschemeSpec::from_points(F, 2, ps);
}
Experiment plane_experiment(const FieldPtr& F, PredicateKind kind, int lo, int hi) {
  Experiment e;
  e.name = "t";
  e.problem = SectionProblem::plane(F, 2);
  e.predicate.kind = kind;
  e.d_lo = lo;
  e.d_hi = hi;
  return e;
}
// Oracle count: every member of I^Z_d through a per-form predicate.
template <class Pred>
std::uint64_t oracle(const SubschemeSpec& Z, int d, Pred pred) {
  std::uint64_t hits = 0;
  for_each_member(vanishing_piece(Z, d), [&](const HomogPoly& f) { hits += pred(f); });
  return hits;
}
}  // namespace

TEST(Census, AvoidanceIsExact) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Avoid, 1, 4);
  e.predicate.W = points(F, {{1, 1, 1}});
  auto r = run_census(e);
  for (const auto& row : r.rows) EXPECT_EQ(row.empirical, Rational(1, 2)) << row.d;
  ASSERT_TRUE(r.prediction);
  EXPECT_EQ(*r.prediction->exact, Rational(1, 2));
  EXPECT_EQ(*r.abs_dev(r.rows[0]), 0.0);
}

TEST(Census, AvoidanceWithDegreeTwoPoint) {
  auto F = make_field(2, 1);
  auto F4 = F->extension(2);
  auto e = plane_experiment(F, PredicateKind::Avoid, 2, 4);
  e.predicate.W = SubschemeSpec::from_points(F, 2, {ProjPoint(F, {1, 0, 0}), ProjPoint(F4, {0, 1, F4->primitive()})});
  auto r = run_census(e);
  for (const auto& row : r.rows) EXPECT_EQ(row.empirical, Rational(3, 8)) << row.d;
}

TEST(Census, AvoidanceOverF3) {
  auto F = make_field(3, 1);
  auto e = plane_experiment(F, PredicateKind::Avoid, 1, 3);
  e.predicate.W = points(F, {{1, 2, 1}});
  auto r = run_census(e);
  for (const auto& row : r.rows) EXPECT_EQ(row.empirical, Rational(2, 3));
}

TEST(Census, ContainmentOfLine) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Contain, 1, 4);
  e.predicate.W = ideal({"x0"}, F);
  auto r = run_census(e);
  for (const auto& row : r.rows) EXPECT_EQ(row.empirical, Rational(1, 1 << (row.d + 1)));
  EXPECT_EQ(*r.prediction->exact, Rational(0));
  auto cmp = compare_report(r, *r.prediction, {{}, true});
  for (std::size_t i = 1; i < cmp.degrees.size(); ++i) EXPECT_LT(cmp.degrees[i].abs_dev, cmp.degrees[i - 1].abs_dev);
  EXPECT_TRUE(cmp.trend_ok);
}

TEST(Census, ConstantTrue) {
  auto F = make_field(3, 1);
  auto e = plane_experiment(F, PredicateKind::True, 0, 2);
  auto r = run_census(e);
  for (const auto& row : r.rows) EXPECT_EQ(row.empirical, Rational(1));
  EXPECT_EQ(r.rows[2].size, 729u);
}

TEST(Census, SmoothMatchesPerFormOracle) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Smooth, 1, 3);
  auto r = run_census(e);
  auto prob = SectionProblem::plane(F, 2);
  for (const auto& row : r.rows) {
    auto expect = oracle(prob.Z, row.d, [&](const HomogPoly& f) { return !f.is_zero() && is_smooth_section(prob, f).is_true(); });
    EXPECT_EQ(row.hits, expect) << row.d;
  }
  EXPECT_EQ(r.rows[0].hits, 7u);   // lines
  EXPECT_EQ(r.rows[1].hits, 28u);  // q^5 - q^2 smooth conics
}

TEST(Census, SmoothWithContainedPoint) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Smooth, 2, 3);
  e.problem.Z = points(F, {{1, 0, 0}});
  auto r = run_census(e);
  for (const auto& row : r.rows) {
    auto expect = oracle(e.problem.Z, row.d,
                         [&](const HomogPoly& f) { return !f.is_zero() && is_smooth_section(e.problem, f).is_true(); });
    EXPECT_EQ(row.hits, expect) << row.d;
    EXPECT_EQ(row.size, 1u << (row.d == 2 ? 5 : 9));
  }
}

TEST(Census, TaylorMatchesPerFormOracle) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::TaylorSmooth, 2, 3);
  e.predicate.Y = points(F, {{0, 0, 1}});
  e.predicate.taylor = {{0}};
  auto r = run_census(e);
  auto prob = SectionProblem::plane(F, 2);
  for (const auto& row : r.rows) {
    auto expect = oracle(prob.Z, row.d, [&](const HomogPoly& f) {
      if (f.is_zero() || !f.eval(ProjPoint(F, {0, 0, 1})).is_zero()) return false;
      return is_smooth_away_from(prob, f, e.predicate.Y).is_true();
    });
    EXPECT_EQ(row.hits, expect) << row.d;
  }
  EXPECT_EQ(r.prediction->formula, Formula::TaylorScaled);
  EXPECT_EQ(*r.prediction->exact, Rational(3, 16));
}

TEST(Census, SieveMatchesFactorSearch) {
  for (auto [p, d] : {std::pair{2, 3}, std::pair{2, 2}, std::pair{3, 2}}) {
    auto F = make_field(p, 1);
    auto e = plane_experiment(F, PredicateKind::Irreducible, d, d);
    auto r = run_census(e);
    const auto& row = r.rows[0];
    auto Z = SubschemeSpec::empty(F, 2);
    auto irr = oracle(Z, d, [](const HomogPoly& f) { return !f.is_zero() && is_irreducible_section(f, false).is_true(); });
    auto geo = oracle(Z, d, [](const HomogPoly& f) { return !f.is_zero() && is_irreducible_section(f, true).is_true(); });
    auto red = oracle(Z, d, [](const HomogPoly& f) { return !f.is_zero() && is_reduced_section(f).is_true(); });
    EXPECT_EQ(row.hits, irr) << p << " " << d;
    EXPECT_EQ(row.extra.at("irreducible"), irr);
    EXPECT_EQ(row.extra.at("geometrically_irreducible"), geo);
    EXPECT_EQ(row.extra.at("conjugate_split"), irr - geo);
    EXPECT_EQ(row.extra.at("reduced"), red);
  }
}

TEST(Census, SieveWithContainedPoint) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::GeomIrreducible, 3, 3);
  e.problem.Z = points(F, {{0, 0, 1}});
  auto r = run_census(e);
  auto geo = oracle(e.problem.Z, 3, [](const HomogPoly& f) { return !f.is_zero() && is_irreducible_section(f, true).is_true(); });
  EXPECT_EQ(r.rows[0].hits, geo);
  EXPECT_EQ(r.prediction->formula, Formula::One);
}

TEST(Census, SncMatchesPerFormOracle) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Snc, 1, 2);
  e.predicate.E = {ideal({"x0"}, F), ideal({"x1"}, F)};
  auto r = run_census(e);
  for (const auto& row : r.rows) {
    auto expect = oracle(e.problem.Z, row.d, [&](const HomogPoly& f) {
      return !f.is_zero() && is_snc_section(e.problem.X, e.predicate.E, f).is_true();
    });
    EXPECT_EQ(row.hits, expect);
  }
  EXPECT_EQ(*r.prediction->exact, Rational(1, 12));
}

TEST(Census, NormalSurfacesSmall) {
  auto F = make_field(2, 1);
  Experiment e;
  e.problem = SectionProblem::plane(F, 3);
  e.predicate.kind = PredicateKind::Normal;
  e.d_lo = e.d_hi = 1;
  auto r = run_census(e);
  EXPECT_EQ(r.rows[0].hits, 15u);  // every plane
}

TEST(Census, RestrictionEqualsFiltering) {
  // hits over I^Z_d equal hits over S_d filtered by "vanishes on Z"
  auto F = make_field(2, 1);
  auto Z = points(F, {{1, 1, 0}});
  auto prob = SectionProblem::plane(F, 2);
  prob.Z = Z;
  std::set<std::vector<std::uint32_t>> a, b;
  for_each_member(vanishing_piece(Z, 3), [&](const HomogPoly& f) {
    if (!f.is_zero() && is_smooth_section(prob, f).is_true()) a.insert({f.coeffs().begin(), f.coeffs().end()});
  });
  for_each_member(vanishing_piece(SubschemeSpec::empty(F, 2), 3), [&](const HomogPoly& f) {
    if (!f.eval(ProjPoint(F, {1, 1, 0})).is_zero()) return;
    if (!f.is_zero() && is_smooth_section(prob, f).is_true()) b.insert({f.coeffs().begin(), f.coeffs().end()});
  });
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a.empty());
}

TEST(Census, ParallelWidthsAgree) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Smooth, 3, 3);
  e.secondary = PredicateSpec{PredicateKind::Avoid, points(F, {{1, 1, 1}}), {}, {}, {}};
  std::string first;
  for (int w : {1, 2, 8}) {
    e.threads = w;
    auto r = run_census(e);
    auto s = r.to_json().dump() + r.to_csv();
    if (first.empty()) first = s;
    EXPECT_EQ(s, first) << w;
  }
}

TEST(Census, InclusionExclusionBound) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Smooth, 2, 4);
  e.secondary = PredicateSpec{PredicateKind::Avoid, points(F, {{1, 0, 1}}), {}, {}, {}};
  auto r = run_census(e);
  for (const auto& row : r.rows) {
    const auto both = row.extra.at("both"), sec = row.extra.at("secondary");
    EXPECT_GE(both + row.size, row.hits + sec) << row.d;
    EXPECT_LE(both, std::min(row.hits, sec));
  }
}

TEST(Census, SubsampleIsSeededAndWidthIndependent) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Avoid, 4, 4);
  e.predicate.W = points(F, {{1, 1, 1}});
  e.subsample = true;
  e.samples = 10000;
  e.seed = 42;
  e.threads = 1;
  auto a = run_census(e);
  e.threads = 4;
  auto b = run_census(e);
  EXPECT_EQ(a.to_csv(), b.to_csv());
  EXPECT_EQ(a.rows[0].evaluated, 10000u);
  EXPECT_GT(a.rows[0].half_width, 0.0);
  EXPECT_NEAR(to_double(a.rows[0].empirical), 0.5, 4 * a.rows[0].half_width);
  e.seed = 43;
  EXPECT_NE(run_census(e).rows[0].hits, a.rows[0].hits);
}

TEST(Census, CsvAndJsonShape) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Avoid, 1, 2);
  e.predicate.W = points(F, {{1, 1, 1}});
  auto r = run_census(e);
  EXPECT_EQ(r.to_csv(),
            "d,size,hits,inconclusive,empirical_num,empirical_den,predicted,abs_dev\n"
            "1,8,4,0,1,2,0.500000000000,0.000000000000\n"
            "2,64,32,0,1,2,0.500000000000,0.000000000000\n");
  auto j = r.to_json();
  EXPECT_EQ(j["zero_form"], "included");
  EXPECT_EQ(j["rows"][1]["empirical"], "1/2");
  EXPECT_EQ(j["prediction"]["formula"], "avoidance");
}

TEST(Census, CompareFlagsTolerance) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::Smooth, 1, 3);
  auto r = run_census(e);
  auto cmp = compare_report(r, *r.prediction, {{{1, 0.1}, {3, 0.01}}, false});
  EXPECT_FALSE(cmp.degrees[0].ok);  // lines: 7/8 vs 21/64
  EXPECT_TRUE(cmp.degrees[1].ok);   // unchecked
  EXPECT_TRUE(cmp.degrees[2].ok);
  EXPECT_FALSE(cmp.ok);
}

TEST(Census, ValidationErrors) {
  auto F = make_field(2, 1);
  auto e = plane_experiment(F, PredicateKind::True, 3, 2);
  EXPECT_THROW(run_census(e), DomainError);
  e = plane_experiment(F, PredicateKind::Irreducible, 1, 2);
  e.problem.X = ideal({"x0*x1 + x2^2"}, F);
  e.problem.m = 1;
  EXPECT_THROW(run_census(e), DomainError);
  e = plane_experiment(F, PredicateKind::Avoid, 1, 2);
  EXPECT_THROW(run_census(e), DomainError);  // no W
  e = plane_experiment(F, PredicateKind::True, 1, 2);
  e.subsample = true;
  EXPECT_THROW(run_census(e), DomainError);
}
