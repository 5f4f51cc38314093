#include <gtest/gtest.h>

#include <random>

#include "bertini/errors.hpp"
#include "bertini/scheme.hpp"

using namespace bertini;

namespace {
HomogPoly P(const std::string& s, const FieldPtr& F, int n = 2) { return HomogPoly::parse(s, F, n); }
SubschemeSpec ideal(std::initializer_list<const char*> ss, const FieldPtr& F, int n = 2) {
  std::vector<HomogPoly> g;
  for (auto s : ss) g.push_back(P(s, F, n));
  return SubschemeSpec::from_ideal(F, n, g);
}
}  // namespace

TEST(Points, RationalPointCounts) {
  auto F = make_field(2, 1);
  EXPECT_EQ(rational_points(SubschemeSpec::ambient(F, 2), 1).size(), 7u);
  EXPECT_EQ(rational_points(SubschemeSpec::ambient(F, 2), 2).size(), 21u);
  EXPECT_EQ(rational_points(ideal({"x0"}, F), 1).size(), 3u);
}

TEST(Points, ClosedPointCounts) {
  auto F = make_field(2, 1);
  auto c1 = closed_point_counts(SubschemeSpec::ambient(F, 1), 2);
  EXPECT_EQ(c1.a, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_EQ(c1.b, (std::vector<std::uint64_t>{3, 1}));
  auto c2 = closed_point_counts(SubschemeSpec::ambient(F, 2), 3);
  EXPECT_EQ(c2.a, (std::vector<std::uint64_t>{7, 21, 73}));
  EXPECT_EQ(c2.b, (std::vector<std::uint64_t>{7, 7, 22}));
  auto c3 = closed_point_counts(SubschemeSpec::empty(F, 2), 3);
  EXPECT_EQ(c3.b, (std::vector<std::uint64_t>{0, 0, 0}));
}

TEST(Points, EnumeratedCensusMatchesClosedForm) {
  auto F = make_field(2, 1);
  auto conic = ideal({"x0^2 + x1*x2"}, F);
  auto c = closed_point_counts(conic, 4);
  auto line = projective_space_census(2, 1, 4);
  EXPECT_EQ(c.a, line.a);
  for (int R = 1; R <= 4; ++R) {
    std::uint64_t s = 0;
    for (int r = 1; r <= R; ++r)
      if (R % r == 0) s += r * c.b[r - 1];
    EXPECT_EQ(s, c.a[R - 1]);
  }
  EXPECT_THROW(census_from_counts(2, 1, {3, 6}), InternalError);
}

TEST(Points, EmbeddingDimension) {
  auto F = make_field(2, 1);
  EXPECT_EQ(edim_at(ideal({"x0*x1"}, F), ProjPoint(F, {0, 0, 1})), 2);
  EXPECT_EQ(edim_at(ideal({"x0"}, F), ProjPoint(F, {0, 1, 0})), 1);
  EXPECT_EQ(edim_at(SubschemeSpec::ambient(F, 2), ProjPoint(F, {1, 1, 0})), 2);
  EXPECT_THROW(edim_at(ideal({"x0"}, F), ProjPoint(F, {1, 1, 0})), DomainError);
}

TEST(Sections, Smoothness) {
  auto F2 = make_field(2, 1), F3 = make_field(3, 1);
  EXPECT_TRUE(is_smooth_section(SectionProblem::plane(F2, 2), P("x0^3 + x1^3 + x2^3", F2)).is_true());
  EXPECT_TRUE(is_smooth_section(SectionProblem::plane(F3, 2), P("x0^3 + x1^3 + x2^3", F3)).is_false());
  auto r = is_smooth_section(SectionProblem::plane(F2, 2), P("x0^2", F2));
  EXPECT_TRUE(r.is_false());
  ASSERT_TRUE(r.witness);
  EXPECT_TRUE(P("x0^2", F2).eval(*r.witness).is_zero());
  auto b = is_smooth_section(SectionProblem::plane(F2, 2), P("x0^3 + x1^3 + x2^3", F2), SmoothMode::Bounded, 2);
  EXPECT_TRUE(b.is_true());
  EXPECT_EQ(b.note, "smooth up to degree 2");
}

TEST(Sections, SmoothOnSmoothQuadricSurface) {
  auto F = make_field(2, 1);
  SectionProblem pr = SectionProblem::plane(F, 3);
  pr.X = ideal({"x0*x3 + x1*x2"}, F, 3);
  pr.m = 2;
  EXPECT_TRUE(is_smooth_section(pr, P("x0 + x3", F, 3)).is_true());
  // tangent plane at [1:0:0:0] cuts two lines through it
  EXPECT_TRUE(is_smooth_section(pr, P("x3", F, 3)).is_false());
}

TEST(Sections, SmoothAwayFromAPoint) {
  auto F = make_field(2, 1);
  auto pr = SectionProblem::plane(F, 2);
  auto Y = SubschemeSpec::from_points(F, 2, {ProjPoint(F, {0, 0, 1})});
  // nodal cubic with its node at [0:0:1]
  EXPECT_TRUE(is_smooth_away_from(pr, P("x0*x1*x2 + x0^3 + x1^3", F), Y).is_true());
  EXPECT_TRUE(is_smooth_section(pr, P("x0*x1*x2 + x0^3 + x1^3", F)).is_false());
  // node at [1:0:0] instead
  EXPECT_TRUE(is_smooth_away_from(pr, P("x1*x2*x0 + x1^3 + x2^3", F), Y).is_false());
  EXPECT_TRUE(is_smooth_away_from(pr, P("x0^3 + x1^3 + x2^3", F), Y).is_true());
  // double line through Y is singular along the whole line
  EXPECT_TRUE(is_smooth_away_from(pr, P("x0^2", F), Y).is_false());
}

TEST(Sections, Reducedness) {
  auto F = make_field(2, 1);
  EXPECT_TRUE(is_reduced_section(P("x0^2*x1", F)).is_false());
  EXPECT_TRUE(is_reduced_section(P("x0*x1*x2", F)).is_true());
  EXPECT_TRUE(is_reduced_section(P("x0^2 + x0*x1 + x1^2", F)).is_true());
}

TEST(Sections, Irreducibility) {
  auto F = make_field(2, 1);
  EXPECT_TRUE(is_irreducible_section(P("x0*x1", F), false).is_false());
  EXPECT_TRUE(is_irreducible_section(P("x0^2 + x1*x2", F), false).is_true());
  EXPECT_TRUE(is_irreducible_section(P("x0^2 + x1*x2", F), true).is_true());
  EXPECT_TRUE(is_irreducible_section(P("x0^2 + x0*x1 + x1^2", F), false).is_true());
  EXPECT_TRUE(is_irreducible_section(P("x0^2 + x0*x1 + x1^2", F), true).is_false());
}

TEST(Sections, GoodSectionFlags) {
  auto F = make_field(2, 1);
  auto pr = SectionProblem::plane(F, 2);
  pr.T = SubschemeSpec::from_points(F, 2, {ProjPoint(F, {0, 0, 1})});
  auto g = is_good_section(pr, P("x0", F));
  EXPECT_TRUE(g.g1.is_false());
  ASSERT_TRUE(g.g1.witness);
  EXPECT_EQ(g.g1.witness->to_string(), "[0:0:1]");
  auto h = is_good_section(pr, P("x2", F));
  EXPECT_TRUE(h.g1.is_true());
  EXPECT_TRUE(h.g2.is_true());
  EXPECT_TRUE(h.g3.is_true());

  SectionProblem planes = SectionProblem::plane(F, 3);
  planes.X = ideal({"x0*x1"}, F, 3);
  planes.m = 2;
  EXPECT_TRUE(is_good_section(planes, P("x0", F, 3)).g2.is_false());
  auto k = is_good_section(planes, P("x2", F, 3));
  EXPECT_TRUE(k.g2.is_true());
  // the singular line x0 = x1 = 0 lies on x0 + x1
  EXPECT_TRUE(is_good_section(planes, P("x0 + x1", F, 3)).g3.is_false());
  EXPECT_TRUE(k.g3.is_true());
  EXPECT_EQ(k.smooth.verdict, Verdict::NotEvaluated);
}

TEST(Sections, Snc) {
  auto F = make_field(2, 1);
  auto U = SubschemeSpec::ambient(F, 2);
  std::vector<SubschemeSpec> E{ideal({"x0"}, F), ideal({"x1"}, F)};
  EXPECT_TRUE(is_snc_section(U, E, P("x0 + x1 + x2", F)).is_true());
  // x2 misses [0:0:1]; x0 + x1 passes through it
  EXPECT_TRUE(is_snc_section(U, E, P("x2", F)).is_true());
  auto r = is_snc_section(U, E, P("x0 + x1", F));
  EXPECT_TRUE(r.is_false());
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->to_string(), "[0:0:1]");
  EXPECT_TRUE(is_snc_section(U, {ideal({"x0"}, F)}, P("x1", F)).is_true());
}

TEST(Sections, NormalSurfaces) {
  auto F = make_field(2, 1);
  EXPECT_TRUE(is_normal_R1_section(P("x0*x3 + x1*x2", F, 3)).is_true());
  EXPECT_TRUE(is_normal_R1_section(P("x0^2", F, 3)).is_false());
  // a cone over a smooth conic has an isolated vertex
  EXPECT_TRUE(is_normal_R1_section(P("x0*x1 + x2^2", F, 3)).is_true());
  // singular along the line x0 = x1 = 0
  EXPECT_TRUE(is_normal_R1_section(P("x0^2*x3 + x1^2*x2", F, 3)).is_false());
}

TEST(Sections, PermutationInvariance) {
  std::mt19937_64 rng(11);
  auto F = make_field(2, 1);
  auto pr = SectionProblem::plane(F, 2);
  pr.T = SubschemeSpec::from_points(F, 2, {ProjPoint(F, {1, 1, 0})});
  const std::vector<int> perm{2, 0, 1};
  auto pp = pr;
  pp.T = pr.T.permuted(perm);
  for (int t = 0; t < 15; ++t) {
    HomogPoly f(F, 2, 3);
    for (std::size_t i = 0; i < f.size(); ++i) f.set(i, rng() & 1);
    if (f.is_zero()) continue;
    auto a = section_report(pr, f).to_json();
    auto b = section_report(pp, f.permuted(perm)).to_json();
    EXPECT_EQ(a["flags"], b["flags"]) << f.to_string();
  }
}

TEST(Sections, ReportJson) {
  auto F = make_field(2, 1);
  auto rep = section_report(SectionProblem::plane(F, 2), P("x0^2*x1", F));
  auto j = rep.to_json();
  EXPECT_EQ(j["f"], "x0^2*x1");
  EXPECT_EQ(j["flags"]["reduced"], "false");
  EXPECT_EQ(j["flags"]["smooth"], "false");
  EXPECT_TRUE(j["witnesses"].contains("smooth"));
}
