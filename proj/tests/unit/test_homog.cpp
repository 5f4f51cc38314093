#include <gtest/gtest.h>

#include <random>

#include "bertini/errors.hpp"
#include "bertini/homog.hpp"

using namespace bertini;

namespace {
HomogPoly P(const std::string& s, const FieldPtr& F, int n = 2) { return HomogPoly::parse(s, F, n); }

HomogPoly random_form(const FieldPtr& F, int n, int d, std::mt19937_64& rng) {
  HomogPoly f(F, n, d);
  for (std::size_t i = 0; i < f.size(); ++i) f.set(i, static_cast<std::uint32_t>(rng() % F->order()));
  return f;
}
}  // namespace

TEST(Monomial, RanksOfLinearForms) {
  const auto& B = MonomialBasis::get(2, 1);
  EXPECT_EQ(B.rank(std::vector<int>{1, 0, 0}), 0u);
  EXPECT_EQ(B.rank(std::vector<int>{0, 1, 0}), 1u);
  EXPECT_EQ(B.rank(std::vector<int>{0, 0, 1}), 2u);
  EXPECT_EQ(MonomialBasis::get(2, 2).size(), 6u);
  EXPECT_THROW(B.rank(std::vector<int>{1, 1, 0}), DomainError);
}

TEST(Monomial, RoundTrip) {
  for (int d = 0; d <= 6; ++d) {
    const auto& B = MonomialBasis::get(2, d);
    EXPECT_EQ(B.size(), binomial(d + 2, 2));
    for (std::size_t i = 0; i < B.size(); ++i) EXPECT_EQ(B.rank(B.unrank(i)), i);
  }
}

TEST(Homog, EvaluationExamples) {
  auto F2 = make_field(2, 1);
  auto F4 = make_field(2, 2);
  EXPECT_TRUE(P("x0", F2).eval(ProjPoint(F2, {0, 1, 0})).is_zero());
  EXPECT_TRUE(P("x0^2 + x1*x2", F2).eval(ProjPoint(F2, {1, 1, 1})).is_zero());
  ProjPoint pt(F4, {1, F4->generator(), 0});
  EXPECT_TRUE(P("x0^3 + x1^3 + x2^3", F2).eval(pt).is_zero());
  EXPECT_TRUE(P("x0^3 + x1^3 + x2^3", F4).eval(pt).is_zero());
}

TEST(Homog, Derivatives) {
  auto F2 = make_field(2, 1), F3 = make_field(3, 1), F5 = make_field(5, 1);
  EXPECT_TRUE(P("x0^2", F2).diff(0).is_zero());
  EXPECT_EQ(P("x0*x1", F5).diff(0), P("x1", F5));
  EXPECT_TRUE(P("x0^3 + x1^3 + x2^3", F3).diff(0).is_zero());
  EXPECT_EQ(P("x0^2", F2).diff(0).degree(), 1);
  EXPECT_THROW(HomogPoly::constant(F2, 2, 1).diff(0), DomainError);
}

TEST(Homog, EulerRelation) {
  std::mt19937_64 rng(7);
  for (auto F : {make_field(2, 1), make_field(3, 1), make_field(5, 1), make_field(2, 2)}) {
    for (int d = 1; d <= 5; ++d) {
      if (d % F->characteristic() == 0) continue;
      for (int t = 0; t < 5; ++t) {
        auto f = random_form(F, 2, d, rng);
        HomogPoly s(F, 2, d);
        for (int i = 0; i <= 2; ++i) s = s + HomogPoly::variable(F, 2, i) * f.diff(i);
        EXPECT_EQ(s, f.scaled(F->from_int(d)));
      }
    }
  }
}

TEST(Homog, ParsePrintRoundTrip) {
  auto F4 = make_field(2, 2);
  auto f = P("g*x0^2 + x1*x2 + g^2*x2^2", F4);
  EXPECT_EQ(f.to_string(), "g*x0^2 + x1*x2 + g^2*x2^2");
  EXPECT_EQ(HomogPoly::parse(f.to_string(), F4, 2), f);
  auto F3 = make_field(3, 1);
  EXPECT_EQ(P("x0*x3 - x1*x2", F3, 3).to_string(), "x0*x3 + 2*x1*x2");
  EXPECT_THROW(P("x0 + x1^2", F3), DomainError);
  EXPECT_TRUE(HomogPoly::parse("0", F3, 2, 3).is_zero());
}

TEST(Homog, DivisionExamples) {
  auto F2 = make_field(2, 1);
  auto q1 = poly_divides(P("x0", F2), P("x0*x1", F2));
  ASSERT_TRUE(q1);
  EXPECT_EQ(*q1, P("x1", F2));
  auto q2 = poly_divides(P("x0 + x1", F2), P("x0^2 + x1^2", F2));
  ASSERT_TRUE(q2);
  EXPECT_EQ(*q2, P("x0 + x1", F2));
  EXPECT_FALSE(poly_divides(P("x0", F2), P("x1^2", F2)));
  EXPECT_THROW(poly_divides(HomogPoly(F2, 2, 1), P("x1^2", F2)), DomainError);
}

TEST(Homog, DivisionAgreesWithExhaustiveProducts) {
  auto F = make_field(2, 1);
  for (int d = 1; d <= 4; ++d) {
    for (int e = 1; e <= std::min(2, d); ++e) {
      const std::size_t Ne = MonomialBasis::get(2, e).size(), Nh = MonomialBasis::get(2, d - e).size();
      std::set<std::vector<std::uint32_t>> products;
      std::vector<HomogPoly> gs;
      for (std::uint64_t a = 1; a < (1ull << Ne); ++a) {
        HomogPoly g(F, 2, e);
        for (std::size_t i = 0; i < Ne; ++i) g.set(i, (a >> i) & 1);
        gs.push_back(g);
      }
      // sample of f: all products g*h plus a stride through S_d
      std::mt19937_64 rng(d * 10 + e);
      for (int t = 0; t < 40; ++t) {
        const auto& g = gs[rng() % gs.size()];
        HomogPoly f(F, 2, d);
        for (std::size_t i = 0; i < f.size(); ++i) f.set(i, rng() & 1);
        bool brute = false;
        for (std::uint64_t b = 0; b < (1ull << Nh) && !brute; ++b) {
          HomogPoly h(F, 2, d - e);
          for (std::size_t i = 0; i < Nh; ++i) h.set(i, (b >> i) & 1);
          brute = (g * h == f);
        }
        auto q = poly_divides(g, f);
        EXPECT_EQ(q.has_value(), brute);
        if (q) EXPECT_EQ(g * *q, f);
      }
    }
  }
}

TEST(Homog, EvaluationIsMultiplicative) {
  std::mt19937_64 rng(3);
  auto F = make_field(3, 1);
  auto E = F->extension(2);
  for (int t = 0; t < 20; ++t) {
    auto g = random_form(F, 2, 2, rng), h = random_form(F, 2, 3, rng);
    for (const auto& pt : projective_points(E, 2))
      EXPECT_EQ((g * h).eval(pt), g.eval(pt) * h.eval(pt));
  }
}

TEST(Homog, PointCounts) {
  auto F2 = make_field(2, 1);
  EXPECT_EQ(projective_points(F2, 2).size(), 7u);
  EXPECT_EQ(projective_points(F2->extension(2), 2).size(), 21u);
  EXPECT_EQ(projective_point_count(3, 3), 40u);
}

TEST(Homog, PermutationActsOnExponents) {
  auto F = make_field(3, 1);
  auto f = P("x0^2*x1 + 2*x2^3", F);
  std::vector<int> perm{1, 2, 0};
  EXPECT_EQ(f.permuted(perm), P("x1^2*x2 + 2*x0^3", F));
}
