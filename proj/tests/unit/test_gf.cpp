#include <gtest/gtest.h>

#include <set>

#include "bertini/errors.hpp"
#include "bertini/field.hpp"

using namespace bertini;

TEST(Field, PrimeFieldF2) {
  auto F = make_field(2, 1);
  EXPECT_EQ(F->order(), 2u);
  EXPECT_EQ(F->modulus().size(), 2u);
  EXPECT_EQ(F->elements().size(), 2u);
  EXPECT_EQ(F->elements()[0].value, 0u);
  EXPECT_EQ(F->elements()[1].value, 1u);
}

TEST(Field, F4ModulusIsTheUniqueIrreducibleQuadratic) {
  auto F = make_field(2, 2);
  EXPECT_EQ(F->modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
}

TEST(Field, CompositeCharacteristicRejected) {
  EXPECT_THROW(make_field(4, 1), DomainError);
  EXPECT_THROW(make_field(2, 0), DomainError);
}

TEST(Field, CapIsEnforced) { EXPECT_THROW(make_field(2, 21), CapExceeded); }

TEST(Field, AlphaSquaredInF4) {
  auto F = make_field(2, 2);
  const auto a = F->elem(F->generator());
  EXPECT_EQ(a * a, a + F->one());
}

TEST(Field, InverseOfTwoInF3) {
  auto F = make_field(3, 1);
  EXPECT_EQ(F->elem(2).inv(), F->elem(2));
  EXPECT_THROW(F->zero().inv(), DivisionByZero);
}

TEST(Field, AdditiveIdentityAndOwnerMismatch) {
  auto F = make_field(3, 2);
  auto G = make_field(5, 1);
  for (auto a : F->elements()) EXPECT_EQ(a + F->zero(), a);
  EXPECT_THROW(F->one() + G->one(), DomainError);
}

TEST(Field, AxiomsExhaustiveSmallFields) {
  for (auto [p, s] : std::vector<std::pair<int, int>>{{2, 1}, {2, 3}, {3, 2}, {5, 1}, {7, 1}, {2, 4}, {3, 4}}) {
    auto F = make_field(p, s);
    const auto els = F->elements();
    for (auto a : els) {
      if (!a.is_zero()) EXPECT_EQ(a * a.inv(), F->one());
      EXPECT_EQ(a.pow(F->order()), a);
      for (auto b : els) {
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        // Frobenius is additive
        EXPECT_EQ((a + b).pow(p), a.pow(p) + b.pow(p));
      }
    }
  }
}

TEST(Field, AssociativityOnSampledTriples) {
  auto F = make_field(3, 3);
  const auto els = F->elements();
  for (std::size_t i = 0; i < els.size(); i += 3)
    for (std::size_t j = 1; j < els.size(); j += 5)
      for (std::size_t k = 2; k < els.size(); k += 7) {
        EXPECT_EQ((els[i] + els[j]) + els[k], els[i] + (els[j] + els[k]));
        EXPECT_EQ((els[i] * els[j]) * els[k], els[i] * (els[j] * els[k]));
        EXPECT_EQ(els[i] * (els[j] + els[k]), els[i] * els[j] + els[i] * els[k]);
      }
}

TEST(Field, EnumerationHasNoDuplicates) {
  auto F = make_field(3, 2);
  std::set<std::uint32_t> seen;
  for (auto a : F->elements()) seen.insert(a.value);
  EXPECT_EQ(seen.size(), 9u);
}

TEST(Embedding, IdentityAndOne) {
  auto F2 = make_field(2, 1);
  auto one = embed(F2->one(), 2);
  EXPECT_EQ(one.owner->order(), 4u);
  EXPECT_EQ(one.value, 1u);
  auto F9 = make_field(3, 2);
  for (auto a : F9->elements()) EXPECT_EQ(embed(a, 1), a);
}

TEST(Embedding, ImageOfF2InF4) {
  auto F4 = make_field(2, 2);
  int fixed = 0;
  for (auto x : F4->elements()) fixed += (x * x == x);
  EXPECT_EQ(fixed, 2);
}

TEST(Embedding, RingHomomorphismAndTransitivity) {
  for (auto [p, a, b, c] : std::vector<std::array<int, 4>>{{2, 1, 2, 4}, {2, 2, 4, 8}, {3, 1, 2, 4}, {2, 1, 3, 6}, {2, 2, 2, 6}}) {
    auto A = make_field(p, a), B = make_field(p, b), C = make_field(p, c);
    const auto& ab = embedding(A, B);
    const auto& bc = embedding(B, C);
    const auto& ac = embedding(A, C);
    for (auto x : A->elements()) {
      EXPECT_EQ(bc(ab(x.value)), ac(x.value));
      for (auto y : A->elements()) {
        EXPECT_EQ(ab(A->mul(x.value, y.value)), B->mul(ab(x.value), ab(y.value)));
        EXPECT_EQ(ab(A->add(x.value, y.value)), B->add(ab(x.value), ab(y.value)));
      }
    }
  }
}

TEST(Embedding, FrobeniusFixesExactlyTheBase) {
  for (auto [p, s, r] : std::vector<std::array<int, 3>>{{2, 1, 8}, {2, 2, 4}, {2, 4, 2}, {3, 1, 5}, {3, 2, 2}, {5, 1, 3}}) {
    auto base = make_field(p, s);
    auto big = base->extension(r);
    ASSERT_LE(big->order(), 256u);
    const auto& emb = embedding(base, big);
    std::set<std::uint32_t> image;
    for (auto x : base->elements()) image.insert(emb(x.value));
    std::size_t fixed = 0;
    for (auto x : big->elements()) {
      const bool f = big->pow(x.value, base->order()) == x.value;
      fixed += f;
      EXPECT_EQ(f, image.count(x.value) == 1);
    }
    EXPECT_EQ(fixed, base->order());
  }
}

TEST(Embedding, IncompatibleTowerRejected) {
  EXPECT_THROW(embedding(make_field(2, 2), make_field(2, 3)), DomainError);
  EXPECT_THROW(embedding(make_field(2, 1), make_field(3, 1)), DomainError);
}

TEST(Trace, LandsInBaseAndIsLinear) {
  auto base = make_field(2, 1);
  auto big = make_field(2, 3);
  for (auto x : big->elements())
    for (auto y : big->elements())
      EXPECT_EQ(trace_to(*big, big->add(x.value, y.value), base),
                base->add(trace_to(*big, x.value, base), trace_to(*big, y.value, base)));
}
