// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "bertini/density.hpp"
#include "bertini/dvr.hpp"
#include "bertini/ideal.hpp"
#include "bertini/linalg.hpp"

using namespace bertini;

namespace {

// log/exp lookups; the 2^16 table no longer fits in L1
void BM_FieldMul(benchmark::State& st) {
  const auto F = make_field(static_cast<std::uint64_t>(st.range(0)), static_cast<std::uint64_t>(st.range(1)));
  const std::uint32_t q = static_cast<std::uint32_t>(F->order());
  std::uint32_t a = 1, b = q - 1;
  for (auto _ : st) {
    a = F->mul(a, b);
    b = b + 1 == q ? 1 : b + 1;
    if (a == 0) a = 1;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_FieldMul)->Args({2, 1})->Args({2, 8})->Args({3, 5})->Args({2, 16});

std::vector<HomogPoly> random_gens(const FieldPtr& F, int n, int k, int d, std::mt19937_64& rng) {
  std::vector<HomogPoly> out;
  for (int i = 0; i < k; ++i) {
    HomogPoly g(F, n, d);
    for (std::size_t j = 0; j < g.coeffs().size(); ++j) g.set(j, static_cast<std::uint32_t>(rng() % F->order()));
    out.push_back(std::move(g));
  }
  return out;
}

// Hilbert function at the Macaulay degree; n+1 generators so the ideal is usually empty
void BM_MacaulayEmptiness(benchmark::State& st) {
  const auto F = make_field(2, 1);
  const int n = static_cast<int>(st.range(0)), d = static_cast<int>(st.range(1));
  std::mt19937_64 rng(5);
  const auto gens = random_gens(F, n, n + 1, d, rng);
  for (auto _ : st) benchmark::DoNotOptimize(is_empty_projective(F, n, gens, {false, 0}).status);
}
BENCHMARK(BM_MacaulayEmptiness)->Args({2, 3})->Args({2, 5})->Args({3, 2})->Args({3, 3})->Unit(benchmark::kMicrosecond);

void BM_SmoothCensus(benchmark::State& st) {
  const auto F = make_field(2, 1);
  Experiment e;
  e.problem = SectionProblem::plane(F, 2);
  e.predicate.kind = PredicateKind::Smooth;
  e.d_lo = e.d_hi = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_census(e).rows[0].hits);
  st.SetItemsProcessed(st.iterations() * (std::int64_t{1} << MonomialBasis::get(2, e.d_lo).size()));
}
BENCHMARK(BM_SmoothCensus)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_IrreducibleSieve(benchmark::State& st) {
  const auto F = make_field(2, 1);
  Experiment e;
  e.problem = SectionProblem::plane(F, 2);
  e.predicate.kind = PredicateKind::Irreducible;
  e.d_lo = e.d_hi = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(run_census(e).rows[0].hits);
}
BENCHMARK(BM_IrreducibleSieve)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

// elimination over F_q(t): coefficient growth dominates
void BM_RatFuncEchelon(benchmark::State& st) {
  const auto F = make_field(2, 1);
  const std::size_t N = static_cast<std::size_t>(st.range(0));
  std::mt19937_64 rng(9);
  std::vector<std::vector<RatFunc>> rows(N, std::vector<RatFunc>(N, RatFunc(F)));
  for (auto& r : rows)
    for (auto& x : r) x = RatFunc(UPoly(F, {static_cast<std::uint32_t>(rng() % 2), static_cast<std::uint32_t>(rng() % 2), 1}));
  for (auto _ : st) {
    Echelon<RatFuncOps> E(RatFuncOps{F}, N);
    for (const auto& r : rows) E.insert(r);
    benchmark::DoNotOptimize(E.rank());
  }
}
BENCHMARK(BM_RatFuncEchelon)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_LiftSearchCubic(benchmark::State& st) {
  const auto F = make_field(2, 1);
  LiftProblem P;
  P.field = F;
  P.n = 2;
  P.m = 2;
  P.d = 3;
  P.predicates = {LiftPredicate::Smooth, LiftPredicate::Flat, LiftPredicate::Irreducible};
  for (auto _ : st) benchmark::DoNotOptimize(lift_search(P).lifts.size());
}
BENCHMARK(BM_LiftSearchCubic)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
