#include <benchmark/benchmark.h>

#include "bicons4/biconservative.hpp"
#include "bicons4/catalog.hpp"

using namespace bicons4;

namespace {

ImmersionPatch null_cone() {
  FamilySpec spec{FamilyId::NullCone, MetricSignature::Riemannian, {{"a", 1}, {"c1", -1}}};
  return build_family(spec, profile_closed_form(spec, {0.5, 3}), {0.5, 3});
}

}  // namespace

static void BM_JetProduct(benchmark::State& state) {
  auto j = seed(0.3, 0.7, 1.1);
  Jet3 a = sin(j.s) + j.t * j.u, b = exp(j.u) - j.s;
  for (auto _ : state) {
    Jet3 c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_JetProduct);

static void BM_JetTranscendental(benchmark::State& state) {
  auto j = seed(0.3, 0.7, 1.1);
  for (auto _ : state) {
    Jet3 c = sinh(j.s * j.t) / sqrt(j.u * j.u + 1.0);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_JetTranscendental);

static void BM_AnalyzePoint(benchmark::State& state) {
  ImmersionPatch patch = null_cone();
  ChartPoint p{1.2, 0.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(analyze_point(patch, p));
}
BENCHMARK(BM_AnalyzePoint);

static void BM_PointResidual(benchmark::State& state) {
  ImmersionPatch patch = null_cone();
  ChartPoint p{1.2, 0.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(residual(patch, p));
}
BENCHMARK(BM_PointResidual);

static void BM_GridVerify(benchmark::State& state) {
  ImmersionPatch patch = null_cone();
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_verify(patch, {n, n, n}));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_GridVerify)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ProfileSynthesize(benchmark::State& state) {
  FamilySpec spec{FamilyId::RotCoshSinh, MetricSignature::Riemannian, {}};
  for (auto _ : state) benchmark::DoNotOptimize(profile_synthesize(spec, {1, 1, 2}, {1, 1.1}));
}
BENCHMARK(BM_ProfileSynthesize)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
