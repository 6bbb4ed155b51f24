// Timings of the hot paths: jet products, volume jets, curved images with
// their trace, and the cylinder quantizer matrix.

#include <benchmark/benchmark.h>

#include "wue/cylinder.hpp"
#include "wue/wue_curved.hpp"

using namespace wue;

namespace {

Point pt2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

void BM_JetMultiply(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const JetSpace& sp = JetSpace::get(4, order);
  RJet a = RJet::variable(sp, 0, 0.3) + RJet::variable(sp, 1, 0.1);
  RJet b = sin(RJet::variable(sp, 2, 0.7)) * RJet::variable(sp, 3, 1.2);
  for (auto _ : state) {
    RJet c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_JetMultiply)->Arg(2)->Arg(4)->Arg(8);

void BM_SqrtGJet(benchmark::State& state) {
  const auto s = sphere(1.0);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_g_jet(s, pt2(1.1, 0.3), order));
}
BENCHMARK(BM_SqrtGJet)->Arg(2)->Arg(4);

void BM_KineticImageAndTrace(benchmark::State& state) {
  QuantizationContext ctx;
  const auto s = sphere(1.0);
  const double p[] = {0.4, -1.2};
  const Point q = pt2(1.1, 0.5);
  for (auto _ : state) {
    const auto d = wue_weyl_image({s, kinetic_symbol(s, ctx)}, ctx);
    benchmark::DoNotOptimize(dequantize_curved(s, d, p, q, ctx));
  }
}
BENCHMARK(BM_KineticImageAndTrace)->Unit(benchmark::kMillisecond);

void BM_CylinderQuantizerMatrix(benchmark::State& state) {
  QuantizationContext ctx;
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(quantizer_matrix_cyl(0.7, 0.3, {0.3, 2.7}, k, ctx));
}
BENCHMARK(BM_CylinderQuantizerMatrix)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_CylinderTrace(benchmark::State& state) {
  QuantizationContext ctx;
  for (auto _ : state) benchmark::DoNotOptimize(trace_cyl(0.9, 0.0, {0.3, 2.7}, 1024, ctx));
}
BENCHMARK(BM_CylinderTrace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
