#include <benchmark/benchmark.h>

#include "qtqme/fixedpoint.hpp"
#include "qtqme/models.hpp"
#include "qtqme/symbolsolve.hpp"

using namespace qtqme;

namespace {

const QbdModel& case7() {
  static const QbdModel m = jackson(7, false);
  return m;
}

// An F2 iterate of case 7 after a few hundred steps; wide correction and symbol.
const QtMatrix& iterate() {
  static const QtMatrix x = [] {
    FpConfig cfg;
    cfg.variant = Variant::F2;
    cfg.start = Start::ToeplitzStochastic;
    cfg.max_iter = 200;
    return solve(case7(), cfg, compute_symbol(case7(), 1e-14).g_hat).solution;
  }();
  return x;
}

void BM_MulModelIterate(benchmark::State& st) {
  const QtMatrix& x = iterate();
  for (auto _ : st) benchmark::DoNotOptimize(mul(case7().A_1, x));
}
BENCHMARK(BM_MulModelIterate)->Unit(benchmark::kMillisecond);

void BM_MulIterateSquared(benchmark::State& st) {
  const QtMatrix& x = iterate();
  for (auto _ : st) benchmark::DoNotOptimize(mul(x, x));
}
BENCHMARK(BM_MulIterateSquared)->Unit(benchmark::kMillisecond);

void BM_NeumannA0(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(neumann_series(case7().A_0, 1e-16));
}
BENCHMARK(BM_NeumannA0)->Unit(benchmark::kMillisecond);

void BM_NeumannW(benchmark::State& st) {
  const QtMatrix b = add(case7().A_0, mul(case7().A_1, iterate()));
  for (auto _ : st) benchmark::DoNotOptimize(neumann_series(b, 1e-16));
}
BENCHMARK(BM_NeumannW)->Unit(benchmark::kMillisecond);

void BM_Symbol(benchmark::State& st) {
  const QbdModel m = jackson(static_cast<int>(st.range(0)), jackson_case_needs_flip(static_cast<int>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(compute_symbol(m, 1e-14));
}
BENCHMARK(BM_Symbol)->DenseRange(1, 10)->Unit(benchmark::kMillisecond);

void BM_WholeStep(benchmark::State& st) {
  const auto v = static_cast<Variant>(st.range(0));
  WholeStepper stepper(case7(), v, kIterTol);
  const QtMatrix& x = iterate();
  for (auto _ : st) benchmark::DoNotOptimize(stepper.step(x));
  st.SetLabel(to_string(v));
}
BENCHMARK(BM_WholeStep)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
