#include "reso/equation.hpp"
#include "reso/hopf.hpp"
#include "reso/nls.hpp"
#include "reso/oracle.hpp"
#include "reso/scheme.hpp"

#include <benchmark/benchmark.h>

using namespace reso;

namespace {

const std::vector<SeriesTree>& series3() {
  static const auto ts = generate_trees(EquationSpec::cubic_nls(), 3);
  return ts;
}

Tree largest_core() { return core_of(series3().back().tree); }

}  // namespace

static void BM_Coproduct(benchmark::State& state) {
  Tree t = largest_core();
  for (auto _ : state) benchmark::DoNotOptimize(coproduct_bck(t));
}
BENCHMARK(BM_Coproduct);

static void BM_Arborify(benchmark::State& state) {
  Tree t = largest_core();
  for (auto _ : state) benchmark::DoNotOptimize(arborify(t));
}
BENCHMARK(BM_Arborify);

static void BM_Scheme(benchmark::State& state) {
  auto eq = EquationSpec::cubic_nls();
  const int r = static_cast<int>(state.range(0));
  std::vector<Tree> cores;
  for (auto& s : generate_trees(eq, r))
    if (!s.tree.is_leaf()) cores.push_back(core_of(s.tree));
  for (auto _ : state)
    for (auto& c : cores) benchmark::DoNotOptimize(scheme(c, 2, r, eq));
}
BENCHMARK(BM_Scheme)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_QuadPi(benchmark::State& state) {
  auto eq = EquationSpec::cubic_nls();
  Tree t = core_of(series3()[2].tree);
  FreqAssignment fa{{1, 1}, {2, -2}, {3, 2}, {4, 1}, {5, -1}};
  for (auto _ : state) benchmark::DoNotOptimize(quad_pi(t, fa, 0.1L, eq));
}
BENCHMARK(BM_QuadPi)->Unit(benchmark::kMicrosecond);

static void BM_StepperStep(benchmark::State& state) {
  auto eq = EquationSpec::cubic_nls();
  StepperConfig cfg;
  cfg.r = static_cast<int>(state.range(0));
  cfg.N = 16;
  Stepper stepper(eq, cfg.r, cfg.n, cfg.N);
  GridState u = initial_data(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(u, 1.0L / 64));
}
BENCHMARK(BM_StepperStep)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
