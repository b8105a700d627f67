#include <benchmark/benchmark.h>

#include <hitchin/asymptotics.hpp>
#include <hitchin/cross_ratio.hpp>
#include <hitchin/currents.hpp>
#include <hitchin/lengths.hpp>

using namespace hitchin;

static void BM_EnumerateClasses(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_classes(n).size());
}
BENCHMARK(BM_EnumerateClasses)->Arg(5)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_LengthTable(benchmark::State& st) {
  const Representation R = d_fuchsian(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(build_length_table(R, 6).size());
}
BENCHMARK(BM_LengthTable)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_Lengths(benchmark::State& st) {
  const Representation R = random_deformation(d_fuchsian(static_cast<int>(st.range(0))), 1, 0.05);
  const SpectrumEvaluator ev(R);
  const Word w = genus2().parse("a1b1A2b2a2B1A1");
  double out[8];
  for (auto _ : st) {
    ev.log_eigenvalues(w.data(), static_cast<int>(w.size()), out);
    benchmark::DoNotOptimize(out[0]);
  }
}
BENCHMARK(BM_Lengths)->Arg(3)->Arg(4);

static void BM_CrossRatio(benchmark::State& st) {
  const LimitMap L(d_fuchsian(static_cast<int>(st.range(0))));
  const auto g = boundary_grid(32, 5);
  // flags are cached after the first call, this times the pairing itself
  for (auto _ : st) benchmark::DoNotOptimize(L.b(g[0], g[9], g[17], g[25]));
}
BENCHMARK(BM_CrossRatio)->Arg(3)->Arg(4);

static void BM_LiouvilleGrid(benchmark::State& st) {
  const auto mesh = boundary_grid(static_cast<int>(st.range(0)), 6);
  const Representation R = d_fuchsian(3);
  for (auto _ : st) benchmark::DoNotOptimize(liouville_grid(R, mesh).mass.sum());
}
BENCHMARK(BM_LiouvilleGrid)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_LiouvilleVolume(benchmark::State& st) {
  const auto mesh = boundary_grid(static_cast<int>(st.range(0)), 6);
  const DiscreteCurrent om = liouville_grid(d_fuchsian(2), mesh);
  IntersectOptions o;
  o.refine = false;
  for (auto _ : st) benchmark::DoNotOptimize(liouville_volume(om, octagon(), o).value);
}
BENCHMARK(BM_LiouvilleVolume)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RatioLimits(benchmark::State& st) {
  const Representation R = d_fuchsian(3);
  const AxisPair p = unlinked_pairs(1, 3)[0];
  for (auto _ : st) benchmark::DoNotOptimize(ratio_limits(R, p, 20).err_power);
}
BENCHMARK(BM_RatioLimits)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
