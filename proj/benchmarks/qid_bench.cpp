#include <benchmark/benchmark.h>

#include "qid/charfn.hpp"
#include "qid/constructions.hpp"
#include "qid/lattice.hpp"
#include "qid/verdict.hpp"

namespace {

qid::Distribution index_two_law() { return qid::Distribution::atom_plus(0.0, 0.001, qid::Density(qid::Normal{1.0, 1.0})); }

void BM_CharfnGrid(benchmark::State& state) {
  const auto law = index_two_law();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qid::charfn_eval(law, 64.0, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CharfnGrid)->RangeMultiplier(4)->Range(1 << 12, 1 << 18);

void BM_TabulatedTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> v(n);
  const double dx = 20.0 / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) v[k] = qid::normal_pdf(-10.0 + dx * static_cast<double>(k));
  const qid::Tabulated tab(-10.0, dx, std::move(v));
  for (auto _ : state) benchmark::DoNotOptimize(tab.transform_grid(-64.0, 128.0 / 4095.0, 4096));
}
BENCHMARK(BM_TabulatedTransform)->RangeMultiplier(4)->Range(1 << 12, 1 << 16);

void BM_ZeroScan(benchmark::State& state) {
  const auto law = index_two_law();
  for (auto _ : state) benchmark::DoNotOptimize(qid::find_zeros(law));
}
BENCHMARK(BM_ZeroScan)->Unit(benchmark::kMillisecond);

void BM_KreinExtraction(benchmark::State& state) {
  const auto law = index_two_law();
  qid::AnalysisOptions opt;
  opt.krein.n_points = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qid::qid_verdict(law, opt));
}
BENCHMARK(BM_KreinExtraction)->Arg(1 << 14)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_WienerInvert(benchmark::State& state) {
  qid::LatticeSeries s;
  s.coef = {0.7, 0.3};
  for (auto _ : state) benchmark::DoNotOptimize(qid::wiener_invert(s));
}
BENCHMARK(BM_WienerInvert);

void BM_LevyDistance(benchmark::State& state) {
  const auto a = qid::Distribution::continuous(qid::Density(qid::Normal{0.0, 1.0}));
  const auto b = qid::Distribution::continuous(qid::Density(qid::Normal{0.1, 1.0}));
  for (auto _ : state) benchmark::DoNotOptimize(qid::levy_distance(a, b));
}
BENCHMARK(BM_LevyDistance)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
