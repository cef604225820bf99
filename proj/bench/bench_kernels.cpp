#include <random>

#include <benchmark/benchmark.h>

#include "sweetspot/evaluation.hpp"
#include "sweetspot/geostat.hpp"
#include "sweetspot/models.hpp"

using namespace sweetspot;

namespace {

SpatialSamples field(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 10000.0);
  std::normal_distribution<double> g(0.0, 1.0);
  SpatialSamples s;
  for (std::size_t i = 0; i < n; ++i) s.add(std::to_string(i), {u(rng), u(rng)}, g(rng));
  return s;
}

Dataset dataset(Eigen::Index n, Eigen::Index p) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  Dataset ds;
  ds.X.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) ds.X(i, j) = g(rng);
  ds.y = ds.X.col(0) - 0.5 * ds.X.col(1) + 0.7 * Eigen::VectorXd::NullaryExpr(n, [&] { return g(rng); });
  ds.y_raw = ds.y;
  for (Eigen::Index j = 0; j < p; ++j) ds.feature_names.push_back("f" + std::to_string(j));
  for (Eigen::Index i = 0; i < n; ++i) ds.well_ids.push_back("W" + std::to_string(i));
  return ds;
}

void BM_VariogramReference(benchmark::State& st) {
  const auto s = field(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::empirical_variogram(s, 12, 0.0));
}

void BM_VariogramParallel(benchmark::State& st) {
  const auto s = field(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(empirical_variogram(s, 12, 0.0, Exec::Parallel));
}

void krige_bench(benchmark::State& st, Exec exec) {
  const auto s = field(200);
  const auto targets = field(static_cast<std::size_t>(st.range(0))).points();
  const VariogramModel vm{VariogramFamily::Exponential, 0.1, 1.0, 3000.0};
  KrigingOptions opts;
  opts.exec = exec;
  for (auto _ : st) benchmark::DoNotOptimize(krige(s, vm, targets, opts));
}

void BM_KrigeSerial(benchmark::State& st) { krige_bench(st, Exec::Serial); }
void BM_KrigeParallel(benchmark::State& st) { krige_bench(st, Exec::Parallel); }

void model_bench(benchmark::State& st, Exec exec) {
  const Dataset ds = dataset(88, 100);
  const auto plan = make_plan(ds.rows(), 10, 1, 3);
  const auto zoo = zoo_from_names({"lasso", "knn"});
  for (auto _ : st) benchmark::DoNotOptimize(sweetspot::benchmark(ds, zoo, plan, exec));
}

void BM_BenchmarkSerial(benchmark::State& st) { model_bench(st, Exec::Serial); }
void BM_BenchmarkParallel(benchmark::State& st) { model_bench(st, Exec::Parallel); }

}  // namespace

BENCHMARK(BM_VariogramReference)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VariogramParallel)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KrigeSerial)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KrigeParallel)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BenchmarkSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BenchmarkParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
