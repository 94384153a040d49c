#include <benchmark/benchmark.h>

#include <vector>

#include "uccap/capability.hpp"
#include "uccap/math.hpp"
#include "uccap/features.hpp"
#include "uccap/metrics.hpp"
#include "uccap/rng.hpp"
#include "uccap/risk_model.hpp"
#include "uccap/simulation.hpp"
#include "uccap/uncertainty.hpp"

using namespace uccap;

namespace {

DimensionSample normal_sample(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  DimensionSample s;
  s.dim_id = "B0001";
  s.values.resize(n);
  for (auto& v : s.values) v = rng.normal(10.0, 0.02);
  s.spec.lsl = 9.9;
  s.spec.usl = 10.1;
  return s;
}

}  // namespace

static void EstimateCpkNormal(benchmark::State& state) {
  const auto s = normal_sample(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_cpk_normal(s));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(EstimateCpkNormal)->Arg(32)->Arg(100)->Arg(1000)->Complexity();

static void NormalityTest(benchmark::State& state) {
  const auto s = normal_sample(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(normality_test(s.values));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(NormalityTest)->Arg(32)->Arg(100)->Arg(1000)->Complexity();

static void FitDistribution(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> values(static_cast<std::size_t>(state.range(0)));
  for (auto& v : values) v = rng.lognormal(0.0, 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_distribution(values));
  }
}
BENCHMARK(FitDistribution)->Arg(32)->Arg(200);

static void BootstrapSe(benchmark::State& state) {
  const auto s = normal_sample(32, 4);
  const EstimatorRoute route;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_se(s, 100, route, 7));
  }
}
BENCHMARK(BootstrapSe);

static void Predict(benchmark::State& state) {
  Rng rng(5);
  ResidualModel m;
  m.standardizer.mean.assign(kFeatureDim, 0.0);
  m.standardizer.sd.assign(kFeatureDim, 1.0);
  for (auto& t : m.theta) t = rng.normal(0.0, 0.3);
  FeatureVector x;
  for (auto& v : x) v = rng.normal(0.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(m, -0.4, x));
  }
}
BENCHMARK(Predict);

static void TrainAnchored(benchmark::State& state) {
  Rng rng(6);
  Dataset rows;
  for (int i = 0; i < 160; ++i) {
    TrainRow r;
    r.dim_id = "D" + std::to_string(i);
    for (auto& v : r.x) v = rng.normal(0.0, 1.0);
    r.z_stat = rng.normal(0.0, 2.0);
    r.target = sigmoid(r.z_stat + rng.normal(0.0, 0.5));
    r.near_flag = std::abs(r.z_stat) < 0.5;
    r.pos_flag = r.target >= 0.5;
    rows.push_back(r);
  }
  TrainConfig cfg;
  cfg.alpha_r = 0.2;
  cfg.lambda2 = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(rows, {}, cfg));
  }
}
BENCHMARK(TrainAnchored)->Unit(benchmark::kMillisecond);

static void OracleRisk(benchmark::State& state) {
  DistFit dist{DistFamily::normal, 10.0, 0.02, 0.0};
  const SimProcess proc = make_process("P", dist, 32, 1.4, true, 0.3, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        oracle_risk(proc, 250, 1.33, EstimatorPolicy::auto_select, 11));
  }
  state.SetItemsProcessed(state.iterations() * 250);
}
BENCHMARK(OracleRisk)->Unit(benchmark::kMillisecond);

static void EceLarge(benchmark::State& state) {
  Rng rng(8);
  std::vector<double> pred(10000), target(10000);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred[i] = rng.uniform01();
    target[i] = rng.uniform01();
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(ece(pred, target, 10));
  }
}
BENCHMARK(EceLarge);

BENCHMARK_MAIN();
