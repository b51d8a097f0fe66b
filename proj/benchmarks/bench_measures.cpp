#include <benchmark/benchmark.h>

#include "tcsa/correlation_ratio.hpp"
#include "tcsa/csiszar.hpp"
#include "tcsa/designs.hpp"
#include "tcsa/kernel_qdm.hpp"
#include "tcsa/models.hpp"
#include "tcsa/rmc.hpp"

using namespace tcsa;

namespace {

struct Data {
  Matrix base;
  Variable x;
  Variable y;
};

Data ishigami(Eigen::Index n) {
  const IshigamiHomma model;
  Data d;
  d.base = generate_design({static_cast<std::size_t>(n), 3, Scheme::latin_hypercube, 1, marginals(model)});
  d.x = Variable(Matrix(d.base.col(0)));
  d.y = Variable(Matrix(eval_model(model, d.base)));
  return d;
}

void BM_PickFreeze(benchmark::State& state) {
  const Data d = ishigami(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(estimate_eta(IshigamiHomma{}, d.base, FactorGroup::single(0, 3), Order::first).value);
}

void BM_Qdm(benchmark::State& state) {
  const Data d = ishigami(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qdm_index(d.x, d.y));
}

void BM_ScdmKnn(benchmark::State& state) {
  const Data d = ishigami(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scdm(d.x, d.y).value);
}

void BM_ScdmKde(benchmark::State& state) {
  const Data d = ishigami(state.range(0));
  CsiszarOptions o;
  o.density = GaussianKde{};
  o.copula = false;
  for (auto _ : state) benchmark::DoNotOptimize(scdm(d.x, d.y, o).value);
}

void BM_CdmFullKde(benchmark::State& state) {
  const Data d = ishigami(state.range(0));
  CsiszarOptions o;
  o.density = GaussianKde{};
  o.copula = false;
  for (auto _ : state) benchmark::DoNotOptimize(cdm_full(d.x, d.y, o).value);
}

void BM_Rmc(benchmark::State& state) {
  const Data d = ishigami(state.range(0));
  RmcConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(rmc(d.x, d.y, c).value);
}

}  // namespace

BENCHMARK(BM_PickFreeze)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Qdm)->Arg(200)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScdmKnn)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScdmKde)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CdmFullKde)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rmc)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
