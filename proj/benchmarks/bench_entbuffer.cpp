#include <benchmark/benchmark.h>

#include "entbuffer/analytics.hpp"
#include "entbuffer/protocols.hpp"
#include "entbuffer/regimes.hpp"
#include "entbuffer/simulator.hpp"
#include "entbuffer/states.hpp"

using namespace entbuffer;

namespace {

SimConfig reference_config(std::int64_t n_samples, int threads) {
  SimConfig c;
  c.lambda = 1.0;
  c.mu = 0.1;
  c.gamma = 0.025;
  c.q = 1.0;
  c.p = 0.75;
  c.jump = RationalJump(1.0 / 3.0, 0.6, 0.0, 1.0);
  c.f_new = 0.8;
  c.t_sim = 50.0;
  c.n_samples = n_samples;
  c.seed = 99;
  c.mode = SuccessMode::constant_p;
  c.threads = threads;
  return c;
}

}  // namespace

static void BM_RunOne(benchmark::State& state) {
  const SimConfig config = reference_config(1, 1);
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_one(config, index++));
  }
}
BENCHMARK(BM_RunOne);

static void BM_Estimate(benchmark::State& state) {
  const SimConfig config = reference_config(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Estimate)->Args({10000, 1})->Args({10000, 4});

static void BM_ClosedForm(benchmark::State& state) {
  const SystemParams params(1.0, 0.1, 0.025, 1.0, 0.75);
  const LinearJump jump(1.0 / 3.0, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(avg_fidelity_linear(params, jump, 0.8));
  }
}
BENCHMARK(BM_ClosedForm);

static void BM_SeriesAssembly(benchmark::State& state) {
  const SystemParams params(1.0, 0.1, 0.025, 1.0, 0.75);
  const LinearJump jump(1.0 / 3.0, 0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(avg_fidelity_series(params, jump, 0.8, 1e-10));
  }
}
BENCHMARK(BM_SeriesAssembly);

static void BM_CircuitFit(benchmark::State& state) {
  const BellDiagonalState fresh(0.8, 0.1, 0.1, 0.0);
  const WernerState good(0.8);
  const CliffordCircuit2Pair circuit = CliffordCircuit2Pair::dejmps();
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_bilocal_clifford(circuit, good, fresh));
  }
}
BENCHMARK(BM_CircuitFit);

static void BM_CliffordBand(benchmark::State& state) {
  const RateParams rates(1.0, 0.1, 0.05);
  const BellDiagonalState fresh(0.8, 0.1, 0.1, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(clifford_band(rates, fresh, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_CliffordBand)->Arg(101)->Arg(1001);

static void BM_EnvelopeGrid(benchmark::State& state) {
  const BellDiagonalState fresh(0.8, 0.1, 0.06, 0.04);
  for (auto _ : state) {
    const CliffordBounds bounds = clifford_bounds(fresh);
    double acc = 0.0;
    for (int row = 1; row <= 3; ++row) {
      const RationalJump jump = protocol_jump(static_cast<ProtocolId>(row), fresh);
      for (int k = 0; k < 50; ++k) {
        const double f = 0.25 + 0.75 * k / 49.0;
        acc += jump.value(f) - (bounds.a_l * f + bounds.b_l);
      }
    }
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_EnvelopeGrid);

BENCHMARK_MAIN();
