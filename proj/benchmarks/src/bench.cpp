#include <benchmark/benchmark.h>

#include <cmath>

#include "qperc/analysis.hpp"
#include "qperc/circuits.hpp"
#include "qperc/device.hpp"
#include "qperc/dynamics.hpp"

using namespace qperc;

namespace {

PerceptronConfig config_at(double bias_mhz) {
  return make_config({-5.2 * two_pi * 1e6}, bias_mhz * two_pi * 1e6,
                     default_pulse_params());
}

void bm_evolve_two_level(benchmark::State& state) {
  const PerceptronConfig cfg = config_at(2.0);
  const auto frame = make_frame(cfg, 0u);
  const QuantumState ground(Vec::Unit(2, 0), {2});
  for (auto _ : state) {
    auto r = evolve_two_level(frame, ground);
    benchmark::DoNotOptimize(r.final_state.amplitudes);
  }
}
BENCHMARK(bm_evolve_two_level)->Unit(benchmark::kMillisecond);

void bm_perceptron_unitary(benchmark::State& state) {
  const PerceptronConfig cfg = config_at(2.0);
  for (auto _ : state) {
    auto u = perceptron_unitary(cfg);
    benchmark::DoNotOptimize(u.entries);
  }
}
BENCHMARK(bm_perceptron_unitary)->Unit(benchmark::kMillisecond);

void bm_zz_numeric(benchmark::State& state) {
  DeviceParams dev;
  dev.truncation = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = zz_numeric(dev);
    benchmark::DoNotOptimize(r.j);
  }
}
BENCHMARK(bm_zz_numeric)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void bm_decompose_verify(benchmark::State& state) {
  const std::vector<double> thetas = {0.1, 0.7, 1.9, 3.0};
  Mat target = Mat::Zero(8, 8);
  for (int x = 0; x < 4; ++x)
    target.block<2, 2>(2 * x, 2 * x) = v_of_theta(thetas[x]).entries;
  const Operator t(target, {2, 2, 2});
  for (auto _ : state) {
    auto c = decompose_perceptron(thetas, 2);
    double f = equivalence_fidelity(circuit_unitary(c), t);
    benchmark::DoNotOptimize(f);
  }
}
BENCHMARK(bm_decompose_verify);

void bm_negativity_point(benchmark::State& state) {
  const PerceptronConfig cfg = config_at(3.0);
  const Operator u = perceptron_unitary(cfg);
  Vec psi0 = Vec::Zero(4);
  psi0(0) = psi0(2) = 1.0 / std::sqrt(2.0);
  const Vec psif = u.entries * psi0;
  const DensityMatrix rho(psif * psif.adjoint(), {2, 2});
  for (auto _ : state) {
    double n = negativity(rho, 0);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(bm_negativity_point);

}  // namespace

BENCHMARK_MAIN();
