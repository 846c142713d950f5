#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "reicqed/constants.hpp"
#include "reicqed/gatesim.hpp"
#include "reicqed/jcmodel.hpp"
#include "reicqed/lindblad.hpp"
#include "reicqed/wgmio.hpp"

using namespace reicqed;

namespace {

constexpr double MHz = 1e6;

CqedRates base() {
  CqedRates r;
  r.g = 20 * MHz;
  r.kappa = 50 * MHz;
  r.gamma = 10e3;
  return r;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

void BM_SpectrumEigen(benchmark::State& st) {
  const auto sys = build_jc(base(), 5);
  const auto grid = linspace(-60 * MHz, 60 * MHz, static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(spectrum_eigen(sys, grid));
}
BENCHMARK(BM_SpectrumEigen)->Arg(301)->Arg(3001);

void BM_SteadyStateJc(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto sys = build_jc(base(), n);
  const auto a = annihilation(sys.space, 1);
  const auto H = sys.hamiltonian + to_angular(0.05 * MHz) * (a + a.adjoint());
  const auto L = build_liouvillian(H, {{to_angular(50 * MHz)}, to_angular(10e3)});
  for (auto _ : st) benchmark::DoNotOptimize(steady_state(L));
}
BENCHMARK(BM_SteadyStateJc)->Arg(3)->Arg(5)->Arg(8);

void BM_EvolveJc(benchmark::State& st) {
  const auto sys = build_jc(base(), 4);
  const auto L = build_liouvillian(sys.hamiltonian, {{to_angular(50 * MHz)}, to_angular(10e3)});
  const std::size_t e0[] = {1, 0};
  const auto rho0 = DensityMatrix::basis_state(sys.space, e0);
  const auto t = linspace(0.0, 100e-9, 51);
  EvolveOptions o;
  o.backend = st.range(0) == 0 ? EvolveBackend::RungeKutta : EvolveBackend::MatrixExponential;
  for (auto _ : st) benchmark::DoNotOptimize(evolve(L, rho0, t, o));
}
BENCHMARK(BM_EvolveJc)->Arg(0)->Arg(1);

void BM_TransmissionNumericPoint(benchmark::State& st) {
  auto r = base();
  r.kappa_out = critical_kappa_out(r.kappa, 434 * MHz);
  const auto sys = build_backscatter(r, 434 * MHz, 0.2 * MHz, 3);
  NumericTransmissionOptions o;
  o.n_fock = 3;
  o.workers = 1;
  const std::vector<double> grid = {0.0};
  for (auto _ : st) benchmark::DoNotOptimize(transmission_numeric(sys, SpinState::Up, grid, o));
}
BENCHMARK(BM_TransmissionNumericPoint)->Unit(benchmark::kMillisecond);

void BM_Fidelity(benchmark::State& st) {
  const auto r = base();
  const double beta = 434 * MHz;
  const double kout = critical_kappa_out(r.kappa, beta);
  const double tg = std::pow(10.0, -static_cast<double>(st.range(0)));
  const auto p = gaussian_envelope(tg);
  for (auto _ : st) benchmark::DoNotOptimize(fidelity(r, beta, kout, p, 9.5e-6, tg));
}
BENCHMARK(BM_Fidelity)->Arg(6)->Arg(8)->Arg(9);

void BM_FidelityCurve(benchmark::State& st) {
  const auto r = base();
  const double beta = 434 * MHz;
  const double kout = critical_kappa_out(r.kappa, beta);
  std::vector<double> tg;
  for (int i = 0; i < 51; ++i) tg.push_back(1e-9 * std::pow(10.0, 5.0 * i / 50.0));
  for (auto _ : st) benchmark::DoNotOptimize(fidelity_curve(r, beta, kout, tg, 9.5e-6));
}
BENCHMARK(BM_FidelityCurve)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
