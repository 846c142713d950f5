#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "reicqed/errors.hpp"
#include "reicqed/wgmio.hpp"

using namespace reicqed;

namespace {

constexpr double MHz = 1e6;
using cd = std::complex<double>;

CqedRates scenario(double kappa_out = 0.0) {
  CqedRates r;
  r.g = 20 * MHz;
  r.kappa = 50 * MHz;
  r.gamma = 10e3;
  r.kappa_out = kappa_out;
  return r;
}

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

// One-excitation block: |e,0,0>, |g,1,0>, |g,0,1>.
Eigen::Vector3d one_excitation_levels(const BackscatterSystem& s) {
  const auto N = static_cast<Eigen::Index>(s.space->factor(1).dim);
  const Eigen::Index idx[] = {N * N, N, 1};
  Eigen::Matrix3cd b;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = s.hamiltonian.matrix()(idx[i], idx[j]);
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(b / (2.0 * 3.14159265358979323846)).eigenvalues();
}

}  // namespace

TEST(Backscatter, DegenerateWithoutBeta) {
  CqedRates r = scenario(100 * MHz);
  r.g = 0.0;
  r.delta_ca = 300 * MHz;
  const auto s = build_backscatter(r, 0.0, 0.0, 3);
  EXPECT_TRUE(s.hamiltonian.is_hermitian());
  const auto lv = one_excitation_levels(s);
  EXPECT_NEAR(lv(0), 0.0, 1e-3);
  EXPECT_NEAR(lv(1), lv(2), 1e-3);
}

TEST(Backscatter, NormalModeSplitting) {
  CqedRates r = scenario(100 * MHz);
  r.g = 0.0;
  r.delta_ca = 5e9;
  const double beta = 434 * MHz;
  const auto lv = one_excitation_levels(build_backscatter(r, beta, 0.0, 3));
  EXPECT_NEAR((lv(2) - lv(1)) / (2.0 * beta), 1.0, 1e-12);
}

TEST(Backscatter, SymmetricModeCoupling) {
  CqedRates r = scenario(100 * MHz);
  r.delta_ca = 37 * MHz;
  const auto s = build_backscatter(r, 0.0, 0.0, 3);
  EXPECT_TRUE(s.hamiltonian.is_hermitian());
  const auto lv = one_excitation_levels(s);
  const double gs = std::sqrt(2.0) * r.g;
  // cavity at delta_ca relative to the ion, symmetric mode coupled with g sqrt(2)
  const double mean = 0.5 * r.delta_ca, half = std::sqrt(gs * gs + 0.25 * r.delta_ca * r.delta_ca);
  EXPECT_NEAR(lv(0), mean - half, 1e-9 * half);
  EXPECT_NEAR(lv(1), r.delta_ca, 1e-9 * half);
  EXPECT_NEAR(lv(2), mean + half, 1e-9 * half);
}

TEST(Backscatter, StrongDriveTruncation) {
  EXPECT_THROW(build_backscatter(scenario(100 * MHz), 0.0, 100 * MHz, 3), TruncationError);
  EXPECT_THROW(build_backscatter(scenario(100 * MHz), 0.0, 0.0, 1), ValidationError);
}

TEST(TEmpty, Limits) {
  const auto r = scenario();
  const double zero[] = {0.0};
  EXPECT_LT(std::abs(t_empty(r, 0.0, r.kappa, zero)[0]), 1e-15);
  const auto g = grid(-2e9, 2e9, 101);
  for (const auto& t : t_empty(r, 434 * MHz, 1e-3, g)) EXPECT_NEAR(std::abs(t), 1.0, 1e-9);
  const auto T = intensity(t_empty(r, 434 * MHz, 869 * MHz, g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(T[i], T[g.size() - 1 - i], 1e-14);
}

TEST(TransmissionBounds, PassiveForPhysicalParameters) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    CqedRates r;
    r.kappa = 1e6 + 2e9 * u(rng);
    r.kappa_out = 2e9 * u(rng);
    r.g = 1e9 * u(rng);
    r.gamma = 1e8 * u(rng);
    const double beta = 2e9 * u(rng);
    const auto g = grid(-5e9, 5e9, 41);
    for (double T : intensity(t_empty(r, beta, r.kappa_out, g))) EXPECT_LE(T, 1.0 + 1e-9);
    for (double T : intensity(t_coupled(r, beta, r.kappa_out, g))) EXPECT_LE(T, 1.0 + 1e-9);
  }
}

TEST(TCoupled, DecoupledLimitIsHalfDepthDip) {
  CqedRates r = scenario(80 * MHz);
  r.g = 0.0;
  const auto g = grid(-500 * MHz, 500 * MHz, 51);
  const auto t = t_coupled(r, 0.0, r.kappa_out, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cd expect = 1.0 - 0.5 * r.kappa_out / (cd(0.0, g[i]) + 0.5 * r.kappa_all());
    EXPECT_LT(std::abs(t[i] - expect), 1e-12);
  }
}

TEST(TCoupled, ResonantTransparency) {
  const double beta = 434 * MHz;
  const auto r = scenario(critical_kappa_out(50 * MHz, beta));
  const double zero[] = {0.0};
  const double T1 = std::norm(t_empty(r, beta, r.kappa_out, zero)[0]);
  const double T2 = std::norm(t_coupled(r, beta, r.kappa_out, zero)[0]);
  EXPECT_GT(T2 / std::max(T1, 1e-6), 10.0);
  CqedRates strong = r;
  strong.g = 1e12;
  EXPECT_NEAR(std::abs(t_coupled(strong, beta, r.kappa_out, zero)[0]), 1.0, 1e-6);
}

TEST(TEmpty, BetaContinuity) {
  const auto r = scenario(120 * MHz);
  const auto g = grid(-1e9, 1e9, 201);
  const auto t0 = t_empty(r, 0.0, r.kappa_out, g);
  double prev = 1e300;
  for (double beta : {100e6, 10e6, 1e6, 1e5}) {
    const auto t = t_empty(r, beta, r.kappa_out, g);
    double dev = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dev = std::max(dev, std::abs(t[i] - t0[i]));
    EXPECT_LT(dev, prev);
    prev = dev;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(CriticalCoupling, SymmetricWithoutBeta) {
  const auto k = grid(1e6, 500e6, 400);
  const auto res = critical_coupling_search(scenario(), 0.0, k);
  EXPECT_NEAR(res.kappa_out / (50 * MHz), 1.0, 1e-6);
  EXPECT_LT(res.t_min, 1e-12);
}

TEST(CriticalCoupling, ShiftedByBackscattering) {
  const auto k = grid(1e6, 3e9, 600);
  const auto res = critical_coupling_search(scenario(), 434 * MHz, k);
  EXPECT_NEAR(res.kappa_out / critical_kappa_out(50 * MHz, 434 * MHz), 1.0, 1e-6);
  EXPECT_NEAR(res.kappa_out, 870 * MHz, 20 * MHz);
  EXPECT_LT(res.t_min, 1e-10);
  // zero condition kappa_out = s/2 + 2 beta^2 / s with s = kappa + kappa_out
  const double s = 50 * MHz + res.kappa_out;
  EXPECT_NEAR(res.kappa_out / (0.5 * s + 2.0 * std::pow(434 * MHz, 2) / s), 1.0, 1e-6);
}

TEST(CriticalCoupling, MonotoneInBeta) {
  const auto k = grid(1e6, 8e9, 800);
  double prev = 0.0;
  for (double beta : {0.2e9, 0.4e9, 0.8e9, 1.6e9}) {
    const double v = critical_coupling_search(scenario(), beta, k).kappa_out;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(CriticalCoupling, BoundaryMinimumIsError) {
  const auto k = grid(1e6, 500e6, 50);
  EXPECT_THROW(critical_coupling_search(scenario(), 434 * MHz, k), BoundaryOptimumError);
}

TEST(TransmissionNumeric, EmptyBranchMatchesClosedForm) {
  const double beta = 434 * MHz;
  const auto r = scenario(critical_kappa_out(50 * MHz, beta));
  const auto sys = build_backscatter(r, beta, 5 * MHz);
  const auto g = grid(-2e9, 2e9, 41);
  const auto tn = intensity(transmission_numeric(sys, SpinState::Down, g));
  const auto ta = intensity(t_empty(r, beta, r.kappa_out, g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tn[i], ta[i], 1e-4) << g[i];
}

TEST(TransmissionNumeric, FullModelWithoutBetaLinearResponse) {
  const auto r = scenario(200 * MHz);
  const auto sys = build_backscatter(r, 0.0, 0.2 * MHz);
  const auto g = grid(-500e6, 500e6, 21);
  const auto tn = transmission_numeric(sys, SpinState::Up, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const cd z = cd(0.0, g[i]) + 0.5 * r.kappa_all();
    const cd w = cd(0.0, g[i]) + 0.5 * r.gamma;
    const cd chi_s = w / (z * w + 2.0 * r.g * r.g);
    const cd expect = 1.0 - 0.5 * r.kappa_out * (1.0 / z + chi_s);
    EXPECT_LT(std::abs(tn[i] - expect), 1e-3) << g[i];
  }
}

TEST(TransmissionNumeric, StandingWaveReductionReproducesPrintedFormula) {
  const double beta = 434 * MHz;
  const auto r = scenario(critical_kappa_out(50 * MHz, beta));
  const auto g = grid(-2e9, 2e9, 41);
  const auto tn = intensity(transmission_numeric_standing_wave(r, 0.2 * MHz, g));
  const auto ta = intensity(t_coupled(r, beta, r.kappa_out, g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tn[i], ta[i], 1e-3) << g[i];
}

TEST(TransmissionNumeric, DownBranchDecouplesDispersively) {
  const auto r = scenario(300 * MHz);
  const auto sys = build_backscatter(r, 200 * MHz, 3 * MHz);
  const auto g = grid(-1e9, 1e9, 21);
  NumericTransmissionOptions o;
  o.spin_detuning = 50e9;
  const auto tn = intensity(transmission_numeric(sys, SpinState::Down, g, o));
  const auto ta = intensity(t_empty(r, 200 * MHz, r.kappa_out, g));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(tn[i], ta[i], 1e-3);
}

TEST(TransmissionNumeric, StrongDriveRejected) {
  const auto r = scenario(100 * MHz);
  const auto sys = build_backscatter(r, 0.0, 8 * MHz, 6);
  const auto g = grid(-100e6, 100e6, 5);
  EXPECT_THROW(transmission_numeric(sys, SpinState::Down, g), ValidationError);
}
