#include <gtest/gtest.h>

#include <cmath>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/jcmodel.hpp"
#include "reicqed/squeeze.hpp"

using namespace reicqed;

namespace {

constexpr double MHz = 1e6;
const double kDeltaC = to_angular(1e9);
const double kPumpWidth = to_angular(100 * MHz);

PumpDrive drive(double P = 1e-9) {
  PumpDrive d;
  d.power = P;
  d.omega0 = constants::two_pi * constants::c / 980e-9;
  d.chi2 = 25e-12;
  d.V = 50e-18;
  return d;
}

CqedRates yb() {
  CqedRates r;
  r.g = 20 * MHz;
  r.kappa = 50 * MHz;
  r.gamma = 1e3;
  return r;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<long>(std::llround((hi - lo) / step));
  for (long i = 0; i <= n; ++i) v.push_back(lo + step * static_cast<double>(i));
  return v;
}

std::vector<double> ground_block_levels(const QOperator& H, std::size_t N) {
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H.matrix().topLeftCorner(n, n));
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

}  // namespace

TEST(PumpModel, AmplitudeValue) {
  EXPECT_NEAR(pump_amplitude(drive(), kPumpWidth) / 2.8021071448213064, 1.0, 1e-12);
}

TEST(PumpModel, SquareRootPowerScaling) {
  EXPECT_EQ(omega_from_power(drive(0.0), kPumpWidth), 0.0);
  const double w1 = omega_from_power(drive(1e-9), kPumpWidth);
  const double w4 = omega_from_power(drive(4e-9), kPumpWidth);
  EXPECT_NEAR(w4 / w1, 2.0, 1e-14);
  EXPECT_THROW(omega_from_power(drive(-1.0), kPumpWidth), ValidationError);
}

TEST(SqueezeParams, NoDrive) {
  const auto f = squeeze_params(kDeltaC, 0.0);
  EXPECT_EQ(f.r, 0.0);
  EXPECT_EQ(f.enhancement(), 1.0);
  EXPECT_EQ(f.delta_alpha, kDeltaC);
}

TEST(SqueezeParams, TenfoldInversion) {
  const double ratio = omega_ratio_for_enhancement(10.0);
  EXPECT_NEAR(ratio, 0.9999873739765025, 1e-13);
  const auto f = squeeze_params(kDeltaC, ratio * kDeltaC);
  EXPECT_NEAR(f.r, 2.993222846126381, 1e-8);
  EXPECT_NEAR(f.enhancement(), 10.0, 1e-7);
  EXPECT_NEAR(f.delta_alpha, kDeltaC / std::cosh(2.0 * f.r), 1e-6 * f.delta_alpha);
}

TEST(SqueezeParams, StabilityEdge) {
  EXPECT_THROW(squeeze_params(kDeltaC, kDeltaC), InstabilityError);
  EXPECT_THROW(squeeze_params(kDeltaC, 2.0 * kDeltaC), InstabilityError);
  EXPECT_GT(squeeze_params(kDeltaC, kDeltaC * (1.0 - 1e-12)).r, 6.0);
}

TEST(Calibration, AnchorAndCurve) {
  auto d = drive();
  d.calibration = calibrate(d, kPumpWidth, kDeltaC);
  const double edge = 1e-9 / std::pow(omega_ratio_for_enhancement(10.0), 2);
  std::vector<double> P = grid(0.0, 1e-9, 0.02e-9);
  const auto rows = enhancement_curve(yb(), d, kPumpWidth, kDeltaC, P);
  EXPECT_EQ(rows.front().g_eff_hz, yb().g);
  EXPECT_NEAR(rows.back().g_eff_hz / yb().g, 10.0, 1e-6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].g_eff_hz, rows[i - 1].g_eff_hz);
    EXPECT_NEAR(rows[i].omega / rows.back().omega, std::sqrt(P[i] / P.back()), 1e-12);
    EXPECT_NEAR(rows[i].g_eff_hz / yb().g, std::cosh(rows[i].r), 1e-12);
  }
  const std::vector<double> near_edge = {0.90 * edge, 0.93 * edge, 0.96 * edge, 0.99 * edge};
  const auto tail = enhancement_curve(yb(), d, kPumpWidth, kDeltaC, near_edge);
  for (std::size_t i = 2; i < tail.size(); ++i) {
    EXPECT_GT(tail[i].g_eff_hz - 2.0 * tail[i - 1].g_eff_hz + tail[i - 2].g_eff_hz, 0.0);
  }
  const std::vector<double> past = {0.5e-9, 1.1e-9};
  EXPECT_THROW(enhancement_curve(yb(), d, kPumpWidth, kDeltaC, past), InstabilityError);
}

TEST(PampHamiltonian, NoDriveMatchesJc) {
  CqedRates r = yb();
  r.delta_ca = 300 * MHz;
  r.delta_la = -40 * MHz;
  const auto H = build_pamp_hamiltonian(r, 0.0, 0.3, 6);
  EXPECT_EQ((H.matrix() - build_jc(r, 6).hamiltonian.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PampHamiltonian, BogoliubovSpacing) {
  CqedRates r;
  r.delta_ca = to_ordinary(kDeltaC);
  const double Om = 0.5 * kDeltaC;
  const std::size_t N = 50;
  const auto H = build_pamp_hamiltonian(r, Om, 0.0, N);
  EXPECT_TRUE(H.is_hermitian());
  const auto lv = ground_block_levels(H, N);
  const double da = std::sqrt(kDeltaC * kDeltaC - Om * Om);
  for (int n = 0; n <= 5; ++n) EXPECT_NEAR((lv[n + 1] - lv[n]) / da, 1.0, 1e-6) << n;
  EXPECT_NEAR(lv[0] / (0.5 * da - 0.5 * kDeltaC), 1.0, 1e-6);
}

TEST(PampHamiltonian, PhaseShiftByPiLeavesSpectrum) {
  CqedRates r = yb();
  r.delta_ca = to_ordinary(kDeltaC);
  const auto h1 = build_pamp_hamiltonian(r, 0.3 * kDeltaC, 0.4, 30);
  const auto h2 = build_pamp_hamiltonian(r, 0.3 * kDeltaC, 0.4 + constants::pi, 30);
  Eigen::SelfAdjointEigenSolver<Matrix> e1(h1.matrix()), e2(h2.matrix());
  EXPECT_LT((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff(), 1e-6 * kDeltaC);
  EXPECT_TRUE(h1.is_hermitian());
}

TEST(PampHamiltonian, InadequateTruncation) {
  CqedRates r;
  r.delta_ca = to_ordinary(kDeltaC);
  EXPECT_THROW(build_pamp_hamiltonian(r, 0.99 * kDeltaC, 0.0, 10), TruncationError);
  EXPECT_THROW(build_pamp_hamiltonian(r, 1.01 * kDeltaC, 0.0, 10), InstabilityError);
}

TEST(SqueezedVacuum, Tail) {
  EXPECT_EQ(squeezed_vacuum_tail(0.0, 1), 0.0);
  EXPECT_NEAR(squeezed_vacuum_tail(0.5, 1), 1.0 - 1.0 / std::cosh(0.5), 1e-15);
  EXPECT_LT(squeezed_vacuum_tail(0.5, 80), 1e-12);
}

TEST(EffectiveModel, IdentityWithoutDrive) {
  const auto r = effective_model(squeeze_params(kDeltaC, 0.0), yb());
  EXPECT_EQ(r.g, yb().g);
  EXPECT_EQ(r.delta_ca, yb().delta_ca);
  EXPECT_EQ(r.delta_la, yb().delta_la);
}

TEST(EffectiveModel, EnhancedDoublet) {
  const auto f = squeeze_params(kDeltaC, omega_ratio_for_enhancement(10.0) * kDeltaC);
  const auto eff = effective_model(f, yb());
  EXPECT_NEAR(eff.g / yb().g, 10.0, 1e-6);
  const double step = yb().g / 50;
  const auto s = spectrum_eigen(build_jc(eff, 3), grid(-400 * MHz, 400 * MHz, step));
  ASSERT_EQ(s.peaks.size(), 2u);
  EXPECT_LE(std::abs(s.peaks[1].position - 200 * MHz), step);
  EXPECT_LE(std::abs(s.peaks[0].position + 200 * MHz), step);
  double valley = 1.0;
  for (std::size_t i = 0; i < s.detuning.size(); ++i)
    if (std::abs(s.detuning[i]) < 1.0) valley = s.amplitude[i];
  EXPECT_LT(valley, 0.05);
}

TEST(Rwa, ExactWithoutSqueezing) {
  SqueezeFrame f;
  f.delta_alpha = to_angular(500 * MHz);
  EXPECT_EQ(validate_rwa(yb(), f).max_rel_deviation, 0.0);
}

TEST(Rwa, DeviationShrinksWithRatio) {
  const double gs = to_angular(yb().g) * std::sinh(1.0);
  double prev = 1e300;
  for (double ratio : {2.0, 5.0, 20.0, 100.0}) {
    SqueezeFrame f;
    f.r = 1.0;
    f.delta_alpha = ratio * gs;
    const auto rep = validate_rwa(yb(), f);
    EXPECT_NEAR(rep.ratio, ratio, 1e-9 * ratio);
    EXPECT_LT(rep.max_rel_deviation, prev);
    prev = rep.max_rel_deviation;
    if (ratio == 2.0) {
      EXPECT_TRUE(rep.questionable);
      EXPECT_GT(rep.max_rel_deviation, 1e-2);
    }
    if (ratio == 100.0) EXPECT_LT(rep.max_rel_deviation, 1e-3);
  }
}

TEST(PampHamiltonian, LevelSpacingHelper) {
  const auto sp = pamp_level_spacings(kDeltaC, 0.5 * kDeltaC);
  ASSERT_EQ(sp.size(), 6u);
  for (double s : sp) EXPECT_NEAR(s / (kDeltaC * std::sqrt(0.75)), 1.0, 1e-6);
  EXPECT_THROW(pamp_level_spacings(kDeltaC, 0.5 * kDeltaC, 10, 8), ValidationError);
}
