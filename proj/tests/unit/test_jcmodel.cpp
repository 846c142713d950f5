#include <gtest/gtest.h>

#include <cmath>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/jcmodel.hpp"

using namespace reicqed;

namespace {

constexpr double MHz = 1e6;

CqedRates strong_coupling() {
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

double db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace

TEST(BuildJc, ResonantUncoupledIsZero) {
  CqedRates r;
  const auto sys = build_jc(r, 4);
  EXPECT_EQ(sys.hamiltonian.matrix().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(build_jc(r, 1), ValidationError);
}

TEST(BuildJc, HermitianAndExcitationConserving) {
  CqedRates r = strong_coupling();
  r.delta_ca = 13 * MHz;
  r.delta_la = -7 * MHz;
  for (std::size_t n : {2u, 5u, 10u}) {
    const auto sys = build_jc(r, n);
    EXPECT_TRUE(sys.hamiltonian.is_hermitian());
    const auto nexc = excited_projector(sys.space, 0) + number(sys.space, 1);
    const double scale = sys.hamiltonian.matrix().cwiseAbs().maxCoeff();
    EXPECT_LT(commutator(sys.hamiltonian, nexc).matrix().cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
}

TEST(BuildJc, SingleExcitationSplitting) {
  CqedRates r = strong_coupling();
  for (double d : {0.0, 10 * MHz, -35 * MHz}) {
    r.delta_ca = d;
    const auto lines = spectrum_eigen(build_jc(r, 3), grid(-400 * MHz, 400 * MHz, 1 * MHz)).lines;
    const double half = std::sqrt(r.g * r.g + d * d / 4.0);
    EXPECT_NEAR(lines[0].position, d / 2.0 - half, 1e-9 * half);
    EXPECT_NEAR(lines[1].position, d / 2.0 + half, 1e-9 * half);
  }
}

TEST(BuildJc, AvoidedCrossingMinimumGap) {
  CqedRates r = strong_coupling();
  double best = 1e300, at = 1.0;
  const auto g = grid(-400 * MHz, 400 * MHz, 1 * MHz);
  for (double d : grid(-5 * r.g, 5 * r.g, r.g / 20)) {
    r.delta_ca = d;
    const auto lines = spectrum_eigen(build_jc(r, 2), g).lines;
    const double gap = lines[1].position - lines[0].position;
    if (gap < best) best = gap, at = d;
  }
  EXPECT_NEAR(at, 0.0, 1e-6);
  EXPECT_NEAR(best / (2.0 * r.g), 1.0, 1e-9);
}

TEST(SpectrumEigen, UncoupledSingleLorentzian) {
  CqedRates r = strong_coupling();
  r.g = 0.0;
  r.delta_ca = 30 * MHz;
  const auto s = spectrum_eigen(build_jc(r, 3), grid(-300 * MHz, 300 * MHz, 0.5 * MHz));
  ASSERT_EQ(s.peaks.size(), 1u);
  EXPECT_NEAR(s.peaks[0].position, 30 * MHz, 0.5 * MHz);
  EXPECT_NEAR(s.peaks[0].height, 1.0, 1e-12);
  EXPECT_NEAR(s.peaks[0].width / r.kappa, 1.0, 0.01);
}

TEST(SpectrumEigen, VacuumRabiDoublet) {
  const auto r = strong_coupling();
  const double step = r.g / 50;
  const auto s = spectrum_eigen(build_jc(r, 3), grid(-150 * MHz, 150 * MHz, step));
  ASSERT_EQ(s.peaks.size(), 2u);
  EXPECT_LE(std::abs(s.peaks[0].position + r.g), step);
  EXPECT_LE(std::abs(s.peaks[1].position - r.g), step);
  for (double v : s.amplitude) EXPECT_GE(v, 0.0);
}

TEST(SpectrumEigen, HalfKappaCouplingDoublet) {
  CqedRates r = strong_coupling();
  r.g = 0.5 * r.kappa;
  const auto s = spectrum_eigen(build_jc(r, 3), grid(-150 * MHz, 150 * MHz, r.g / 50));
  ASSERT_EQ(s.peaks.size(), 2u);
  const double valley = s.amplitude[s.amplitude.size() / 2];
  // Two Lorentzians of FWHM kappa/2 at +-kappa/2: 4.23 dB peak-to-valley.
  EXPECT_NEAR(db(s.peaks[0].height / valley), 4.23, 0.02);
}

TEST(SpectrumEigen, BoundaryIsRejected) {
  EXPECT_THROW(spectrum_eigen(build_jc(strong_coupling(), 3), grid(-10 * MHz, 10 * MHz, 0.1 * MHz)), ValidationError);
}

TEST(SpectrumEigen, DispersiveLines) {
  CqedRates r = strong_coupling();
  r.delta_ca = 100 * r.g;
  const auto s = spectrum_eigen(build_jc(r, 3), grid(-0.5 * r.delta_ca, 1.5 * r.delta_ca, 1 * MHz));
  const double shift = r.g * r.g / r.delta_ca;
  EXPECT_NEAR(s.lines[0].position / -shift, 1.0, 2e-4);
  EXPECT_NEAR(s.lines[1].position / (r.delta_ca + shift), 1.0, 1e-8);
  EXPECT_LT(s.lines[0].cavity_fraction, 2e-4);
}

TEST(SpectrumEigen, SumRuleAcrossCouplings) {
  const auto g = grid(-5000 * MHz, 5000 * MHz, 1 * MHz);
  std::vector<double> integrals;
  for (double gc : {5 * MHz, 10 * MHz, 20 * MHz, 30 * MHz}) {
    CqedRates r = strong_coupling();
    r.g = gc;
    const auto s = spectrum_eigen(build_jc(r, 3), g);
    double acc = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) acc += 0.5 * (s.amplitude[i] + s.amplitude[i - 1]) * (g[i] - g[i - 1]);
    integrals.push_back(acc * s.scale);
  }
  for (double v : integrals) EXPECT_NEAR(v / integrals.front(), 1.0, 0.01);
}

TEST(SpectrumMap, MirrorSymmetry) {
  const auto laser = grid(-100 * MHz, 100 * MHz, 2 * MHz);
  const auto cavity = grid(-100 * MHz, 100 * MHz, 5 * MHz);
  const auto m = spectrum_map(strong_coupling(), laser, cavity);
  const auto nl = laser.size(), nc = cavity.size();
  for (std::size_t ic = 0; ic < nc; ++ic)
    for (std::size_t il = 0; il < nl; ++il)
      EXPECT_NEAR(m.at(ic, il), m.at(nc - 1 - ic, nl - 1 - il), 1e-6);
}

TEST(SpectrumMap, CenterColumnDoublet) {
  const auto r = strong_coupling();
  const auto laser = grid(-100 * MHz, 100 * MHz, r.g / 50);
  const double cavity[] = {-20 * MHz, 0.0, 20 * MHz};
  const auto m = spectrum_map(r, laser, cavity);
  std::vector<double> col(m.amplitude.begin() + laser.size(), m.amplitude.begin() + 2 * laser.size());
  const auto p = find_peaks(laser, col);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_LE(std::abs(p[1].position - r.g), r.g / 50);
}

TEST(SpectrumNumeric, EmptyCavityLorentzian) {
  CqedRates r = strong_coupling();
  r.g = 0.0;
  const double step = 1 * MHz;
  const auto s = spectrum_numeric(r, grid(-150 * MHz, 150 * MHz, step), 1 * MHz);
  ASSERT_EQ(s.peaks.size(), 1u);
  EXPECT_NEAR(s.peaks[0].position, 0.0, 1e-9);
  EXPECT_NEAR(s.peaks[0].width, r.kappa, step);
}

TEST(SpectrumNumeric, AgreesWithEigenPeaks) {
  const auto r = strong_coupling();
  const double step = r.g / 50;
  const auto g = grid(-60 * MHz, 60 * MHz, step);
  const auto num = spectrum_numeric(r, g, 1 * MHz);
  const auto eig = spectrum_eigen(build_jc(r, 3), g);
  ASSERT_EQ(num.peaks.size(), 2u);
  ASSERT_EQ(eig.peaks.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_LE(std::abs(num.peaks[i].position - eig.peaks[i].position), step);
  EXPECT_LE(std::abs(num.peaks[1].position - r.g), step);
}

TEST(SpectrumNumeric, LinearResponse) {
  const auto r = strong_coupling();
  const auto g = grid(-60 * MHz, 60 * MHz, 1 * MHz);
  const auto s1 = spectrum_numeric(r, g, 0.05 * MHz);
  const auto s2 = spectrum_numeric(r, g, 0.025 * MHz);
  EXPECT_NEAR(s2.scale / s1.scale, 0.25, 1e-3);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(s1.amplitude[i], s2.amplitude[i], 1e-4);
}

TEST(SpectrumNumeric, StrongProbeRejected) {
  const auto g = grid(-60 * MHz, 60 * MHz, 5 * MHz);
  EXPECT_THROW(spectrum_numeric(strong_coupling(), g, 4 * MHz), ValidationError);
}

TEST(FindPeaks, Plateaus) {
  const double x[] = {0, 1, 2, 3, 4, 5};
  const double a[] = {0, 1, 1, 0, 2, 0};
  const auto p = find_peaks(x, a);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].position, 1.0);
  EXPECT_EQ(p[1].position, 4.0);
}
