#include <gtest/gtest.h>

#include <cmath>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/lindblad.hpp"

using namespace reicqed;

namespace {

constexpr double MHz = 1e6;

// H = g (sigma+ a + sigma- a+) + detunings, built directly from ladder ops.
QOperator jc(const SpacePtr& s, double g, double d_atom = 0.0, double d_cav = 0.0) {
  const auto a = annihilation(s, 1);
  const auto sm = lowering(s, 0);
  return g * (sm.adjoint() * a + sm * a.adjoint()) + d_atom * excited_projector(s, 0) + d_cav * number(s, 1);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

}  // namespace

TEST(Liouvillian, GeneratorIsTracelessAndHermiticityPreserving) {
  auto s = make_space({Factor::two_level(), Factor::fock(4)});
  const auto L = build_liouvillian(jc(s, to_angular(20 * MHz), 1e7, -3e7),
                                   {{to_angular(50 * MHz)}, to_angular(1e4), to_angular(2 * MHz)});
  const auto rho = DensityMatrix::maximally_mixed(s);
  const Matrix d = L.apply(rho.matrix());
  EXPECT_LT(std::abs(d.trace()), 1e-10 * L.norm());
  EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-10 * L.norm());
}

TEST(Liouvillian, SuperoperatorMatchesMatrixForm) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const auto L = build_liouvillian(jc(s, 1.3, 0.4, -0.2), {{0.7}, 0.3, 0.1});
  Matrix X = Matrix::Random(6, 6);
  Eigen::Map<const Vector> vx(X.data(), X.size());
  Vector lhs = L.superoperator() * vx;
  Matrix mf = L.apply(X);
  Eigen::Map<const Vector> rhs(mf.data(), mf.size());
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Liouvillian, RejectsBadInput) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const auto a = annihilation(s, 1);
  EXPECT_THROW(build_liouvillian(a, {{1.0}}), ValidationError);
  EXPECT_THROW(build_liouvillian(jc(s, 1.0), {{-1.0}}), ValidationError);
  EXPECT_THROW(build_liouvillian(jc(s, 1.0), {{1.0}, std::nan("")}), ValidationError);
  auto cav = make_space({Factor::fock(3)});
  EXPECT_THROW(build_liouvillian(number(cav, 0), {{1.0}, 1.0}), ValidationError);
}

TEST(Evolve, ClosedSystemConservesPurity) {
  auto s = make_space({Factor::two_level(), Factor::fock(5)});
  Vector psi = Vector::Zero(10);
  psi(1) = std::sqrt(0.3);   // |g,1>
  psi(5) = std::sqrt(0.7);   // |e,0>
  const auto rho0 = DensityMatrix::from_pure(s, psi);
  const auto L = build_liouvillian(jc(s, to_angular(20 * MHz)), {});
  EvolveOptions rk;
  rk.rtol = 1e-11;
  rk.atol = 1e-13;
  for (const auto& r : evolve(L, rho0, linspace(0.0, 200e-9, 41), rk)) EXPECT_NEAR(r.purity(), 1.0, 1e-9);
  EvolveOptions ex;
  ex.backend = EvolveBackend::MatrixExponential;
  for (const auto& r : evolve(L, rho0, linspace(0.0, 200e-9, 41), ex)) EXPECT_NEAR(r.purity(), 1.0, 1e-9);
}

TEST(Evolve, CavityPhotonDecay) {
  auto s = make_space({Factor::fock(3)});
  const double kappa = to_angular(50 * MHz);
  const auto L = build_liouvillian(zero_operator(s), {{kappa}});
  const std::size_t one[] = {1};
  const std::vector<double> t = {0.0, 0.5 / kappa, 1.0 / kappa, 2.0 / kappa};
  const auto n = number(s, 0);
  for (auto backend : {EvolveBackend::RungeKutta, EvolveBackend::MatrixExponential}) {
    EvolveOptions o;
    o.backend = backend;
    o.check_truncation = false;
    const auto out = evolve(L, DensityMatrix::basis_state(s, one), t, o);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double expect = std::exp(-kappa * t[i]);
      EXPECT_NEAR(expectation(out[i], n).real() / expect, 1.0, 1e-6) << "t=" << t[i];
    }
  }
}

TEST(Evolve, PureDephasingCoherenceDecay) {
  auto s = make_space({Factor::two_level()});
  const double gp = to_angular(2 * MHz);
  const auto L = build_liouvillian(zero_operator(s), {{}, 0.0, gp});
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const std::vector<double> t = {0.0, 0.25 / gp, 1.0 / gp, 3.0 / gp};
  const auto out = evolve(L, DensityMatrix::from_pure(s, plus), t);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(std::abs(out[i].matrix()(0, 1)) / (0.5 * std::exp(-2.0 * gp * t[i])), 1.0, 1e-6);
    EXPECT_NEAR(out[i].matrix()(0, 0).real(), 0.5, 1e-10);
    EXPECT_NEAR(out[i].matrix()(1, 1).real(), 0.5, 1e-10);
  }
}

TEST(Evolve, ZeroTimeReturnsInitialState) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const std::size_t lv[] = {1, 0};
  const auto rho0 = DensityMatrix::basis_state(s, lv);
  const auto L = build_liouvillian(jc(s, 1e8), {{1e7}});
  const std::vector<double> t = {0.0};
  const auto out = evolve(L, rho0, t);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ((out[0].matrix() - rho0.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Evolve, VacuumRabiFirstMinimum) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const double g = to_angular(20 * MHz);
  const auto L = build_liouvillian(jc(s, g), {{to_angular(0.05 * MHz)}, to_angular(0.01 * MHz)});
  const std::size_t lv[] = {1, 0};
  const double tq = constants::pi / (2.0 * g);
  const auto t = linspace(0.0, 2.0 * tq, 801);
  const auto out = evolve(L, DensityMatrix::basis_state(s, lv), t);
  const auto pe = excited_projector(s, 0);
  std::size_t imin = 0;
  double vmin = 2.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = expectation(out[i], pe).real();
    if (v < vmin) vmin = v, imin = i;
  }
  EXPECT_NEAR(t[imin] / tq, 1.0, 0.02);
  EXPECT_LT(vmin, 1e-2);
}

TEST(Evolve, DampedRabiEnvelopeRate) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const double kappa = to_angular(50 * MHz);
  const double gamma = to_angular(1e3);
  const auto L = build_liouvillian(jc(s, to_angular(20 * MHz)), {{kappa}, gamma});
  const std::size_t lv[] = {1, 0};
  const auto t = linspace(0.0, 110e-9, 2201);
  EvolveOptions o;
  o.atol = 1e-15;
  o.rtol = 1e-10;
  const auto out = evolve(L, DensityMatrix::basis_state(s, lv), t, o);
  const auto pe = excited_projector(s, 0);
  std::vector<double> p(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) p[i] = expectation(out[i], pe).real();
  std::vector<double> tm, lm;
  for (std::size_t i = 1; i + 1 < t.size(); ++i)
    if (p[i] > p[i - 1] && p[i] >= p[i + 1] && p[i] > 1e-9) tm.push_back(t[i]), lm.push_back(std::log(p[i]));
  ASSERT_GE(tm.size(), 2u);
  const double slope = -(lm.back() - lm.front()) / (tm.back() - tm.front());
  EXPECT_NEAR(slope / ((kappa + gamma) / 2.0), 1.0, 0.10);
}

TEST(Evolve, BackendsAgree) {
  auto s = make_space({Factor::two_level(), Factor::fock(4)});
  const auto a = annihilation(s, 1);
  const double E = to_angular(3 * MHz);
  const auto H = jc(s, to_angular(20 * MHz), to_angular(5 * MHz), 0.0) + E * (a + a.adjoint());
  const auto L = build_liouvillian(H, {{to_angular(50 * MHz)}, to_angular(1 * MHz), to_angular(0.5 * MHz)});
  const std::size_t lv[] = {0, 0};
  const auto t = linspace(0.0, 80e-9, 9);
  EvolveOptions rk;
  rk.rtol = 1e-10;
  rk.atol = 1e-13;
  EvolveOptions ex;
  ex.backend = EvolveBackend::MatrixExponential;
  const auto r1 = evolve(L, DensityMatrix::basis_state(s, lv), t, rk);
  const auto r2 = evolve(L, DensityMatrix::basis_state(s, lv), t, ex);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_LT(trace_distance(r1[i], r2[i]), 1e-6);
}

TEST(Evolve, ExpmRefusesLargeSpaces) {
  auto s = make_space({Factor::two_level(), Factor::fock(11)});
  const auto L = build_liouvillian(jc(s, 1.0), {{1.0}});
  const std::size_t lv[] = {0, 0};
  const std::vector<double> t = {0.0, 1.0};
  EvolveOptions o;
  o.backend = EvolveBackend::MatrixExponential;
  EXPECT_THROW(evolve(L, DensityMatrix::basis_state(s, lv), t, o), ValidationError);
}

TEST(Evolve, TruncationIsDetected) {
  auto s = make_space({Factor::fock(4)});
  const auto a = annihilation(s, 0);
  const double kappa = 1.0;
  const auto L = build_liouvillian(10.0 * (a + a.adjoint()), {{kappa}});
  const std::size_t lv[] = {0};
  const std::vector<double> t = {0.0, 5.0};
  EXPECT_THROW(evolve(L, DensityMatrix::basis_state(s, lv), t), TruncationError);
}

TEST(Evolve, RejectsBadGrid) {
  auto s = make_space({Factor::fock(3)});
  const auto L = build_liouvillian(zero_operator(s), {{1.0}});
  const std::size_t lv[] = {0};
  const std::vector<double> t = {0.0, 2.0, 1.0};
  EXPECT_THROW(evolve(L, DensityMatrix::basis_state(s, lv), t), ValidationError);
  const std::vector<double> neg = {-1.0};
  EXPECT_THROW(evolve(L, DensityMatrix::basis_state(s, lv), neg), ValidationError);
}

TEST(SteadyState, UndrivenCavityRelaxesToVacuum) {
  auto s = make_space({Factor::two_level(), Factor::fock(4)});
  const auto L = build_liouvillian(jc(s, to_angular(20 * MHz)), {{to_angular(50 * MHz)}, to_angular(1e3)});
  const auto rho = steady_state(L);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0, 1e-9);
}

TEST(SteadyState, DrivenEmptyCavityLorentzian) {
  auto s = make_space({Factor::fock(12)});
  const auto a = annihilation(s, 0);
  const double kappa = to_angular(50 * MHz);
  const double E = 0.05 * kappa;
  for (double delta : {0.0, 0.3 * kappa, -1.7 * kappa}) {
    const auto H = delta * number(s, 0) + E * (a + a.adjoint());
    const auto rho = steady_state(build_liouvillian(H, {{kappa}}));
    const double expect = E * E / (delta * delta + kappa * kappa / 4.0);
    EXPECT_NEAR(expectation(rho, number(s, 0)).real() / expect, 1.0, 1e-6) << delta;
  }
}

TEST(SteadyState, DrivenJcSuppressesResonantField) {
  auto s = make_space({Factor::two_level(), Factor::fock(5)});
  auto cav = make_space({Factor::fock(5)});
  const double kappa = to_angular(50 * MHz);
  const double gamma = to_angular(10e3);
  const double g = to_angular(20 * MHz);
  const double E = 0.01 * kappa;
  const auto a = annihilation(s, 1);
  const auto ac = annihilation(cav, 0);
  const auto rho = steady_state(build_liouvillian(jc(s, g) + E * (a + a.adjoint()), {{kappa}, gamma}));
  const auto rho0 = steady_state(build_liouvillian(E * (ac + ac.adjoint()), {{kappa}}));
  const double ratio = expectation(rho, number(s, 1)).real() / expectation(rho0, number(cav, 0)).real();
  EXPECT_LT(ratio, 0.05);
}

TEST(SteadyState, WeakDriveLinearResponse) {
  auto s = make_space({Factor::two_level(), Factor::fock(5)});
  auto cav = make_space({Factor::fock(5)});
  const double kappa = to_angular(50 * MHz);
  const double gamma = to_angular(5 * MHz);
  const double g = to_angular(20 * MHz);
  const double E = 1e-3 * kappa;
  const auto a = annihilation(s, 1);
  const auto ac = annihilation(cav, 0);
  const auto rho = steady_state(build_liouvillian(jc(s, g) + E * (a + a.adjoint()), {{kappa}, gamma}));
  const auto rho0 = steady_state(build_liouvillian(E * (ac + ac.adjoint()), {{kappa}}));
  const double lin = (kappa / 2) * (gamma / 2) / ((kappa / 2) * (gamma / 2) + g * g);
  EXPECT_NEAR(std::abs(expectation(rho, a)) / std::abs(expectation(rho0, ac)) / lin, 1.0, 1e-3);
}

TEST(SteadyState, AgreesWithLongTimeEvolution) {
  auto s = make_space({Factor::two_level(), Factor::fock(5)});
  const auto a = annihilation(s, 1);
  const double kappa = to_angular(50 * MHz);
  const auto H = jc(s, to_angular(20 * MHz), to_angular(4 * MHz), to_angular(-2 * MHz)) +
                 to_angular(4 * MHz) * (a + a.adjoint());
  const auto L = build_liouvillian(H, {{kappa}, to_angular(5 * MHz)});
  const std::size_t lv[] = {1, 0};
  const std::vector<double> t = {0.0, 50.0 / kappa};
  const auto out = evolve(L, DensityMatrix::basis_state(s, lv), t);
  EXPECT_LT(trace_distance(out.back(), steady_state(L)), 1e-4);
}

TEST(SteadyState, DegenerateNullSpace) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const auto L = build_liouvillian(jc(s, 1.0), {});
  EXPECT_THROW(steady_state(L), DegenerateNullSpace);
}
