#include <gtest/gtest.h>

#include <random>

#include "reicqed/errors.hpp"
#include "reicqed/qcore.hpp"

using namespace reicqed;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Reference Kronecker product written out by index arithmetic.
Matrix kron_ref(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

}  // namespace

TEST(HilbertSpace, TotalDimIsProductOfFactors) {
  auto s = make_space({Factor::two_level(), Factor::fock(3), Factor::fock(4)});
  EXPECT_EQ(s->total_dim(), 24u);
  EXPECT_EQ(s->stride(0), 12u);
  EXPECT_EQ(s->stride(2), 1u);
  const std::size_t lv[] = {1, 2, 3};
  EXPECT_EQ(s->index_of(lv), 23u);
  EXPECT_EQ(s->level(23, 1), 2u);
}

TEST(Annihilation, LowestTruncation) {
  auto s = make_space({Factor::fock(2)});
  const auto a = annihilation(s, 0);
  Matrix expect(2, 2);
  expect << 0, 1, 0, 0;
  EXPECT_LT(max_abs(a.matrix() - expect), 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> es((a.adjoint() * a).matrix());
  EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-15);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-15);
}

TEST(Annihilation, NumberOperatorDiagonal) {
  auto s = make_space({Factor::fock(4)});
  const auto a = annihilation(s, 0);
  const Matrix n = (a.adjoint() * a).matrix();
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(n(k, k).real(), k, 1e-14);
  EXPECT_LT(max_abs(n - number(s, 0).matrix()), 1e-14);
}

TEST(Annihilation, TruncatedCommutator) {
  constexpr int N = 6;
  auto s = make_space({Factor::fock(N)});
  const auto a = annihilation(s, 0);
  const Matrix comm = commutator(a, a.adjoint()).matrix();
  Matrix expect = Matrix::Identity(N, N);
  expect(N - 1, N - 1) -= static_cast<double>(N);
  EXPECT_LT(max_abs(comm - expect), 1e-13);
}

TEST(Annihilation, Errors) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  EXPECT_THROW(annihilation(s, 0), ValidationError);
  EXPECT_THROW(annihilation(s, 5), ValidationError);
  EXPECT_THROW(lowering(s, 1), ValidationError);
  EXPECT_THROW(Factor::fock(0), ValidationError);
}

TEST(Lowering, TwoLevelAlgebra) {
  auto s = make_space({Factor::two_level()});
  const auto sm = lowering(s, 0);
  const auto sp = raising(s, 0);
  const Matrix pe = (sp * sm).matrix();
  Matrix expect = Matrix::Zero(2, 2);
  expect(1, 1) = 1.0;
  EXPECT_LT(max_abs(pe - expect), 1e-15);
  EXPECT_LT(max_abs(pe * pe - pe), 1e-15);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_z(s, 0).matrix());
  EXPECT_NEAR(es.eigenvalues()(0), -1.0, 1e-15);
  EXPECT_NEAR(es.eigenvalues()(1), 1.0, 1e-15);
  // sigma- |e> = |g>
  Vector e = Vector::Zero(2);
  e(1) = 1.0;
  const Vector g = sm.matrix() * e;
  EXPECT_NEAR(std::abs(g(0) - 1.0), 0.0, 1e-15);
}

TEST(Lowering, KroneckerIdentityOnCompositeSpace) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const Matrix lhs = (lowering(s, 0) * creation(s, 1)).matrix();
  Matrix sm(2, 2);
  sm << 0, 1, 0, 0;
  Matrix ad = Matrix::Zero(3, 3);
  ad(1, 0) = 1.0;
  ad(2, 1) = std::sqrt(2.0);
  EXPECT_LT(max_abs(lhs - kron_ref(sm, ad)), 1e-14);
}

TEST(Compose, LinearCombinations) {
  auto s = make_space({Factor::fock(5)});
  const auto a = annihilation(s, 0);
  const QOperator ops1[] = {a, a};
  const cplx c1[] = {1.0, -1.0};
  EXPECT_LT(max_abs(compose(ops1, c1).matrix()), 1e-300);

  const auto I = identity(s);
  const QOperator ops2[] = {I, I};
  const cplx c2[] = {0.5, 0.5};
  EXPECT_LT(max_abs(compose(ops2, c2).matrix() - I.matrix()), 1e-15);
}

TEST(Compose, RealCombinationOfQuadraturesStaysHermitian) {
  auto s = make_space({Factor::two_level(), Factor::fock(6)});
  const auto a = annihilation(s, 1);
  const auto x = a + a.adjoint();
  const auto p = cplx(0.0, 1.0) * (a - a.adjoint());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const QOperator ops[] = {x, p};
    const cplx coef[] = {u(rng), u(rng)};
    EXPECT_LE(compose(ops, coef).hermiticity_defect(), 1e-14);
  }
}

TEST(Compose, SpaceMismatchIsHardError) {
  auto s1 = make_space({Factor::fock(3)});
  auto s2 = make_space({Factor::fock(4)});
  const QOperator ops[] = {identity(s1), identity(s2)};
  const cplx coef[] = {1.0, 1.0};
  EXPECT_THROW(compose(ops, coef), ValidationError);
  EXPECT_THROW(identity(s1) + identity(s2), ValidationError);
  EXPECT_THROW(identity(s1) * identity(s2), ValidationError);
}

TEST(Embedding, CommutesWithMultiplication) {
  auto s = make_space({Factor::fock(3), Factor::two_level(), Factor::fock(4)});
  std::mt19937 rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (std::size_t f = 0; f < s->num_factors(); ++f) {
    const auto d = static_cast<Eigen::Index>(s->factor(f).dim);
    Matrix A(d, d), B(d, d);
    for (Eigen::Index i = 0; i < d * d; ++i) {
      A.data()[i] = cplx(n(rng), n(rng));
      B.data()[i] = cplx(n(rng), n(rng));
    }
    const Matrix lhs = s->embed(A, f) * s->embed(B, f);
    EXPECT_LT(max_abs(lhs - s->embed(A * B, f)), 1e-12);
    const cplx tr = s->embed(A, f).trace();
    const double others = static_cast<double>(s->total_dim() / s->factor(f).dim);
    EXPECT_LT(std::abs(tr - A.trace() * others), 1e-11);
  }
}

TEST(Nilpotency, LadderOperators) {
  for (std::size_t N : {2u, 3u, 7u}) {
    auto s = make_space({Factor::two_level(), Factor::fock(N)});
    const auto a = annihilation(s, 1);
    Matrix p = Matrix::Identity(static_cast<Eigen::Index>(s->total_dim()), static_cast<Eigen::Index>(s->total_dim()));
    for (std::size_t k = 0; k < N; ++k) p = p * a.matrix();
    EXPECT_LT(max_abs(p), 1e-12);
    const auto sm = lowering(s, 0);
    EXPECT_LT(max_abs((sm * sm).matrix()), 1e-300);
  }
}

TEST(DensityMatrix, Invariants) {
  auto s = make_space({Factor::two_level(), Factor::fock(3)});
  const std::size_t lv[] = {1, 0};
  const auto rho = DensityMatrix::basis_state(s, lv);
  EXPECT_NO_THROW(rho.validate());
  EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
  EXPECT_NEAR(rho.level_populations(0)[1], 1.0, 1e-15);

  Matrix bad = rho.matrix();
  bad(0, 0) = -0.2;
  bad(1, 1) = 0.2;
  EXPECT_THROW(DensityMatrix(s, bad).validate(), NumericalError);
  Matrix untrace = 2.0 * rho.matrix();
  EXPECT_THROW(DensityMatrix(s, untrace).validate(), NumericalError);

  const auto mixed = DensityMatrix::maximally_mixed(s);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(rho, mixed), 1.0 - 1.0 / 6.0, 1e-12);
}
