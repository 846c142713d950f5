#include "reicqed/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "reicqed/errors.hpp"

namespace reicqed {

Factor Factor::two_level(std::string label) {
  return Factor{FactorKind::TwoLevel, 2, std::move(label)};
}

Factor Factor::fock(std::size_t truncation, std::string label) {
  if (truncation < 1) {
    throw ValidationError("Fock truncation must be >= 1");
  }
  return Factor{FactorKind::Fock, truncation, std::move(label)};
}

HilbertSpace::HilbertSpace(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw ValidationError("HilbertSpace needs at least one factor");
  }
  for (const auto& f : factors_) {
    if (f.kind == FactorKind::TwoLevel && f.dim != 2) {
      throw ValidationError("TwoLevel factor must have dimension 2");
    }
    if (f.dim < 1) {
      throw ValidationError("factor dimension must be >= 1");
    }
    total_dim_ *= f.dim;
  }
}

const Factor& HilbertSpace::factor(std::size_t i) const {
  if (i >= factors_.size()) {
    throw ValidationError("factor index " + std::to_string(i) + " out of range");
  }
  return factors_[i];
}

std::size_t HilbertSpace::stride(std::size_t i) const {
  std::size_t s = 1;
  for (std::size_t j = i + 1; j < factors_.size(); ++j) s *= factors_[j].dim;
  return s;
}

std::size_t HilbertSpace::level(std::size_t index, std::size_t i) const {
  return (index / stride(i)) % factor(i).dim;
}

std::size_t HilbertSpace::index_of(std::span<const std::size_t> levels) const {
  if (levels.size() != factors_.size()) {
    throw ValidationError("basis label length does not match number of factors");
  }
  std::size_t idx = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (levels[i] >= factors_[i].dim) {
      throw ValidationError("basis level exceeds factor dimension");
    }
    idx = idx * factors_[i].dim + levels[i];
  }
  return idx;
}

std::vector<std::size_t> HilbertSpace::fock_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind == FactorKind::Fock) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> HilbertSpace::two_level_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind == FactorKind::TwoLevel) out.push_back(i);
  }
  return out;
}

Matrix HilbertSpace::embed(const Matrix& local, std::size_t i) const {
  const auto& f = factor(i);
  if (local.rows() != static_cast<Eigen::Index>(f.dim) || local.cols() != static_cast<Eigen::Index>(f.dim)) {
    throw ValidationError("local operator dimension does not match factor " + std::to_string(i));
  }
  std::size_t before = 1;
  for (std::size_t j = 0; j < i; ++j) before *= factors_[j].dim;
  const std::size_t after = stride(i);
  const Matrix left = Matrix::Identity(static_cast<Eigen::Index>(before), static_cast<Eigen::Index>(before));
  const Matrix right = Matrix::Identity(static_cast<Eigen::Index>(after), static_cast<Eigen::Index>(after));
  Matrix tmp = Eigen::kroneckerProduct(left, local).eval();
  return Eigen::kroneckerProduct(tmp, right).eval();
}

SpacePtr make_space(std::vector<Factor> factors) {
  return std::make_shared<const HilbertSpace>(std::move(factors));
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
  if (!(a == b)) {
    throw ValidationError(std::string(what) + ": operands live on different Hilbert spaces");
  }
}

QOperator::QOperator(SpacePtr space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (!space_) throw ValidationError("QOperator without a space");
  const auto d = static_cast<Eigen::Index>(space_->total_dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw ValidationError("QOperator matrix does not match space dimension");
  }
}

QOperator QOperator::adjoint() const { return QOperator(space_, matrix_.adjoint()); }

double QOperator::hermiticity_defect() const {
  if (matrix_.size() == 0) return 0.0;
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

bool QOperator::is_hermitian(double rel_tol) const {
  const double scale = matrix_.size() == 0 ? 0.0 : matrix_.cwiseAbs().maxCoeff();
  return hermiticity_defect() <= rel_tol * std::max(scale, 1e-300);
}

QOperator& QOperator::operator+=(const QOperator& rhs) {
  require_same_space(*space_, *rhs.space_, "operator +");
  matrix_ += rhs.matrix_;
  return *this;
}

QOperator& QOperator::operator-=(const QOperator& rhs) {
  require_same_space(*space_, *rhs.space_, "operator -");
  matrix_ -= rhs.matrix_;
  return *this;
}

QOperator& QOperator::operator*=(cplx s) {
  matrix_ *= s;
  return *this;
}

QOperator operator*(const QOperator& lhs, const QOperator& rhs) {
  require_same_space(lhs.space(), rhs.space(), "operator *");
  return QOperator(lhs.space_ptr(), lhs.matrix() * rhs.matrix());
}

QOperator commutator(const QOperator& a, const QOperator& b) { return a * b - b * a; }

QOperator identity(const SpacePtr& space) {
  const auto d = static_cast<Eigen::Index>(space->total_dim());
  return QOperator(space, Matrix::Identity(d, d));
}

QOperator zero_operator(const SpacePtr& space) {
  const auto d = static_cast<Eigen::Index>(space->total_dim());
  return QOperator(space, Matrix::Zero(d, d));
}

namespace {

const Factor& checked_factor(const HilbertSpace& space, std::size_t index, FactorKind want) {
  if (index >= space.num_factors()) {
    std::ostringstream os;
    os << "factor index " << index << " out of range (space has " << space.num_factors() << " factors)";
    throw ValidationError(os.str());
  }
  const auto& f = space.factor(index);
  if (f.kind != want) {
    throw ValidationError(want == FactorKind::Fock ? "factor " + std::to_string(index) + " is not a Fock mode"
                                                   : "factor " + std::to_string(index) + " is not a two-level system");
  }
  return f;
}

}  // namespace

QOperator annihilation(const SpacePtr& space, std::size_t mode_index) {
  const auto& f = checked_factor(*space, mode_index, FactorKind::Fock);
  const auto n = static_cast<Eigen::Index>(f.dim);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return QOperator(space, space->embed(a, mode_index));
}

QOperator creation(const SpacePtr& space, std::size_t mode_index) {
  return annihilation(space, mode_index).adjoint();
}

QOperator number(const SpacePtr& space, std::size_t mode_index) {
  const auto& f = checked_factor(*space, mode_index, FactorKind::Fock);
  const auto n = static_cast<Eigen::Index>(f.dim);
  Matrix num = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) num(k, k) = static_cast<double>(k);
  return QOperator(space, space->embed(num, mode_index));
}

QOperator lowering(const SpacePtr& space, std::size_t tls_index) {
  checked_factor(*space, tls_index, FactorKind::TwoLevel);
  Matrix sm = Matrix::Zero(2, 2);
  sm(0, 1) = 1.0;  // |g><e|
  return QOperator(space, space->embed(sm, tls_index));
}

QOperator raising(const SpacePtr& space, std::size_t tls_index) { return lowering(space, tls_index).adjoint(); }

QOperator sigma_z(const SpacePtr& space, std::size_t tls_index) {
  const auto sm = lowering(space, tls_index);
  const auto sp = sm.adjoint();
  return sp * sm - sm * sp;
}

QOperator excited_projector(const SpacePtr& space, std::size_t tls_index) {
  const auto sm = lowering(space, tls_index);
  return sm.adjoint() * sm;
}

QOperator compose(std::span<const QOperator> ops, std::span<const cplx> coefficients) {
  if (ops.empty()) throw ValidationError("compose: empty operator list");
  if (ops.size() != coefficients.size()) {
    throw ValidationError("compose: operator and coefficient counts differ");
  }
  Matrix acc = Matrix::Zero(ops.front().matrix().rows(), ops.front().matrix().cols());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    require_same_space(ops.front().space(), ops[i].space(), "compose");
    acc += coefficients[i] * ops[i].matrix();
  }
  return QOperator(ops.front().space_ptr(), std::move(acc));
}

DensityMatrix::DensityMatrix(SpacePtr space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
  if (!space_) throw ValidationError("DensityMatrix without a space");
  const auto d = static_cast<Eigen::Index>(space_->total_dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw ValidationError("DensityMatrix does not match space dimension");
  }
}

DensityMatrix DensityMatrix::from_pure(SpacePtr space, const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw ValidationError("zero state vector");
  const Vector v = psi / n;
  return DensityMatrix(std::move(space), v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(SpacePtr space, std::span<const std::size_t> levels) {
  const auto idx = static_cast<Eigen::Index>(space->index_of(levels));
  const auto d = static_cast<Eigen::Index>(space->total_dim());
  Matrix m = Matrix::Zero(d, d);
  m(idx, idx) = 1.0;
  return DensityMatrix(std::move(space), std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(SpacePtr space) {
  const auto d = static_cast<Eigen::Index>(space->total_dim());
  Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  return DensityMatrix(std::move(space), std::move(m));
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

double DensityMatrix::hermiticity_defect() const { return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const Matrix herm = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::level_populations(std::size_t i) const {
  const auto& f = space_->factor(i);
  std::vector<double> pops(f.dim, 0.0);
  for (std::size_t k = 0; k < space_->total_dim(); ++k) {
    pops[space_->level(k, i)] += matrix_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
  }
  return pops;
}

double DensityMatrix::max_top_level_population() const {
  double worst = 0.0;
  for (auto i : space_->fock_indices()) {
    const auto pops = level_populations(i);
    worst = std::max(worst, pops.back());
  }
  return worst;
}

void DensityMatrix::validate(const Tolerances& tol) const {
  const double tr_err = std::abs(trace() - 1.0);
  if (tr_err > tol.trace) {
    throw NumericalError("density matrix trace deviates from 1 by " + std::to_string(tr_err));
  }
  const double herm = hermiticity_defect();
  if (herm > tol.hermiticity) {
    throw NumericalError("density matrix not Hermitian (defect " + std::to_string(herm) + ")");
  }
  const double lmin = min_eigenvalue();
  if (lmin < -tol.positivity) {
    throw NumericalError("density matrix not positive (min eigenvalue " + std::to_string(lmin) + ")");
  }
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_space(a.space(), b.space(), "trace_distance");
  const Matrix diff = a.matrix() - b.matrix();
  const Matrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace reicqed
