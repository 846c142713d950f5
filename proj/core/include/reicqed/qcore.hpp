#pragma once

// Labeled composite Hilbert spaces and dense operator algebra.
//
// Basis convention: TwoLevel factors are ordered (ground, excited); Fock
// factors |0>..|N-1>. Composite indices follow Kronecker order, so factor 0
// is the most significant digit.

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reicqed {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class FactorKind { TwoLevel, Fock };

struct Factor {
  FactorKind kind = FactorKind::TwoLevel;
  std::size_t dim = 2;
  std::string label;

  static Factor two_level(std::string label = "tls");
  static Factor fock(std::size_t truncation, std::string label = "mode");

  bool operator==(const Factor&) const = default;
};

inline constexpr std::size_t kDefaultFockTruncation = 10;

class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const;
  std::size_t total_dim() const { return total_dim_; }

  // Product of the dimensions of the factors after index i.
  std::size_t stride(std::size_t i) const;
  // Level of factor i in composite basis state `index`.
  std::size_t level(std::size_t index, std::size_t i) const;
  std::size_t index_of(std::span<const std::size_t> levels) const;

  std::vector<std::size_t> fock_indices() const;
  std::vector<std::size_t> two_level_indices() const;

  // kron(I_before, local, I_after)
  Matrix embed(const Matrix& local, std::size_t i) const;

  bool operator==(const HilbertSpace& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  std::size_t total_dim_ = 1;
};

using SpacePtr = std::shared_ptr<const HilbertSpace>;

SpacePtr make_space(std::vector<Factor> factors);

// Throws ValidationError when the two spaces differ.
void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what);

class QOperator {
 public:
  QOperator(SpacePtr space, Matrix matrix);

  const HilbertSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Matrix& matrix() const { return matrix_; }

  QOperator adjoint() const;
  // max|M - M^dagger|
  double hermiticity_defect() const;
  bool is_hermitian(double rel_tol = 1e-12) const;

  QOperator& operator+=(const QOperator& rhs);
  QOperator& operator-=(const QOperator& rhs);
  QOperator& operator*=(cplx s);

  friend QOperator operator+(QOperator lhs, const QOperator& rhs) { return lhs += rhs; }
  friend QOperator operator-(QOperator lhs, const QOperator& rhs) { return lhs -= rhs; }
  friend QOperator operator*(QOperator op, cplx s) { return op *= s; }
  friend QOperator operator*(cplx s, QOperator op) { return op *= s; }
  friend QOperator operator*(const QOperator& lhs, const QOperator& rhs);

 private:
  SpacePtr space_;
  Matrix matrix_;
};

QOperator commutator(const QOperator& a, const QOperator& b);

QOperator identity(const SpacePtr& space);
QOperator zero_operator(const SpacePtr& space);

// a on Fock factor `mode_index`; a[k-1, k] = sqrt(k).
QOperator annihilation(const SpacePtr& space, std::size_t mode_index);
QOperator creation(const SpacePtr& space, std::size_t mode_index);
QOperator number(const SpacePtr& space, std::size_t mode_index);

// sigma_- |e> = |g> on TwoLevel factor `tls_index`.
QOperator lowering(const SpacePtr& space, std::size_t tls_index);
QOperator raising(const SpacePtr& space, std::size_t tls_index);
// sigma+ sigma- - sigma- sigma+
QOperator sigma_z(const SpacePtr& space, std::size_t tls_index);
// sigma+ sigma- = |e><e|
QOperator excited_projector(const SpacePtr& space, std::size_t tls_index);

// Sum_i c_i op_i over a common space.
QOperator compose(std::span<const QOperator> ops, std::span<const cplx> coefficients);

class DensityMatrix {
 public:
  DensityMatrix(SpacePtr space, Matrix matrix);

  static DensityMatrix from_pure(SpacePtr space, const Vector& psi);
  // Product basis state with given level per factor.
  static DensityMatrix basis_state(SpacePtr space, std::span<const std::size_t> levels);
  static DensityMatrix maximally_mixed(SpacePtr space);

  const HilbertSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Matrix& matrix() const { return matrix_; }

  cplx trace() const { return matrix_.trace(); }
  double purity() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;

  // Population distribution of factor i (diagonal of the reduced state).
  std::vector<double> level_populations(std::size_t i) const;
  // Largest population in the top level of any Fock factor.
  double max_top_level_population() const;

  struct Tolerances {
    double trace = 1e-9;
    double hermiticity = 1e-9;
    double positivity = 1e-8;
  };
  // Throws NumericalError naming the violated invariant.
  void validate(const Tolerances& tol) const;
  void validate() const { validate(Tolerances{}); }

 private:
  SpacePtr space_;
  Matrix matrix_;
};

// (1/2) || a - b ||_1 for Hermitian arguments.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace reicqed
