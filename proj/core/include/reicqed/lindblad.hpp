#pragma once

// Markovian master equation: Liouvillian assembly, time evolution, steady
// state. All rates here are angular (rad/s) and times are seconds.

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "reicqed/qcore.hpp"

namespace reicqed {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

// Decay rates in rad/s. `kappa` holds one entry per Fock factor in space
// order; a single entry is broadcast to every mode.
struct DissipatorSpec {
  std::vector<double> kappa;
  double gamma = 0.0;
  double gamma_p = 0.0;

  void validate() const;
};

struct JumpOperator {
  QOperator op;
  double rate = 0.0;
};

// L(rho) = -i[H, rho] + sum_j r_j (c_j rho c_j^+ - 1/2 {c_j^+ c_j, rho})
class Liouvillian {
 public:
  Liouvillian(QOperator hamiltonian, std::vector<JumpOperator> jumps);

  const HilbertSpace& space() const { return h_.space(); }
  const SpacePtr& space_ptr() const { return h_.space_ptr(); }
  const QOperator& hamiltonian() const { return h_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }

  // Matrix-form generator, O(dim^3).
  Matrix apply(const Matrix& rho) const;

  // Column-stacked superoperator: vec(A X B) = (B^T (x) A) vec(X).
  const SparseMatrix& superoperator() const { return super_; }
  Matrix dense_superoperator() const { return Matrix(super_); }
  // Infinity norm (max absolute row sum) of the superoperator.
  double norm() const { return norm_; }

 private:
  QOperator h_;
  std::vector<JumpOperator> jumps_;
  Matrix heff_;
  std::vector<Matrix> c_;
  std::vector<Matrix> cdag_;
  SparseMatrix super_;
  double norm_ = 0.0;
};

// Jumps: a per Fock mode (kappa), sigma- (gamma) and sigma_z (gamma_p) per
// two-level factor. Zero rates are dropped.
Liouvillian build_liouvillian(const QOperator& hamiltonian, const DissipatorSpec& spec);

enum class EvolveBackend { RungeKutta, MatrixExponential };

struct EvolveOptions {
  EvolveBackend backend = EvolveBackend::RungeKutta;
  double rtol = 1e-8;
  double atol = 1e-10;
  bool check_truncation = true;
  double truncation_tol = 1e-6;
  bool validate_outputs = true;
  std::size_t max_steps = 20'000'000;
};

// Largest superoperator dimension accepted by the matrix-exponential backend.
inline constexpr std::size_t kMaxExpmSuperDim = 400;

// rho(t_i) for each t_i in the ascending grid; rho0 is the state at t = 0.
std::vector<DensityMatrix> evolve(const Liouvillian& L, const DensityMatrix& rho0, std::span<const double> t_grid,
                                  const EvolveOptions& options = {});

struct SteadyStateOptions {
  bool check_truncation = true;
  double truncation_tol = 1e-6;
  double residual_tol = 1e-10;
  // Two solves with different trace-row placements must agree this closely;
  // otherwise the null space is taken to be degenerate.
  double agreement_tol = 1e-7;
};

DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& options = {});

// trace(rho op)
cplx expectation(const DensityMatrix& rho, const QOperator& op);

}  // namespace reicqed
