#include "reicqed/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "reicqed/errors.hpp"

namespace reicqed {

void DissipatorSpec::validate() const {
  for (double k : kappa) {
    if (!(k >= 0.0)) throw ValidationError("cavity decay rate must be >= 0");
  }
  if (!(gamma >= 0.0)) throw ValidationError("spontaneous emission rate must be >= 0");
  if (!(gamma_p >= 0.0)) throw ValidationError("dephasing rate must be >= 0");
}

namespace {

using Triplet = Eigen::Triplet<cplx>;

// Appends scale * kron(A, B) as triplets, skipping exact zeros.
void add_kron(std::vector<Triplet>& out, const Matrix& A, const Matrix& B, cplx scale) {
  const Eigen::Index nb = B.rows();
  std::vector<std::pair<Eigen::Index, Eigen::Index>> nzB;
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
      if (B(i, j) != cplx(0.0)) nzB.emplace_back(i, j);
    }
  }
  for (Eigen::Index ja = 0; ja < A.cols(); ++ja) {
    for (Eigen::Index ia = 0; ia < A.rows(); ++ia) {
      const cplx a = A(ia, ja);
      if (a == cplx(0.0)) continue;
      for (const auto& [ib, jb] : nzB) {
        out.emplace_back(ia * nb + ib, ja * nb + jb, scale * a * B(ib, jb));
      }
    }
  }
}

double infinity_norm(const SparseMatrix& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.size() == 0 ? 0.0 : rows.maxCoeff();
}

// Index sets of basis states where some Fock factor sits at its top level.
std::vector<std::vector<Eigen::Index>> top_level_sets(const HilbertSpace& space) {
  std::vector<std::vector<Eigen::Index>> sets;
  for (auto f : space.fock_indices()) {
    const auto dim = space.factor(f).dim;
    if (dim < 2) continue;
    std::vector<Eigen::Index> idx;
    for (std::size_t k = 0; k < space.total_dim(); ++k) {
      if (space.level(k, f) == dim - 1) idx.push_back(static_cast<Eigen::Index>(k));
    }
    sets.push_back(std::move(idx));
  }
  return sets;
}

double top_population(const Matrix& rho, const std::vector<std::vector<Eigen::Index>>& sets) {
  double worst = 0.0;
  for (const auto& s : sets) {
    double p = 0.0;
    for (auto k : s) p += rho(k, k).real();
    worst = std::max(worst, p);
  }
  return worst;
}

[[noreturn]] void raise_truncation(double pop, double tol) {
  std::ostringstream os;
  os << "Fock truncation inadequate: top-level population " << pop << " exceeds " << tol
     << "; raise truncation";
  throw TruncationError(os.str());
}

}  // namespace

Liouvillian::Liouvillian(QOperator hamiltonian, std::vector<JumpOperator> jumps)
    : h_(std::move(hamiltonian)), jumps_(std::move(jumps)) {
  const auto d = static_cast<Eigen::Index>(space().total_dim());
  heff_ = h_.matrix();
  for (const auto& j : jumps_) {
    require_same_space(space(), j.op.space(), "Liouvillian jump operator");
    if (!(j.rate >= 0.0)) throw ValidationError("negative jump rate");
    c_.push_back(j.op.matrix());
    cdag_.push_back(j.op.matrix().adjoint());
    heff_ -= cplx(0.0, 0.5 * j.rate) * (cdag_.back() * c_.back());
  }

  const Matrix id = Matrix::Identity(d, d);
  std::vector<Triplet> trips;
  add_kron(trips, id, heff_, cplx(0.0, -1.0));
  add_kron(trips, heff_.conjugate(), id, cplx(0.0, 1.0));
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    add_kron(trips, c_[j].conjugate(), c_[j], jumps_[j].rate);
  }
  super_.resize(d * d, d * d);
  super_.setFromTriplets(trips.begin(), trips.end());
  super_.makeCompressed();
  norm_ = infinity_norm(super_);
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  Matrix out = cplx(0.0, -1.0) * (heff_ * rho);
  out.noalias() += cplx(0.0, 1.0) * (rho * heff_.adjoint());
  for (std::size_t j = 0; j < jumps_.size(); ++j) {
    out.noalias() += jumps_[j].rate * (c_[j] * rho * cdag_[j]);
  }
  return out;
}

Liouvillian build_liouvillian(const QOperator& hamiltonian, const DissipatorSpec& spec) {
  spec.validate();
  if (!hamiltonian.is_hermitian(1e-10)) {
    throw ValidationError("Hamiltonian is not Hermitian (defect " + std::to_string(hamiltonian.hermiticity_defect()) +
                          ")");
  }
  const auto& space = hamiltonian.space_ptr();
  const auto modes = space->fock_indices();
  const auto tls = space->two_level_indices();

  if (spec.kappa.size() > 1 && spec.kappa.size() != modes.size()) {
    throw ValidationError("kappa list length does not match the number of cavity modes");
  }
  std::vector<JumpOperator> jumps;
  for (std::size_t m = 0; m < modes.size(); ++m) {
    const double k = spec.kappa.empty() ? 0.0 : (spec.kappa.size() == 1 ? spec.kappa[0] : spec.kappa[m]);
    if (k > 0.0) jumps.push_back({annihilation(space, modes[m]), k});
  }
  if (tls.empty() && (spec.gamma > 0.0 || spec.gamma_p > 0.0)) {
    throw ValidationError("emitter rates given but the space has no two-level factor");
  }
  for (auto t : tls) {
    if (spec.gamma > 0.0) jumps.push_back({lowering(space, t), spec.gamma});
    if (spec.gamma_p > 0.0) jumps.push_back({sigma_z(space, t), spec.gamma_p});
  }
  return Liouvillian(hamiltonian, std::move(jumps));
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                 b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

class DormandPrince {
 public:
  DormandPrince(const Liouvillian& L, const EvolveOptions& opt) : L_(L), opt_(opt), sets_(top_level_sets(L.space())) {}

  // Advances rho from t to t_end in place.
  void advance(Matrix& rho, double& t, double t_end, double& h) {
    if (t_end <= t) return;
    Matrix k1 = L_.apply(rho);
    if (h <= 0.0) h = initial_step(rho, k1, t_end - t);
    while (t < t_end) {
      if (++steps_ > opt_.max_steps) throw NumericalError("evolve: step budget exhausted");
      double step = std::min(h, t_end - t);
      if (t_end - (t + step) <= 1e-10 * step) step = t_end - t;
      const bool last = step >= t_end - t;
      if (step <= 1e-15 * std::max(std::abs(t), std::abs(t_end))) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6e", t);
        throw StepSizeUnderflow(std::string("evolve: step size underflow at t = ") + buf);
      }
      const Matrix k2 = L_.apply(rho + step * (a21 * k1));
      const Matrix k3 = L_.apply(rho + step * (a31 * k1 + a32 * k2));
      const Matrix k4 = L_.apply(rho + step * (a41 * k1 + a42 * k2 + a43 * k3));
      const Matrix k5 = L_.apply(rho + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const Matrix k6 = L_.apply(rho + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Matrix next = rho + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const Matrix k7 = L_.apply(next);
      const Matrix err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double en = 0.0;
      for (Eigen::Index j = 0; j < err.cols(); ++j) {
        for (Eigen::Index i = 0; i < err.rows(); ++i) {
          const double sc = opt_.atol + opt_.rtol * std::max(std::abs(rho(i, j)), std::abs(next(i, j)));
          en = std::max(en, std::abs(err(i, j)) / sc);
        }
      }
      if (!std::isfinite(en)) throw NumericalError("evolve: non-finite state");
      if (en <= 1.0) {
        t = last ? t_end : t + step;
        rho = std::move(next);
        k1 = k7;
        if (opt_.check_truncation) {
          const double pop = top_population(rho, sets_);
          if (pop > opt_.truncation_tol) raise_truncation(pop, opt_.truncation_tol);
        }
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (!last || fac < 1.0) h = step * fac;
      } else {
        h = step * std::max(0.2, 0.9 * std::pow(en, -0.25));
      }
    }
  }

 private:
  double initial_step(const Matrix& rho, const Matrix& f0, double span) const {
    const double d0 = rho.cwiseAbs().maxCoeff();
    const double d1 = f0.cwiseAbs().maxCoeff();
    if (d1 <= 0.0 || d0 <= 0.0) return span;
    return std::min(span, 0.01 * d0 / d1);
  }

  const Liouvillian& L_;
  const EvolveOptions& opt_;
  std::vector<std::vector<Eigen::Index>> sets_;
  std::size_t steps_ = 0;
};

Matrix unvec(const Vector& v, Eigen::Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

}  // namespace

std::vector<DensityMatrix> evolve(const Liouvillian& L, const DensityMatrix& rho0, std::span<const double> t_grid,
                                  const EvolveOptions& options) {
  require_same_space(L.space(), rho0.space(), "evolve");
  if (t_grid.empty()) return {};
  if (t_grid.front() < 0.0) throw ValidationError("evolve: t_grid must start at t >= 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= t_grid[i - 1])) throw ValidationError("evolve: t_grid must be ascending");
  }
  rho0.validate();

  const auto d = static_cast<Eigen::Index>(L.space().total_dim());
  const auto sets = top_level_sets(L.space());
  std::vector<DensityMatrix> out;
  out.reserve(t_grid.size());

  auto emit = [&](const Matrix& m) {
    if (options.check_truncation) {
      const double pop = top_population(m, sets);
      if (pop > options.truncation_tol) raise_truncation(pop, options.truncation_tol);
    }
    DensityMatrix dm(L.space_ptr(), m);
    if (options.validate_outputs) dm.validate();
    out.push_back(std::move(dm));
  };

  if (options.check_truncation) {
    const double pop = top_population(rho0.matrix(), sets);
    if (pop > options.truncation_tol) raise_truncation(pop, options.truncation_tol);
  }

  if (options.backend == EvolveBackend::RungeKutta) {
    DormandPrince stepper(L, options);
    Matrix rho = rho0.matrix();
    double t = 0.0;
    double h = 0.0;
    for (double target : t_grid) {
      stepper.advance(rho, t, target, h);
      emit(rho);
    }
    return out;
  }

  if (static_cast<std::size_t>(d * d) > kMaxExpmSuperDim) {
    throw ValidationError("matrix-exponential backend limited to superoperator dimension " +
                          std::to_string(kMaxExpmSuperDim));
  }
  const Matrix S = L.dense_superoperator();
  std::map<double, Matrix> propagators;
  Vector v = vec(rho0.matrix());
  double t = 0.0;
  for (double target : t_grid) {
    const double dt = target - t;
    if (dt > 0.0) {
      auto it = propagators.find(dt);
      if (it == propagators.end()) it = propagators.emplace(dt, (S * dt).exp()).first;
      v = it->second * v;
      t = target;
    }
    emit(unvec(v, d));
  }
  return out;
}

namespace {

Vector solve_with_trace_row(const SparseMatrix& S, Eigen::Index d, Eigen::Index replaced_row) {
  const Eigen::Index n = S.rows();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(S.nonZeros() + d));
  for (Eigen::Index k = 0; k < S.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(S, k); it; ++it) {
      if (it.row() != replaced_row) trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (Eigen::Index i = 0; i < d; ++i) trips.emplace_back(replaced_row, i * d + i, cplx(1.0));
  SparseMatrix A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    throw DegenerateNullSpace("steady_state: Liouvillian null space is not one-dimensional (singular system)");
  }
  Vector b = Vector::Zero(n);
  b(replaced_row) = 1.0;
  Vector x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw DegenerateNullSpace("steady_state: solve failed; null space is not one-dimensional");
  }
  return x;
}

}  // namespace

DensityMatrix steady_state(const Liouvillian& L, const SteadyStateOptions& options) {
  const auto d = static_cast<Eigen::Index>(L.space().total_dim());
  const SparseMatrix& S = L.superoperator();

  const Vector x0 = solve_with_trace_row(S, d, 0);
  if (d > 1) {
    const Vector x1 = solve_with_trace_row(S, d, (d - 1) * d + (d - 1));
    const double scale = std::max(x0.cwiseAbs().maxCoeff(), 1.0);
    const double diff = (x0 - x1).cwiseAbs().maxCoeff();
    if (diff > options.agreement_tol * scale) {
      std::ostringstream os;
      os << "steady_state: degenerate null space (independent normalisations disagree by " << diff << ")";
      throw DegenerateNullSpace(os.str());
    }
  }

  Matrix rho = unvec(x0, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();

  const double residual = (S * vec(rho)).cwiseAbs().maxCoeff();
  if (residual > options.residual_tol * std::max(L.norm(), 1e-300)) {
    std::ostringstream os;
    os << "steady_state: residual " << residual << " exceeds " << options.residual_tol << " * ||L||";
    throw NumericalError(os.str());
  }
  if (options.check_truncation) {
    const double pop = top_population(rho, top_level_sets(L.space()));
    if (pop > options.truncation_tol) raise_truncation(pop, options.truncation_tol);
  }
  DensityMatrix out(L.space_ptr(), std::move(rho));
  out.validate();
  return out;
}

cplx expectation(const DensityMatrix& rho, const QOperator& op) {
  require_same_space(rho.space(), op.space(), "expectation");
  return rho.matrix().transpose().cwiseProduct(op.matrix()).sum();
}

}  // namespace reicqed
