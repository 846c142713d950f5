#include "reicqed/wgmio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/parallel.hpp"

namespace reicqed {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

void require_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw ValidationError(std::string(what) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ValidationError(std::string(what) + " has a non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError(std::string(what) + " must be strictly ascending");
  }
}

double kappa_all_of(const CqedRates& rates, double kappa_out) {
  rates.validate();
  if (!(kappa_out >= 0.0)) throw ValidationError("kappa_out must be non-negative");
  const double k = rates.kappa + kappa_out;
  if (!(k > 0.0)) throw ValidationError("kappa + kappa_out must be positive");
  return k;
}

cd t_empty_at(double kappa, double kappa_out, double beta, double d) {
  const cd z = I * d + 0.5 * (kappa + kappa_out);
  return 1.0 - kappa_out * z / (z * z + beta * beta);
}

// Poisson population on levels >= n for mean photon number nbar.
double coherent_tail(double nbar, std::size_t n) {
  double p = std::exp(-nbar), inside = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    inside += p;
    p *= nbar / static_cast<double>(k + 1);
  }
  return std::max(0.0, 1.0 - inside);
}

}  // namespace

BackscatterSystem build_backscatter(const CqedRates& rates, double beta, double drive_E, std::size_t n_fock,
                                    double truncation_tol) {
  const double ka = kappa_all_of(rates, rates.kappa_out);
  if (n_fock < 2) throw ValidationError("build_backscatter: Fock truncation must be >= 2");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be non-negative");
  if (!(drive_E >= 0.0) || !std::isfinite(drive_E)) throw ValidationError("drive amplitude must be non-negative");
  const double nbar = std::pow(2.0 * drive_E / ka, 2);
  const double tail = coherent_tail(nbar, n_fock - 1);
  if (tail > truncation_tol) {
    throw TruncationError("drive of " + std::to_string(drive_E) + " Hz leaves " + std::to_string(tail) +
                          " population in the top Fock levels; raise truncation or weaken the drive");
  }
  auto space = make_space({Factor::two_level("ion"), Factor::fock(n_fock, "cw"), Factor::fock(n_fock, "ccw")});
  const auto sm = lowering(space, 0);
  const auto a = annihilation(space, 1);
  const auto b = annihilation(space, 2);
  const double d_al = -to_angular(rates.delta_la);
  const double d_cl = to_angular(rates.delta_ca - rates.delta_la);
  const double g = to_angular(rates.g);
  const double bw = to_angular(beta);
  const double E = to_angular(drive_E);
  QOperator H = d_al * excited_projector(space, 0) + d_cl * (number(space, 1) + number(space, 2)) +
                g * (sm.adjoint() * a + sm.adjoint() * b + sm * a.adjoint() + sm * b.adjoint()) -
                bw * (a.adjoint() * b + b.adjoint() * a) + cd(0.0, E) * (a.adjoint() - a);
  return {rates, beta, drive_E, space, std::move(H)};
}

std::complex<double> t_empty_point(const CqedRates& rates, double beta, double kappa_out, double delta_cl) {
  return t_empty_at(rates.kappa, kappa_out, beta, delta_cl);
}

std::complex<double> t_coupled_point(const CqedRates& rates, double kappa_out, double delta_cl) {
  const double ka = rates.kappa + kappa_out;
  const double d_al = delta_cl - rates.delta_ca;
  const cd num = kappa_out * (I * delta_cl + 0.5 * rates.gamma);
  const cd den = 2.0 * (I * d_al + 0.5 * ka) * (I * d_al + 0.5 * rates.gamma) + 4.0 * rates.g * rates.g;
  return 1.0 - num / den;
}

cvec t_empty(const CqedRates& rates, double beta, double kappa_out, std::span<const double> delta_cl) {
  kappa_all_of(rates, kappa_out);
  cvec t(delta_cl.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = t_empty_at(rates.kappa, kappa_out, beta, delta_cl[i]);
  return t;
}

cvec t_coupled(const CqedRates& rates, double /*beta*/, double kappa_out, std::span<const double> delta_cl) {
  kappa_all_of(rates, kappa_out);
  cvec t(delta_cl.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = t_coupled_point(rates, kappa_out, delta_cl[i]);
  return t;
}

std::vector<double> intensity(const cvec& t) {
  std::vector<double> T(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) T[i] = std::norm(t[i]);
  return T;
}

TransmissionCurve transmission_curve(const CqedRates& rates, double beta, std::span<const double> delta_cl) {
  require_grid(delta_cl, "detuning grid");
  TransmissionCurve c;
  c.detuning.assign(delta_cl.begin(), delta_cl.end());
  c.t_down = intensity(t_empty(rates, beta, rates.kappa_out, delta_cl));
  c.t_up = intensity(t_coupled(rates, beta, rates.kappa_out, delta_cl));
  c.contrast.resize(c.detuning.size());
  for (std::size_t i = 0; i < c.contrast.size(); ++i) c.contrast[i] = std::abs(c.t_up[i] - c.t_down[i]);
  return c;
}

double critical_kappa_out(double kappa, double beta) { return std::sqrt(kappa * kappa + 4.0 * beta * beta); }

CriticalCoupling critical_coupling_search(const CqedRates& rates, double beta, std::span<const double> grid) {
  require_grid(grid, "kappa_out grid");
  if (grid.size() < 3) throw ValidationError("kappa_out grid needs at least 3 points");
  if (!(grid.front() >= 0.0)) throw ValidationError("kappa_out grid must be non-negative");
  auto T = [&](double k) { return std::norm(t_empty_at(rates.kappa, k, beta, 0.0)); };
  std::size_t imin = 0;
  double vmin = T(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = T(grid[i]);
    if (v < vmin) vmin = v, imin = i;
  }
  if (imin == 0 || imin + 1 == grid.size()) {
    throw BoundaryOptimumError("critical coupling: minimum of on-resonance transmission at the grid boundary (kappa_out = " +
                               std::to_string(grid[imin]) + " Hz)");
  }
  double lo = grid[imin - 1], hi = grid[imin + 1];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = T(x1), f2 = T(x2);
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = T(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = T(x2);
    }
  }
  const double k = 0.5 * (lo + hi);
  return {k, T(k), beta};
}

cvec transmission_numeric(const BackscatterSystem& sys, SpinState spin, std::span<const double> delta_cl,
                          const NumericTransmissionOptions& options) {
  require_grid(delta_cl, "detuning grid");
  if (!(sys.drive_E > 0.0)) throw ValidationError("transmission_numeric needs a positive drive amplitude");
  const double ka = kappa_all_of(sys.rates, sys.rates.kappa_out);
  CqedRates base = sys.rates;
  if (spin == SpinState::Down) base.delta_ca -= options.spin_detuning;
  const DissipatorSpec diss{{to_angular(ka)}, to_angular(base.gamma), to_angular(base.gamma_p)};
  cvec t(delta_cl.size());
  std::vector<double> pop(delta_cl.size());
  const std::size_t workers = options.workers == 0 ? worker_count() : options.workers;
  parallel_for(
      delta_cl.size(),
      [&](std::size_t i) {
        CqedRates r = base;
        r.delta_la = base.delta_ca - delta_cl[i];
        const auto s = build_backscatter(r, sys.beta, sys.drive_E, options.n_fock);
        const auto rho = steady_state(build_liouvillian(s.hamiltonian, diss), options.steady);
        const cd a = expectation(rho, annihilation(s.space, 1));
        pop[i] = (expectation(rho, number(s.space, 1)) + expectation(rho, number(s.space, 2))).real();
        t[i] = 1.0 - sys.rates.kappa_out * a / sys.drive_E;
      },
      workers);
  const double top = *std::max_element(pop.begin(), pop.end());
  if (top >= options.max_population) {
    throw ValidationError("transmission_numeric: drive too strong, cavity population reaches " + std::to_string(top));
  }
  return t;
}

cvec transmission_numeric_standing_wave(const CqedRates& rates, double drive_E, std::span<const double> delta_cl,
                                        const NumericTransmissionOptions& options) {
  require_grid(delta_cl, "detuning grid");
  if (!(drive_E > 0.0)) throw ValidationError("standing-wave oracle needs a positive drive amplitude");
  const double ka = kappa_all_of(rates, rates.kappa_out);
  auto space = make_space({Factor::two_level("ion"), Factor::fock(options.n_fock, "standing")});
  const auto sm = lowering(space, 0);
  const auto a = annihilation(space, 1);
  const DissipatorSpec diss{{to_angular(ka)}, to_angular(rates.gamma), to_angular(rates.gamma_p)};
  const double gs = std::sqrt(2.0) * to_angular(rates.g);
  const double E = to_angular(drive_E);
  cvec t(delta_cl.size());
  std::vector<double> pop(delta_cl.size());
  const std::size_t workers = options.workers == 0 ? worker_count() : options.workers;
  parallel_for(
      delta_cl.size(),
      [&](std::size_t i) {
        const double d_cl = to_angular(delta_cl[i]);
        const double d_al = to_angular(delta_cl[i] - rates.delta_ca);
        const QOperator H = d_al * excited_projector(space, 0) + d_cl * number(space, 1) +
                            gs * (sm.adjoint() * a + sm * a.adjoint()) + cd(0.0, E) * (a.adjoint() - a);
        const auto rho = steady_state(build_liouvillian(H, diss), options.steady);
        pop[i] = expectation(rho, number(space, 1)).real();
        t[i] = 1.0 - 0.5 * rates.kappa_out * expectation(rho, a) / drive_E;
      },
      workers);
  const double top = *std::max_element(pop.begin(), pop.end());
  if (top >= options.max_population) {
    throw ValidationError("standing-wave oracle: drive too strong, cavity population reaches " + std::to_string(top));
  }
  return t;
}

}  // namespace reicqed
