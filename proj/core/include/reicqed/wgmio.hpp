#pragma once

// Travelling-wave resonator (CW/CCW pair with backscattering) coupled to a
// fibre, and its spin-conditional transmission. Rates and detunings in Hz;
// the grid variable is the cavity-laser detuning Delta_cl.

#include <complex>
#include <span>
#include <vector>

#include "reicqed/cqedcalc.hpp"
#include "reicqed/lindblad.hpp"
#include "reicqed/qcore.hpp"

namespace reicqed {

struct BackscatterSystem {
  CqedRates rates;
  double beta = 0.0;
  double drive_E = 0.0;  // Hz
  SpacePtr space;        // TwoLevel (x) Fock(CW) (x) Fock(CCW)
  // rad/s:  Dal s+s- + Dcl (a+a + b+b) + g (s+ a + s+ b + h.c.) - beta (a+b + b+a) + i E (a+ - a)
  QOperator hamiltonian;
};

BackscatterSystem build_backscatter(const CqedRates& rates, double beta, double drive_E, std::size_t n_fock = 4,
                                    double truncation_tol = 1e-6);

using cvec = std::vector<std::complex<double>>;

// Single-point versions without input validation.
std::complex<double> t_empty_point(const CqedRates& rates, double beta, double kappa_out, double delta_cl);
std::complex<double> t_coupled_point(const CqedRates& rates, double kappa_out, double delta_cl);

// Ion decoupled.
cvec t_empty(const CqedRates& rates, double beta, double kappa_out, std::span<const double> delta_cl);
// Ion resonant, printed single-formula model.
cvec t_coupled(const CqedRates& rates, double beta, double kappa_out, std::span<const double> delta_cl);

struct TransmissionCurve {
  std::vector<double> detuning;
  std::vector<double> t_down;
  std::vector<double> t_up;
  std::vector<double> contrast;
};

TransmissionCurve transmission_curve(const CqedRates& rates, double beta, std::span<const double> delta_cl);

struct CriticalCoupling {
  double kappa_out = 0.0;
  double t_min = 0.0;
  double beta = 0.0;
};

// Minimises on-resonance empty-cavity transmission over kappa_out; throws
// BoundaryOptimumError when the grid minimum sits on an end point.
CriticalCoupling critical_coupling_search(const CqedRates& rates, double beta, std::span<const double> kappa_out_grid);
// Closed-form zero of the on-resonance empty-cavity transmission.
double critical_kappa_out(double kappa, double beta);

enum class SpinState { Down, Up };

struct NumericTransmissionOptions {
  std::size_t n_fock = 4;
  // Ion offset used for the |down> branch.
  double spin_detuning = 100e9;
  double max_population = 0.01;
  SteadyStateOptions steady;
  std::size_t workers = 0;
};

// t = 1 - kappa_out <a_CW> / E from the steady state of the full model.
cvec transmission_numeric(const BackscatterSystem& sys, SpinState spin, std::span<const double> delta_cl,
                          const NumericTransmissionOptions& options = {});

// Single standing-wave mode, coupling g sqrt(2), fed at kappa_out / 2.
cvec transmission_numeric_standing_wave(const CqedRates& rates, double drive_E, std::span<const double> delta_cl,
                                        const NumericTransmissionOptions& options = {});

std::vector<double> intensity(const cvec& t);

}  // namespace reicqed
