#pragma once

// Spin-photon gate fidelity for a Gaussian time-bin pulse scattered off the
// spin-conditional cavity transmission.

#include <complex>
#include <span>
#include <vector>

#include "reicqed/cqedcalc.hpp"

namespace reicqed {

struct PulseEnvelope {
  double t_gate = 0.0;  // intensity FWHM, s
  double center = 0.0;  // Hz, on the Delta_cl axis
  double sigma = 0.0;   // spectral intensity std, Hz
  std::vector<double> grid;
  std::vector<double> f;  // amplitude on the grid, int |f|^2 dnu = 1

  double operator()(double nu) const;
  double lo() const { return grid.front(); }
  double hi() const { return grid.back(); }
};

// sigma_t = t_gate / (2 sqrt(2 ln 2)), sigma_omega = 1 / (2 sigma_t).
double spectral_sigma_hz(double t_gate);

// Throws ValidationError unless the grid spans at least +-6 sigma and the
// normalization over the span holds to 1e-9.
PulseEnvelope gaussian_envelope(double t_gate, double center, std::span<const double> grid);
// Uniform grid of n points over center +- half_width_sigmas * sigma.
PulseEnvelope gaussian_envelope(double t_gate, double center = 0.0, double half_width_sigmas = 8.0,
                                std::size_t n = 2001);

struct Overlaps {
  std::complex<double> bright;  // ion-coupled branch
  std::complex<double> dark;    // empty-cavity branch
};

Overlaps pulse_overlaps(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& pulse);
// Trapezoid rule on the pulse grid instead of adaptive quadrature.
Overlaps pulse_overlaps_on_grid(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& pulse);

// |bright|^2 (1 + exp(-t_g / T_d)) / (2 (|bright|^2 + |dark|^2))
double fidelity_from_overlaps(const Overlaps& o, double t_g, double T_d);

double fidelity(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& pulse, double T_d,
                double t_g);

struct FidelityCurve {
  std::vector<double> t_gate;
  std::vector<double> F;
  double t_opt = 0.0;
  double F_max = 0.0;
};

struct GateScenario {
  CqedRates rates;
  double beta = 0.0;
  double kappa_out = 0.0;
  std::vector<double> t_grid;
};

// t_g = t_gate. Golden-section refinement in log t around the grid
// maximum; throws BoundaryOptimumError when the maximum is an end point.
FidelityCurve fidelity_curve(const CqedRates& rates, double beta, double kappa_out, std::span<const double> t_grid,
                             double T_d);

struct DecoherenceRow {
  double T_d = 0.0;
  double t_opt = 0.0;
  double F_max = 0.0;
};

std::vector<DecoherenceRow> decoherence_extension(const GateScenario& scenario, std::span<const double> T_d_list);

}  // namespace reicqed
