#pragma once

// Degenerate parametric drive on the cavity mode and the resulting
// squeezing-enhanced coupling. Angular units (rad/s) unless a name ends
// in _hz.

#include <optional>
#include <span>
#include <vector>

#include "reicqed/cqedcalc.hpp"
#include "reicqed/qcore.hpp"

namespace reicqed {

struct PumpDrive {
  double power = 0.0;   // W
  double omega0 = 0.0;  // ion transition, rad/s; the pump sits at 2 omega0
  double chi2 = 0.0;    // m/V
  double V = 0.0;       // m^3
  double theta = 0.0;
  // External coupling of the pump mode; defaults to half the pump linewidth.
  std::optional<double> pump_kappa_out;
  // Dimensionless factor multiplying <b>.
  double calibration = 1.0;

  void validate() const;
};

// calibration * sqrt(4 P kappa_out_p / (hbar omega_p kappa_p^2))
double pump_amplitude(const PumpDrive& drive, double pump_linewidth);
// 2 sqrt(hbar omega0^3 / (eps0 V)) chi2 <b>
double omega_from_power(const PumpDrive& drive, double pump_linewidth);

struct SqueezeFrame {
  double r = 0.0;
  double delta_c = 0.0;
  double Omega = 0.0;
  double delta_alpha = 0.0;
  double theta = 0.0;

  double enhancement() const;  // cosh r
};

// Throws InstabilityError unless 0 <= Omega < delta_c.
SqueezeFrame squeeze_params(double delta_c, double Omega, double theta = 0.0);
// Omega / delta_c that produces cosh r = enhancement.
double omega_ratio_for_enhancement(double enhancement);

// Calibration factor for which `anchor_power` gives g_eff / g = enhancement.
double calibrate(PumpDrive drive, double pump_linewidth, double delta_c, double anchor_power = 1e-9,
                 double enhancement = 10.0);

// H = g (s+ a + s- a+) + Da s+s- + Dc a+a + (Omega/2)(a^2 e^{2i theta} + a+^2 e^{-2i theta})
// with Da = -delta_la, Dc = delta_ca - delta_la taken from the rates (Hz) and
// Omega, theta in the drive. Throws TruncationError when the frame's squeezed
// vacuum leaves more than truncation_tol outside the Fock space.
QOperator build_pamp_hamiltonian(const CqedRates& rates, double Omega, double theta, std::size_t n_fock,
                                 double truncation_tol = 1e-6);

// Population of the squeezed vacuum with parameter r on levels >= n.
double squeezed_vacuum_tail(double r, std::size_t n);

// Lowest level spacings (rad/s) of the uncoupled (g = 0) parametrically driven
// cavity at detuning delta_c and drive Omega; ideally all sqrt(delta_c^2 - Omega^2).
std::vector<double> pamp_level_spacings(double delta_c, double Omega, std::size_t count = 6, std::size_t n_fock = 50);

// g -> g cosh r; ion and transformed mode both at delta_alpha in the frame.
CqedRates effective_model(const SqueezeFrame& frame, const CqedRates& rates);

struct EnhancementRow {
  double power_w = 0.0;
  double omega = 0.0;
  double r = 0.0;
  double g_eff_hz = 0.0;
};

std::vector<EnhancementRow> enhancement_curve(const CqedRates& rates, const PumpDrive& drive_template,
                                              double pump_linewidth, double delta_c,
                                              std::span<const double> power_grid);

struct RwaReport {
  double ratio = 0.0;  // delta_alpha / (g sinh r)
  double max_rel_deviation = 0.0;
  bool questionable = false;  // deviation > 1e-2
  std::vector<double> rwa_levels;
  std::vector<double> full_levels;
};

// Transition energies of the two lowest RWA excitations against the matching
// eigenstates of the full transformed Hamiltonian, on an n_fock-level space.
RwaReport validate_rwa(const CqedRates& rates, const SqueezeFrame& frame, std::size_t n_fock = 12);

}  // namespace reicqed
