#pragma once

// Closed-form cavity-QED parameter calculators. Public frequencies and rates
// are ordinary (Hz); lengths in metres; dipoles in C m.

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reicqed {

struct IonSpecies {
  std::string name;
  double lambda_a = 0.0;
  std::optional<double> t_spon;
  std::optional<double> mu;
  double n_host = 1.0;
  double gamma_p = 0.0;
  std::optional<double> t_d;
  std::string source;

  // At least one of t_spon / mu must be present.
  void validate() const;
  bool operator==(const IonSpecies&) const = default;
};

struct CavityDesign {
  double radius = 0.0;
  double thickness = 0.0;
  double n_cavity = 1.0;
  double lambda_c = 0.0;
  double V = 0.0;
  // Missing partial Q means lossless (infinite).
  std::optional<double> Q_r;
  std::optional<double> Q_m;
  std::optional<double> Q_s;
  double kappa_out = 0.0;
  double beta = 0.0;

  void validate() const;
  bool operator==(const CavityDesign&) const = default;
};

struct CqedRates {
  double g = 0.0;
  double kappa = 0.0;
  double kappa_out = 0.0;
  double gamma = 0.0;
  double gamma_p = 0.0;
  double delta_ca = 0.0;
  double delta_la = 0.0;

  double kappa_all() const { return kappa + kappa_out; }
  void validate() const;
  bool operator==(const CqedRates&) const = default;
};

// (c / lambda) / (2 Q)
double kappa_from_q(double lambda_c, double Q);

enum class KappaConvention { HalfNuOverQ, NuOverQ };
const char* to_string(KappaConvention c);

struct ReferenceCavity {
  std::string ion;
  double lambda = 0.0;
  double kappa_quoted = 0.0;
  double g_quoted = 0.0;
  double Q = 0.0;
  double purcell_quoted = 0.0;
};

struct CrosscheckRow {
  ReferenceCavity ref;
  double kappa_half_nu_over_q = 0.0;
  double kappa_nu_over_q = 0.0;
  // Convention reproducing kappa_quoted within the tolerance, if any.
  std::optional<KappaConvention> matched;
};

const std::vector<ReferenceCavity>& reference_cavities();
std::vector<CrosscheckRow> table_crosscheck(std::span<const ReferenceCavity> rows, double rel_tol = 0.03);

// Local-field correction (n^2 + 2)^2 / 9
double chi_local(double n);

double dipole_from_lifetime(const IonSpecies& ion);
double lifetime_from_dipole(const IonSpecies& ion);
// Fills whichever of t_spon / mu is missing.
IonSpecies resolve(IonSpecies ion);

// g/2pi from (mu/n) sqrt(omega_a / (2 hbar eps0 V)), n taken from the cavity.
double coupling_g(const IonSpecies& ion, const CavityDesign& cav);

// 3 Q^2 / (16 pi^2 chi_l k omega T_spon), k = V / lambda^3
double strong_coupling_fom(const IonSpecies& ion, double Q, double k);
// Q at which the figure of merit equals one.
double q_threshold(const IonSpecies& ion, double k);

double q_combine(std::optional<double> Q_r, std::optional<double> Q_m, std::optional<double> Q_s);

// 4 g^2 / (kappa_all gamma)
double cooperativity(const CqedRates& rates);

struct EoShift {
  double delta_lambda = 0.0;
  double delta_nu = 0.0;
};
EoShift eo_tuning(double voltage, double rate_m_per_v, double lambda);

struct FeasibilityPoint {
  std::string ion;
  double k = 0.0;
  double Q = 0.0;
  double fom = 0.0;
  bool feasible = false;
};

struct FeasibilityContour {
  std::string ion;
  std::vector<double> k;
  std::vector<double> q_threshold;
};

struct FeasibilityMap {
  std::vector<FeasibilityPoint> points;
  std::vector<FeasibilityContour> contours;
};

FeasibilityMap feasibility_map(std::span<const IonSpecies> ions, std::span<const double> k_grid,
                               std::span<const double> q_grid);

// Rates implied by an ion/cavity pair; gamma = 1/(2 pi T_spon).
CqedRates derive_rates(const IonSpecies& ion, const CavityDesign& cav);

}  // namespace reicqed
