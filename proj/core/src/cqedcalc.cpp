#include "reicqed/cqedcalc.hpp"

#include <cmath>
#include <limits>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"

namespace reicqed {

using namespace constants;

namespace {

void require_positive(double v, const std::string& what) {
  if (!(std::isfinite(v) && v > 0.0)) throw ValidationError(what + " must be positive and finite");
}

void require_non_negative(double v, const std::string& what) {
  if (!(std::isfinite(v) && v >= 0.0)) throw ValidationError(what + " must be non-negative and finite");
}

void require_ascending_positive(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw ValidationError(std::string(what) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_positive(grid[i], what);
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError(std::string(what) + " must be strictly ascending");
  }
}

double omega_of(double lambda) { return two_pi * c / lambda; }

}  // namespace

void IonSpecies::validate() const {
  require_positive(lambda_a, name + ": lambda_a");
  if (!(n_host >= 1.0) || !std::isfinite(n_host)) throw ValidationError(name + ": n_host must be >= 1");
  if (!t_spon && !mu) throw ValidationError(name + ": one of t_spon or mu is required");
  if (t_spon) require_positive(*t_spon, name + ": t_spon");
  if (mu) require_positive(*mu, name + ": mu");
  require_non_negative(gamma_p, name + ": gamma_p");
  if (t_d) require_positive(*t_d, name + ": t_d");
}

void CavityDesign::validate() const {
  require_positive(V, "cavity V");
  if (!(n_cavity >= 1.0) || !std::isfinite(n_cavity)) throw ValidationError("cavity n_cavity must be >= 1");
  for (const auto& q : {Q_r, Q_m, Q_s}) {
    if (q && !(*q > 0.0)) throw ValidationError("partial Q must be positive");
  }
  require_non_negative(kappa_out, "cavity kappa_out");
  require_non_negative(beta, "cavity beta");
  require_non_negative(radius, "cavity radius");
  require_non_negative(thickness, "cavity thickness");
}

void CqedRates::validate() const {
  require_non_negative(g, "g");
  require_non_negative(kappa, "kappa");
  require_non_negative(kappa_out, "kappa_out");
  require_non_negative(gamma, "gamma");
  require_non_negative(gamma_p, "gamma_p");
  if (!std::isfinite(delta_ca) || !std::isfinite(delta_la)) throw ValidationError("detunings must be finite");
}

double kappa_from_q(double lambda_c, double Q) {
  require_positive(lambda_c, "lambda_c");
  require_positive(Q, "Q");
  return (c / lambda_c) / (2.0 * Q);
}

const char* to_string(KappaConvention conv) {
  return conv == KappaConvention::HalfNuOverQ ? "nu/2Q" : "nu/Q";
}

const std::vector<ReferenceCavity>& reference_cavities() {
  static const std::vector<ReferenceCavity> rows = {
      {"Yb:YVO4", 984.5e-9, 31.4e9, 23.9e6, 9.7e3, 27},
      {"Er:LiNbO3", 1533.27e-9, 2.0e9, 2.8e6, 1e5, 177},
      {"Er:CaWO4", 1532.6e-9, 1.0e9, 2.3e6, 1.9e5, 850},
      {"Er:MO2", 1532e-9, 3.14e9, 2.49e6, 6.2e4, 1040},
      {"Er:Y2SiO5", 1536e-9, 1.25e9, 0.74e6, 2e5, 170},
      {"Yb:LiNbO3", 980e-9, 3.83e9, 1.9e6, 8e4, 10},
  };
  return rows;
}

std::vector<CrosscheckRow> table_crosscheck(std::span<const ReferenceCavity> rows, double rel_tol) {
  std::vector<CrosscheckRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    CrosscheckRow row{r, kappa_from_q(r.lambda, r.Q), 2.0 * kappa_from_q(r.lambda, r.Q), std::nullopt};
    const double d_half = std::abs(row.kappa_half_nu_over_q / r.kappa_quoted - 1.0);
    const double d_full = std::abs(row.kappa_nu_over_q / r.kappa_quoted - 1.0);
    if (d_full <= rel_tol && d_full <= d_half) {
      row.matched = KappaConvention::NuOverQ;
    } else if (d_half <= rel_tol) {
      row.matched = KappaConvention::HalfNuOverQ;
    }
    out.push_back(row);
  }
  return out;
}

double chi_local(double n) {
  if (!(n >= 1.0)) throw ValidationError("refractive index must be >= 1");
  const double t = n * n + 2.0;
  return t * t / 9.0;
}

double dipole_from_lifetime(const IonSpecies& ion) {
  if (!ion.t_spon) throw ValidationError(ion.name + ": dipole_from_lifetime needs t_spon");
  require_positive(*ion.t_spon, ion.name + ": t_spon");
  require_positive(ion.lambda_a, ion.name + ": lambda_a");
  const double n = ion.n_host;
  const double l3 = std::pow(ion.lambda_a, 3);
  return std::sqrt(3.0 * epsilon0 * hbar * l3 / (8.0 * pi * n * chi_local(n) * *ion.t_spon));
}

double lifetime_from_dipole(const IonSpecies& ion) {
  if (!ion.mu) throw ValidationError(ion.name + ": lifetime_from_dipole needs mu");
  require_positive(*ion.mu, ion.name + ": mu");
  require_positive(ion.lambda_a, ion.name + ": lambda_a");
  const double n = ion.n_host;
  const double l3 = std::pow(ion.lambda_a, 3);
  return 3.0 * epsilon0 * hbar * l3 / (8.0 * pi * n * chi_local(n) * *ion.mu * *ion.mu);
}

IonSpecies resolve(IonSpecies ion) {
  ion.validate();
  if (!ion.mu) ion.mu = dipole_from_lifetime(ion);
  if (!ion.t_spon) ion.t_spon = lifetime_from_dipole(ion);
  return ion;
}

double coupling_g(const IonSpecies& ion, const CavityDesign& cav) {
  if (!ion.mu) throw ValidationError(ion.name + ": coupling_g needs a dipole moment (derive it from the lifetime first)");
  require_positive(*ion.mu, ion.name + ": mu");
  require_positive(ion.lambda_a, ion.name + ": lambda_a");
  cav.validate();
  const double g = (*ion.mu / cav.n_cavity) * std::sqrt(omega_of(ion.lambda_a) / (2.0 * hbar * epsilon0 * cav.V));
  return to_ordinary(g);
}

double strong_coupling_fom(const IonSpecies& ion, double Q, double k) {
  require_positive(Q, "Q");
  require_positive(k, "k");
  const auto r = resolve(ion);
  return 3.0 * Q * Q / (16.0 * pi * pi * chi_local(r.n_host) * k * omega_of(r.lambda_a) * *r.t_spon);
}

double q_threshold(const IonSpecies& ion, double k) {
  require_positive(k, "k");
  const auto r = resolve(ion);
  return std::sqrt(16.0 * pi * pi * chi_local(r.n_host) * k * omega_of(r.lambda_a) * *r.t_spon / 3.0);
}

double q_combine(std::optional<double> Q_r, std::optional<double> Q_m, std::optional<double> Q_s) {
  double inv = 0.0;
  int finite = 0;
  for (const auto& q : {Q_r, Q_m, Q_s}) {
    if (!q) continue;
    if (!(*q > 0.0)) throw ValidationError("partial Q must be positive");
    if (std::isinf(*q)) continue;
    inv += 1.0 / *q;
    ++finite;
  }
  if (!Q_r && !Q_m && !Q_s) throw ValidationError("q_combine: no partial Q given");
  if (finite == 0) return std::numeric_limits<double>::infinity();
  return 1.0 / inv;
}

double cooperativity(const CqedRates& rates) {
  rates.validate();
  const double den = rates.kappa_all() * rates.gamma;
  if (!(den > 0.0)) throw ValidationError("cooperativity: kappa + kappa_out and gamma must be positive");
  return 4.0 * rates.g * rates.g / den;
}

EoShift eo_tuning(double voltage, double rate_m_per_v, double lambda) {
  require_positive(rate_m_per_v, "tuning rate");
  require_positive(lambda, "lambda");
  if (!std::isfinite(voltage)) throw ValidationError("voltage must be finite");
  const double dl = rate_m_per_v * voltage;
  return {dl, c * dl / (lambda * lambda)};
}

FeasibilityMap feasibility_map(std::span<const IonSpecies> ions, std::span<const double> k_grid,
                               std::span<const double> q_grid) {
  if (ions.empty()) throw ValidationError("feasibility_map: no ions");
  require_ascending_positive(k_grid, "k grid");
  require_ascending_positive(q_grid, "Q grid");
  FeasibilityMap map;
  map.points.reserve(ions.size() * k_grid.size() * q_grid.size());
  for (const auto& raw : ions) {
    const auto ion = resolve(raw);
    FeasibilityContour contour{ion.name, {}, {}};
    for (double k : k_grid) {
      contour.k.push_back(k);
      contour.q_threshold.push_back(q_threshold(ion, k));
      for (double Q : q_grid) {
        const double f = strong_coupling_fom(ion, Q, k);
        map.points.push_back({ion.name, k, Q, f, f > 1.0});
      }
    }
    map.contours.push_back(std::move(contour));
  }
  return map;
}

CqedRates derive_rates(const IonSpecies& ion_in, const CavityDesign& cav) {
  const auto ion = resolve(ion_in);
  cav.validate();
  CqedRates r;
  r.g = coupling_g(ion, cav);
  const double Q = q_combine(cav.Q_r, cav.Q_m, cav.Q_s);
  const double lambda = cav.lambda_c > 0.0 ? cav.lambda_c : ion.lambda_a;
  r.kappa = std::isinf(Q) ? 0.0 : kappa_from_q(lambda, Q);
  r.kappa_out = cav.kappa_out;
  r.gamma = 1.0 / (two_pi * *ion.t_spon);
  r.gamma_p = ion.gamma_p;
  return r;
}

}  // namespace reicqed
