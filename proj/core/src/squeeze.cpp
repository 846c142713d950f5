#include "reicqed/squeeze.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/jcmodel.hpp"

namespace reicqed {

using namespace constants;

void PumpDrive::validate() const {
  if (!(power >= 0.0) || !std::isfinite(power)) throw ValidationError("pump power must be non-negative");
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ValidationError("pump omega0 must be positive");
  if (!(chi2 > 0.0) || !std::isfinite(chi2)) throw ValidationError("chi2 must be positive");
  if (!(V > 0.0) || !std::isfinite(V)) throw ValidationError("pump mode volume must be positive");
  if (!std::isfinite(theta)) throw ValidationError("pump phase must be finite");
  if (pump_kappa_out && !(*pump_kappa_out >= 0.0)) throw ValidationError("pump kappa_out must be non-negative");
  if (!(calibration > 0.0) || !std::isfinite(calibration)) throw ValidationError("calibration must be positive");
}

double pump_amplitude(const PumpDrive& drive, double pump_linewidth) {
  drive.validate();
  if (!(pump_linewidth > 0.0)) throw ValidationError("pump linewidth must be positive");
  const double kout = drive.pump_kappa_out.value_or(0.5 * pump_linewidth);
  const double omega_p = 2.0 * drive.omega0;
  return drive.calibration *
         std::sqrt(4.0 * drive.power * kout / (hbar * omega_p * pump_linewidth * pump_linewidth));
}

double omega_from_power(const PumpDrive& drive, double pump_linewidth) {
  const double b = pump_amplitude(drive, pump_linewidth);
  return 2.0 * std::sqrt(hbar * std::pow(drive.omega0, 3) / (epsilon0 * drive.V)) * drive.chi2 * b;
}

double SqueezeFrame::enhancement() const { return std::cosh(r); }

SqueezeFrame squeeze_params(double delta_c, double Omega, double theta) {
  if (!(Omega >= 0.0) || !std::isfinite(Omega)) throw ValidationError("drive strength must be non-negative");
  if (!(delta_c > 0.0) || !std::isfinite(delta_c)) throw ValidationError("cavity detuning must be positive");
  if (!(Omega < delta_c)) {
    throw InstabilityError("parametric drive " + std::to_string(Omega) + " rad/s reaches the cavity detuning " +
                           std::to_string(delta_c) + " rad/s; squeezing diverges");
  }
  SqueezeFrame f;
  f.delta_c = delta_c;
  f.Omega = Omega;
  f.theta = theta;
  f.r = 0.25 * std::log((delta_c + Omega) / (delta_c - Omega));
  f.delta_alpha = std::sqrt((delta_c - Omega) * (delta_c + Omega));
  return f;
}

double omega_ratio_for_enhancement(double enhancement) {
  if (!(enhancement >= 1.0)) throw ValidationError("enhancement must be >= 1");
  return std::tanh(2.0 * std::acosh(enhancement));
}

double calibrate(PumpDrive drive, double pump_linewidth, double delta_c, double anchor_power, double enhancement) {
  if (!(anchor_power > 0.0)) throw ValidationError("calibration anchor power must be positive");
  drive.power = anchor_power;
  drive.calibration = 1.0;
  const double unit = omega_from_power(drive, pump_linewidth);
  if (!(unit > 0.0)) throw ValidationError("pump model gives zero drive at the anchor power");
  return omega_ratio_for_enhancement(enhancement) * delta_c / unit;
}

double squeezed_vacuum_tail(double r, std::size_t n) {
  if (!(r >= 0.0)) throw ValidationError("squeezing parameter must be non-negative");
  const double t2 = std::tanh(r) * std::tanh(r);
  double p = 1.0 / std::cosh(r);
  double inside = 0.0;
  for (std::size_t m = 0; 2 * m < n; ++m) {
    inside += p;
    p *= t2 * static_cast<double>(2 * m + 1) / static_cast<double>(2 * m + 2);
  }
  return std::max(0.0, 1.0 - inside);
}

QOperator build_pamp_hamiltonian(const CqedRates& rates, double Omega, double theta, std::size_t n_fock,
                                 double truncation_tol) {
  auto sys = build_jc(rates, n_fock);
  if (Omega == 0.0) return sys.hamiltonian;
  const auto frame = squeeze_params(to_angular(rates.delta_ca - rates.delta_la), Omega, theta);
  const double tail = squeezed_vacuum_tail(frame.r, n_fock - 1);
  if (tail > truncation_tol) {
    throw TruncationError("squeezed vacuum (r = " + std::to_string(frame.r) + ") puts " + std::to_string(tail) +
                          " outside the top Fock levels; raise truncation");
  }
  const auto a = annihilation(sys.space, 1);
  const cplx ph = std::polar(1.0, 2.0 * theta);
  return sys.hamiltonian + (0.5 * Omega) * (ph * (a * a) + std::conj(ph) * (a.adjoint() * a.adjoint()));
}

std::vector<double> pamp_level_spacings(double delta_c, double Omega, std::size_t count, std::size_t n_fock) {
  if (count + 1 > n_fock) throw ValidationError("more spacings requested than Fock levels");
  CqedRates r;
  r.delta_ca = to_ordinary(delta_c);
  const auto H = build_pamp_hamiltonian(r, Omega, 0.0, n_fock);
  const auto n = static_cast<Eigen::Index>(n_fock);
  Eigen::SelfAdjointEigenSolver<Matrix> es(H.matrix().topLeftCorner(n, n), Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out.push_back(es.eigenvalues()(k + 1) - es.eigenvalues()(k));
  }
  return out;
}

CqedRates effective_model(const SqueezeFrame& frame, const CqedRates& rates) {
  CqedRates out = rates;
  if (frame.r == 0.0) return out;
  out.g = rates.g * frame.enhancement();
  out.delta_ca = 0.0;
  out.delta_la = -to_ordinary(frame.delta_alpha);
  return out;
}

std::vector<EnhancementRow> enhancement_curve(const CqedRates& rates, const PumpDrive& drive_template,
                                              double pump_linewidth, double delta_c,
                                              std::span<const double> power_grid) {
  if (power_grid.empty()) throw ValidationError("power grid is empty");
  std::vector<EnhancementRow> rows;
  rows.reserve(power_grid.size());
  for (std::size_t i = 0; i < power_grid.size(); ++i) {
    if (i > 0 && !(power_grid[i] > power_grid[i - 1])) throw ValidationError("power grid must be ascending");
    PumpDrive d = drive_template;
    d.power = power_grid[i];
    const double Om = omega_from_power(d, pump_linewidth);
    const auto f = squeeze_params(delta_c, Om, d.theta);
    rows.push_back({power_grid[i], Om, f.r, rates.g * f.enhancement()});
  }
  return rows;
}

RwaReport validate_rwa(const CqedRates& rates, const SqueezeFrame& frame, std::size_t n_fock) {
  if (n_fock < 3) throw ValidationError("validate_rwa needs at least 3 Fock levels");
  auto space = make_space({Factor::two_level("ion"), Factor::fock(n_fock, "alpha")});
  const auto al = annihilation(space, 1);
  const auto sm = lowering(space, 0);
  const double g = to_angular(rates.g);
  const double gc = g * std::cosh(frame.r);
  const double gs = g * std::sinh(frame.r);
  const cplx ph = std::polar(1.0, frame.theta);
  const QOperator h_rwa = frame.delta_alpha * (number(space, 1) + excited_projector(space, 0)) +
                          gc * (sm.adjoint() * al + sm * al.adjoint());
  const QOperator h_full = h_rwa - gs * (ph * (sm.adjoint() * al.adjoint()) + std::conj(ph) * (sm * al));

  Eigen::SelfAdjointEigenSolver<Matrix> er(h_rwa.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> ef(h_full.matrix());

  // RWA ground |g,0> and the single-excitation doublet.
  const Eigen::Index ig0 = 0, ig1 = 1, ie0 = static_cast<Eigen::Index>(n_fock);
  std::vector<Eigen::Index> picks(1, -1);
  for (Eigen::Index k = 0; k < er.eigenvectors().cols(); ++k) {
    const auto v = er.eigenvectors().col(k);
    if (std::norm(v(ig0)) > 0.5) picks[0] = k;
    if (std::norm(v(ig1)) + std::norm(v(ie0)) > 0.5) picks.push_back(k);
  }
  if (picks[0] < 0 || picks.size() != 3) throw NumericalError("validate_rwa: could not isolate the RWA single-excitation states");

  auto match = [&](Eigen::Index k) {
    Eigen::Index best = 0;
    double ov = -1.0;
    for (Eigen::Index j = 0; j < ef.eigenvectors().cols(); ++j) {
      const double o = std::norm(ef.eigenvectors().col(j).dot(er.eigenvectors().col(k)));
      if (o > ov) ov = o, best = j;
    }
    return ef.eigenvalues()(best);
  };

  RwaReport rep;
  rep.ratio = gs > 0.0 ? frame.delta_alpha / gs : std::numeric_limits<double>::infinity();
  const double e0_rwa = er.eigenvalues()(picks[0]);
  const double e0_full = match(picks[0]);
  for (std::size_t i = 1; i < picks.size(); ++i) {
    const double t_rwa = er.eigenvalues()(picks[i]) - e0_rwa;
    const double t_full = match(picks[i]) - e0_full;
    rep.rwa_levels.push_back(t_rwa);
    rep.full_levels.push_back(t_full);
    const double den = std::max(std::abs(t_rwa), gc);
    rep.max_rel_deviation = std::max(rep.max_rel_deviation, std::abs(t_full - t_rwa) / den);
  }
  rep.questionable = rep.max_rel_deviation > 1e-2;
  return rep;
}

}  // namespace reicqed
