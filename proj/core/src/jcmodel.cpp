#include "reicqed/jcmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/parallel.hpp"

namespace reicqed {

namespace {

void require_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw ValidationError(std::string(what) + " is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw ValidationError(std::string(what) + " has a non-finite entry");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError(std::string(what) + " must be strictly ascending");
  }
}

double lorentzian(double x, double x0, double fwhm) {
  const double h = 0.5 * fwhm;
  return h / (constants::pi * ((x - x0) * (x - x0) + h * h));
}

double half_max_crossing(std::span<const double> grid, std::span<const double> a, std::size_t i, int dir) {
  const double half = 0.5 * a[i];
  std::size_t j = i;
  while (true) {
    if ((dir < 0 && j == 0) || (dir > 0 && j + 1 == a.size())) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t k = dir < 0 ? j - 1 : j + 1;
    if (a[k] > a[j]) return std::numeric_limits<double>::quiet_NaN();
    if (a[k] <= half) {
      const double f = (a[j] - half) / (a[j] - a[k]);
      return grid[j] + f * (grid[k] - grid[j]);
    }
    j = k;
  }
}

std::vector<SpectralLine> single_excitation_lines(const JcSystem& sys) {
  const auto N = sys.space->factor(1).dim;
  const Eigen::Index ig1 = 1;
  const auto ie0 = static_cast<Eigen::Index>(N);
  const Matrix& H = sys.hamiltonian.matrix();
  Eigen::Matrix2cd block;
  block << H(ig1, ig1), H(ig1, ie0), H(ie0, ig1), H(ie0, ie0);
  block /= constants::two_pi;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
  std::vector<SpectralLine> lines;
  for (int l = 0; l < 2; ++l) {
    const double cg1 = std::norm(es.eigenvectors()(0, l));
    const double ce0 = std::norm(es.eigenvectors()(1, l));
    SpectralLine line;
    line.position = es.eigenvalues()(l) + sys.rates.delta_la;
    line.cavity_fraction = cg1;
    line.width = sys.rates.kappa_all() * cg1 + sys.rates.gamma * ce0;
    lines.push_back(line);
  }
  return lines;
}

std::vector<double> raw_eigen_amplitude(const std::vector<SpectralLine>& lines, std::span<const double> grid) {
  std::vector<double> a(grid.size(), 0.0);
  for (const auto& line : lines) {
    if (line.weight == 0.0) continue;
    if (!(line.width > 0.0)) throw ValidationError("spectrum_eigen: spectral line has zero width");
    for (std::size_t i = 0; i < grid.size(); ++i) a[i] += line.weight * lorentzian(grid[i], line.position, line.width);
  }
  return a;
}

void weigh_lines(std::vector<SpectralLine>& lines, const EigenSpectrumOptions& options) {
  const double nu_ref = constants::c / options.reference_wavelength;
  for (auto& line : lines) {
    const double omega_l = constants::two_pi * (nu_ref + line.position);
    line.weight = constants::hbar * omega_l * line.cavity_fraction;
  }
}

}  // namespace

JcSystem build_jc(const CqedRates& rates, std::size_t n_fock) {
  rates.validate();
  if (n_fock < 2) throw ValidationError("build_jc: Fock truncation must be >= 2");
  auto space = make_space({Factor::two_level("ion"), Factor::fock(n_fock, "cavity")});
  const auto a = annihilation(space, 1);
  const auto sm = lowering(space, 0);
  const double d_al = -to_angular(rates.delta_la);
  const double d_cl = to_angular(rates.delta_ca - rates.delta_la);
  const double g = to_angular(rates.g);
  QOperator H = d_al * excited_projector(space, 0) + d_cl * number(space, 1) +
                g * (sm.adjoint() * a + sm * a.adjoint());
  return {rates, space, std::move(H)};
}

std::vector<Peak> find_peaks(std::span<const double> grid, std::span<const double> a, double min_rel) {
  if (grid.size() != a.size()) throw ValidationError("find_peaks: grid and amplitude sizes differ");
  std::vector<Peak> peaks;
  if (a.size() < 3) return peaks;
  const double top = *std::max_element(a.begin(), a.end());
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    if (!(a[i] > a[i - 1])) continue;
    std::size_t j = i;
    while (j + 1 < a.size() && a[j + 1] == a[i]) ++j;
    if (j + 1 == a.size() || !(a[j + 1] < a[i])) continue;
    if (a[i] < min_rel * top) continue;
    const std::size_t c = (i + j) / 2;
    const double lo = half_max_crossing(grid, a, i, -1);
    const double hi = half_max_crossing(grid, a, j, +1);
    peaks.push_back({grid[c], a[c], hi - lo});
    i = j;
  }
  return peaks;
}

SpectrumResult spectrum_eigen(const JcSystem& sys, std::span<const double> grid, const EigenSpectrumOptions& options) {
  require_grid(grid, "spectrum grid");
  if (grid.size() < 3) throw ValidationError("spectrum grid needs at least 3 points");
  auto lines = single_excitation_lines(sys);
  weigh_lines(lines, options);
  double total = 0.0;
  for (const auto& l : lines) total += l.weight;
  for (const auto& l : lines) {
    if (l.weight >= options.boundary_weight * total && (l.position <= grid.front() || l.position >= grid.back())) {
      throw ValidationError("spectrum_eigen: grid does not cover the line at " + std::to_string(l.position) + " Hz");
    }
  }
  SpectrumResult r;
  r.detuning.assign(grid.begin(), grid.end());
  r.amplitude = raw_eigen_amplitude(lines, grid);
  r.scale = *std::max_element(r.amplitude.begin(), r.amplitude.end());
  if (!(r.scale > 0.0)) throw NumericalError("spectrum_eigen: vanishing spectrum");
  for (auto& v : r.amplitude) v /= r.scale;
  r.peaks = find_peaks(r.detuning, r.amplitude);
  r.lines = std::move(lines);
  return r;
}

SpectrumMap spectrum_map(const CqedRates& rates, std::span<const double> laser_grid,
                         std::span<const double> cavity_grid, const EigenSpectrumOptions& options) {
  require_grid(laser_grid, "laser grid");
  require_grid(cavity_grid, "cavity grid");
  SpectrumMap m;
  m.laser.assign(laser_grid.begin(), laser_grid.end());
  m.cavity.assign(cavity_grid.begin(), cavity_grid.end());
  m.amplitude.assign(m.laser.size() * m.cavity.size(), 0.0);
  parallel_for(m.cavity.size(), [&](std::size_t ic) {
    CqedRates r = rates;
    r.delta_ca = m.cavity[ic];
    r.delta_la = 0.0;
    auto lines = single_excitation_lines(build_jc(r, 2));
    weigh_lines(lines, options);
    const auto col = raw_eigen_amplitude(lines, laser_grid);
    std::copy(col.begin(), col.end(), m.amplitude.begin() + static_cast<std::ptrdiff_t>(ic * m.laser.size()));
  });
  const double top = *std::max_element(m.amplitude.begin(), m.amplitude.end());
  if (!(top > 0.0)) throw NumericalError("spectrum_map: vanishing spectrum");
  for (auto& v : m.amplitude) v /= top;
  return m;
}

SpectrumResult spectrum_numeric(const CqedRates& rates, std::span<const double> grid, double probe_amplitude,
                                const NumericSpectrumOptions& options) {
  require_grid(grid, "spectrum grid");
  if (!(probe_amplitude > 0.0 && std::isfinite(probe_amplitude))) {
    throw ValidationError("spectrum_numeric: probe amplitude must be positive");
  }
  rates.validate();
  const DissipatorSpec diss{{to_angular(rates.kappa_all())}, to_angular(rates.gamma), to_angular(rates.gamma_p)};
  std::vector<double> pop(grid.size());
  const std::size_t workers = options.workers == 0 ? worker_count() : options.workers;
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        CqedRates r = rates;
        r.delta_la = grid[i];
        const auto sys = build_jc(r, options.n_fock);
        const auto a = annihilation(sys.space, 1);
        const auto H = sys.hamiltonian + to_angular(probe_amplitude) * (a + a.adjoint());
        const auto rho = steady_state(build_liouvillian(H, diss), options.steady);
        pop[i] = expectation(rho, number(sys.space, 1)).real();
      },
      workers);
  SpectrumResult r;
  r.detuning.assign(grid.begin(), grid.end());
  const double top = *std::max_element(pop.begin(), pop.end());
  if (top >= options.max_population) {
    throw ValidationError("spectrum_numeric: probe too strong, <a+a> reaches " + std::to_string(top));
  }
  if (!(top > 0.0)) throw NumericalError("spectrum_numeric: vanishing response");
  r.scale = top;
  r.amplitude = pop;
  for (auto& v : r.amplitude) v = std::max(v, 0.0) / top;
  r.peaks = find_peaks(r.detuning, r.amplitude);
  return r;
}

}  // namespace reicqed
