#include "reicqed/gatesim.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"
#include "reicqed/parallel.hpp"
#include "reicqed/wgmio.hpp"

namespace reicqed {

namespace {

using cd = std::complex<double>;

double gaussian_amplitude(double nu, double center, double sigma) {
  const double x = nu - center;
  return std::pow(constants::two_pi * sigma * sigma, -0.25) * std::exp(-x * x / (4.0 * sigma * sigma));
}

// Fraction of |f|^2 inside [lo, hi].
double normalization_on(double lo, double hi, double center, double sigma) {
  const double s = std::sqrt(2.0) * sigma;
  return 0.5 * (std::erf((hi - center) / s) - std::erf((lo - center) / s));
}

std::vector<double> breakpoints(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& p) {
  const double lo = p.lo(), hi = p.hi();
  std::vector<double> pts = {lo, hi};
  for (int k = -8; k <= 8; ++k) pts.push_back(p.center + k * p.sigma);
  const double ka = rates.kappa + kappa_out;
  const double window = ka > 0.0 ? 4.0 * rates.g * rates.g / ka : 0.0;
  for (double c0 : {0.0, rates.delta_ca}) {
    for (double f : {beta, 0.5 * ka, std::sqrt(2.0) * rates.g, window, rates.gamma}) {
      for (double m : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) pts.push_back(c0 + m * f);
    }
  }
  std::vector<double> out;
  for (double x : pts)
    if (std::isfinite(x) && x >= lo && x <= hi) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [&](double a, double b) { return b - a <= 1e-12 * (hi - lo); }),
            out.end());
  return out;
}

struct Piece {
  double a, b;
  cd value;
  double error, l1;
  bool operator<(const Piece& o) const { return error < o.error; }
};

// Global adaptive Gauss-Kronrod (15-point rule) on a complex integrand. The
// tolerance is absolute against the accumulated L1 norm, so pieces that
// integrate to nearly zero do not stall the refinement.
template <class G>
cd integrate(const G& g, const std::vector<double>& pts, double rtol = 1e-11, std::size_t max_pieces = 20000) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto rule = [&](double a, double b) {
    Piece p{a, b, 0.0, 0.0, 0.0};
    double er = 0.0, ei = 0.0, lr = 0.0, li = 0.0;
    const double re = GK::integrate([&](double x) { return g(x).real(); }, a, b, 0, 0.0, &er, &lr);
    const double im = GK::integrate([&](double x) { return g(x).imag(); }, a, b, 0, 0.0, &ei, &li);
    p.value = cd(re, im);
    p.error = er + ei;
    p.l1 = lr + li;
    return p;
  };
  std::priority_queue<Piece> heap;
  cd total = 0.0;
  double err = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    auto p = rule(pts[i], pts[i + 1]);
    total += p.value, err += p.error, l1 += p.l1;
    heap.push(p);
  }
  while (!heap.empty() && err > rtol * l1) {
    if (heap.size() >= max_pieces) {
      throw QuadratureError("overlap quadrature did not converge (error estimate " + std::to_string(err / l1) + ")");
    }
    const Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    const auto left = rule(p.a, mid), right = rule(mid, p.b);
    total += left.value + right.value - p.value;
    err += left.error + right.error - p.error;
    l1 += left.l1 + right.l1 - p.l1;
    heap.push(left);
    heap.push(right);
  }
  if (!std::isfinite(total.real()) || !std::isfinite(total.imag())) throw QuadratureError("overlap quadrature diverged");
  return total;
}

void check_rates(const CqedRates& rates, double beta, double kappa_out) {
  rates.validate();
  if (!(beta >= 0.0)) throw ValidationError("beta must be non-negative");
  if (!(kappa_out >= 0.0)) throw ValidationError("kappa_out must be non-negative");
  if (!(rates.kappa + kappa_out > 0.0)) throw ValidationError("kappa + kappa_out must be positive");
}

}  // namespace

double PulseEnvelope::operator()(double nu) const { return gaussian_amplitude(nu, center, sigma); }

double spectral_sigma_hz(double t_gate) {
  if (!(t_gate > 0.0) || !std::isfinite(t_gate)) throw ValidationError("t_gate must be positive");
  const double sigma_t = t_gate / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  return 1.0 / (2.0 * sigma_t) / constants::two_pi;
}

PulseEnvelope gaussian_envelope(double t_gate, double center, std::span<const double> grid) {
  const double sigma = spectral_sigma_hz(t_gate);
  if (grid.size() < 3) throw ValidationError("pulse grid needs at least 3 points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ValidationError("pulse grid must be strictly ascending");
  }
  if (grid.front() > center - 6.0 * sigma || grid.back() < center + 6.0 * sigma) {
    throw ValidationError("pulse grid must span at least +-6 sigma (sigma = " + std::to_string(sigma) + " Hz)");
  }
  const double norm = normalization_on(grid.front(), grid.back(), center, sigma);
  if (std::abs(1.0 - norm) > 1e-9) {
    throw ValidationError("pulse grid too narrow: normalization " + std::to_string(norm));
  }
  PulseEnvelope p;
  p.t_gate = t_gate;
  p.center = center;
  p.sigma = sigma;
  p.grid.assign(grid.begin(), grid.end());
  p.f.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.f[i] = gaussian_amplitude(grid[i], center, sigma);
  return p;
}

PulseEnvelope gaussian_envelope(double t_gate, double center, double half_width_sigmas, std::size_t n) {
  const double sigma = spectral_sigma_hz(t_gate);
  if (n < 3) throw ValidationError("pulse grid needs at least 3 points");
  std::vector<double> grid(n);
  const double lo = center - half_width_sigmas * sigma, hi = center + half_width_sigmas * sigma;
  for (std::size_t i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return gaussian_envelope(t_gate, center, grid);
}

Overlaps pulse_overlaps(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& pulse) {
  check_rates(rates, beta, kappa_out);
  const auto pts = breakpoints(rates, beta, kappa_out, pulse);
  Overlaps o;
  o.bright = integrate([&](double nu) { return t_coupled_point(rates, kappa_out, nu) * pulse(nu); }, pts);
  o.dark = integrate([&](double nu) { return t_empty_point(rates, beta, kappa_out, nu) * pulse(nu); }, pts);
  return o;
}

Overlaps pulse_overlaps_on_grid(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& pulse) {
  check_rates(rates, beta, kappa_out);
  Overlaps o;
  const auto& x = pulse.grid;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double h = 0.5 * (x[i] - x[i - 1]);
    o.bright += h * (t_coupled_point(rates, kappa_out, x[i]) * pulse.f[i] +
                     t_coupled_point(rates, kappa_out, x[i - 1]) * pulse.f[i - 1]);
    o.dark += h * (t_empty_point(rates, beta, kappa_out, x[i]) * pulse.f[i] +
                   t_empty_point(rates, beta, kappa_out, x[i - 1]) * pulse.f[i - 1]);
  }
  return o;
}

double fidelity_from_overlaps(const Overlaps& o, double t_g, double T_d) {
  if (!(T_d > 0.0)) throw ValidationError("T_d must be positive");
  if (!(t_g >= 0.0)) throw ValidationError("t_g must be non-negative");
  const double b = std::norm(o.bright), d = std::norm(o.dark);
  if (!(b + d > 0.0)) throw NumericalError("fidelity: both overlaps vanish");
  return b * (1.0 + std::exp(-t_g / T_d)) / (2.0 * (b + d));
}

double fidelity(const CqedRates& rates, double beta, double kappa_out, const PulseEnvelope& pulse, double T_d,
                double t_g) {
  return fidelity_from_overlaps(pulse_overlaps(rates, beta, kappa_out, pulse), t_g, T_d);
}

FidelityCurve fidelity_curve(const CqedRates& rates, double beta, double kappa_out, std::span<const double> t_grid,
                             double T_d) {
  if (t_grid.size() < 3) throw ValidationError("gate-time grid needs at least 3 points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw ValidationError("gate times must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw ValidationError("gate-time grid must be ascending");
  }
  if (!(T_d > 0.0)) throw ValidationError("T_d must be positive");
  auto F_at = [&](double t) { return fidelity(rates, beta, kappa_out, gaussian_envelope(t), T_d, t); };

  FidelityCurve c;
  c.t_gate.assign(t_grid.begin(), t_grid.end());
  c.F.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) { c.F[i] = F_at(t_grid[i]); });

  const auto imax = static_cast<std::size_t>(std::max_element(c.F.begin(), c.F.end()) - c.F.begin());
  if (imax == 0 || imax + 1 == c.F.size()) {
    throw BoundaryOptimumError("fidelity maximum at the gate-time grid boundary (t = " + std::to_string(t_grid[imax]) +
                               " s)");
  }
  double lo = std::log(t_grid[imax - 1]), hi = std::log(t_grid[imax + 1]);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = F_at(std::exp(x1)), f2 = F_at(std::exp(x2));
  while (hi - lo > 1e-6) {
    if (f1 > f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = F_at(std::exp(x1));
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = F_at(std::exp(x2));
    }
  }
  c.t_opt = std::exp(0.5 * (lo + hi));
  c.F_max = F_at(c.t_opt);
  if (c.F[imax] > c.F_max) c.t_opt = t_grid[imax], c.F_max = c.F[imax];
  return c;
}

std::vector<DecoherenceRow> decoherence_extension(const GateScenario& s, std::span<const double> T_d_list) {
  std::vector<DecoherenceRow> rows;
  for (double T_d : T_d_list) {
    if (!(T_d > 0.0)) throw ValidationError("T_d values must be positive");
    const auto c = fidelity_curve(s.rates, s.beta, s.kappa_out, s.t_grid, T_d);
    rows.push_back({T_d, c.t_opt, c.F_max});
  }
  return rows;
}

}  // namespace reicqed
