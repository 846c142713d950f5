#pragma once

// Jaynes-Cummings system and its linear-response spectroscopy.

#include <span>
#include <vector>

#include "reicqed/cqedcalc.hpp"
#include "reicqed/lindblad.hpp"
#include "reicqed/qcore.hpp"

namespace reicqed {

struct JcSystem {
  CqedRates rates;
  SpacePtr space;  // TwoLevel (x) Fock
  // Laser-frame Hamiltonian in rad/s:
  //   -delta_la s+s- + (delta_ca - delta_la) a+a + g (s+ a + s- a+)
  QOperator hamiltonian;
};

JcSystem build_jc(const CqedRates& rates, std::size_t n_fock = kDefaultFockTruncation);

struct Peak {
  double position = 0.0;
  double height = 0.0;
  // Full width at half maximum from the grid; NaN when the half-maximum is not
  // reached on both sides before a neighbouring valley.
  double width = 0.0;
};

struct SpectralLine {
  double position = 0.0;  // Hz
  double weight = 0.0;    // area, before normalization
  double width = 0.0;     // FWHM, Hz
  double cavity_fraction = 0.0;
};

struct SpectrumResult {
  std::vector<double> detuning;  // laser - ion, Hz
  std::vector<double> amplitude;
  std::vector<Peak> peaks;
  std::vector<SpectralLine> lines;  // eigen backend only
  bool max_normalized = true;
  // amplitude = raw / scale
  double scale = 1.0;
};

// Strict local maxima (plateaus count once) with height >= min_rel * max.
std::vector<Peak> find_peaks(std::span<const double> grid, std::span<const double> amplitude, double min_rel = 1e-9);

struct EigenSpectrumOptions {
  double reference_wavelength = 980e-9;
  // Reject lines carrying at least this fraction of the total weight that fall
  // outside the grid.
  double boundary_weight = 0.01;
};

SpectrumResult spectrum_eigen(const JcSystem& sys, std::span<const double> grid,
                              const EigenSpectrumOptions& options = {});

struct SpectrumMap {
  std::vector<double> laser;
  std::vector<double> cavity;
  // amplitude[ic * laser.size() + il], normalized to a joint maximum of 1
  std::vector<double> amplitude;
  double at(std::size_t ic, std::size_t il) const { return amplitude[ic * laser.size() + il]; }
};

SpectrumMap spectrum_map(const CqedRates& rates, std::span<const double> laser_grid,
                         std::span<const double> cavity_grid, const EigenSpectrumOptions& options = {});

struct NumericSpectrumOptions {
  std::size_t n_fock = 5;
  double max_population = 0.01;
  SteadyStateOptions steady;
  std::size_t workers = 0;  // 0: worker_count()
};

// Steady-state <a+a> under a probe E (a + a+); probe amplitude in Hz.
SpectrumResult spectrum_numeric(const CqedRates& rates, std::span<const double> grid, double probe_amplitude,
                                const NumericSpectrumOptions& options = {});

}  // namespace reicqed
