#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "reicqed/cqedcalc.hpp"

namespace reicqed::cli {

enum class Task { Params, Spectrum, Map, Pamp, Transmission, Critical, Fidelity, Feasibility };
const char* to_string(Task t);

struct Grid {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;
  bool operator==(const Grid&) const = default;
};
std::vector<double> linear(const Grid& g);
std::vector<double> logarithmic(const Grid& g);

struct RateOverrides {
  std::optional<double> g, kappa, kappa_out, gamma, gamma_p, delta_ca, delta_la, beta;
  bool operator==(const RateOverrides&) const = default;
};

struct ParamsOptions {
  std::optional<double> eo_voltage;
  std::optional<double> eo_rate;  // m/V
  bool operator==(const ParamsOptions&) const = default;
};

enum class SpectrumBackend { Eigen, Numeric, Both };

struct SpectrumOptions {
  Grid detuning{-60e6, 60e6, 301};  // laser - ion, Hz
  SpectrumBackend backend = SpectrumBackend::Eigen;
  double probe = 0.05e6;
  std::size_t n_fock = 5;
  bool operator==(const SpectrumOptions&) const = default;
};

struct MapOptions {
  Grid laser{-100e6, 100e6, 201};
  Grid cavity{-100e6, 100e6, 101};
  bool operator==(const MapOptions&) const = default;
};

struct PampOptions {
  Grid power{0.0, 1e-9, 51};  // W, linear
  double delta_c = 1e9;       // Hz, cavity - signal detuning in the pump frame
  double chi2 = 25e-12;       // m/V
  double pump_linewidth = 100e6;
  double theta = 0.0;
  std::optional<double> pump_kappa_out;
  double anchor_power = 1e-9;
  double anchor_enhancement = 10.0;
  Grid detuning{-400e6, 400e6, 1601};
  std::size_t rwa_n_fock = 12;
  bool operator==(const PampOptions&) const = default;
};

struct TransmissionOptions {
  Grid detuning{-2e9, 2e9, 401};  // Delta_cl, Hz
  std::size_t n_fock = 3;
  double probe = 0.2e6;  // drive amplitude for the numeric check, Hz
  bool operator==(const TransmissionOptions&) const = default;
};

struct CriticalOptions {
  Grid kappa_out{1e6, 1e10, 81};  // log
  bool operator==(const CriticalOptions&) const = default;
};

struct FidelityOptions {
  Grid t_gate{1e-9, 1e-4, 51};  // log
  std::optional<double> t_d;
  Grid kappa_out{1e6, 1e10, 81};  // log, for the critical-coupling search
  std::vector<double> t_d_list;
  std::optional<double> compare_gamma;
  bool operator==(const FidelityOptions&) const = default;
};

struct FeasibilityOptions {
  Grid k{0.1, 100.0, 50};  // log
  Grid q{1e3, 1e8, 51};    // log
  bool operator==(const FeasibilityOptions&) const = default;
};

struct Scenario {
  std::string name;
  Task task = Task::Params;
  std::vector<IonSpecies> ions;
  std::optional<CavityDesign> cavity;
  RateOverrides rates;
  ParamsOptions params;
  SpectrumOptions spectrum;
  MapOptions map;
  PampOptions pamp;
  TransmissionOptions transmission;
  CriticalOptions critical;
  FidelityOptions fidelity;
  FeasibilityOptions feasibility;
  bool operator==(const Scenario&) const = default;
};

// Reads a scenario file. Catalog references are resolved relative to the
// file and inlined, so the result no longer depends on the catalog.
Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& source = "<input>",
                             const std::string& base_dir = ".");

// Canonical text in SI units; parse_scenario_text(serialize(s)) == s.
std::string serialize(const Scenario& s);

std::vector<IonSpecies> load_catalog(const std::string& path);

struct ResolvedRates {
  CqedRates rates;
  double beta = 0.0;
  std::vector<std::string> overrides;  // "g: 5.9e5 -> 2e7 Hz"
};

// Derived rates from the primary ion and cavity, then explicit overrides.
ResolvedRates resolve_rates(const Scenario& s);

}  // namespace reicqed::cli
