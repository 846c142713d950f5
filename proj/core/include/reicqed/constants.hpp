#pragma once

#include <numbers>

namespace reicqed::constants {

// CODATA 2018, 12 significant digits.
inline constexpr double hbar = 1.05457181765e-34;     // J s
inline constexpr double c = 299792458.0;              // m / s
inline constexpr double epsilon0 = 8.85418781280e-12; // F / m

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace reicqed::constants

namespace reicqed {

// Configuration and public rate fields are ordinary frequencies (value/2pi);
// all dynamics run on angular rates. These two helpers are the only crossing.
constexpr double to_angular(double hz) { return constants::two_pi * hz; }
constexpr double to_ordinary(double rad_per_s) { return rad_per_s / constants::two_pi; }

}  // namespace reicqed
