#pragma once

#include <numbers>

namespace harper {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// SI, exact since 2019
inline constexpr double planck_h = 6.62607015e-34;
inline constexpr double hbar = planck_h / two_pi;
inline constexpr double e_charge = 1.602176634e-19;
inline constexpr double flux_quantum = planck_h / (2.0 * e_charge);

inline constexpr double nH = 1e-9;
inline constexpr double pH = 1e-12;
inline constexpr double fF = 1e-15;

// angular frequency <-> ordinary frequency
inline constexpr double mhz(double f) { return two_pi * f * 1e6; }
inline constexpr double ghz(double f) { return two_pi * f * 1e9; }
inline constexpr double to_mhz(double omega) { return omega / two_pi / 1e6; }
inline constexpr double to_ghz(double omega) { return omega / two_pi / 1e9; }

}  // namespace harper
