#pragma once

#include <numbers>

namespace rswp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kC0 = 299792458.0;             // m/s
inline constexpr double kMu0 = 1.25663706212e-6;       // H/m
inline constexpr double kEps0 = 1.0 / (kMu0 * kC0 * kC0);  // F/m
inline constexpr double kEta0 = kMu0 * kC0;            // ohm, ~376.73

// Scene files speak mm and GHz; everything below the loader is SI.
inline constexpr double kMm = 1e-3;
inline constexpr double kGHz = 1e9;

inline constexpr double free_space_wavelength(double f) { return kC0 / f; }
inline constexpr double free_space_wavenumber(double f) { return 2.0 * kPi * f / kC0; }

}  // namespace rswp
