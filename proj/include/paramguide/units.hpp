#pragma once

#include <complex>
#include <numbers>

namespace paramguide {

using cplx = std::complex<double>;

namespace units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CGS
inline constexpr double hbar = 1.054571817e-27;   // erg s
inline constexpr double c_light = 2.99792458e10;  // cm/s
inline constexpr double erg_per_meV = 1.602176634e-15;

inline constexpr double thz_to_rad(double f_thz) { return two_pi * f_thz * 1e12; }
inline constexpr double rad_to_thz(double w) { return w / (two_pi * 1e12); }
inline constexpr double nm_to_rad(double lambda_nm) { return two_pi * c_light / (lambda_nm * 1e-7); }
inline constexpr double mev_to_erg(double t) { return t * erg_per_meV; }

} // namespace units
} // namespace paramguide
