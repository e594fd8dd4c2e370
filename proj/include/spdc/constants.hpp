#pragma once

#include <numbers>

namespace spdc {

inline constexpr double speed_of_light = 299792458.0;   // m/s
inline constexpr double planck_constant = 6.62607015e-34; // J s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reference temperature of the thermal expansion and thermo-optic laws, deg C.
inline constexpr double reference_temperature_c = 25.0;

template <typename Scalar>
constexpr Scalar wavelength_to_omega(Scalar lambda) {
    return Scalar(two_pi * speed_of_light) / lambda;
}

template <typename Scalar>
constexpr Scalar omega_to_wavelength(Scalar omega) {
    return Scalar(two_pi * speed_of_light) / omega;
}

} // namespace spdc
