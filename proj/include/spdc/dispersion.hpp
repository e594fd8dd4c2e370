#pragma once

#include <array>
#include <cmath>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"

namespace spdc {

/// One resonance term B * l^2 / (l^2 - C) of a Sellmeier equation (l in um).
struct SellmeierTerm {
    double strength;      // B, dimensionless
    double resonance_um2; // C, um^2
};

/// Sellmeier equation plus a quadratic thermo-optic correction:
///
///   n^2(l)   = A + sum_k B_k l^2 / (l^2 - C_k) - D l^2
///   n(l, T)  = n(l) + a1(1/l) (T - 25) + a2(1/l) (T - 25)^2
///
/// with a1, a2 cubic polynomials in 1/l and l in micrometres.
struct DispersionModel {
    std::string label;
    double sellmeier_A = 1.0;
    std::vector<SellmeierTerm> sellmeier_terms;
    double sellmeier_D = 0.0;
    std::array<double, 4> thermo_linear{};    // T1_0..T1_3
    std::array<double, 4> thermo_quadratic{}; // T2_0..T2_3
    double lambda_min_nm = 0.0;
    double lambda_max_nm = 0.0;
    double temp_min_c = reference_temperature_c;
    double temp_max_c = reference_temperature_c;

    /// Fingerprint of every coefficient; identical models share a digest.
    std::string digest() const;

    /// Canonical `key = value` text, parseable by parse_dispersion.
    std::string to_text() const;
};

/// Parses the `key = value` fixture format. `source` only labels error messages.
DispersionModel parse_dispersion(std::istream& in, const std::string& source = "<stream>");
DispersionModel load_dispersion(const std::string& path);

namespace detail {

template <typename Scalar>
Scalar inverse_polynomial(const std::array<double, 4>& c, Scalar inv_um) {
    return ((Scalar(c[3]) * inv_um + Scalar(c[2])) * inv_um + Scalar(c[1])) * inv_um + Scalar(c[0]);
}

void report_wavelength_out_of_range(double lambda_m, const DispersionModel& model);
void report_temperature_extrapolation(double temp_c, const DispersionModel& model);

} // namespace detail

/// Room-temperature index from the Sellmeier part only; no range checks.
template <typename Scalar>
Scalar sellmeier_index(Scalar lambda_um, const DispersionModel& model) {
    const Scalar l2 = lambda_um * lambda_um;
    Scalar n2 = Scalar(model.sellmeier_A) - Scalar(model.sellmeier_D) * l2;
    for (const auto& term : model.sellmeier_terms)
        n2 += Scalar(term.strength) * l2 / (l2 - Scalar(term.resonance_um2));
    using std::sqrt;
    return sqrt(n2);
}

/// Thermo-optic shift of the index; exactly zero at 25 deg C.
template <typename Scalar>
Scalar thermo_optic_shift(Scalar lambda_um, Scalar temp_c, const DispersionModel& model) {
    const Scalar dt = temp_c - Scalar(reference_temperature_c);
    const Scalar inv = Scalar(1) / lambda_um;
    return detail::inverse_polynomial(model.thermo_linear, inv) * dt +
           detail::inverse_polynomial(model.thermo_quadratic, inv) * dt * dt;
}

/// n(lambda, T). Throws WavelengthOutOfRange outside the model's wavelength
/// window; temperatures outside the fitted window extrapolate with a warning.
template <typename Scalar>
Scalar refractive_index(Scalar lambda_m, Scalar temp_c, const DispersionModel& model) {
    const double lambda_nm = double(lambda_m) * 1e9;
    if (!(lambda_nm >= model.lambda_min_nm && lambda_nm <= model.lambda_max_nm))
        detail::report_wavelength_out_of_range(double(lambda_m), model);
    if (double(temp_c) < model.temp_min_c || double(temp_c) > model.temp_max_c)
        detail::report_temperature_extrapolation(double(temp_c), model);
    const Scalar lambda_um = lambda_m * Scalar(1e6);
    return sellmeier_index(lambda_um, model) + thermo_optic_shift(lambda_um, temp_c, model);
}

/// |k| = omega n(2 pi c / omega, T) / c in rad/m.
template <typename Scalar>
Scalar wavevector_magnitude(Scalar omega, Scalar temp_c, const DispersionModel& model) {
    if (!(omega > Scalar(0))) detail::report_wavelength_out_of_range(HUGE_VAL, model);
    const Scalar n = refractive_index(omega_to_wavelength(omega), temp_c, model);
    return omega * n / Scalar(speed_of_light);
}

/// Physical crystal: nominal length and poling period at 25 deg C, the
/// quadratic thermal expansion law shared by both, and its dispersion.
struct CrystalSpec {
    double length_L0 = 0.0; // m
    double poling_G0 = 0.0; // m
    double alpha = 0.0;     // 1/degC
    double beta = 0.0;      // 1/degC^2
    std::shared_ptr<const DispersionModel> dispersion;
    /// When false, L(T) is pinned to L0 (used to measure the length-expansion effect).
    bool expand_length = true;

    static constexpr double T_ref = reference_temperature_c;

    const DispersionModel& model() const { return *dispersion; }
    void validate() const;
};

/// 1 + alpha (T - 25) + beta (T - 25)^2
inline double thermal_expansion_factor(double temp_c, double alpha, double beta) {
    const double dt = temp_c - reference_temperature_c;
    return 1.0 + alpha * dt + beta * dt * dt;
}

inline double poling_period_at(double temp_c, const CrystalSpec& crystal) {
    return crystal.poling_G0 * thermal_expansion_factor(temp_c, crystal.alpha, crystal.beta);
}

inline double crystal_length_at(double temp_c, const CrystalSpec& crystal) {
    if (!crystal.expand_length) return crystal.length_L0;
    return crystal.length_L0 * thermal_expansion_factor(temp_c, crystal.alpha, crystal.beta);
}

} // namespace spdc
