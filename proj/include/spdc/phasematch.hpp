#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Core>

#include "spdc/dispersion.hpp"

namespace spdc {

/// Monochromatic pump with a Gaussian transverse profile.
struct PumpSpec {
    double omega_p = 0.0;        // rad/s
    double waist_w0 = 0.0;       // m
    std::optional<double> power; // W

    static PumpSpec from_wavelength(double lambda_p, double waist, std::optional<double> power = std::nullopt) {
        return {wavelength_to_omega(lambda_p), waist, power};
    }

    double wavelength() const { return omega_to_wavelength(omega_p); }
    void validate() const;
};

/// (qx, qy) in rad/m.
template <typename Scalar>
using TransverseMomentum = Eigen::Matrix<Scalar, 2, 1>;

using TransverseMomentumd = TransverseMomentum<double>;

/// sin(x)/x with the removable singularity replaced by its series below 1e-6.
template <typename Scalar>
Scalar sinc(Scalar x) {
    using std::abs;
    using std::sin;
    if (abs(x) < Scalar(1e-6)) return Scalar(1) - x * x / Scalar(6);
    return sin(x) / x;
}

/// Gaussian pump angular spectrum exp(-w0^2 |q|^2 / 4), peak 1.
template <typename Scalar>
Scalar pump_amplitude(const TransverseMomentum<Scalar>& q_sum, const PumpSpec& pump) {
    using std::exp;
    const Scalar w0 = Scalar(pump.waist_w0);
    return exp(-w0 * w0 * q_sum.squaredNorm() / Scalar(4));
}

/// Delta k_z + 2 pi / G(T).
template <typename Scalar>
Scalar qpm_residual(Scalar delta_kz, Scalar temp_c, const CrystalSpec& crystal) {
    return delta_kz + Scalar(two_pi) / Scalar(poling_period_at(double(temp_c), crystal));
}

/// Everything about a (signal frequency, pump, temperature, crystal) tuple
/// that does not depend on the transverse momenta. Building it is where the
/// dispersion model is consulted; evaluating it is dispersion-free.
template <typename Scalar>
class PairKernel {
public:
    PairKernel(Scalar omega_s, const PumpSpec& pump, Scalar temp_c, const CrystalSpec& crystal) {
        if (!(omega_s > Scalar(0) && omega_s < Scalar(pump.omega_p)))
            throw ValidationError("omega_s", "signal frequency must lie in (0, omega_p)");
        const auto& model = crystal.model();
        omega_s_ = omega_s;
        omega_i_ = Scalar(pump.omega_p) - omega_s;
        n_s_ = refractive_index(omega_to_wavelength(omega_s_), temp_c, model);
        n_i_ = refractive_index(omega_to_wavelength(omega_i_), temp_c, model);
        const Scalar n_p = refractive_index(omega_to_wavelength(Scalar(pump.omega_p)), temp_c, model);
        const Scalar c = Scalar(speed_of_light);
        k_s_ = omega_s_ * n_s_ / c;
        k_i_ = omega_i_ * n_i_ / c;
        k_p_ = Scalar(pump.omega_p) * n_p / c;
        grating_ = Scalar(two_pi) / Scalar(poling_period_at(double(temp_c), crystal));
        half_length_ = Scalar(crystal_length_at(double(temp_c), crystal)) / Scalar(2);
        const Scalar w0 = Scalar(pump.waist_w0);
        gauss_sq_coeff_ = w0 * w0 / Scalar(2);
        const Scalar nn = n_i_ * n_s_;
        weight_ = omega_i_ * omega_s_ / (nn * nn);
    }

    Scalar k_signal() const { return k_s_; }
    Scalar k_idler() const { return k_i_; }
    Scalar k_pump() const { return k_p_; }
    Scalar grating() const { return grating_; }
    Scalar weight() const { return weight_; }
    Scalar omega_signal() const { return omega_s_; }
    Scalar omega_idler() const { return omega_i_; }

    /// Longitudinal mismatch from squared transverse magnitudes; empty when
    /// any of the three waves is evanescent.
    std::optional<Scalar> mismatch(Scalar qi2, Scalar qs2, Scalar qp2) const {
        using std::sqrt;
        const Scalar ri = k_i_ * k_i_ - qi2;
        const Scalar rs = k_s_ * k_s_ - qs2;
        const Scalar rp = k_p_ * k_p_ - qp2;
        if (ri < Scalar(0) || rs < Scalar(0) || rp < Scalar(0)) return std::nullopt;
        return sqrt(ri) + sqrt(rs) - sqrt(rp);
    }

    std::optional<Scalar> mismatch(const TransverseMomentum<Scalar>& q_i, const TransverseMomentum<Scalar>& q_s) const {
        return mismatch(q_i.squaredNorm(), q_s.squaredNorm(), (q_i + q_s).squaredNorm());
    }

    /// sinc^2 of the QPM residual times the crystal half length.
    Scalar phase_matching(Scalar delta_kz) const {
        const Scalar s = sinc((delta_kz + grating_) * half_length_);
        return s * s;
    }

    /// |Lambda|^2 up to a global constant, from squared transverse magnitudes.
    Scalar amplitude_sq(Scalar qi2, Scalar qs2, Scalar qp2) const {
        using std::exp;
        const auto dk = mismatch(qi2, qs2, qp2);
        if (!dk) return Scalar(0);
        return weight_ * exp(-gauss_sq_coeff_ * qp2) * phase_matching(*dk);
    }

    Scalar amplitude_sq(const TransverseMomentum<Scalar>& q_i, const TransverseMomentum<Scalar>& q_s) const {
        return amplitude_sq(q_i.squaredNorm(), q_s.squaredNorm(), (q_i + q_s).squaredNorm());
    }

private:
    Scalar omega_s_{}, omega_i_{};
    Scalar n_s_{}, n_i_{};
    Scalar k_s_{}, k_i_{}, k_p_{};
    Scalar grating_{};
    Scalar half_length_{};
    Scalar gauss_sq_coeff_{};
    Scalar weight_{};
};

/// Delta k_z of the three-wave interaction; std::nullopt marks an evanescent wave.
template <typename Scalar>
std::optional<Scalar> longitudinal_mismatch(const TransverseMomentum<Scalar>& q_i, const TransverseMomentum<Scalar>& q_s,
                                            Scalar omega_s, const PumpSpec& pump, Scalar temp_c,
                                            const CrystalSpec& crystal) {
    return PairKernel<Scalar>(omega_s, pump, temp_c, crystal).mismatch(q_i, q_s);
}

/// Relative |Lambda|^2: weight(omega_s) |E_p(q_i + q_s)|^2 sinc^2(residual L(T) / 2),
/// weight = omega_i omega_s / (n_i n_s)^2. Zero on evanescent points.
template <typename Scalar>
Scalar amplitude_sq(const TransverseMomentum<Scalar>& q_i, const TransverseMomentum<Scalar>& q_s, Scalar omega_s,
                    const PumpSpec& pump, Scalar temp_c, const CrystalSpec& crystal) {
    return PairKernel<Scalar>(omega_s, pump, temp_c, crystal).amplitude_sq(q_i, q_s);
}

/// Internal emission angle arcsin(|q| / k_s). Throws BeyondCone for |q| > k_s.
template <typename Scalar>
Scalar emission_angle(Scalar q_mag, Scalar omega_s, Scalar temp_c, const CrystalSpec& crystal) {
    using std::asin;
    const Scalar k_s = wavevector_magnitude(omega_s, temp_c, crystal.model());
    if (q_mag > k_s) throw BeyondCone("transverse momentum exceeds the signal wave number");
    return asin(q_mag / k_s);
}

} // namespace spdc
