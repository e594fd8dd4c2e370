#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "spdc/phasematch.hpp"
#include "spdc/text.hpp"

namespace spdc {

/// Integration box and refinement policy for the idler-momentum integral.
/// The box is q_i in -q_s +/- halfwidth_factor / w0 on each axis.
struct QuadratureSpec {
    int points_per_axis = 64;
    double halfwidth_factor = 5.0;
    double refine_tol = 1e-3;
    int max_points = 512;

    void validate() const;
};

struct DensityEstimate {
    double value = 0.0;
    int points_per_axis = 0; // order of the accepted rule
    bool converged = false;  // false: max_points reached with refine_tol unmet
};

/// S(|q_s|, omega_s) with q_s = (|q_s|, 0). Uses the qy -> -qy mirror of the
/// integrand to halve the work.
DensityEstimate spectral_density(double q_s_mag, double omega_s, const PumpSpec& pump, const CrystalSpec& crystal,
                                 double temp_c, const QuadratureSpec& quad = {});

/// S for an arbitrary q_s direction; full 2D tensor rule, no folding.
DensityEstimate spectral_density(const TransverseMomentumd& q_s, double omega_s, const PumpSpec& pump,
                                 const CrystalSpec& crystal, double temp_c, const QuadratureSpec& quad = {});

/// Same as the scalar overload, with the kernel already built for omega_s.
DensityEstimate spectral_density(double q_s_mag, const PairKernel<double>& kernel, const PumpSpec& pump,
                                 const QuadratureSpec& quad);

/// Pixel grid of a tuning curve. Wavelength samples are uniform in lambda.
struct TuningGrid {
    double lambda_min = 1000e-9; // m
    double lambda_max = 1140e-9; // m
    int lambda_points = 256;
    double q_min = -0.25e6; // rad/m
    double q_max = 0.25e6;  // rad/m
    int q_points = 256;

    void validate(const PumpSpec& pump) const;

    /// Uniform q axis; when q_min == -q_max the samples are exact negatives
    /// of each other so that mirrored pixels are bit-identical.
    Eigen::VectorXd q_axis() const;
    Eigen::VectorXd lambda_axis() const;
};

/// Relative spectral density over (lambda, q). values(i, j) belongs to
/// lambda_axis[i], q_axis[j]; normalized so the maximum is exactly 1.
struct TuningCurve {
    Eigen::VectorXd q_axis;      // rad/m
    Eigen::VectorXd lambda_axis; // m, ascending
    Eigen::VectorXd omega_axis;  // rad/s, matches lambda_axis
    Eigen::MatrixXd values;
    double raw_max = 0.0; // un-normalized maximum, for cross-curve comparisons
    std::string params_digest;
    text::KeyValues params;
    int unconverged_pixels = 0;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
    Eigen::MatrixXd raw_values() const { return values * raw_max; }

    Eigen::Index nearest_lambda_index(double lambda) const;
    Eigen::Index nearest_q_index(double q) const;
};

/// Canonical description of every input of a curve, in a fixed order.
text::KeyValues describe_inputs(const TuningGrid& grid, const PumpSpec& pump, const CrystalSpec& crystal,
                                double temp_c, const QuadratureSpec& quad);

/// Fills every pixel with spectral_density and normalizes to max 1.
/// `threads` = 0 picks the hardware concurrency; the result does not depend on it.
/// Throws AllZeroGrid when no pixel is positive.
TuningCurve tuning_curve(const TuningGrid& grid, const PumpSpec& pump, const CrystalSpec& crystal, double temp_c,
                         const QuadratureSpec& quad = {}, int threads = 0);

/// Trapezoidal integral of each lambda row over q, normalized to max 1.
Eigen::VectorXd marginal_spectrum(const TuningCurve& curve);

/// Fiber core, imaging focal length and spectrometer resolution.
/// A zero entry disables smoothing along that axis.
struct InstrumentSpec {
    double fiber_core_diameter = 200e-6; // m
    double f2 = 50e-3;                   // m
    double osa_fwhm = 2e-9;              // m (wavelength)

    void validate() const;
};

/// Separable instrument smoothing: Gaussian in lambda (FWHM osa_fwhm), top-hat in
/// q of width (2 pi / lambda) core / f2. Each pixel's mass is spread over the
/// in-grid part of its kernel so the grid total is conserved.
/// Throws KernelUnderresolved when a non-zero kernel spans fewer than 3 steps.
TuningCurve instrument_convolve(const TuningCurve& curve, const InstrumentSpec& inst);

/// Same smoothing, returned before renormalization (for mass checks).
Eigen::MatrixXd instrument_smooth(const TuningCurve& curve, const InstrumentSpec& inst);

/// q_x = omega_s x / (f2 c)
inline double fiber_position_to_q(double x, double omega_s, double f2) {
    if (!(f2 > 0)) throw ValidationError("f2", "must be > 0");
    return omega_s * x / (f2 * speed_of_light);
}

} // namespace spdc
