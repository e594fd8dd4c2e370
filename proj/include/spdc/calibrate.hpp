#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spdc/spectrum.hpp"

namespace spdc {

/// Everything needed to produce one tuning curve.
struct SimulationConfig {
    PumpSpec pump;
    CrystalSpec crystal;
    double temperature_c = reference_temperature_c;
    TuningGrid grid;
    QuadratureSpec quad;
    std::optional<InstrumentSpec> instrument; // applied by the fitting routines
    int threads = 0;
};

/// Raw (un-smoothed) tuning curve of a configuration.
TuningCurve simulate(const SimulationConfig& config);

enum class SweepParam { G0, W0, T, L0 };

SweepParam parse_sweep_param(const std::string& name);
std::string to_string(SweepParam param);

/// Copy of `base` with one parameter replaced (SI units, T in deg C).
SimulationConfig with_param(SimulationConfig base, SweepParam param, double value);

struct SweepEntry {
    double value = 0.0;
    std::optional<TuningCurve> curve;
    std::string error; // set when the curve failed; the sweep continues
};

std::vector<SweepEntry> sweep(SweepParam param, const std::vector<double>& values, const SimulationConfig& base);

/// OSA raster-scan records. Positions are stored as transverse momentum.
struct MeasuredSpectrum {
    struct Record {
        double q;      // rad/m
        double lambda; // m
        double counts; // relative
    };
    std::vector<Record> records;
    std::optional<InstrumentSpec> instrument;

    void validate() const;
};

/// Reads `x_mm,lambda_nm,counts` or `q_per_um,lambda_nm,counts`. Fiber
/// positions need `instrument` for the x -> q mapping.
MeasuredSpectrum load_measured_csv(const std::string& path, std::optional<InstrumentSpec> instrument = std::nullopt);
MeasuredSpectrum parse_measured_csv(std::istream& in, const std::string& source,
                                    std::optional<InstrumentSpec> instrument = std::nullopt);

using FitTarget = std::variant<MeasuredSpectrum, TuningCurve>;

struct FitResult {
    double best_G0 = 0.0;
    std::optional<double> best_T;
    double residual = 0.0;
    int iterations = 0; // objective evaluations
    bool converged = false;
};

/// Golden-section minimum of f on [lo, hi] down to a bracket of width tol.
struct ScalarMinimum {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol,
                                      int max_evaluations = 200);

/// Sum of squared differences between the max-normalized simulation and the
/// max-normalized target, divided by the target's sum of squares. The
/// simulation is bilinearly resampled at the target's support.
double fit_objective(const TuningCurve& simulation, const FitTarget& target);

/// Best poling period in `bounds` (span <= 200 nm, tol >= 0.1 nm). A coarse
/// scan picks the basin, golden-section refines it. Throws NoDescent when the
/// objective is flat across the bounds.
FitResult fit_poling_period(const FitTarget& target, const SimulationConfig& base, std::pair<double, double> bounds,
                            double tol);

struct TemperatureEquivalence {
    double delta_T = 0.0;           // degC
    double delta_G0 = 0.0;          // m, poling change at the base temperature mimicking delta_T
    double expansion_share = 0.0;   // m, G(T + delta_T) - G(T) from thermal expansion alone
    double expansion_fraction = 0.0; // expansion_share / delta_G0
    FitResult fit;
};

/// Simulates the curve at T + delta_T and fits G0 at T to reproduce it.
TemperatureEquivalence temperature_poling_equivalence(double delta_T, const SimulationConfig& base,
                                                      double tol = 1e-10);

/// Plane-wave collinear residual at omega_p / 2: Delta k_z(q = 0) + 2 pi / G(T).
double collinear_degenerate_residual(const PumpSpec& pump, const CrystalSpec& crystal, double temp_c);

/// G0 in [lo, hi] zeroing collinear_degenerate_residual (scan + bisection).
double collinear_degenerate_period(const PumpSpec& pump, const CrystalSpec& crystal, double temp_c, double lo,
                                   double hi);

/// G0 in [lo, hi] maximizing the on-axis degenerate density S(0, omega_p / 2)
/// of the focused pump. Differs from the plane-wave root by the focusing shift.
double peak_degenerate_period(const PumpSpec& pump, const CrystalSpec& crystal, double temp_c,
                              const QuadratureSpec& quad, double lo, double hi, double tol = 1e-12);

/// Photons per second carried by `power` at `center_wavelength`.
inline double photon_flux(double power, double center_wavelength) {
    if (!(power >= 0)) throw ValidationError("power", "must be >= 0");
    return power * center_wavelength / (planck_constant * speed_of_light);
}

/// flux / delta_nu with delta_nu = c delta_lambda / lambda^2.
inline double mode_density(double flux, double bandwidth_wl, double center_wavelength) {
    if (!(bandwidth_wl > 0)) throw ValidationError("bandwidth", "must be > 0");
    const double delta_nu = speed_of_light * bandwidth_wl / (center_wavelength * center_wavelength);
    return flux / delta_nu;
}

} // namespace spdc
