#include "spdc/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spdc/parallel.hpp"
#include "spdc/quadrature.hpp"

namespace spdc {

void QuadratureSpec::validate() const {
    if (points_per_axis < 8) throw ValidationError("quad.points", "must be >= 8");
    if (!(halfwidth_factor >= 3)) throw ValidationError("quad.halfwidth_factor", "must be >= 3");
    if (!(refine_tol > 0 && refine_tol < 1)) throw ValidationError("quad.tolerance", "must lie in (0, 1)");
    if (max_points < points_per_axis) throw ValidationError("quad.max_points", "must be >= quad.points");
}

void InstrumentSpec::validate() const {
    if (!(fiber_core_diameter > 0)) throw ValidationError("instrument.core", "must be > 0");
    if (!(f2 > 0)) throw ValidationError("instrument.f2", "must be > 0");
    if (!(osa_fwhm > 0)) throw ValidationError("instrument.osa_fwhm", "must be > 0");
}

namespace {

// Upper bound of S at fixed omega_s: weight times the integral of the pump
// intensity over the plane, 2 pi / w0^2. Used as the absolute floor scale.
double density_scale(const PairKernel<double>& kernel, const PumpSpec& pump) {
    return kernel.weight() * two_pi / (pump.waist_w0 * pump.waist_w0);
}

// One tensor-rule estimate over the box centred at -q_s = (-q, 0), using the
// qy mirror: only the non-negative qy nodes are visited.
double folded_estimate(double q, const PairKernel<double>& kernel, double halfwidth, const GaussLegendreRule& rule) {
    const Eigen::Index n = rule.nodes.size();
    const double qs2 = q * q;
    double total = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        const double qix = -q + halfwidth * rule.nodes[a];
        const double qix2 = qix * qix;
        const double qpx = qix + q;
        const double qpx2 = qpx * qpx;
        double row = 0.0;
        for (Eigen::Index b = n / 2; b < n; ++b) {
            const double qiy = halfwidth * rule.nodes[b];
            const double qiy2 = qiy * qiy;
            const double mult = (n % 2 == 1 && b == n / 2) ? 1.0 : 2.0;
            row += mult * rule.weights[b] * kernel.amplitude_sq(qix2 + qiy2, qs2, qpx2 + qiy2);
        }
        total += rule.weights[a] * row;
    }
    return total * halfwidth * halfwidth;
}

double full_estimate(const TransverseMomentumd& q_s, const PairKernel<double>& kernel, double halfwidth,
                     const GaussLegendreRule& rule) {
    const Eigen::Index n = rule.nodes.size();
    const double qs2 = q_s.squaredNorm();
    double total = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        const double qix = -q_s.x() + halfwidth * rule.nodes[a];
        double row = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) {
            const double qiy = -q_s.y() + halfwidth * rule.nodes[b];
            const double qpx = qix + q_s.x(), qpy = qiy + q_s.y();
            row += rule.weights[b] * kernel.amplitude_sq(qix * qix + qiy * qiy, qs2, qpx * qpx + qpy * qpy);
        }
        total += rule.weights[a] * row;
    }
    return total * halfwidth * halfwidth;
}

template <typename Estimate>
DensityEstimate refine(const Estimate& estimate, double floor, const QuadratureSpec& quad) {
    int n = quad.points_per_axis;
    double previous = estimate(gauss_legendre(n));
    while (2 * n <= quad.max_points) {
        n *= 2;
        const double current = estimate(gauss_legendre(n));
        const bool settled = std::abs(current - previous) < quad.refine_tol * std::abs(current);
        const bool negligible = std::abs(current) < floor && std::abs(previous) < floor;
        if (settled || negligible) return {current, n, true};
        previous = current;
    }
    return {previous, n, false};
}

} // namespace

DensityEstimate spectral_density(double q_s_mag, const PairKernel<double>& kernel, const PumpSpec& pump,
                                 const QuadratureSpec& quad) {
    q_s_mag = std::abs(q_s_mag);
    if (q_s_mag >= kernel.k_signal()) return {0.0, quad.points_per_axis, true};
    const double halfwidth = quad.halfwidth_factor / pump.waist_w0;
    const double floor = 1e-9 * density_scale(kernel, pump);
    return refine([&](const GaussLegendreRule& rule) { return folded_estimate(q_s_mag, kernel, halfwidth, rule); },
                  floor, quad);
}

DensityEstimate spectral_density(double q_s_mag, double omega_s, const PumpSpec& pump, const CrystalSpec& crystal,
                                 double temp_c, const QuadratureSpec& quad) {
    pump.validate();
    crystal.validate();
    quad.validate();
    const PairKernel<double> kernel(omega_s, pump, temp_c, crystal);
    return spectral_density(q_s_mag, kernel, pump, quad);
}

DensityEstimate spectral_density(const TransverseMomentumd& q_s, double omega_s, const PumpSpec& pump,
                                 const CrystalSpec& crystal, double temp_c, const QuadratureSpec& quad) {
    pump.validate();
    crystal.validate();
    quad.validate();
    const PairKernel<double> kernel(omega_s, pump, temp_c, crystal);
    if (q_s.norm() >= kernel.k_signal()) return {0.0, quad.points_per_axis, true};
    const double halfwidth = quad.halfwidth_factor / pump.waist_w0;
    const double floor = 1e-9 * density_scale(kernel, pump);
    return refine([&](const GaussLegendreRule& rule) { return full_estimate(q_s, kernel, halfwidth, rule); }, floor,
                  quad);
}

void TuningGrid::validate(const PumpSpec& pump) const {
    if (lambda_points < 2) throw ValidationError("grid.lambda_points", "must be >= 2");
    if (q_points < 2) throw ValidationError("grid.q_points", "must be >= 2");
    if (!(lambda_min < lambda_max)) throw ValidationError("grid.lambda_min", "must be < grid.lambda_max");
    if (!(q_min < q_max)) throw ValidationError("grid.q_min", "must be < grid.q_max");
    // Signal frequencies must stay inside (0, omega_p), i.e. lambda > lambda_p.
    if (!(lambda_min > pump.wavelength())) throw ValidationError("grid.lambda_min", "must exceed the pump wavelength");
}

Eigen::VectorXd TuningGrid::q_axis() const {
    Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(q_points, q_min, q_max);
    if (q_min == -q_max) {
        for (int j = 0; j < q_points / 2; ++j) q[q_points - 1 - j] = -q[j];
        if (q_points % 2 == 1) q[q_points / 2] = 0.0;
    }
    return q;
}

Eigen::VectorXd TuningGrid::lambda_axis() const {
    return Eigen::VectorXd::LinSpaced(lambda_points, lambda_min, lambda_max);
}

Eigen::Index TuningCurve::nearest_lambda_index(double lambda) const {
    Eigen::Index idx = 0;
    (lambda_axis.array() - lambda).abs().minCoeff(&idx);
    return idx;
}

Eigen::Index TuningCurve::nearest_q_index(double q) const {
    Eigen::Index idx = 0;
    (q_axis.array() - q).abs().minCoeff(&idx);
    return idx;
}

text::KeyValues describe_inputs(const TuningGrid& grid, const PumpSpec& pump, const CrystalSpec& crystal,
                                double temp_c, const QuadratureSpec& quad) {
    using text::exact;
    return {
        {"pump.omega_p", exact(pump.omega_p)},
        {"pump.waist_w0", exact(pump.waist_w0)},
        {"crystal.length_L0", exact(crystal.length_L0)},
        {"crystal.poling_G0", exact(crystal.poling_G0)},
        {"crystal.alpha", exact(crystal.alpha)},
        {"crystal.beta", exact(crystal.beta)},
        {"crystal.expand_length", crystal.expand_length ? "1" : "0"},
        {"crystal.dispersion", crystal.dispersion ? crystal.dispersion->digest() : "none"},
        {"temperature_c", exact(temp_c)},
        {"grid.lambda_min", exact(grid.lambda_min)},
        {"grid.lambda_max", exact(grid.lambda_max)},
        {"grid.lambda_points", std::to_string(grid.lambda_points)},
        {"grid.q_min", exact(grid.q_min)},
        {"grid.q_max", exact(grid.q_max)},
        {"grid.q_points", std::to_string(grid.q_points)},
        {"quad.points", std::to_string(quad.points_per_axis)},
        {"quad.halfwidth_factor", exact(quad.halfwidth_factor)},
        {"quad.tolerance", exact(quad.refine_tol)},
        {"quad.max_points", std::to_string(quad.max_points)},
    };
}

TuningCurve tuning_curve(const TuningGrid& grid, const PumpSpec& pump, const CrystalSpec& crystal, double temp_c,
                         const QuadratureSpec& quad, int threads) {
    pump.validate();
    crystal.validate();
    quad.validate();
    grid.validate(pump);

    TuningCurve curve;
    curve.q_axis = grid.q_axis();
    curve.lambda_axis = grid.lambda_axis();
    curve.omega_axis = curve.lambda_axis.unaryExpr([](double l) { return wavelength_to_omega(l); });
    curve.params = describe_inputs(grid, pump, crystal, temp_c, quad);
    curve.params_digest = text::digest_of(curve.params);

    std::vector<PairKernel<double>> kernels;
    kernels.reserve(grid.lambda_points);
    for (Eigen::Index i = 0; i < curve.omega_axis.size(); ++i)
        kernels.emplace_back(curve.omega_axis[i], pump, temp_c, crystal);

    // S depends on |q| only; evaluate each distinct magnitude once.
    std::vector<double> magnitudes(curve.q_axis.size());
    for (Eigen::Index j = 0; j < curve.q_axis.size(); ++j) magnitudes[j] = std::abs(curve.q_axis[j]);
    std::vector<double> unique = magnitudes;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    const std::size_t rows = kernels.size(), ucols = unique.size();
    std::vector<DensityEstimate> cells(rows * ucols);
    parallel_for(cells.size(), threads, [&](std::size_t t) {
        const std::size_t i = t / ucols, u = t % ucols;
        cells[t] = spectral_density(unique[u], kernels[i], pump, quad);
    });

    curve.values.resize(rows, curve.q_axis.size());
    for (Eigen::Index j = 0; j < curve.q_axis.size(); ++j) {
        const auto u = static_cast<std::size_t>(std::lower_bound(unique.begin(), unique.end(), magnitudes[j]) - unique.begin());
        for (std::size_t i = 0; i < rows; ++i) {
            const auto& cell = cells[i * ucols + u];
            curve.values(i, j) = cell.value;
            if (!cell.converged) ++curve.unconverged_pixels;
        }
    }

    curve.raw_max = curve.values.maxCoeff();
    if (!(curve.raw_max > 0)) throw AllZeroGrid("spectral density is zero on every pixel of the grid");
    curve.values /= curve.raw_max;
    return curve;
}

Eigen::VectorXd marginal_spectrum(const TuningCurve& curve) {
    const Eigen::Index rows = curve.rows(), cols = curve.cols();
    Eigen::VectorXd marginal = Eigen::VectorXd::Zero(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j + 1 < cols; ++j)
            sum += 0.5 * (curve.values(i, j) + curve.values(i, j + 1)) * (curve.q_axis[j + 1] - curve.q_axis[j]);
        marginal[i] = sum;
    }
    const double peak = rows > 0 ? marginal.maxCoeff() : 0.0;
    if (peak > 0) marginal /= peak;
    return marginal;
}

namespace {

// Mass-conserving scatter of `in` along one axis: each sample spreads over the
// in-range offsets of `kernel` (indexed -half..half), renormalized there.
void scatter(const Eigen::Ref<const Eigen::VectorXd>& in, Eigen::Ref<Eigen::VectorXd> out,
             const std::vector<double>& kernel) {
    const Eigen::Index n = in.size();
    const Eigen::Index half = static_cast<Eigen::Index>(kernel.size() / 2);
    out.setZero();
    for (Eigen::Index src = 0; src < n; ++src) {
        if (in[src] == 0.0) continue;
        const Eigen::Index lo = std::max<Eigen::Index>(0, src - half);
        const Eigen::Index hi = std::min<Eigen::Index>(n - 1, src + half);
        double norm = 0.0;
        for (Eigen::Index dst = lo; dst <= hi; ++dst) norm += kernel[dst - src + half];
        for (Eigen::Index dst = lo; dst <= hi; ++dst) out[dst] += in[src] * kernel[dst - src + half] / norm;
    }
}

std::vector<double> gaussian_kernel(double fwhm, double step) {
    const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    const auto half = static_cast<int>(std::ceil(4.0 * sigma / step));
    std::vector<double> k(2 * half + 1);
    for (int m = -half; m <= half; ++m) {
        const double x = m * step / sigma;
        k[m + half] = std::exp(-0.5 * x * x);
    }
    return k;
}

// Fraction of each grid cell [m h - h/2, m h + h/2] covered by [-w/2, w/2].
std::vector<double> tophat_kernel(double width, double step) {
    const auto half = static_cast<int>(std::ceil(width / (2.0 * step) + 0.5));
    std::vector<double> k(2 * half + 1);
    for (int m = -half; m <= half; ++m) {
        const double lo = std::max(m * step - 0.5 * step, -0.5 * width);
        const double hi = std::min(m * step + 0.5 * step, 0.5 * width);
        k[m + half] = std::max(0.0, hi - lo) / step;
    }
    return k;
}

} // namespace

Eigen::MatrixXd instrument_smooth(const TuningCurve& curve, const InstrumentSpec& inst) {
    const Eigen::Index rows = curve.rows(), cols = curve.cols();
    Eigen::MatrixXd grid = curve.values;
    const bool smooth_q = inst.fiber_core_diameter > 0;
    const bool smooth_lambda = inst.osa_fwhm > 0;

    if (smooth_q) {
        if (!(inst.f2 > 0)) throw ValidationError("instrument.f2", "must be > 0");
        if (cols < 2) throw KernelUnderresolved("q axis needs at least two samples");
        const double step = (curve.q_axis[cols - 1] - curve.q_axis[0]) / double(cols - 1);
        Eigen::VectorXd row(cols), smoothed(cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double width = two_pi / curve.lambda_axis[i] * inst.fiber_core_diameter / inst.f2;
            if (width < 3.0 * step)
                throw KernelUnderresolved("fiber kernel width " + text::sig(width * 1e-6, 4) +
                                          " rad/um spans fewer than 3 q steps");
            row = grid.row(i).transpose();
            scatter(row, smoothed, tophat_kernel(width, step));
            grid.row(i) = smoothed.transpose();
        }
    }
    if (smooth_lambda) {
        if (rows < 2) throw KernelUnderresolved("wavelength axis needs at least two samples");
        const double step = (curve.lambda_axis[rows - 1] - curve.lambda_axis[0]) / double(rows - 1);
        if (inst.osa_fwhm < 3.0 * step)
            throw KernelUnderresolved("spectrometer FWHM " + text::sig(inst.osa_fwhm * 1e9, 4) +
                                      " nm spans fewer than 3 wavelength steps");
        const auto kernel = gaussian_kernel(inst.osa_fwhm, step);
        Eigen::VectorXd col(rows), smoothed(rows);
        for (Eigen::Index j = 0; j < cols; ++j) {
            col = grid.col(j);
            scatter(col, smoothed, kernel);
            grid.col(j) = smoothed;
        }
    }
    return grid;
}

TuningCurve instrument_convolve(const TuningCurve& curve, const InstrumentSpec& inst) {
    TuningCurve out = curve;
    out.values = instrument_smooth(curve, inst);
    const double peak = out.values.maxCoeff();
    if (!(peak > 0)) throw AllZeroGrid("instrument-smoothed grid is identically zero");
    out.values /= peak;
    out.raw_max = curve.raw_max * peak;
    out.params.emplace_back("instrument.core", text::exact(inst.fiber_core_diameter));
    out.params.emplace_back("instrument.f2", text::exact(inst.f2));
    out.params.emplace_back("instrument.osa_fwhm", text::exact(inst.osa_fwhm));
    out.params_digest = text::digest_of(out.params);
    return out;
}

} // namespace spdc
