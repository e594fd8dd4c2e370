#include "spdc/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

namespace spdc {

TuningCurve simulate(const SimulationConfig& config) {
    return tuning_curve(config.grid, config.pump, config.crystal, config.temperature_c, config.quad, config.threads);
}

SweepParam parse_sweep_param(const std::string& name) {
    if (name == "G0") return SweepParam::G0;
    if (name == "w0") return SweepParam::W0;
    if (name == "T") return SweepParam::T;
    if (name == "L0") return SweepParam::L0;
    throw ValidationError("param", "unknown sweep parameter '" + name + "' (expected G0, w0, T or L0)");
}

std::string to_string(SweepParam param) {
    switch (param) {
    case SweepParam::G0: return "G0";
    case SweepParam::W0: return "w0";
    case SweepParam::T: return "T";
    case SweepParam::L0: return "L0";
    }
    return "?";
}

SimulationConfig with_param(SimulationConfig base, SweepParam param, double value) {
    switch (param) {
    case SweepParam::G0: base.crystal.poling_G0 = value; break;
    case SweepParam::W0: base.pump.waist_w0 = value; break;
    case SweepParam::T: base.temperature_c = value; break;
    case SweepParam::L0: base.crystal.length_L0 = value; break;
    }
    return base;
}

std::vector<SweepEntry> sweep(SweepParam param, const std::vector<double>& values, const SimulationConfig& base) {
    if (values.empty()) throw ValidationError("values", "sweep needs at least one value");
    std::vector<SweepEntry> out;
    out.reserve(values.size());
    for (const double v : values) {
        SweepEntry entry{v, std::nullopt, {}};
        try {
            entry.curve = simulate(with_param(base, param, v));
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

void MeasuredSpectrum::validate() const {
    if (records.empty()) throw ValidationError("target", "no records");
    bool any_positive = false;
    for (const auto& r : records) {
        if (!(r.counts >= 0)) throw ValidationError("counts", "must be >= 0");
        if (!(r.lambda > 0)) throw ValidationError("lambda_nm", "must be > 0");
        if (!std::isfinite(r.q)) throw ValidationError("q", "must be finite");
        any_positive = any_positive || r.counts > 0;
    }
    if (!any_positive) throw ValidationError("counts", "at least one record must be positive");
}

MeasuredSpectrum parse_measured_csv(std::istream& in, const std::string& source,
                                    std::optional<InstrumentSpec> instrument) {
    MeasuredSpectrum spectrum;
    spectrum.instrument = instrument;
    enum class Column { None, PositionMm, MomentumPerUm } column = Column::None;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = text::split(line, ',');
        if (column == Column::None) {
            if (fields.size() == 3 && fields[1] == "lambda_nm" && fields[2] == "counts") {
                if (fields[0] == "x_mm") column = Column::PositionMm;
                else if (fields[0] == "q_per_um") column = Column::MomentumPerUm;
            }
            if (column == Column::None)
                throw ParseError(source, line_no, "expected header 'x_mm,lambda_nm,counts' or 'q_per_um,lambda_nm,counts'");
            if (column == Column::PositionMm && !instrument)
                throw ParseError(source, line_no, "fiber positions need an instrument section (f2) to map x to q");
            continue;
        }
        if (fields.size() != 3) throw ParseError(source, line_no, "expected 3 columns");
        double first = 0, lambda_nm = 0, counts = 0;
        if (!text::parse_double(fields[0], first) || !text::parse_double(fields[1], lambda_nm) ||
            !text::parse_double(fields[2], counts))
            throw ParseError(source, line_no, "non-numeric field");
        const double lambda = lambda_nm * 1e-9;
        const double q = column == Column::MomentumPerUm
                             ? first * 1e6
                             : fiber_position_to_q(first * 1e-3, wavelength_to_omega(lambda), instrument->f2);
        spectrum.records.push_back({q, lambda, counts});
    }
    if (column == Column::None) throw ParseError(source, line_no, "missing header");
    spectrum.validate();
    return spectrum;
}

MeasuredSpectrum load_measured_csv(const std::string& path, std::optional<InstrumentSpec> instrument) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open target file");
    return parse_measured_csv(in, path, instrument);
}

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol,
                                      int max_evaluations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    int evaluations = 2;
    while (b - a > tol && evaluations < max_evaluations) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        ++evaluations;
    }
    return fc <= fd ? ScalarMinimum{c, fc, evaluations, b - a <= tol} : ScalarMinimum{d, fd, evaluations, b - a <= tol};
}

namespace {

struct TargetSample {
    double q;
    double lambda;
    double value;
};

// Bracketing index i with axis[i] <= x <= axis[i + 1] on an ascending axis.
bool locate(const Eigen::VectorXd& axis, double x, Eigen::Index& i, double& t) {
    const Eigen::Index n = axis.size();
    if (n < 2 || x < axis[0] || x > axis[n - 1]) return false;
    const auto it = std::upper_bound(axis.data(), axis.data() + n, x);
    i = std::clamp<Eigen::Index>(it - axis.data() - 1, 0, n - 2);
    t = (x - axis[i]) / (axis[i + 1] - axis[i]);
    return true;
}

bool sample_bilinear(const TuningCurve& curve, double lambda, double q, double& out) {
    Eigen::Index i = 0, j = 0;
    double u = 0, v = 0;
    if (!locate(curve.lambda_axis, lambda, i, u) || !locate(curve.q_axis, q, j, v)) return false;
    const auto& m = curve.values;
    out = (1 - u) * ((1 - v) * m(i, j) + v * m(i, j + 1)) + u * ((1 - v) * m(i + 1, j) + v * m(i + 1, j + 1));
    return true;
}

std::vector<TargetSample> target_samples(const FitTarget& target) {
    std::vector<TargetSample> samples;
    if (const auto* measured = std::get_if<MeasuredSpectrum>(&target)) {
        measured->validate();
        for (const auto& r : measured->records) samples.push_back({r.q, r.lambda, r.counts});
    } else {
        const auto& curve = std::get<TuningCurve>(target);
        for (Eigen::Index i = 0; i < curve.rows(); ++i)
            for (Eigen::Index j = 0; j < curve.cols(); ++j)
                samples.push_back({curve.q_axis[j], curve.lambda_axis[i], curve.values(i, j)});
    }
    double peak = 0;
    for (const auto& s : samples) peak = std::max(peak, s.value);
    if (!(peak > 0)) throw ValidationError("target", "target has no positive sample");
    for (auto& s : samples) s.value /= peak;
    return samples;
}

double residual_against(const TuningCurve& simulation, const std::vector<TargetSample>& samples) {
    std::vector<double> sim;
    std::vector<double> tgt;
    sim.reserve(samples.size());
    tgt.reserve(samples.size());
    for (const auto& s : samples) {
        double v = 0;
        if (!sample_bilinear(simulation, s.lambda, s.q, v)) continue;
        sim.push_back(v);
        tgt.push_back(s.value);
    }
    if (sim.empty()) throw ValidationError("target", "no target sample lies inside the simulation grid");
    const double sim_peak = *std::max_element(sim.begin(), sim.end());
    const double tgt_peak = *std::max_element(tgt.begin(), tgt.end());
    double num = 0, den = 0;
    for (std::size_t k = 0; k < sim.size(); ++k) {
        const double s = sim_peak > 0 ? sim[k] / sim_peak : 0.0;
        const double t = tgt_peak > 0 ? tgt[k] / tgt_peak : 0.0;
        num += (s - t) * (s - t);
        den += t * t;
    }
    return den > 0 ? num / den : num;
}

std::optional<InstrumentSpec> fit_instrument(const FitTarget& target, const SimulationConfig& base) {
    if (const auto* measured = std::get_if<MeasuredSpectrum>(&target); measured && measured->instrument)
        return measured->instrument;
    return base.instrument;
}

// Coarse scan over [lo, hi], then golden-section inside the best scan cell.
ScalarMinimum scan_then_golden(const std::function<double(double)>& f, double lo, double hi, int scan_points,
                               double tol, bool require_descent) {
    std::vector<double> xs(scan_points), fs(scan_points);
    for (int k = 0; k < scan_points; ++k) {
        xs[k] = lo + (hi - lo) * k / (scan_points - 1);
        fs[k] = f(xs[k]);
    }
    const auto [mn, mx] = std::minmax_element(fs.begin(), fs.end());
    if (require_descent && !(*mx - *mn > 1e-12 * std::max(1.0, std::abs(*mx))))
        throw NoDescent("fit objective is flat across the search bounds");
    const auto best = static_cast<int>(mn - fs.begin());
    const double a = xs[std::max(best - 1, 0)];
    const double b = xs[std::min(best + 1, scan_points - 1)];
    auto refined = golden_section_minimize(f, a, b, tol);
    refined.evaluations += scan_points;
    if (fs[best] < refined.value) {
        refined.x = xs[best];
        refined.value = fs[best];
    }
    return refined;
}

} // namespace

double fit_objective(const TuningCurve& simulation, const FitTarget& target) {
    return residual_against(simulation, target_samples(target));
}

FitResult fit_poling_period(const FitTarget& target, const SimulationConfig& base, std::pair<double, double> bounds,
                            double tol) {
    const auto [lo, hi] = bounds;
    if (!(lo > 0 && lo < hi)) throw ValidationError("bounds", "need 0 < G_lo < G_hi");
    if (hi - lo > 200e-9 * (1 + 1e-9)) throw ValidationError("bounds", "span must not exceed 200 nm");
    if (!(tol >= 0.1e-9 * (1 - 1e-9))) throw ValidationError("tol", "must be >= 0.1 nm");

    const auto samples = target_samples(target);
    if (const auto* measured = std::get_if<MeasuredSpectrum>(&target)) {
        const double limit = 10 * base.pump.wavelength();
        for (const auto& r : measured->records)
            if (!(r.lambda < limit)) throw ValidationError("lambda_nm", "record wavelength beyond 10 x pump wavelength");
    }
    const auto instrument = fit_instrument(target, base);

    std::map<double, double> cache;
    const auto objective = [&](double g0) {
        if (const auto it = cache.find(g0); it != cache.end()) return it->second;
        TuningCurve curve = simulate(with_param(base, SweepParam::G0, g0));
        if (instrument) curve = instrument_convolve(curve, *instrument);
        return cache[g0] = residual_against(curve, samples);
    };

    const auto best = scan_then_golden(objective, lo, hi, 11, tol, true);
    FitResult result;
    result.best_G0 = best.x;
    result.residual = best.value;
    result.iterations = static_cast<int>(cache.size());
    result.converged = best.converged;
    return result;
}

TemperatureEquivalence temperature_poling_equivalence(double delta_T, const SimulationConfig& base, double tol) {
    if (!(std::abs(delta_T) <= 30)) throw ValidationError("delta-t", "|delta T| must not exceed 30 degC");
    TuningCurve target = simulate(with_param(base, SweepParam::T, base.temperature_c + delta_T));
    if (base.instrument) target = instrument_convolve(target, *base.instrument);

    const double g0 = base.crystal.poling_G0;
    TemperatureEquivalence eq;
    eq.delta_T = delta_T;
    eq.fit = fit_poling_period(target, base, {g0 - 100e-9, g0 + 100e-9}, tol);
    eq.delta_G0 = eq.fit.best_G0 - g0;
    const auto& c = base.crystal;
    eq.expansion_share = g0 * (thermal_expansion_factor(base.temperature_c + delta_T, c.alpha, c.beta) -
                               thermal_expansion_factor(base.temperature_c, c.alpha, c.beta));
    eq.expansion_fraction = eq.delta_G0 != 0 ? eq.expansion_share / eq.delta_G0 : 0.0;
    return eq;
}

double collinear_degenerate_residual(const PumpSpec& pump, const CrystalSpec& crystal, double temp_c) {
    const PairKernel<double> kernel(0.5 * pump.omega_p, pump, temp_c, crystal);
    const TransverseMomentumd zero = TransverseMomentumd::Zero();
    return qpm_residual(*kernel.mismatch(zero, zero), temp_c, crystal);
}

double collinear_degenerate_period(const PumpSpec& pump, const CrystalSpec& crystal, double temp_c, double lo,
                                   double hi) {
    auto residual = [&](double g0) {
        CrystalSpec c = crystal;
        c.poling_G0 = g0;
        return collinear_degenerate_residual(pump, c, temp_c);
    };
    constexpr int steps = 200;
    double a = lo, fa = residual(lo);
    for (int k = 1; k <= steps; ++k) {
        if (fa == 0) return a;
        double b = lo + (hi - lo) * k / steps;
        const double fb = residual(b);
        if ((fa < 0) == (fb < 0)) {
            a = b;
            fa = fb;
            continue;
        }
        for (int it = 0; it < 200 && b - a > 1e-18; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = residual(m);
            if ((fm < 0) == (fa < 0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }
    throw Error("collinear degenerate residual has no root in [" + text::sig(lo, 8) + ", " + text::sig(hi, 8) + "] m");
}

double peak_degenerate_period(const PumpSpec& pump, const CrystalSpec& crystal, double temp_c,
                              const QuadratureSpec& quad, double lo, double hi, double tol) {
    const auto negative_density = [&](double g0) {
        CrystalSpec c = crystal;
        c.poling_G0 = g0;
        return -spectral_density(0.0, 0.5 * pump.omega_p, pump, c, temp_c, quad).value;
    };
    return scan_then_golden(negative_density, lo, hi, 41, tol, false).x;
}

} // namespace spdc
