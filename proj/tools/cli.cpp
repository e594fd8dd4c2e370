#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spdc/calibrate.hpp"
#include "spdc/config.hpp"
#include "spdc/output.hpp"

namespace spdc::cli {

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::string formats;
    int threads = 0;
};

// 2.14e+12 -> 2.14e12
std::string compact_sci(double x, int digits) {
    std::string s = text::sig(x, digits);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mantissa = s.substr(0, e), exponent = s.substr(e + 1);
    bool negative = false;
    if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
        negative = exponent[0] == '-';
        exponent.erase(0, 1);
    }
    exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
    return mantissa + "e" + (negative ? "-" : "") + exponent;
}

std::vector<double> parse_list(const std::string& flag, const std::string& csv) {
    std::vector<double> values;
    for (const auto& field : text::split(csv, ',')) {
        double v = 0;
        if (!text::parse_double(field, v)) throw ValidationError(flag, "not a number: '" + field + "'");
        values.push_back(v);
    }
    return values;
}

class Session {
public:
    Session(const CommonOptions& opts, const std::string& command) : command_(command) {
        config_ = load_config(opts.config_path);
        if (!opts.out_dir.empty()) config_.output.directory = opts.out_dir;
        if (!opts.formats.empty()) {
            config_.output.formats = text::split(opts.formats, ',');
            for (const auto& f : config_.output.formats)
                if (f != "csv" && f != "pgm") throw ValidationError("--format", "unknown format '" + f + "'");
        }
        threads_ = opts.threads;
        std::filesystem::create_directories(config_.output.directory);
    }

    const RunConfig& config() const { return config_; }
    SimulationConfig simulation() const { return config_.simulation(threads_); }

    bool wants(const std::string& format) const {
        for (const auto& f : config_.output.formats)
            if (f == format) return true;
        return false;
    }

    text::KeyValues metadata(const text::KeyValues& extra = {}) const {
        text::KeyValues kv{{"command", command_}};
        const auto cfg = config_.effective_entries();
        kv.insert(kv.end(), cfg.begin(), cfg.end());
        kv.insert(kv.end(), extra.begin(), extra.end());
        return kv;
    }

    std::filesystem::path path(const std::string& name) const {
        return std::filesystem::path(config_.output.directory) / name;
    }

    std::ofstream open(const std::string& name, bool binary = false) const {
        std::ofstream f(path(name), binary ? std::ios::binary : std::ios::out);
        if (!f) throw Error("cannot write " + path(name).string());
        return f;
    }

    void write_curve(const std::string& stem, const TuningCurve& curve, const text::KeyValues& meta) const {
        if (wants("csv")) {
            auto f = open(stem + ".csv");
            write_curve_csv(f, curve, meta);
        }
        if (wants("pgm")) {
            auto f = open(stem + ".pgm", true);
            write_curve_pgm(f, curve);
        }
    }

    void write_run_metadata(const text::KeyValues& meta) const {
        auto f = open("run_metadata.txt");
        write_metadata(f, meta);
    }

private:
    std::string command_;
    RunConfig config_;
    int threads_ = 0;
};

void add_common(CLI::App* sub, CommonOptions& opts, bool needs_config = true) {
    auto* cfg = sub->add_option("--config", opts.config_path, "Run configuration file");
    if (needs_config) cfg->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out_dir, "Output directory (overrides output.directory)");
    sub->add_option("--format", opts.formats, "Comma-separated output formats: csv,pgm");
    sub->add_option("--threads", opts.threads, "Worker threads (0 = hardware); output bytes do not depend on it")
        ->check(CLI::NonNegativeNumber);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tuning curves of type-0 SPDC in periodically poled crystals", "spdc-tuner"};
    app.require_subcommand(1);

    CommonOptions opts;
    bool convolve = false;

    auto* curve_cmd = app.add_subcommand("curve", "Compute the tuning curve S(q, lambda)");
    add_common(curve_cmd, opts);
    curve_cmd->add_flag("--convolve", convolve, "Apply the configured instrument response");

    auto* marginal_cmd = app.add_subcommand("marginal", "Tuning curve integrated over q (collimated spectrum)");
    add_common(marginal_cmd, opts);
    marginal_cmd->add_flag("--convolve", convolve, "Apply the configured instrument response first");

    std::string sweep_param, sweep_values;
    auto* sweep_cmd = app.add_subcommand("sweep", "One tuning curve per parameter value");
    add_common(sweep_cmd, opts);
    sweep_cmd->add_option("--param", sweep_param, "G0, w0, T or L0")->required();
    sweep_cmd->add_option("--values", sweep_values, "Comma-separated values in SI units (T in degC)")->required();

    std::string fit_target, fit_bounds;
    double fit_tol = 1e-10;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the poling period to a measured spectrum");
    add_common(fit_cmd, opts);
    fit_cmd->add_option("--target", fit_target, "Measured spectrum CSV")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--bounds", fit_bounds, "G_lo,G_hi in m")->required();
    fit_cmd->add_option("--tol", fit_tol, "Bracket tolerance in m (>= 1e-10)");

    double delta_t = 0;
    auto* equiv_cmd = app.add_subcommand("equiv", "Poling-period change equivalent to a temperature change");
    add_common(equiv_cmd, opts);
    equiv_cmd->add_option("--delta-t", delta_t, "Temperature change in degC")->required();

    double power_nw = 0, lambda_nm = 0, bandwidth_nm = 0;
    auto* flux_cmd = app.add_subcommand("flux", "Photon flux and spectral mode density");
    flux_cmd->add_option("--power-nw", power_nw, "Down-converted power in nW")->required();
    flux_cmd->add_option("--lambda-nm", lambda_nm, "Center wavelength in nm")->required();
    flux_cmd->add_option("--bandwidth-nm", bandwidth_nm, "Down-converted bandwidth in nm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (flux_cmd->parsed()) {
            const double flux = photon_flux(power_nw * 1e-9, lambda_nm * 1e-9);
            out << "photon_flux_per_s " << compact_sci(flux, 3) << '\n';
            if (flux_cmd->count("--bandwidth-nm"))
                out << "mode_density " << text::sig(mode_density(flux, bandwidth_nm * 1e-9, lambda_nm * 1e-9), 3)
                    << '\n';
            return 0;
        }

        if (curve_cmd->parsed() || marginal_cmd->parsed()) {
            const bool is_curve = curve_cmd->parsed();
            Session session(opts, is_curve ? "curve" : "marginal");
            const auto sim = session.simulation();
            TuningCurve curve = simulate(sim);
            if (convolve) {
                if (!sim.instrument) throw ValidationError("instrument", "--convolve needs an instrument section");
                curve = instrument_convolve(curve, *sim.instrument);
            }
            const auto meta = session.metadata({{"convolved", convolve ? "1" : "0"}});
            if (is_curve) {
                session.write_curve("curve", curve, meta);
            } else {
                auto f = session.open("marginal.csv");
                write_marginal_csv(f, curve, marginal_spectrum(curve), meta);
            }
            session.write_run_metadata(meta);
            if (curve.unconverged_pixels > 0)
                err << "warning: " << curve.unconverged_pixels << " pixels did not meet the quadrature tolerance\n";
            Eigen::Index i = 0, j = 0;
            curve.values.maxCoeff(&i, &j);
            out << "max_at q_per_um=" << text::sig(curve.q_axis[j] * 1e-6, 6)
                << " lambda_nm=" << text::sig(curve.lambda_axis[i] * 1e9, 8) << '\n';
            out << "params_digest " << curve.params_digest << '\n';
            return 0;
        }

        if (sweep_cmd->parsed()) {
            Session session(opts, "sweep");
            const auto param = parse_sweep_param(sweep_param);
            const auto values = parse_list("--values", sweep_values);
            const auto entries = sweep(param, values, session.simulation());
            int failures = 0;
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const auto& e = entries[k];
                const std::string stem = "sweep_" + std::to_string(k);
                if (!e.curve) {
                    ++failures;
                    err << "error: " << to_string(param) << "=" << text::sig(e.value, 9) << ": " << e.error << '\n';
                    continue;
                }
                session.write_curve(stem, *e.curve,
                                    session.metadata({{"sweep.param", to_string(param)},
                                                      {"sweep.value", text::exact(e.value)}}));
                out << stem << ' ' << to_string(param) << '=' << text::sig(e.value, 9) << " params_digest "
                    << e.curve->params_digest << '\n';
            }
            session.write_run_metadata(session.metadata({{"sweep.param", to_string(param)}, {"sweep.values", sweep_values}}));
            return failures == 0 ? 0 : 1;
        }

        if (fit_cmd->parsed()) {
            Session session(opts, "fit");
            const auto bounds = parse_list("--bounds", fit_bounds);
            if (bounds.size() != 2) throw ValidationError("--bounds", "expected G_lo,G_hi");
            const auto sim = session.simulation();
            const auto target = load_measured_csv(fit_target, sim.instrument);
            const auto result = fit_poling_period(target, sim, {bounds[0], bounds[1]}, fit_tol);
            const text::KeyValues report{{"best_G0_m", text::exact(result.best_G0)},
                                         {"best_G0_um", text::sig(result.best_G0 * 1e6, 9)},
                                         {"residual", text::sig(result.residual, 9)},
                                         {"iterations", std::to_string(result.iterations)},
                                         {"converged", result.converged ? "1" : "0"}};
            auto meta = session.metadata({{"fit.target", fit_target}, {"fit.bounds", fit_bounds},
                                          {"fit.tol", text::exact(fit_tol)}});
            meta.insert(meta.end(), report.begin(), report.end());
            auto f = session.open("fit.txt");
            write_metadata(f, meta);
            write_metadata(out, report);
            return result.converged ? 0 : 2;
        }

        if (equiv_cmd->parsed()) {
            Session session(opts, "equiv");
            const auto eq = temperature_poling_equivalence(delta_t, session.simulation());
            const text::KeyValues report{{"delta_T_c", text::sig(eq.delta_T, 9)},
                                         {"delta_G0_nm", text::sig(eq.delta_G0 * 1e9, 6)},
                                         {"expansion_share_nm", text::sig(eq.expansion_share * 1e9, 6)},
                                         {"expansion_fraction", text::sig(eq.expansion_fraction, 4)},
                                         {"residual", text::sig(eq.fit.residual, 6)},
                                         {"converged", eq.fit.converged ? "1" : "0"}};
            auto meta = session.metadata();
            meta.insert(meta.end(), report.begin(), report.end());
            auto f = session.open("equiv.txt");
            write_metadata(f, meta);
            write_metadata(out, report);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace spdc::cli
