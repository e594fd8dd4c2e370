#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spdc/calibrate.hpp"
#include "spdc/text.hpp"

namespace spdc {

/// Run configuration in user units, as written in the `section.key = value` file.
struct RunConfig {
    struct Pump {
        double wavelength_nm = 0;
        double waist_um = 0;
        std::optional<double> power_w;
    } pump;

    struct Crystal {
        double length_mm = 0;
        double poling_um = 0;
        double temperature_c = reference_temperature_c;
        double alpha = 0;
        double beta = 0;
        std::string dispersion; // resolved path
    } crystal;

    struct Grid {
        double lambda_min_nm = 1000;
        double lambda_max_nm = 1140;
        double q_min_per_um = -0.25;
        double q_max_per_um = 0.25;
        int lambda_points = 256;
        int q_points = 256;
    } grid;

    struct Quad {
        int points = 64;
        double halfwidth_factor = 5;
        double tolerance = 1e-3;
        int max_points = 512;
    } quad;

    struct Instrument {
        double core_um = 200;
        double f2_mm = 50;
        double osa_fwhm_nm = 2;
    };
    std::optional<Instrument> instrument;

    struct Output {
        std::string directory = ".";
        std::vector<std::string> formats{"csv", "pgm"};
    } output;

    std::shared_ptr<const DispersionModel> dispersion_model;

    /// Every field, defaults included, in a fixed order; plus the fixture digest.
    text::KeyValues effective_entries() const;

    /// SI-unit simulation inputs. `threads` only affects scheduling.
    SimulationConfig simulation(int threads = 0) const;
};

/// Parses and validates a config. Relative dispersion paths resolve against `base_dir`.
/// Throws ParseError (with line number) or ValidationError (naming the key).
RunConfig parse_config(std::istream& in, const std::string& source, const std::string& base_dir);
RunConfig load_config(const std::string& path);

} // namespace spdc
