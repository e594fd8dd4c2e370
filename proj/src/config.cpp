#include "spdc/config.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>

namespace spdc {

namespace {

struct Field {
    bool required;
    std::function<void(const std::string& value, RunConfig& cfg)> assign;
};

double as_double(const std::string& key, const std::string& value) {
    double v = 0;
    if (!text::parse_double(value, v) || !std::isfinite(v)) throw ValidationError(key, "not a number: '" + value + "'");
    return v;
}

int as_int(const std::string& key, const std::string& value) {
    int v = 0;
    if (!text::parse_int(value, v)) throw ValidationError(key, "not an integer: '" + value + "'");
    return v;
}

RunConfig::Instrument& instrument_of(RunConfig& cfg) {
    if (!cfg.instrument) cfg.instrument.emplace();
    return *cfg.instrument;
}

const std::map<std::string, Field>& schema() {
    static const std::map<std::string, Field> fields = {
        {"pump.wavelength_nm", {true, [](auto& v, auto& c) { c.pump.wavelength_nm = as_double("pump.wavelength_nm", v); }}},
        {"pump.waist_um", {true, [](auto& v, auto& c) { c.pump.waist_um = as_double("pump.waist_um", v); }}},
        {"pump.power_w", {false, [](auto& v, auto& c) { c.pump.power_w = as_double("pump.power_w", v); }}},
        {"crystal.length_mm", {true, [](auto& v, auto& c) { c.crystal.length_mm = as_double("crystal.length_mm", v); }}},
        {"crystal.poling_um", {true, [](auto& v, auto& c) { c.crystal.poling_um = as_double("crystal.poling_um", v); }}},
        {"crystal.temperature_c",
         {true, [](auto& v, auto& c) { c.crystal.temperature_c = as_double("crystal.temperature_c", v); }}},
        {"crystal.alpha", {true, [](auto& v, auto& c) { c.crystal.alpha = as_double("crystal.alpha", v); }}},
        {"crystal.beta", {true, [](auto& v, auto& c) { c.crystal.beta = as_double("crystal.beta", v); }}},
        {"crystal.dispersion", {true, [](auto& v, auto& c) { c.crystal.dispersion = v; }}},
        {"grid.lambda_min_nm", {false, [](auto& v, auto& c) { c.grid.lambda_min_nm = as_double("grid.lambda_min_nm", v); }}},
        {"grid.lambda_max_nm", {false, [](auto& v, auto& c) { c.grid.lambda_max_nm = as_double("grid.lambda_max_nm", v); }}},
        {"grid.q_min_per_um", {false, [](auto& v, auto& c) { c.grid.q_min_per_um = as_double("grid.q_min_per_um", v); }}},
        {"grid.q_max_per_um", {false, [](auto& v, auto& c) { c.grid.q_max_per_um = as_double("grid.q_max_per_um", v); }}},
        {"grid.lambda_points", {false, [](auto& v, auto& c) { c.grid.lambda_points = as_int("grid.lambda_points", v); }}},
        {"grid.q_points", {false, [](auto& v, auto& c) { c.grid.q_points = as_int("grid.q_points", v); }}},
        {"quad.points", {false, [](auto& v, auto& c) { c.quad.points = as_int("quad.points", v); }}},
        {"quad.halfwidth_factor",
         {false, [](auto& v, auto& c) { c.quad.halfwidth_factor = as_double("quad.halfwidth_factor", v); }}},
        {"quad.tolerance", {false, [](auto& v, auto& c) { c.quad.tolerance = as_double("quad.tolerance", v); }}},
        {"quad.max_points", {false, [](auto& v, auto& c) { c.quad.max_points = as_int("quad.max_points", v); }}},
        {"instrument.core_um",
         {false, [](auto& v, auto& c) { instrument_of(c).core_um = as_double("instrument.core_um", v); }}},
        {"instrument.f2_mm", {false, [](auto& v, auto& c) { instrument_of(c).f2_mm = as_double("instrument.f2_mm", v); }}},
        {"instrument.osa_fwhm_nm",
         {false, [](auto& v, auto& c) { instrument_of(c).osa_fwhm_nm = as_double("instrument.osa_fwhm_nm", v); }}},
        {"output.directory", {false, [](auto& v, auto& c) { c.output.directory = v; }}},
        {"output.formats",
         {false,
          [](auto& v, auto& c) {
              c.output.formats = text::split(v, ',');
              for (const auto& f : c.output.formats)
                  if (f != "csv" && f != "pgm") throw ValidationError("output.formats", "unknown format '" + f + "'");
          }}},
    };
    return fields;
}

void require_positive(const std::string& key, double v) {
    if (!(v > 0)) throw ValidationError(key, "must be > 0");
}

void validate(const RunConfig& c) {
    require_positive("pump.wavelength_nm", c.pump.wavelength_nm);
    require_positive("pump.waist_um", c.pump.waist_um);
    if (c.pump.power_w && !(*c.pump.power_w >= 0)) throw ValidationError("pump.power_w", "must be >= 0");
    require_positive("crystal.length_mm", c.crystal.length_mm);
    require_positive("crystal.poling_um", c.crystal.poling_um);
    if (!(c.grid.lambda_min_nm > c.pump.wavelength_nm))
        throw ValidationError("grid.lambda_min_nm", "must exceed the pump wavelength");
    if (!(c.grid.lambda_min_nm < c.grid.lambda_max_nm))
        throw ValidationError("grid.lambda_max_nm", "must exceed grid.lambda_min_nm");
    if (!(c.grid.q_min_per_um < c.grid.q_max_per_um))
        throw ValidationError("grid.q_max_per_um", "must exceed grid.q_min_per_um");
    if (c.grid.lambda_points < 2) throw ValidationError("grid.lambda_points", "must be >= 2");
    if (c.grid.q_points < 2) throw ValidationError("grid.q_points", "must be >= 2");
    if (c.quad.points < 8) throw ValidationError("quad.points", "must be >= 8");
    if (!(c.quad.halfwidth_factor >= 3)) throw ValidationError("quad.halfwidth_factor", "must be >= 3");
    if (!(c.quad.tolerance > 0 && c.quad.tolerance < 1)) throw ValidationError("quad.tolerance", "must lie in (0, 1)");
    if (c.quad.max_points < c.quad.points) throw ValidationError("quad.max_points", "must be >= quad.points");
    if (c.instrument) {
        require_positive("instrument.core_um", c.instrument->core_um);
        require_positive("instrument.f2_mm", c.instrument->f2_mm);
        require_positive("instrument.osa_fwhm_nm", c.instrument->osa_fwhm_nm);
    }
    if (c.output.formats.empty()) throw ValidationError("output.formats", "at least one format required");
}

} // namespace

RunConfig parse_config(std::istream& in, const std::string& source, const std::string& base_dir) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'section.key = value'");
        const std::string key(text::trim(line.substr(0, eq)));
        const std::string value(text::trim(line.substr(eq + 1)));
        if (key.find('.') == std::string::npos) throw ParseError(source, line_no, "key '" + key + "' lacks a section");
        if (value.empty()) throw ParseError(source, line_no, "empty value for '" + key + "'");
        const auto it = schema().find(key);
        if (it == schema().end()) throw ValidationError(key, "unknown key (line " + std::to_string(line_no) + ")");
        if (!seen.insert(key).second) throw ParseError(source, line_no, "duplicate key '" + key + "'");
        it->second.assign(value, cfg);
    }
    for (const auto& [key, field] : schema())
        if (field.required && !seen.count(key)) throw ValidationError(key, "required key missing");

    if (cfg.instrument)
        for (const char* key : {"instrument.core_um", "instrument.f2_mm", "instrument.osa_fwhm_nm"})
            if (!seen.count(key)) throw ValidationError(key, "instrument section needs core_um, f2_mm and osa_fwhm_nm");

    validate(cfg);

    std::filesystem::path disp(cfg.crystal.dispersion);
    if (disp.is_relative()) disp = std::filesystem::path(base_dir) / disp;
    cfg.crystal.dispersion = disp.lexically_normal().string();
    try {
        cfg.dispersion_model = std::make_shared<const DispersionModel>(load_dispersion(cfg.crystal.dispersion));
    } catch (const ParseError& e) {
        throw ValidationError("crystal.dispersion", e.what());
    }
    cfg.simulation().crystal.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open config file");
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_config(in, path, dir.empty() ? "." : dir);
}

text::KeyValues RunConfig::effective_entries() const {
    using text::exact;
    text::KeyValues kv = {
        {"pump.wavelength_nm", exact(pump.wavelength_nm)},
        {"pump.waist_um", exact(pump.waist_um)},
        {"pump.power_w", pump.power_w ? exact(*pump.power_w) : "none"},
        {"crystal.length_mm", exact(crystal.length_mm)},
        {"crystal.poling_um", exact(crystal.poling_um)},
        {"crystal.temperature_c", exact(crystal.temperature_c)},
        {"crystal.alpha", exact(crystal.alpha)},
        {"crystal.beta", exact(crystal.beta)},
        {"crystal.dispersion", crystal.dispersion},
        {"crystal.dispersion_label", dispersion_model ? dispersion_model->label : "none"},
        {"crystal.dispersion_digest", dispersion_model ? dispersion_model->digest() : "none"},
        {"grid.lambda_min_nm", exact(grid.lambda_min_nm)},
        {"grid.lambda_max_nm", exact(grid.lambda_max_nm)},
        {"grid.q_min_per_um", exact(grid.q_min_per_um)},
        {"grid.q_max_per_um", exact(grid.q_max_per_um)},
        {"grid.lambda_points", std::to_string(grid.lambda_points)},
        {"grid.q_points", std::to_string(grid.q_points)},
        {"quad.points", std::to_string(quad.points)},
        {"quad.halfwidth_factor", exact(quad.halfwidth_factor)},
        {"quad.tolerance", exact(quad.tolerance)},
        {"quad.max_points", std::to_string(quad.max_points)},
    };
    if (instrument) {
        kv.emplace_back("instrument.core_um", exact(instrument->core_um));
        kv.emplace_back("instrument.f2_mm", exact(instrument->f2_mm));
        kv.emplace_back("instrument.osa_fwhm_nm", exact(instrument->osa_fwhm_nm));
    } else {
        kv.emplace_back("instrument", "none");
    }
    std::string formats;
    for (const auto& f : output.formats) formats += (formats.empty() ? "" : ",") + f;
    kv.emplace_back("output.formats", formats);
    return kv;
}

SimulationConfig RunConfig::simulation(int threads) const {
    SimulationConfig sim;
    sim.pump = PumpSpec::from_wavelength(pump.wavelength_nm * 1e-9, pump.waist_um * 1e-6, pump.power_w);
    sim.crystal.length_L0 = crystal.length_mm * 1e-3;
    sim.crystal.poling_G0 = crystal.poling_um * 1e-6;
    sim.crystal.alpha = crystal.alpha;
    sim.crystal.beta = crystal.beta;
    sim.crystal.dispersion = dispersion_model;
    sim.temperature_c = crystal.temperature_c;
    sim.grid.lambda_min = grid.lambda_min_nm * 1e-9;
    sim.grid.lambda_max = grid.lambda_max_nm * 1e-9;
    sim.grid.lambda_points = grid.lambda_points;
    sim.grid.q_min = grid.q_min_per_um * 1e6;
    sim.grid.q_max = grid.q_max_per_um * 1e6;
    sim.grid.q_points = grid.q_points;
    sim.quad.points_per_axis = quad.points;
    sim.quad.halfwidth_factor = quad.halfwidth_factor;
    sim.quad.refine_tol = quad.tolerance;
    sim.quad.max_points = quad.max_points;
    if (instrument)
        sim.instrument = InstrumentSpec{instrument->core_um * 1e-6, instrument->f2_mm * 1e-3, instrument->osa_fwhm_nm * 1e-9};
    sim.threads = threads;
    return sim;
}

} // namespace spdc
