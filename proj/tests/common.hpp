#pragma once

#include <memory>
#include <string>

#include "spdc/calibrate.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(SPDC_DATA_DIR) + "/" + name; }

inline std::shared_ptr<const spdc::DispersionModel> ktp() {
    static const auto model =
        std::make_shared<const spdc::DispersionModel>(spdc::load_dispersion(data_path("ktp_z.disp")));
    return model;
}

// Thermal expansion of KTP from the same temperature-dependent data set.
inline constexpr double ktp_alpha = 6.7e-6;
inline constexpr double ktp_beta = 11e-9;

inline spdc::CrystalSpec ppktp(double poling = 9.018e-6, double length = 7.5e-3) {
    return {length, poling, ktp_alpha, ktp_beta, ktp()};
}

inline spdc::PumpSpec pump(double waist = 23.27e-6) { return spdc::PumpSpec::from_wavelength(532e-9, waist); }

inline spdc::SimulationConfig base_config(int lambda_points = 48, int q_points = 48) {
    spdc::SimulationConfig cfg;
    cfg.pump = pump();
    cfg.crystal = ppktp();
    cfg.temperature_c = 25.0;
    cfg.grid.lambda_points = lambda_points;
    cfg.grid.q_points = q_points;
    cfg.threads = 0;
    return cfg;
}

} // namespace testing
