#include <doctest.h>

#include <sstream>

#include "common.hpp"
#include "spdc/config.hpp"
#include "spdc/output.hpp"

using namespace spdc;

namespace {

const std::string minimal = "pump.wavelength_nm = 532\n"
                            "pump.waist_um = 23.27\n"
                            "crystal.length_mm = 7.5\n"
                            "crystal.poling_um = 9.018\n"
                            "crystal.temperature_c = 25\n"
                            "crystal.alpha = 6.7e-6\n"
                            "crystal.beta = 11e-9\n"
                            "crystal.dispersion = ktp_z.disp\n";

RunConfig parse(const std::string& body) {
    std::istringstream in(body);
    return parse_config(in, "test.conf", SPDC_DATA_DIR);
}

std::string value_of(const text::KeyValues& kv, const std::string& key) {
    for (const auto& [k, v] : kv)
        if (k == key) return v;
    return "<missing>";
}

} // namespace

TEST_CASE("minimal config takes the documented defaults") {
    const auto cfg = parse(minimal);
    CHECK(cfg.grid.lambda_min_nm == 1000);
    CHECK(cfg.grid.lambda_max_nm == 1140);
    CHECK(cfg.grid.q_min_per_um == -0.25);
    CHECK(cfg.grid.q_max_per_um == 0.25);
    CHECK(cfg.grid.lambda_points == 256);
    CHECK(cfg.grid.q_points == 256);
    CHECK(cfg.quad.points == 64);
    CHECK_FALSE(cfg.instrument);
    CHECK_FALSE(cfg.pump.power_w);
    REQUIRE(cfg.dispersion_model);
    CHECK(cfg.dispersion_model->digest() == testing::ktp()->digest());

    const auto sim = cfg.simulation();
    CHECK(sim.pump.waist_w0 == doctest::Approx(23.27e-6).epsilon(1e-15));
    CHECK(sim.crystal.poling_G0 == doctest::Approx(9.018e-6).epsilon(1e-15));
    CHECK(sim.grid.q_max == doctest::Approx(0.25e6).epsilon(1e-15));
}

TEST_CASE("tight-focus configuration is echoed in the effective entries") {
    const auto cfg = load_config(std::string(SPDC_CONFIG_DIR) + "/tight_focus.conf");
    const auto kv = cfg.effective_entries();
    CHECK(value_of(kv, "pump.waist_um") == "23.27");
    CHECK(value_of(kv, "crystal.length_mm") == "7.5");
    CHECK(value_of(kv, "crystal.temperature_c") == "25");
    CHECK(value_of(kv, "crystal.poling_um") == "9.018");
    CHECK(value_of(kv, "crystal.dispersion_digest") == testing::ktp()->digest());
    CHECK(value_of(kv, "grid.q_points") == "256");
    CHECK(value_of(kv, "instrument.f2_mm") == "50");
}

TEST_CASE("strict schema") {
    SUBCASE("misspelled key") {
        try {
            parse(minimal + "crystal.polling = 9\n");
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.key() == "crystal.polling");
        }
    }
    SUBCASE("missing required key") {
        std::string body = minimal;
        body.erase(body.find("crystal.alpha"), std::string("crystal.alpha = 6.7e-6\n").size());
        try {
            parse(body);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.key() == "crystal.alpha");
        }
    }
    SUBCASE("syntax error carries the line") {
        try {
            parse(minimal + "\n# fine\ngrid.q_points 12\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 11);
        }
    }
    SUBCASE("duplicate key") { CHECK_THROWS_AS(parse(minimal + "pump.waist_um = 40\n"), ParseError); }
    SUBCASE("non-numeric value") { CHECK_THROWS_AS(parse(minimal + "grid.q_points = many\n"), Error); }
    SUBCASE("partial instrument section") {
        CHECK_THROWS_AS(parse(minimal + "instrument.f2_mm = 50\n"), ValidationError);
    }
    SUBCASE("invalid physical value") { CHECK_THROWS_AS(parse(minimal + "grid.lambda_min_nm = 500\n"), ValidationError); }
}

TEST_CASE("curve CSV and PGM layout") {
    TuningCurve c;
    c.q_axis = (Eigen::VectorXd(3) << -0.1e6, 0.0, 0.1e6).finished();
    c.lambda_axis = (Eigen::VectorXd(2) << 1000e-9, 1100e-9).finished();
    c.omega_axis = c.lambda_axis.unaryExpr([](double l) { return wavelength_to_omega(l); });
    c.values.resize(2, 3);
    c.values << 0.0, 0.5, 0.25, 1.0, 0.125, 1.0 / 3.0;
    c.raw_max = 2.0;
    c.params_digest = "abc";

    std::ostringstream csv;
    write_curve_csv(csv, c, {{"pump.waist_um", "23.27"}});
    const std::string s = csv.str();
    CHECK(s.rfind("# pump.waist_um=23.27\n", 0) == 0);
    CHECK(s.find("q_per_um,lambda_nm,density\n-0.1,1000,0\n0,1000,0.5\n0.1,1000,0.25\n-0.1,1100,1\n") !=
          std::string::npos);
    CHECK(s.find("0.1,1100,0.333333333\n") != std::string::npos);

    std::ostringstream pgm;
    write_curve_pgm(pgm, c);
    const std::string p = pgm.str();
    const std::string header = "P5\n3 2\n65535\n";
    REQUIRE(p.size() == header.size() + 2 * 3 * 2);
    CHECK(p.compare(0, header.size(), header) == 0);
    auto pixel = [&](int row, int col) {
        const auto k = header.size() + 2 * (row * 3 + col);
        return (static_cast<unsigned char>(p[k]) << 8) | static_cast<unsigned char>(p[k + 1]);
    };
    // First image row is the longest wavelength.
    CHECK(pixel(0, 0) == 65535);
    CHECK(pixel(0, 2) == 21845);
    CHECK(pixel(1, 0) == 0);
    CHECK(pixel(1, 1) == 32768);
}
