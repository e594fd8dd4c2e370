#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int status;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "spdc-tuner");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int status = spdc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("spdc_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path small_config(const fs::path& dir, int points) {
    const auto path = dir / "small.conf";
    std::ofstream(path) << "pump.wavelength_nm = 532\npump.waist_um = 23.27\n"
                        << "crystal.length_mm = 7.5\ncrystal.poling_um = 9.018\ncrystal.temperature_c = 25\n"
                        << "crystal.alpha = 6.7e-6\ncrystal.beta = 11e-9\n"
                        << "crystal.dispersion = " << SPDC_DATA_DIR << "/ktp_z.disp\n"
                        << "grid.lambda_points = " << points << "\ngrid.q_points = " << points + 1 << '\n';
    return path;
}

} // namespace

TEST_CASE("flux prints the photon budget") {
    const auto r = run({"flux", "--power-nw", "400", "--lambda-nm", "1064", "--bandwidth-nm", "50"});
    CHECK(r.status == 0);
    CHECK(r.out.find("photon_flux_per_s 2.14e12") != std::string::npos);
    CHECK(r.out.find("mode_density 0.162") != std::string::npos);
}

TEST_CASE("curve output does not depend on the thread count") {
    const auto dir = scratch("threads");
    const auto cfg = small_config(dir, 20).string();
    const auto a = run({"curve", "--config", cfg, "--out", (dir / "a").string(), "--threads", "1"});
    const auto b = run({"curve", "--config", cfg, "--out", (dir / "b").string(), "--threads", "8"});
    REQUIRE(a.status == 0);
    REQUIRE(b.status == 0);
    CHECK(a.out == b.out);
    for (const char* f : {"curve.csv", "curve.pgm", "run_metadata.txt"}) {
        CAPTURE(f);
        const auto left = slurp(dir / "a" / f);
        CHECK_FALSE(left.empty());
        CHECK(left == slurp(dir / "b" / f));
    }
    const auto csv = slurp(dir / "a" / "curve.csv");
    CHECK(csv.find("# crystal.dispersion_digest=") != std::string::npos);
    CHECK(csv.find("# grid.q_points=21") != std::string::npos);
    CHECK(csv.find("q_per_um,lambda_nm,density\n") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("marginal and sweep write their files") {
    const auto dir = scratch("marginal");
    const auto cfg = small_config(dir, 12).string();
    CHECK(run({"marginal", "--config", cfg, "--out", dir.string()}).status == 0);
    CHECK(fs::exists(dir / "marginal.csv"));
    const auto s = run({"sweep", "--config", cfg, "--out", dir.string(), "--param", "T", "--values", "15,25"});
    CHECK(s.status == 0);
    CHECK(fs::exists(dir / "sweep_0.csv"));
    CHECK(fs::exists(dir / "sweep_1.pgm"));
    fs::remove_all(dir);
}

TEST_CASE("errors exit nonzero with a message") {
    const auto dir = scratch("errors");
    SUBCASE("missing config") {
        const auto r = run({"curve", "--config", (dir / "nope.conf").string()});
        CHECK(r.status != 0);
    }
    SUBCASE("bad key") {
        const auto cfg = small_config(dir, 12);
        std::ofstream(cfg, std::ios::app) << "crystal.polling = 9\n";
        const auto r = run({"curve", "--config", cfg.string(), "--out", dir.string()});
        CHECK(r.status != 0);
        CHECK(r.err.find("crystal.polling") != std::string::npos);
    }
    SUBCASE("unknown command") { CHECK(run({"frobnicate"}).status != 0); }
    fs::remove_all(dir);
}

TEST_CASE("tight-focus curve peaks on axis at degeneracy") {
    const auto dir = scratch("tight_focus");
    const auto r = run({"curve", "--config", std::string(SPDC_CONFIG_DIR) + "/tight_focus.conf", "--out", dir.string()});
    REQUIRE(r.status == 0);
    double q = 1, lambda = 0;
    REQUIRE(std::sscanf(r.out.c_str(), "max_at q_per_um=%lf lambda_nm=%lf", &q, &lambda) == 2);
    CHECK(std::abs(q) < 0.02);
    CHECK(std::abs(lambda - 1064.0) < 2.0);
    CHECK(fs::file_size(dir / "curve.pgm") == std::string("P5\n256 256\n65535\n").size() + 2 * 256 * 256);
    fs::remove_all(dir);
}
