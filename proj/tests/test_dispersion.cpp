#include <doctest.h>

#include <sstream>
#include <vector>

#include "common.hpp"
#include "oracle.hpp"
#include "spdc/dispersion.hpp"

using namespace spdc;

TEST_CASE("refractive index at 1064 nm matches hand evaluation of the fixture") {
    const auto& m = *testing::ktp();
    // Fixture coefficients written out by hand.
    const double l2 = 1.064 * 1.064;
    const double n2 = 2.0046403280656104 + 1.3029603191266008 * l2 / (l2 - 0.04763) +
                      1.2866293528077881 * l2 / (l2 - 86.12171) - 0.0 * l2;
    const double expected = std::sqrt(n2);
    const double n = refractive_index(1064e-9, 25.0, m);
    CHECK(n == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("fixture reproduces the published KTP n_z form") {
    const auto& m = *testing::ktp();
    for (double l_nm = 450; l_nm <= 3000; l_nm += 37.5)
        for (double t : {25.0, 40.0, 120.0})
            CHECK(refractive_index(l_nm * 1e-9, t, m) == doctest::Approx(oracle::ktp_index(l_nm * 1e-9, t)).epsilon(1e-12));
}

TEST_CASE("thermo-optic shift vanishes at the reference temperature") {
    const auto& m = *testing::ktp();
    for (double l_um = 0.4; l_um <= 4.0; l_um += 0.05) CHECK(thermo_optic_shift(l_um, 25.0, m) == 0.0);
    CHECK(refractive_index(1064e-9, 25.0, m) == sellmeier_index(1.064, m));
}

TEST_CASE("normal dispersion across 900-1200 nm") {
    const auto& m = *testing::ktp();
    CHECK(refractive_index(1000e-9, 25.0, m) > refractive_index(1100e-9, 25.0, m));
    double previous = refractive_index(900e-9, 25.0, m);
    for (int k = 1; k <= 3000; ++k) {
        const double n = refractive_index((900.0 + 0.1 * k) * 1e-9, 25.0, m);
        REQUIRE(n < previous);
        REQUIRE(n > 1.0);
        previous = n;
    }
}

TEST_CASE("refractive index is deterministic") {
    const auto& m = *testing::ktp();
    const double a = refractive_index(1031.7e-9, 31.3, m);
    const double b = refractive_index(1031.7e-9, 31.3, m);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("wavelength window is enforced") {
    const auto& m = *testing::ktp();
    CHECK_THROWS_AS(refractive_index(300e-9, 25.0, m), WavelengthOutOfRange);
    CHECK_THROWS_AS(refractive_index(5000e-9, 25.0, m), WavelengthOutOfRange);
    CHECK_THROWS_AS(wavevector_magnitude(1e3, 25.0, m), WavelengthOutOfRange);
    CHECK_THROWS_AS(wavevector_magnitude(0.0, 25.0, m), WavelengthOutOfRange);
}

TEST_CASE("temperature outside the fitted window extrapolates with a warning") {
    std::vector<std::string> messages;
    auto previous = set_warning_sink([&](const std::string& msg) { messages.push_back(msg); });
    const auto& m = *testing::ktp();
    const double n = refractive_index(1064e-9, 3.25, m);
    refractive_index(1064e-9, 3.25, m);
    set_warning_sink(previous);
    CHECK(n == doctest::Approx(oracle::ktp_index(1064e-9, 3.25)).epsilon(1e-12));
    REQUIRE(messages.size() == 1);
    CHECK(messages[0].find("extrapolating") != std::string::npos);
}

TEST_CASE("wave-vector magnitude") {
    const auto& m = *testing::ktp();
    const double omega = wavelength_to_omega(1064e-9);
    const double n = refractive_index(1064e-9, 25.0, m);
    CHECK(wavevector_magnitude(omega, 25.0, m) == doctest::Approx(2 * oracle::pi * n / 1064e-9).epsilon(1e-13));
    // At fixed index, k is linear in omega.
    CHECK(2 * omega * n / speed_of_light == doctest::Approx(2 * wavevector_magnitude(omega, 25.0, m)).epsilon(1e-15));
}

TEST_CASE("thermal expansion of poling period and length") {
    auto crystal = testing::ppktp(9.018e-6);
    CHECK(poling_period_at(25.0, crystal) == crystal.poling_G0);
    CHECK(crystal_length_at(25.0, crystal) == crystal.length_L0);

    const double elongation = poling_period_at(35.0, crystal) - poling_period_at(25.0, crystal);
    CHECK(elongation == doctest::Approx(0.6e-9).epsilon(0.2));
    CHECK(elongation / crystal.poling_G0 < 1e-4);

    CHECK(crystal_length_at(35.0, crystal) / crystal.length_L0 ==
          doctest::Approx(poling_period_at(35.0, crystal) / crystal.poling_G0).epsilon(1e-15));

    CrystalSpec linear{7.5e-3, 9e-6, 1e-5, 0.0, testing::ktp()};
    CHECK(poling_period_at(125.0, linear) == doctest::Approx(9.009e-6).epsilon(1e-13));

    linear.expand_length = false;
    CHECK(crystal_length_at(125.0, linear) == linear.length_L0);
}

TEST_CASE("fixture parsing") {
    const auto& m = *testing::ktp();
    SUBCASE("canonical text round-trips") {
        std::istringstream in(m.to_text());
        const auto again = parse_dispersion(in);
        CHECK(again.digest() == m.digest());
        CHECK(again.sellmeier_terms.size() == 2);
    }
    SUBCASE("unknown key") {
        std::istringstream in(m.to_text() + "E = 1\n");
        CHECK_THROWS_AS(parse_dispersion(in), ParseError);
    }
    SUBCASE("bad number carries the line") {
        std::istringstream in("label = x\nA = one\n");
        try {
            parse_dispersion(in, "f");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
    SUBCASE("unpaired resonance term") {
        std::string t = m.to_text();
        t.erase(t.find("C2 ="), t.find('\n', t.find("C2 =")) - t.find("C2 =") + 1);
        std::istringstream in(t);
        CHECK_THROWS_AS(parse_dispersion(in), ParseError);
    }
    SUBCASE("resonance inside the window is rejected") {
        std::string t = m.to_text();
        const auto pos = t.find("C1 = ");
        t.replace(pos, t.find('\n', pos) - pos, "C1 = 1.0");
        std::istringstream in(t);
        CHECK_THROWS_AS(parse_dispersion(in), ParseError);
    }
}
