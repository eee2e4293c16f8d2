#include <doctest.h>

#include <string>

#include "paramguide/config.hpp"
#include "paramguide/errors.hpp"

using namespace paramguide;

namespace {
std::string base(const std::string& coupling = R"("g_per_cm": 0.08)",
                 const std::string& extra = "") {
    return R"({"modes": {
      "te": {"group_velocity_cm_s": 8.24e9, "field_loss_per_cm": 4, "wavelength_nm": 4064},
      "tm": {"group_velocity_cm_s": 8.34e9, "field_loss_per_cm": 3, "wavelength_nm": 4064},
      "pump": {"group_velocity_cm_s": 8.3e9, "wavelength_nm": 2032}},
      "coupling": {)" + coupling + R"(},
      "device": {"length_cm": 0.1})" + extra + "}";
}
} // namespace

TEST_SUITE("config") {

TEST_CASE("bundled device parses to the built-in parameters") {
    LoadedConfig lc = parse_config(base());
    DeviceConfig p = reference_device();
    CHECK(lc.device.coupling_g == 0.08);
    CHECK(lc.device.te.field_loss == 4.0);
    CHECK(lc.device.tm.field_loss == 3.0);
    CHECK(lc.device.te.omega == doctest::Approx(p.te.omega).epsilon(1e-15));
    CHECK(lc.device.length == 0.1);
    CHECK(lc.hash.size() == 64);
    CHECK_FALSE(lc.qpump.has_value());
}

TEST_CASE("frequencies in THz get an explicit 2 pi") {
    std::string j = R"({"modes": {
      "te": {"group_velocity_cm_s": 8e9, "frequency_thz": 30},
      "tm": {"group_velocity_cm_s": 8e9, "frequency_thz": 40},
      "pump": {"group_velocity_cm_s": 8e9, "frequency_thz": 70}},
      "device": {"length_cm": 0.1}})";
    LoadedConfig lc = parse_config(j);
    CHECK(lc.device.te.omega == doctest::Approx(2 * units::pi * 30e12).epsilon(1e-15));
}

TEST_CASE("g takes precedence over the overlap A") {
    LoadedConfig lc = parse_config(base(R"("g_per_cm": 0.08, "overlap_A": 1.0)"));
    CHECK(lc.device.coupling_g == 0.08);
    double A = units::hbar * std::sqrt(8.24e9 * 8.34e9) * 0.5;
    char buf[64];
    std::snprintf(buf, sizeof buf, "\"overlap_A\": %.17g", A);
    LoadedConfig la = parse_config(base(buf));
    CHECK(la.device.coupling_g == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("qpump section") {
    LoadedConfig lc = parse_config(base(R"("g_per_cm": 0.08, "G_sqrt_s_per_cm": 3e-11)",
                                        R"(, "qpump": {"band_width_thz": 1.0, "bands": 4})"));
    REQUIRE(lc.qpump.has_value());
    CHECK(lc.qpump->bands == 4);
    CHECK(lc.qpump->band_width == doctest::Approx(2 * units::pi * 1e12));
    CHECK(lc.device.coupling_G == 3e-11);
}

TEST_CASE("rejections") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(base(R"("g_per_cm": 0.08, "gee": 1)")), ConfigError);
    CHECK_THROWS_AS(parse_config(base("", R"(, "extra": {})")), ConfigError);
    std::string no_len = base();
    no_len.replace(no_len.find("\"length_cm\": 0.1"), 16, "\"dk_per_cm\": 0");
    CHECK_THROWS_AS(parse_config(no_len), ConfigError);
    std::string both = base();
    both.replace(both.find("\"wavelength_nm\": 2032"), 21, "\"wavelength_nm\": 2032, \"frequency_thz\": 1");
    CHECK_THROWS_AS(parse_config(both), ConfigError);
    std::string energy = base();
    energy.replace(energy.find("2032"), 4, "2031");
    CHECK_THROWS_AS(parse_config(energy), ConfigError);
    std::string neg = base();
    neg.replace(neg.find("0.1}"), 3, "-0.1");
    CHECK_THROWS_AS(parse_config(neg), ConfigError);
}

TEST_CASE("config hash is stable and content-sensitive") {
    auto a = parse_config(base()), b = parse_config(base());
    CHECK(a.hash == b.hash);
    auto c = parse_config(base(R"("g_per_cm": 0.09)"));
    CHECK(a.hash != c.hash);
    // whitespace and key order do not matter
    std::string spaced = base();
    spaced.insert(1, "\n  ");
    CHECK(parse_config(spaced).hash == a.hash);
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}
