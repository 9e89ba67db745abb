#include "bosegas/config.hpp"

#include <doctest.h>

using namespace bosegas;

namespace {

Config natural_config() {
    return Config(nlohmann::json{
        {"params",
         {{"dimension", 1},
          {"disorder", {{"variant", "uncorrelated"}, {"kappa", 1.0}}},
          {"coupling_g", 0.5},
          {"mean_density", 0.05}}},
        {"grid", {{"points", 256}, {"spacing", 0.25}}}});
}

} // namespace

TEST_CASE("plain numbers pass through as internal units") {
    const Config cfg = natural_config();
    CHECK(cfg.number("params.mean_density") == 0.05);
    CHECK(cfg.integer("grid.points") == 256);
    CHECK(cfg.quantity("params.coupling_g", units::coupling_dims(1)) == 0.5);
}

TEST_CASE("missing entries name the full dotted path") {
    const Config cfg = natural_config();
    CHECK(!cfg.has("params.trap_frequency"));
    try {
        cfg.number("params.trap_frequency");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("params.trap_frequency") != std::string::npos);
    }
}

TEST_CASE("dimensional input without a units block is rejected") {
    Config cfg(nlohmann::json{
        {"params",
         {{"dimension", 3},
          {"mass", {{"value", 1.443e-25}, {"unit", "kg"}}},
          {"disorder", {{"variant", "uncorrelated"}, {"kappa", 1.0}}}}}});
    CHECK_THROWS_AS((void)cfg.quantity("params.mass", units::mass_dims()), ConfigError);
}

TEST_CASE("a units block converts SI quantities into hbar = mass = 1") {
    const double rb87 = 1.443e-25;
    Config cfg(nlohmann::json{
        {"units",
         {{"mass", {{"value", rb87}, {"unit", "kg"}}},
          {"length", {{"value", 1.0}, {"unit", "um"}}}}},
        {"params",
         {{"dimension", 3},
          {"mass", {{"value", rb87}, {"unit", "kg"}}},
          {"scattering_length", {{"value", 5.3}, {"unit", "nm"}}},
          {"disorder", {{"variant", "uncorrelated"}, {"kappa", 1.0}}}}}});
    const PhysicalParams p = params_from_config(cfg);
    CHECK(p.mass == doctest::Approx(1.0));
    CHECK(p.hbar == 1.0); // defaulted, and exact in this system
    CHECK(*p.scattering_length == doctest::Approx(5.3e-3));
}

TEST_CASE("unit dimension mismatches carry the path and both dimension strings") {
    Config cfg(nlohmann::json{
        {"units",
         {{"mass", {{"value", 1.0}, {"unit", "kg"}}},
          {"length", {{"value", 1.0}, {"unit", "m"}}}}},
        {"params", {{"trap_frequency", {{"value", 2.0}, {"unit", "nm"}}}}}});
    try {
        cfg.quantity("params.trap_frequency", units::frequency_dims());
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("params.trap_frequency") != std::string::npos);
        CHECK(msg.find("expected") != std::string::npos);
    }
}

TEST_CASE("all four disorder variants parse; unknown names list the choices") {
    auto with_disorder = [](nlohmann::json d) {
        return Config(nlohmann::json{{"params", {{"dimension", 3}, {"disorder", std::move(d)}}}});
    };
    CHECK(disorder_from_config(with_disorder({{"variant", "uncorrelated"}, {"kappa", 2.0}}), 3)
              .kind == DisorderKind::Uncorrelated);
    CHECK(disorder_from_config(
              with_disorder({{"variant", "ornstein_zernike"}, {"kappa", 2.0}, {"b", 1.0}}), 3)
              .kind == DisorderKind::OrnsteinZernike);
    CHECK(disorder_from_config(with_disorder({{"variant", "gaussian"}, {"u0", 2.0}, {"b", 1.0}}),
                               3)
              .kind == DisorderKind::GaussianCorrelated);
    CHECK(disorder_from_config(with_disorder({{"variant", "lorentz"}, {"u0", 2.0}, {"b", 1.0}}),
                               3)
              .kind == DisorderKind::LorentzCorrelated);
    try {
        disorder_from_config(with_disorder({{"variant", "speckle"}, {"kappa", 1.0}}), 3);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("ornstein_zernike") != std::string::npos);
    }
}

TEST_CASE("grid parsing accepts scalar or per-axis point counts") {
    const Grid g1 = grid_from_config(natural_config(), 1);
    CHECK(g1.shape[0] == 256);
    CHECK(g1.shape[1] == 1);
    CHECK(g1.spacing == 0.25);
    CHECK(g1.periodic);

    Config cfg(nlohmann::json{
        {"grid", {{"points", {16, 32}}, {"spacing", 0.5}, {"periodic", false}}}});
    const Grid g2 = grid_from_config(cfg, 2);
    CHECK(g2.shape[0] == 16);
    CHECK(g2.shape[1] == 32);
    CHECK(!g2.periodic);

    Config bad(nlohmann::json{{"grid", {{"points", {16, 32}}, {"spacing", 0.5}}}});
    CHECK_THROWS_AS((void)grid_from_config(bad, 3), ConfigError);
}

TEST_CASE("params_from_config validates the dimension range") {
    Config cfg(nlohmann::json{
        {"params",
         {{"dimension", 4}, {"disorder", {{"variant", "uncorrelated"}, {"kappa", 1.0}}}}}});
    CHECK_THROWS_AS((void)params_from_config(cfg), ConfigError);
}

TEST_CASE("config files must exist and hold valid JSON") {
    CHECK_THROWS_AS((void)Config::from_file("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("number lists reject non-numeric members") {
    Config cfg(nlohmann::json{{"sweep", {{"values", {1.0, "two", 3.0}}}}});
    CHECK_THROWS_AS((void)cfg.number_list("sweep.values"), ConfigError);
}
