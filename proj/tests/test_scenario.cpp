#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "bhsim/report.hpp"
#include "bhsim/scenario.hpp"

using namespace bh;

namespace {

engine::SimConfig parse_text(const std::string& text) {
  std::istringstream in(text);
  return scenario::parse(in);
}

}  // namespace

TEST_CASE("empty scenario gives the built-in defaults") {
  const auto c = parse_text("");
  CHECK(c.num_positions() == 61);
  CHECK(c.num_beams == 8);
  CHECK(c.p_max == 250.0);
  CHECK(c.t_b == 0.5e-3);
  CHECK(c.t_p == 20e-3);
  CHECK(c.t_s == 0.2);
  CHECK(c.t_max == 20.0);
  CHECK(c.arrivals.packet_bits == 10000);
  CHECK(c.tx.g_max_dbi == 36.2);
  CHECK(c.rx.g_max_dbi == 20.0);
  CHECK(c.budget.bandwidth == 200e6);
  CHECK(c.budget.noise_power == 7.96e-13);
  CHECK(c.budget.other_loss_db == 7.0);
  CHECK(c.budget.carrier_freq == 20e9);
  CHECK(c.orbit.altitude == 508000.0);
  CHECK(c.sink_density == 1.5e-8);
  CHECK(c.ga.generations == 200);
  CHECK(c.ga.population == 100);
  CHECK(c.ga.p_mut == 0.2);
  CHECK(c.ga.p_cro == 0.8);
}

TEST_CASE("values override defaults and render round-trips") {
  const auto c = parse_text(
      "[system]\nnum_beams = 4\nalgorithm = GA-BH\nseed = 42\n"
      "[timing]\nt_b = 0.001\nt_max = 2\n"
      "[traffic]\nlambda = 1234.5\n"
      "[ga]\ngenerations = 10\n");
  CHECK(c.num_beams == 4);
  CHECK(c.algorithm == engine::Algorithm::kGenetic);
  CHECK(c.seed == 42);
  CHECK(c.t_b == 0.001);
  CHECK(c.budget.slot == 0.001);
  CHECK(c.arrivals.lambda == 1234.5);
  CHECK(c.ga.generations == 10);
  CHECK(c.num_slots() == 2000);

  const auto again = parse_text(scenario::render(c));
  CHECK(scenario::render(again) == scenario::render(c));
  CHECK(engine::same_scenario(again, c));
  CHECK(again.algorithm == c.algorithm);
}

TEST_CASE("lambda multipliers") {
  std::string list = "1";
  for (int i = 1; i < 7; ++i) list += ", 0.5";
  const auto c = parse_text("[system]\nrings = 1\nnum_beams = 2\n[traffic]\nlambda_multiplier = " + list + "\n");
  REQUIRE(c.lambda_multiplier.size() == 7);
  CHECK(c.lambda_multiplier[3] == 0.5);
  CHECK_THROWS_AS(parse_text("[system]\nrings = 1\nnum_beams = 2\n[traffic]\nlambda_multiplier = 1, 2\n"),
                  scenario::ConfigError);
}

TEST_CASE("errors name the key and the constraint") {
  CHECK_THROWS_WITH_AS(parse_text("[system]\nbeams = 3\n"), doctest::Contains("system.beams: unknown key"),
                       scenario::ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[nonsense]\nx = 1\n"), doctest::Contains("unknown key"), scenario::ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[system]\np_max = lots\n"), doctest::Contains("system.p_max"),
                       scenario::ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[system]\nrings = 11\n"), doctest::Contains("system.rings"),
                       scenario::ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[system]\nalgorithm = FOO\n"), doctest::Contains("RR-BH"),
                       scenario::ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[timing]\nt_p = 0.0203\n"), doctest::Contains("timing invariant"),
                       scenario::ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[system]\np_max = -1\n"), doctest::Contains("p_max"), scenario::ConfigError);
  CHECK_THROWS_AS(parse_text("[system\nrings = 2\n"), scenario::ConfigError);
  CHECK_THROWS_AS(scenario::load("/nonexistent/file.cfg"), scenario::ConfigError);
}

TEST_CASE("number formatting") {
  CHECK(report::fmt(0.0) == "0");
  CHECK(report::fmt(-0.0) == "0");
  CHECK(report::fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(report::fmt(7.96e-13) == "7.96e-13");
  CHECK(report::fmt(40000) == "40000");
}
