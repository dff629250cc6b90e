#include <doctest.h>

#include <stdexcept>

#include <sstream>

#include "bhsim/engine.hpp"
#include "bhsim/report.hpp"

using namespace bh::engine;

namespace {

SimConfig small_config(Algorithm a, std::uint64_t seed = 3) {
  SimConfig c;
  c.rings = 2;
  c.num_beams = 4;
  c.t_max = 0.4;
  c.algorithm = a;
  c.seed = seed;
  c.arrivals.lambda = 6000;
  return c;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (Algorithm a : all_algorithms()) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK(parse_algorithm("jbspo-bh") == Algorithm::kJbspo);
  CHECK_FALSE(parse_algorithm("NOPE").has_value());
  CHECK(algorithm_names().find("MAX-SINR-BH") != std::string::npos);
}

TEST_CASE("configuration checks") {
  SimConfig c;
  CHECK(c.num_positions() == 61);
  CHECK(c.num_slots() == 40000);
  CHECK(c.resolved_footprint_radius() == doctest::Approx(14722.13).epsilon(1e-6));
  CHECK_NOTHROW(c.validate());

  SimConfig bad = c;
  bad.t_p = 0.0203;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("timing invariant"), std::invalid_argument);
  bad = c;
  bad.t_s = 0.21;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.t_max = 0.01;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.num_beams = 62;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.budget.slot = 1e-3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = c;
  bad.lambda_multiplier = {1.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(run(bad), std::invalid_argument);
}

TEST_CASE("no traffic means no service") {
  SimConfig c = small_config(Algorithm::kJbspo);
  c.arrivals.lambda = 0.0;
  const auto r = run(c, {.keep_slot_log = true});
  CHECK(r.summary.total_served_bits == 0.0);
  CHECK(bh::metrics::throughput(r.summary) == 0.0);
  CHECK(r.summary.mean_sod() == 0.0);
  CHECK(r.slots.size() == 800);
  for (const auto& s : r.slots) CHECK(s.illuminated.empty());
}

TEST_CASE("slot count and per-slot invariants for every algorithm") {
  for (Algorithm a : all_algorithms()) {
    CAPTURE(to_string(a));
    SimConfig c = small_config(a);
    if (a == Algorithm::kGenetic) c.ga = {20, 20, 0.2, 0.8};
    const auto r = run(c, {.keep_slot_log = true});
    CHECK(r.slots.size() == static_cast<std::size_t>(c.num_slots()));
    CHECK(r.summary.sod_per_slot.size() == r.slots.size());
    for (std::size_t i = 0; i < r.slots.size(); ++i) {
      const auto& s = r.slots[i];
      CHECK(s.slot == static_cast<std::int64_t>(i));
      CHECK(s.illuminated.size() <= c.num_beams);
      double sum = 0.0;
      for (std::size_t j = 0; j < s.illuminated.size(); ++j) {
        sum += s.power[j];
        CHECK(s.power[j] >= 0.0);
        CHECK(static_cast<double>(s.served_bits[j]) <= s.offered_bits[j]);
      }
      CHECK(sum <= c.p_max + 1e-8);
    }
    const auto& d = r.diagnostics;
    CHECK(d.total_arrived == d.total_served + d.total_queued);
    CHECK(static_cast<double>(d.total_served) == r.summary.total_served_bits);
    CHECK(r.summary.jfi <= 1.0 + 1e-15);
    CHECK(r.summary.jfi >= 1.0 / 19.0 - 1e-15);
  }
}

TEST_CASE("service is capped by the selected sink's queue") {
  // One sink per position (density 0) makes the cap the whole position demand.
  SimConfig c = small_config(Algorithm::kGreedy);
  c.sink_density = 0.0;
  c.arrivals.lambda = 200;
  const auto r = run(c, {.keep_slot_log = true});
  bool capped = false;
  for (const auto& s : r.slots)
    for (std::size_t j = 0; j < s.illuminated.size(); ++j)
      if (static_cast<double>(s.served_bits[j]) < std::floor(s.offered_bits[j])) capped = true;
  CHECK(capped);
  CHECK(r.diagnostics.total_arrived == r.diagnostics.total_served + r.diagnostics.total_queued);
}

TEST_CASE("light load bypasses the scheduler") {
  // With as many beams as positions the preselected set never exceeds K.
  SimConfig c = small_config(Algorithm::kJbspo);
  c.rings = 1;
  c.num_beams = 7;
  const auto r = run(c);
  CHECK(r.diagnostics.scheduler_calls == 0);
  CHECK(r.summary.total_served_bits > 0.0);
}

TEST_CASE("determinism") {
  const SimConfig c = small_config(Algorithm::kJbspo, 7);
  const auto a = run(c, {.keep_slot_log = true});
  const auto b = run(c, {.keep_slot_log = true});
  std::ostringstream sa, sb, la, lb;
  bh::report::write_summary_csv(sa, a);
  bh::report::write_summary_csv(sb, b);
  bh::report::write_slots_csv(la, a);
  bh::report::write_slots_csv(lb, b);
  CHECK(sa.str() == sb.str());
  CHECK(la.str() == lb.str());
  CHECK(a.summary.sod_per_slot == b.summary.sod_per_slot);

  const auto other = run(small_config(Algorithm::kJbspo, 8));
  CHECK(other.summary.total_served_bits != a.summary.total_served_bits);
}

TEST_CASE("compare shares randomness and rejects mismatched scenarios") {
  std::vector<SimConfig> cfgs;
  for (Algorithm a : {Algorithm::kJbspo, Algorithm::kGreedy, Algorithm::kRoundRobin}) cfgs.push_back(small_config(a));
  const auto results = compare(cfgs, {}, 2);
  REQUIRE(results.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(results[i].config.algorithm == cfgs[i].algorithm);
  // Arrivals are drawn from their own stream, so every algorithm sees the
  // same packets.
  CHECK(results[0].diagnostics.total_arrived == results[1].diagnostics.total_arrived);
  CHECK(results[0].diagnostics.total_arrived == results[2].diagnostics.total_arrived);

  // Concurrent and sequential execution agree.
  const auto sequential = compare(cfgs, {}, 1);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(sequential[i].summary.sod_per_slot == results[i].summary.sod_per_slot);

  const std::vector<SimConfig> one = {small_config(Algorithm::kGreedy)};
  CHECK(compare(one).size() == 1);

  auto mismatched = cfgs;
  mismatched[1].seed = 99;
  CHECK_THROWS_AS(compare(mismatched), std::invalid_argument);
  mismatched = cfgs;
  mismatched[2].arrivals.lambda = 1;
  CHECK_THROWS_AS(compare(mismatched), std::invalid_argument);
}

TEST_CASE("non-uniform traffic multipliers") {
  SimConfig c = small_config(Algorithm::kGreedy);
  c.lambda_multiplier.assign(c.num_positions(), 1.0);
  c.lambda_multiplier[0] = 0.0;
  c.lambda_multiplier[1] = 4.0;
  const auto r = run(c);
  CHECK(r.summary.per_position[0].demanded_bits == 0.0);
  CHECK(r.summary.per_position[0].satisfaction == 1.0);
  CHECK(r.summary.per_position[1].demanded_bits > 2.0 * r.summary.per_position[2].demanded_bits);
}
