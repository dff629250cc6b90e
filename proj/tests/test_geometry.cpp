#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "bhsim/geometry.hpp"

using namespace bh::geo;

namespace {
constexpr double kSpacingTol = 1e-3;  // meters
}

TEST_CASE("make_geo_point wraps longitude and rejects bad latitude") {
  CHECK(make_geo_point(10, 180).lon == doctest::Approx(-180));
  CHECK(make_geo_point(10, 190).lon == doctest::Approx(-170));
  CHECK(make_geo_point(10, -190).lon == doctest::Approx(170));
  CHECK_THROWS_AS(make_geo_point(91, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_geo_point(NAN, 0), std::invalid_argument);
}

TEST_CASE("subsatellite point moves along a great circle") {
  OrbitState orbit;
  orbit.initial_subsat = {35.0, 110.0};
  orbit.track_azimuth = 30.0;

  const GeoPoint p0 = subsatellite_at(orbit, 0.0);
  CHECK(p0.lat == doctest::Approx(35.0).epsilon(1e-14));
  CHECK(p0.lon == doctest::Approx(110.0).epsilon(1e-14));

  // 0.2 s at 7050 m/s is 1410 m; the initial bearing toward p1 must be the track azimuth.
  const GeoPoint p1 = subsatellite_at(orbit, 0.2);
  CHECK(great_circle_distance(orbit.initial_subsat, p1) == doctest::Approx(1410.0).epsilon(1e-9));
  const double phi0 = deg2rad(35.0), phi1 = deg2rad(p1.lat), dlon = deg2rad(p1.lon - 110.0);
  const double bearing = std::atan2(std::sin(dlon) * std::cos(phi1),
                                    std::cos(phi0) * std::sin(phi1) -
                                        std::sin(phi0) * std::cos(phi1) * std::cos(dlon));
  CHECK(rad2deg(bearing) == doctest::Approx(30.0).epsilon(1e-6));

  const GeoPoint p20 = subsatellite_at(orbit, 20.0);
  CHECK(std::abs(great_circle_distance(orbit.initial_subsat, p20) - 141000.0) <= 1.0);

  CHECK_THROWS_AS(subsatellite_at(orbit, -1.0), std::invalid_argument);
}

TEST_CASE("subsatellite motion is continuous") {
  OrbitState orbit;
  orbit.initial_subsat = {-20.0, 170.0};
  orbit.track_azimuth = 75.0;
  GeoPoint prev = subsatellite_at(orbit, 0.0);
  for (int i = 1; i <= 200; ++i) {
    const double dt = 0.5;
    const GeoPoint cur = subsatellite_at(orbit, i * dt);
    CHECK(great_circle_distance(prev, cur) <= orbit.ground_speed * dt * (1 + 1e-6));
    prev = cur;
  }
}

TEST_CASE("geo_to_ecef on the axes") {
  const auto a = geo_to_ecef({0, 0}, 0);
  CHECK(a.x == doctest::Approx(kEarthRadius));
  CHECK(std::abs(a.y) < 1e-6);
  CHECK(std::abs(a.z) < 1e-6);
  const auto b = geo_to_ecef({90, 0}, 0);
  CHECK(std::abs(b.x) < 1e-6);
  CHECK(b.z == doctest::Approx(kEarthRadius));
  const auto c = geo_to_ecef({0, 90}, 508000);
  CHECK(std::abs(c.x) < 1e-6);
  CHECK(c.y == doctest::Approx(kEarthRadius + 508000));
  CHECK(geo_to_ecef({37.2, -122.1}, 0).norm() == doctest::Approx(kEarthRadius).epsilon(1e-12));
}

TEST_CASE("hex grid counts and spacing") {
  const double r = footprint_radius_for(508000, 1.66);
  CHECK(r == doctest::Approx(14722.13).epsilon(1e-6));
  for (int rings = 0; rings <= 6; ++rings)
    CHECK(build_grid({35, 110}, rings, r).size() == static_cast<std::size_t>(3 * rings * (rings + 1) + 1));
  CHECK(build_grid({35, 110}, 4, r).size() == 61);

  const BeamGrid g1 = build_grid({35, 110}, 1, r);
  REQUIRE(g1.size() == 7);
  CHECK(g1.centers[0].lat == doctest::Approx(35));
  for (std::size_t i = 1; i < 7; ++i)
    CHECK(std::abs(great_circle_distance(g1.centers[0], g1.centers[i]) - std::sqrt(3.0) * r) <= 1.0);

  const BeamGrid g4 = build_grid({35, 110}, 4, r);
  for (std::size_t i = 0; i < g4.size(); ++i)
    for (std::size_t j = i + 1; j < g4.size(); ++j)
      CHECK(great_circle_distance(g4.centers[i], g4.centers[j]) >= g4.spacing() - kSpacingTol);

  CHECK_THROWS_AS(build_grid({35, 110}, 11, r), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({35, 110}, -1, r), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({35, 110}, 2, 0.0), std::invalid_argument);
}

TEST_CASE("sink sampling") {
  const double r = footprint_radius_for(508000, 1.66);
  const BeamGrid grid = build_grid({35, 110}, 2, r);
  std::mt19937_64 rng(5);

  const auto none = sample_sinks(grid, 0.0, rng);
  REQUIRE(none.size() == grid.size());
  for (const auto& s : none) {
    CHECK(s.position.lat == grid.centers[s.parent].lat);
    CHECK(s.position.lon == grid.centers[s.parent].lon);
  }

  // Mean count per position over 1e4 single-cell draws: Poisson mean is
  // density * pi * r^2, about 10.2. Zero draws get the fallback node.
  const BeamGrid single = build_grid({35, 110}, 0, 14722.0);
  const double mean_expected = 1.5e-8 * kPi * 14722.0 * 14722.0;
  double total = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) total += static_cast<double>(sample_sinks(single, 1.5e-8, rng).size());
  CHECK(total / draws == doctest::Approx(mean_expected).epsilon(0.05));

  const auto sinks = sample_sinks(grid, 1.5e-8, rng);
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    CHECK(sinks[i].id == static_cast<int>(i));
    CHECK(great_circle_distance(sinks[i].position, grid.centers[sinks[i].parent]) <= r + 1e-6);
    if (i > 0) CHECK(sinks[i].parent >= sinks[i - 1].parent);
  }
  CHECK_THROWS_AS(sample_sinks(grid, -1.0, rng), std::invalid_argument);
}

TEST_CASE("off-axis angle") {
  const EcefVector apex = geo_to_ecef({35, 110}, 508000);
  const EcefVector target = geo_to_ecef({35, 110}, 0);
  CHECK(off_axis_angle(apex, target, target) == 0.0);

  // 18 km north of nadir: spherical geometry must agree with the flat-patch
  // estimate atan(18/508) to within 0.01 degrees.
  const EcefVector north = geo_to_ecef(destination({35, 110}, 0.0, 18000), 0);
  CHECK(std::abs(off_axis_angle(apex, target, north) - rad2deg(std::atan(18.0 / 508.0))) < 0.01);

  const EcefVector south = geo_to_ecef(destination({35, 110}, 180.0, 18000), 0);
  CHECK(std::abs(off_axis_angle(apex, target, north) - off_axis_angle(apex, target, south)) < 1e-9);

  // Scaling a ray does not change the angle.
  const EcefVector far = apex + (north - apex) * 3.0;
  CHECK(off_axis_angle(apex, target, far) == doctest::Approx(off_axis_angle(apex, target, north)).epsilon(1e-12));

  CHECK_THROWS_AS(off_axis_angle(apex, apex, target), std::invalid_argument);
}

TEST_CASE("slant range") {
  const EcefVector sat{kEarthRadius + 508000, 0, 0};
  const EcefVector node{kEarthRadius, 0, 0};
  CHECK(slant_range(sat, node) == doctest::Approx(508000));
  CHECK(slant_range(node, node) == 0.0);
  CHECK(slant_range(geo_to_ecef({35, 110}, 508000), geo_to_ecef({35, 110}, 0)) ==
        doctest::Approx(508000).epsilon(1e-12));
}
