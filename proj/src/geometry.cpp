#include "bhsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bh::geo {

namespace {

double wrap_longitude(double lon) {
  double wrapped = std::fmod(lon + 180.0, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  return wrapped - 180.0;
}

}  // namespace

GeoPoint make_geo_point(double lat_deg, double lon_deg) {
  if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg))
    throw std::invalid_argument("GeoPoint coordinates must be finite");
  if (lat_deg < -90.0 || lat_deg > 90.0)
    throw std::invalid_argument("latitude out of range [-90, 90]: " + std::to_string(lat_deg));
  return {lat_deg, wrap_longitude(lon_deg)};
}

double EcefVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

double BeamGrid::spacing() const { return std::sqrt(3.0) * footprint_radius; }

double great_circle_distance(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = deg2rad(a.lat);
  const double lat2 = deg2rad(b.lat);
  const double dlat = lat2 - lat1;
  const double dlon = deg2rad(b.lon - a.lon);
  const double s1 = std::sin(dlat / 2.0);
  const double s2 = std::sin(dlon / 2.0);
  const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
  return 2.0 * kEarthRadius * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint destination(const GeoPoint& start, double bearing_deg, double distance) {
  const double delta = distance / kEarthRadius;
  const double theta = deg2rad(bearing_deg);
  const double lat1 = deg2rad(start.lat);
  const double lon1 = deg2rad(start.lon);

  const double sin_lat2 =
      std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(theta);
  const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
  const double lon2 =
      lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                        std::cos(delta) - std::sin(lat1) * sin_lat2);
  return {rad2deg(lat2), wrap_longitude(rad2deg(lon2))};
}

GeoPoint subsatellite_at(const OrbitState& orbit, double t) {
  if (t < 0.0) throw std::invalid_argument("subsatellite_at: t must be >= 0");
  if (t == 0.0) return orbit.initial_subsat;
  return destination(orbit.initial_subsat, orbit.track_azimuth, orbit.ground_speed * t);
}

EcefVector geo_to_ecef(const GeoPoint& p, double height) {
  const double r = kEarthRadius + height;
  const double lat = deg2rad(p.lat);
  const double lon = deg2rad(p.lon);
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

BeamGrid build_grid(const GeoPoint& center, int rings, double footprint_radius) {
  if (rings < 0) throw std::invalid_argument("build_grid: rings must be >= 0");
  if (rings > kMaxGridRings)
    throw std::invalid_argument("build_grid: rings > " + std::to_string(kMaxGridRings) +
                                " breaks the flat-patch approximation");
  if (!(footprint_radius > 0.0))
    throw std::invalid_argument("build_grid: footprint_radius must be > 0");

  BeamGrid grid;
  grid.footprint_radius = footprint_radius;
  grid.rings = rings;
  grid.centers.reserve(hex_cell_count(rings));

  const double d = grid.spacing();
  // Axial coordinates, ordered by ring so index 0 is the center cell.
  for (int ring = 0; ring <= rings; ++ring) {
    for (int q = -ring; q <= ring; ++q) {
      for (int r = -ring; r <= ring; ++r) {
        const int s = -q - r;
        if (std::max({std::abs(q), std::abs(r), std::abs(s)}) != ring) continue;
        const double east = d * (q + 0.5 * r);
        const double north = d * (std::sqrt(3.0) / 2.0) * r;
        const double rho = std::hypot(east, north);
        if (rho == 0.0) {
          grid.centers.push_back(center);
          continue;
        }
        const double arc = kEarthRadius * std::asin(rho / kEarthRadius);
        const double bearing = rad2deg(std::atan2(east, north));
        grid.centers.push_back(destination(center, bearing, arc));
      }
    }
  }
  return grid;
}

double footprint_radius_for(double altitude, double theta_3db_deg) {
  return altitude * std::tan(deg2rad(theta_3db_deg));
}

std::vector<SinkNode> sample_sinks(const BeamGrid& grid, double density, std::mt19937_64& rng) {
  if (density < 0.0) throw std::invalid_argument("sample_sinks: density must be >= 0");

  const double r = grid.footprint_radius;
  const double mean = density * kPi * r * r;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<SinkNode> sinks;
  int next_id = 0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    long count = 0;
    if (mean > 0.0) {
      std::poisson_distribution<long> poisson(mean);
      count = poisson(rng);
    }
    if (count == 0) {
      sinks.push_back({next_id++, grid.centers[n], n});
      continue;
    }
    for (long i = 0; i < count; ++i) {
      // unit() is in [0, 1), so the radius stays strictly inside the disk.
      const double dist = r * std::sqrt(unit(rng));
      const double bearing = 360.0 * unit(rng);
      sinks.push_back({next_id++, destination(grid.centers[n], bearing, dist), n});
    }
  }
  return sinks;
}

double off_axis_angle(const EcefVector& apex, const EcefVector& boresight_target,
                      const EcefVector& object) {
  const EcefVector a = boresight_target - apex;
  const EcefVector b = object - apex;
  if (a.norm() == 0.0 || b.norm() == 0.0)
    throw std::invalid_argument("off_axis_angle: zero-length ray");
  const EcefVector cross{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  return rad2deg(std::atan2(cross.norm(), a.dot(b)));
}

double slant_range(const EcefVector& sat, const EcefVector& node) { return (sat - node).norm(); }

}  // namespace bh::geo
