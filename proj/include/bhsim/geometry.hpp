#pragma once

#include <cstddef>
#include <random>
#include <vector>

namespace bh::geo {

// Spherical Earth.
inline constexpr double kEarthRadius = 6'371'000.0;  // meters
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

struct GeoPoint {
  double lat = 0.0;  // degrees, [-90, 90]
  double lon = 0.0;  // degrees, [-180, 180)
};

/// Builds a GeoPoint, wrapping longitude into [-180, 180). Throws if the
/// latitude is outside [-90, 90] or either coordinate is not finite.
GeoPoint make_geo_point(double lat_deg, double lon_deg);

struct EcefVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  EcefVector operator-(const EcefVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  EcefVector operator+(const EcefVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  EcefVector operator*(double s) const { return {x * s, y * s, z * s}; }
  double dot(const EcefVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
};

struct OrbitState {
  double altitude = 508'000.0;        // meters
  GeoPoint initial_subsat{};
  double track_azimuth = 0.0;         // degrees clockwise from north
  double ground_speed = 7050.0;       // m/s along the surface
};

struct BeamGrid {
  std::vector<GeoPoint> centers;
  double footprint_radius = 0.0;  // meters
  int rings = 0;

  std::size_t size() const { return centers.size(); }
  double spacing() const;  // sqrt(3) * footprint_radius
};

struct SinkNode {
  int id = 0;
  GeoPoint position{};
  std::size_t parent = 0;  // beam-position index
};

inline constexpr int kMaxGridRings = 10;

/// Number of cells in a hexagonal grid with the given ring count.
constexpr std::size_t hex_cell_count(int rings) {
  return static_cast<std::size_t>(3 * rings * (rings + 1) + 1);
}

double great_circle_distance(const GeoPoint& a, const GeoPoint& b);

/// Point reached by travelling `distance` meters from `start` along the great
/// circle with initial bearing `bearing_deg`.
GeoPoint destination(const GeoPoint& start, double bearing_deg, double distance);

GeoPoint subsatellite_at(const OrbitState& orbit, double t);

EcefVector geo_to_ecef(const GeoPoint& p, double height);

/// Hexagonal grid of beam-position centers around `center`. Planar hex
/// offsets (spacing sqrt(3) * footprint_radius) are lifted orthographically
/// onto the sphere, so no pair of centers ends up closer than the planar
/// spacing.
BeamGrid build_grid(const GeoPoint& center, int rings, double footprint_radius);

/// Footprint radius of a beam pointed at nadir: altitude * tan(theta_3db).
double footprint_radius_for(double altitude, double theta_3db_deg);

/// Poisson-distributed sink nodes per beam position, uniform over the
/// footprint disk. Positions that draw zero nodes get one at the center.
/// Ids are assigned sequentially, grouped by position.
std::vector<SinkNode> sample_sinks(const BeamGrid& grid, double density, std::mt19937_64& rng);

/// Angle (degrees, [0, 180]) at `apex` between the rays to `boresight_target`
/// and to `object`.
double off_axis_angle(const EcefVector& apex, const EcefVector& boresight_target,
                      const EcefVector& object);

double slant_range(const EcefVector& sat, const EcefVector& node);

}  // namespace bh::geo
