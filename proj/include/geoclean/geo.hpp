#pragma once

#include <cstdint>

namespace geoclean {

inline constexpr double kEarthRadiusM = 6371000.0;
inline constexpr double kPi = 3.14159265358979323846;
// meters per degree of latitude on the spherical model
inline constexpr double kMetersPerDegLat = kEarthRadiusM * kPi / 180.0;

// geographic: lat/lon in degrees. planar: lat carries y meters, lon carries x.
enum class CoordMode { geographic, planar };

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

struct BBox {
    double lat_min = 0.0, lat_max = 0.0;
    double lon_min = 0.0, lon_max = 0.0;
};

double haversine_m(const GeoPoint& a, const GeoPoint& b);
double planar_m(const GeoPoint& a, const GeoPoint& b);
double distance_m(const GeoPoint& a, const GeoPoint& b, CoordMode mode);

} // namespace geoclean
