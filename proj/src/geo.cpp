#include "geoclean/geo.hpp"

#include <algorithm>
#include <cmath>

namespace geoclean {

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    const double deg = kPi / 180.0;
    double phi1 = a.lat * deg;
    double phi2 = b.lat * deg;
    double s = std::sin((b.lat - a.lat) * deg * 0.5);
    double t = std::sin((b.lon - a.lon) * deg * 0.5);
    // s*s and t*t make the formula exactly symmetric in its arguments
    double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    h = std::min(1.0, h);
    return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double planar_m(const GeoPoint& a, const GeoPoint& b) {
    return std::hypot(a.lat - b.lat, a.lon - b.lon);
}

double distance_m(const GeoPoint& a, const GeoPoint& b, CoordMode mode) {
    return mode == CoordMode::geographic ? haversine_m(a, b) : planar_m(a, b);
}

} // namespace geoclean
