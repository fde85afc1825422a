#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geoclean/geo.hpp"

namespace geoclean {

struct Neighbor {
    uint32_t index = 0;
    double distance = 0.0;
};

// uniform grid over the point bounding box. cell side is
// max(bbox_extent / ceil(sqrt(N)), d/4) meters, the d/4 floor applying only
// when a range radius hint is supplied. queries return results sorted by
// (distance, index), ties on the index, and never include the query record
// itself. membership is strict: distance < d.
class GridIndex {
public:
    GridIndex(std::vector<GeoPoint> points, CoordMode mode,
              std::optional<double> range_hint_m = std::nullopt);

    std::vector<Neighbor> range_query(uint32_t self, double d_meters) const;
    std::vector<Neighbor> knn_query(uint32_t self, int k) const;

    // external query point (not indexed); no self-exclusion
    std::vector<Neighbor> range_query(const GeoPoint& q, double d_meters) const;
    std::vector<Neighbor> knn_query(const GeoPoint& q, int k) const;

    size_t size() const { return points_.size(); }
    const GeoPoint& point(uint32_t i) const { return points_[i]; }
    CoordMode mode() const { return mode_; }
    double cell_side_m() const { return side_m_; }

private:
    static constexpr uint32_t kNone = UINT32_MAX;

    std::vector<Neighbor> range_impl(const GeoPoint& q, double d,
                                     uint32_t exclude) const;
    std::vector<Neighbor> knn_impl(const GeoPoint& q, int k,
                                   uint32_t exclude) const;
    // conservative cell-window half-extents covering distance d
    void window(double d, double& dlat, double& dlon) const;
    double ring_lower_bound_m(int ring) const;
    int cell_x(double lon) const;
    int cell_y(double lat) const;

    std::vector<GeoPoint> points_;
    CoordMode mode_;
    double side_m_ = 1.0;
    double side_lat_ = 1.0; // cell side in native units (deg or m)
    double side_lon_ = 1.0;
    double lat0_ = 0.0, lon0_ = 0.0;
    int nx_ = 1, ny_ = 1;
    double cos_phi_max_ = 1.0;    // geographic only
    double lon_extent_deg_ = 0.0; // geographic only
    std::vector<uint32_t> cell_start_; // CSR buckets, row-major y*nx+x
    std::vector<uint32_t> cell_items_;
};

} // namespace geoclean
