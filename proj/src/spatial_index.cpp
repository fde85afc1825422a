#include "geoclean/spatial_index.hpp"

#include <algorithm>
#include <cmath>

namespace geoclean {

namespace {

inline bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.index < b.index;
}

} // namespace

GridIndex::GridIndex(std::vector<GeoPoint> points, CoordMode mode,
                     std::optional<double> range_hint_m)
    : points_(std::move(points)), mode_(mode) {
    double lat_min = 0, lat_max = 0, lon_min = 0, lon_max = 0;
    if (!points_.empty()) {
        lat_min = lat_max = points_[0].lat;
        lon_min = lon_max = points_[0].lon;
        for (const auto& p : points_) {
            lat_min = std::min(lat_min, p.lat);
            lat_max = std::max(lat_max, p.lat);
            lon_min = std::min(lon_min, p.lon);
            lon_max = std::max(lon_max, p.lon);
        }
    }
    lat0_ = lat_min;
    lon0_ = lon_min;
    lon_extent_deg_ = lon_max - lon_min;

    double m_per_lat = 1.0, m_per_lon = 1.0;
    if (mode_ == CoordMode::geographic) {
        double phi_max = std::max(std::abs(lat_min), std::abs(lat_max));
        cos_phi_max_ = std::max(std::cos(phi_max * kPi / 180.0), 1e-9);
        m_per_lat = kMetersPerDegLat;
        // sizing only; query windows use exact covers
        double mid = 0.5 * (lat_min + lat_max);
        m_per_lon = kMetersPerDegLat * std::max(std::cos(mid * kPi / 180.0), 1e-9);
    }
    double extent_y = (lat_max - lat_min) * m_per_lat;
    double extent_x = (lon_max - lon_min) * m_per_lon;
    double extent = std::max(extent_x, extent_y);

    size_t n = points_.size();
    double cells = std::ceil(std::sqrt(static_cast<double>(std::max<size_t>(n, 1))));
    side_m_ = extent > 0 ? extent / cells : 1.0;
    if (range_hint_m && *range_hint_m > 0)
        side_m_ = std::max(side_m_, *range_hint_m / 4.0);
    if (!(side_m_ > 0) || !std::isfinite(side_m_)) side_m_ = 1.0;

    side_lat_ = side_m_ / m_per_lat;
    side_lon_ = side_m_ / m_per_lon;
    nx_ = std::max(1, static_cast<int>((lon_max - lon_min) / side_lon_) + 1);
    ny_ = std::max(1, static_cast<int>((lat_max - lat_min) / side_lat_) + 1);

    cell_start_.assign(static_cast<size_t>(nx_) * ny_ + 1, 0);
    std::vector<uint32_t> cell_of(n);
    for (size_t i = 0; i < n; ++i) {
        uint32_t c = static_cast<uint32_t>(cell_y(points_[i].lat)) * nx_ +
                     cell_x(points_[i].lon);
        cell_of[i] = c;
        ++cell_start_[c + 1];
    }
    for (size_t c = 1; c < cell_start_.size(); ++c)
        cell_start_[c] += cell_start_[c - 1];
    cell_items_.resize(n);
    std::vector<uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (size_t i = 0; i < n; ++i)
        cell_items_[cursor[cell_of[i]]++] = static_cast<uint32_t>(i);
}

int GridIndex::cell_x(double lon) const {
    int c = static_cast<int>((lon - lon0_) / side_lon_);
    return std::clamp(c, 0, nx_ - 1);
}

int GridIndex::cell_y(double lat) const {
    int c = static_cast<int>((lat - lat0_) / side_lat_);
    return std::clamp(c, 0, ny_ - 1);
}

void GridIndex::window(double d, double& dlat, double& dlon) const {
    const double margin = 1.0 + 1e-9;
    if (mode_ == CoordMode::planar) {
        dlat = dlon = d * margin;
        return;
    }
    // any pair within haversine d satisfies |dlat_deg| <= d/m_per_deg and
    // |dlon_deg| <= 2 asin(min(1, sin(d/2R)/cos(phi_max))), the latter only
    // without antimeridian shortcuts, so fall back to the full lon span when
    // the data covers more than half the globe
    dlat = d / kMetersPerDegLat * margin;
    double s = std::sin(std::min(d / (2.0 * kEarthRadiusM), kPi / 2.0));
    double arg = s / cos_phi_max_;
    if (arg >= 1.0 || lon_extent_deg_ > 180.0)
        dlon = 360.0;
    else
        dlon = 2.0 * std::asin(arg) * 180.0 / kPi * margin;
}

std::vector<Neighbor> GridIndex::range_impl(const GeoPoint& q, double d,
                                            uint32_t exclude) const {
    std::vector<Neighbor> out;
    if (points_.empty() || !(d > 0)) return out;
    double dlat = 0, dlon = 0;
    window(d, dlat, dlon);
    int x0 = cell_x(q.lon - dlon), x1 = cell_x(q.lon + dlon);
    int y0 = cell_y(q.lat - dlat), y1 = cell_y(q.lat + dlat);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            size_t c = static_cast<size_t>(y) * nx_ + x;
            for (uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
                uint32_t i = cell_items_[s];
                if (i == exclude) continue;
                double dist = distance_m(q, points_[i], mode_);
                if (dist < d) out.push_back({i, dist});
            }
        }
    }
    std::sort(out.begin(), out.end(), neighbor_less);
    return out;
}

double GridIndex::ring_lower_bound_m(int ring) const {
    if (ring <= 1) return 0.0;
    double cells = ring - 1;
    if (mode_ == CoordMode::planar)
        return cells * std::min(side_lat_, side_lon_);
    double lat_lb = cells * side_lat_ * kMetersPerDegLat;
    if (lon_extent_deg_ > 180.0) return 0.0; // wraparound defeats the lon bound
    double half = std::min(0.5 * cells * side_lon_ * kPi / 180.0, kPi / 2.0);
    double lon_lb = 2.0 * kEarthRadiusM * std::asin(cos_phi_max_ * std::sin(half));
    return std::min(lat_lb, lon_lb);
}

std::vector<Neighbor> GridIndex::knn_impl(const GeoPoint& q, int k,
                                          uint32_t exclude) const {
    std::vector<Neighbor> heap; // max-heap on (distance, index)
    if (points_.empty() || k <= 0) return heap;
    auto worse = [](const Neighbor& a, const Neighbor& b) {
        return neighbor_less(a, b); // std heap: "less" keeps max on top
    };
    size_t want = static_cast<size_t>(k);
    int cx = cell_x(q.lon), cy = cell_y(q.lat);
    int max_ring = std::max(std::max(cx, nx_ - 1 - cx),
                            std::max(cy, ny_ - 1 - cy));

    auto visit_cell = [&](int x, int y) {
        size_t c = static_cast<size_t>(y) * nx_ + x;
        for (uint32_t s = cell_start_[c]; s < cell_start_[c + 1]; ++s) {
            uint32_t i = cell_items_[s];
            if (i == exclude) continue;
            Neighbor cand{i, distance_m(q, points_[i], mode_)};
            if (heap.size() < want) {
                heap.push_back(cand);
                std::push_heap(heap.begin(), heap.end(), worse);
            } else if (neighbor_less(cand, heap.front())) {
                std::pop_heap(heap.begin(), heap.end(), worse);
                heap.back() = cand;
                std::push_heap(heap.begin(), heap.end(), worse);
            }
        }
    };

    for (int ring = 0; ring <= max_ring; ++ring) {
        if (heap.size() == want &&
            ring_lower_bound_m(ring) > heap.front().distance)
            break;
        int x0 = std::max(0, cx - ring), x1 = std::min(nx_ - 1, cx + ring);
        int y0 = std::max(0, cy - ring), y1 = std::min(ny_ - 1, cy + ring);
        for (int y = y0; y <= y1; ++y) {
            bool edge_row = (y == cy - ring || y == cy + ring);
            if (edge_row) {
                for (int x = x0; x <= x1; ++x) visit_cell(x, y);
            } else {
                if (cx - ring >= 0) visit_cell(cx - ring, y);
                if (cx + ring <= nx_ - 1 && ring > 0) visit_cell(cx + ring, y);
            }
        }
    }
    std::sort(heap.begin(), heap.end(), neighbor_less);
    return heap;
}

std::vector<Neighbor> GridIndex::range_query(uint32_t self,
                                             double d_meters) const {
    return range_impl(points_[self], d_meters, self);
}

std::vector<Neighbor> GridIndex::knn_query(uint32_t self, int k) const {
    return knn_impl(points_[self], k, self);
}

std::vector<Neighbor> GridIndex::range_query(const GeoPoint& q,
                                             double d_meters) const {
    return range_impl(q, d_meters, kNone);
}

std::vector<Neighbor> GridIndex::knn_query(const GeoPoint& q, int k) const {
    return knn_impl(q, k, kNone);
}

} // namespace geoclean
