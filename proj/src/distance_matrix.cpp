#include "geoclean/distance_matrix.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "geoclean/spatial_index.hpp"

namespace geoclean {

int32_t ValueTable::intern(const std::string& v) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    int32_t id = static_cast<int32_t>(values.size());
    values.push_back(v);
    index.emplace(v, id);
    return id;
}

int32_t ValueTable::find(const std::string& v) const {
    auto it = index.find(v);
    return it == index.end() ? -1 : it->second;
}

double weight(double dist, double d_eff, int n) {
    if (n == 0) return 1.0;
    if (!(d_eff > 0.0)) return 1.0; // all k neighbors at distance 0
    double base = 1.0 - dist / d_eff;
    if (base <= 0.0) return 0.0;
    if (n == 1) return base;
    if (n == 2) return base * base;
    return std::pow(base, n);
}

DistanceMatrix build_distance_matrix(const Dataset& ds,
                                     const SpatialConstraint& constraint,
                                     int threads, MatrixBuildStats* stats) {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    DistanceMatrix m;
    m.target_attr = ds.attr_index(constraint.target);
    if (m.target_attr < 0)
        throw std::runtime_error("target column '" + constraint.target +
                                 "' not in dataset");
    size_t n = ds.records.size();
    m.record_value.resize(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const Value& v = ds.records[i].attrs[m.target_attr];
        if (v) m.record_value[i] = m.values.intern(*v);
    }

    std::vector<GeoPoint> pts;
    pts.reserve(n);
    for (const auto& rec : ds.records) pts.push_back(rec.pos);
    std::optional<double> hint;
    if (constraint.kind == PredicateKind::range) hint = constraint.d_meters;
    GridIndex index(std::move(pts), constraint.distance, hint);
    auto t1 = clock::now();

    auto rows_for = [&](uint32_t i) {
        std::vector<MatrixRow> out;
        std::vector<Neighbor> nb;
        double d_eff;
        if (constraint.kind == PredicateKind::range) {
            nb = index.range_query(i, constraint.d_meters);
            d_eff = constraint.d_meters;
        } else {
            nb = index.knn_query(i, constraint.k);
            d_eff = nb.empty() ? 0.0 : nb.back().distance;
        }
        out.reserve(nb.size());
        for (const auto& x : nb)
            out.push_back({i, x.index, m.record_value[i], m.record_value[x.index],
                           x.distance, weight(x.distance, d_eff, constraint.n)});
        return out;
    };

    std::vector<std::vector<MatrixRow>> per_record(n);
    if (threads <= 1 || n < 2) {
        for (uint32_t i = 0; i < n; ++i) per_record[i] = rows_for(i);
    } else {
        size_t t = std::min<size_t>(threads, n);
        std::vector<std::thread> pool;
        std::atomic<uint32_t> cursor{0};
        for (size_t w = 0; w < t; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    uint32_t i = cursor.fetch_add(1);
                    if (i >= n) break;
                    per_record[i] = rows_for(i);
                }
            });
        for (auto& th : pool) th.join();
    }

    size_t total = 0;
    for (const auto& r : per_record) total += r.size();
    m.rows.reserve(total);
    m.spans.resize(n);
    for (size_t i = 0; i < n; ++i) {
        size_t begin = m.rows.size();
        m.rows.insert(m.rows.end(), per_record[i].begin(), per_record[i].end());
        m.spans[i] = {begin, m.rows.size()};
        per_record[i].clear();
        per_record[i].shrink_to_fit();
    }
    if (stats) {
        auto ms = [](auto a, auto b) {
            return std::chrono::duration<double, std::milli>(b - a).count();
        };
        stats->index_ms = ms(t0, t1);
        stats->join_ms = ms(t1, clock::now());
    }
    return m;
}

FrequencyTable build_frequency_table(const Dataset& ds,
                                     const DistanceMatrix& matrix) {
    FrequencyTable f;
    f.total_records = static_cast<int64_t>(ds.records.size());
    f.counts.assign(matrix.values.size(), 0);
    for (int32_t v : matrix.record_value)
        if (v >= 0) ++f.counts[v];
    return f;
}

} // namespace geoclean
