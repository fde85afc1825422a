#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "geoclean/constraint.hpp"
#include "geoclean/dataset.hpp"

namespace geoclean {

// interned target values in first-appearance (record) order; -1 means NULL
struct ValueTable {
    std::vector<std::string> values;
    std::unordered_map<std::string, int32_t> index;

    int32_t intern(const std::string& v);
    int32_t find(const std::string& v) const; // -1 when absent
    const std::string& name(int32_t id) const { return values[id]; }
    size_t size() const { return values.size(); }
};

struct MatrixRow {
    uint32_t r1 = 0;
    uint32_t r2 = 0;
    int32_t v1 = -1; // interned target values, -1 = NULL
    int32_t v2 = -1;
    double d = 0.0;
    double w = 0.0;
};

struct DistanceMatrix {
    ValueTable values;
    int target_attr = -1;
    std::vector<MatrixRow> rows;             // sorted by (r1, d, r2)
    std::vector<std::pair<size_t, size_t>> spans; // per-record [begin, end)
    std::vector<int32_t> record_value;       // target value per record
};

// Count(v, D) per interned value plus |D| (NULL-target records included)
struct FrequencyTable {
    std::vector<int64_t> counts;
    int64_t total_records = 0;

    int64_t count_of(int32_t v) const {
        return v >= 0 && v < static_cast<int32_t>(counts.size()) ? counts[v] : 0;
    }
};

// (1 - dist/d_eff)^n; n = 0 disables weighting entirely (all 1)
double weight(double dist, double d_eff, int n);

struct MatrixBuildStats {
    double index_ms = 0.0;
    double join_ms = 0.0;
};

DistanceMatrix build_distance_matrix(const Dataset& ds,
                                     const SpatialConstraint& constraint,
                                     int threads = 1,
                                     MatrixBuildStats* stats = nullptr);

FrequencyTable build_frequency_table(const Dataset& ds,
                                     const DistanceMatrix& matrix);

} // namespace geoclean
