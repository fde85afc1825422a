#include "geoclean/detector.hpp"

namespace geoclean {

DetectionResult detect_errors(const Dataset& ds, const DistanceMatrix& matrix) {
    DetectionResult res;
    res.target_attr = matrix.target_attr;
    size_t n = ds.records.size();
    res.flagged.assign(n, 0);
    for (size_t i = 0; i < n; ++i)
        if (matrix.record_value[i] < 0) res.flagged[i] = 1;
    for (const auto& row : matrix.rows) {
        if (row.v1 < 0 || row.v2 < 0) continue;
        if (row.v1 != row.v2) {
            res.flagged[row.r1] = 1;
            res.flagged[row.r2] = 1;
        }
    }
    for (uint32_t i = 0; i < n; ++i) {
        if (res.flagged[i])
            res.erroneous.push_back({i, matrix.target_attr});
        else
            res.clean.push_back(i);
    }
    return res;
}

} // namespace geoclean
