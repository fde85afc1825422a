#pragma once

#include <cstdint>
#include <vector>

#include "geoclean/dataset.hpp"
#include "geoclean/distance_matrix.hpp"

namespace geoclean {

struct DetectionResult {
    int target_attr = -1;
    std::vector<uint8_t> flagged;     // per record
    std::vector<CellRef> erroneous;   // record order
    std::vector<uint32_t> clean;      // record order
};

// one scan over the matrix: a non-NULL pair with differing values flags both
// sides; every NULL target cell is flagged unconditionally; a NULL neighbor
// never flags anyone
DetectionResult detect_errors(const Dataset& ds, const DistanceMatrix& matrix);

} // namespace geoclean
