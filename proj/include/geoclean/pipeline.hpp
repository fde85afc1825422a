#pragma once

#include <map>
#include <string>
#include <vector>

#include "geoclean/candidates.hpp"
#include "geoclean/corrector.hpp"
#include "geoclean/detector.hpp"
#include "geoclean/formulator.hpp"

namespace geoclean {

// everything produced while cleaning under one constraint
struct ConstraintRun {
    SpatialConstraint constraint;
    DistanceMatrix matrix;
    FrequencyTable freq;
    DetectionResult detection;
    std::vector<CellCandidates> cells;
    std::vector<FormulatorOutput> encoded;
    std::vector<Repair> repairs;
    size_t cells_without_candidates = 0;
};

struct CleanRun {
    std::vector<ConstraintRun> constraints;
    Dataset repaired;
    std::map<std::string, double> stage_ms; // accumulated across constraints
};

// constraints run independently against the input dataset, in declaration
// order; repairs apply afterwards, later constraints winning shared cells
CleanRun run_clean(const Dataset& ds, const CleaningConfig& config,
                   int threads = 1);

} // namespace geoclean
