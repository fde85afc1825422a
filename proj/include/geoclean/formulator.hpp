#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geoclean/candidates.hpp"
#include "geoclean/constraint.hpp"

namespace geoclean {

struct ScoredValue {
    int32_t value = -1;
    double score = 0.0;
};

struct FormulatorOutput {
    CellRef cell;
    FormulatorKind kind = FormulatorKind::factor;
    bool higher_better = true;
    // one score per surviving candidate, candidate order preserved
    std::vector<ScoredValue> scores;
    std::optional<int32_t> label; // carried through from Phase 3
};

// violation: sum of W over the record's non-NULL rows whose value differs
//            (lower is better)
// probability: support share among the cell's candidates, unsupported
//            candidates exactly 0 (higher is better)
// factor: +W for agreeing rows, -W for differing ones, NULL rows skipped
//            (higher is better); factor = totalW - 2*violation
FormulatorOutput encode_cell(FormulatorKind kind, const CellCandidates& cell,
                             const DistanceMatrix& matrix);

std::vector<FormulatorOutput> encode_all(FormulatorKind kind,
                                         const std::vector<CellCandidates>& cells,
                                         const DistanceMatrix& matrix);

} // namespace geoclean
