#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geoclean/candidates.hpp"
#include "geoclean/formulator.hpp"

namespace geoclean {

struct Repair {
    enum class Source { auto_label, formulator };
    uint32_t record = 0;
    int attr = 0;
    Value old_value;        // NULL allowed
    std::string new_value;  // repairs never introduce NULL
    Source source = Source::formulator;
    double score = 0.0;     // label probability or winning formulator score
};

// auto-labeled cells repair to their label; the rest take the best formulator
// score (argmax or argmin per direction). ties prefer the original value, then
// the lexicographically smallest value. cells with no candidates produce no
// repair. a repair may restate the original value, which declares the cell
// clean without changing data.
std::vector<Repair> resolve(const std::vector<CellCandidates>& cells,
                            const std::vector<FormulatorOutput>& outputs,
                            const DistanceMatrix& matrix);

// pure and idempotent; only target attributes change, never id or coordinates
Dataset apply_repairs(const Dataset& ds, const std::vector<Repair>& repairs);

} // namespace geoclean
