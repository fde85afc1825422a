#include "geoclean/formulator.hpp"

namespace geoclean {

FormulatorOutput encode_cell(FormulatorKind kind, const CellCandidates& cell,
                             const DistanceMatrix& matrix) {
    FormulatorOutput out;
    out.cell = cell.cell;
    out.kind = kind;
    out.higher_better = kind != FormulatorKind::violation;
    out.label = cell.label;

    // real support per candidate: the unsupported original contributes 0 here,
    // its Phase-1 floor weight is a probability device only
    auto support = [&](const Candidate& c) {
        return c.supported ? c.sum_weights : 0.0;
    };

    double total_w = 0.0;
    auto [begin, end] = matrix.spans[cell.cell.record];
    for (size_t i = begin; i < end; ++i)
        if (matrix.rows[i].v2 >= 0) total_w += matrix.rows[i].w;

    out.scores.reserve(cell.candidates.size());
    switch (kind) {
        case FormulatorKind::violation:
            for (const auto& c : cell.candidates)
                out.scores.push_back({c.value, total_w - support(c)});
            break;
        case FormulatorKind::probability: {
            double denom = 0.0;
            for (const auto& c : cell.candidates) denom += support(c);
            for (const auto& c : cell.candidates)
                out.scores.push_back(
                    {c.value, denom > 0.0 ? support(c) / denom : 0.0});
            break;
        }
        case FormulatorKind::factor:
            for (const auto& c : cell.candidates)
                out.scores.push_back({c.value, 2.0 * support(c) - total_w});
            break;
    }
    return out;
}

std::vector<FormulatorOutput> encode_all(
    FormulatorKind kind, const std::vector<CellCandidates>& cells,
    const DistanceMatrix& matrix) {
    std::vector<FormulatorOutput> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) out.push_back(encode_cell(kind, cell, matrix));
    return out;
}

} // namespace geoclean
