#include "geoclean/corrector.hpp"

#include <stdexcept>

namespace geoclean {

std::vector<Repair> resolve(const std::vector<CellCandidates>& cells,
                            const std::vector<FormulatorOutput>& outputs,
                            const DistanceMatrix& matrix) {
    if (cells.size() != outputs.size())
        throw std::runtime_error("formulator outputs do not match cells");
    std::vector<Repair> repairs;
    repairs.reserve(cells.size());

    for (size_t i = 0; i < cells.size(); ++i) {
        const CellCandidates& cell = cells[i];
        const FormulatorOutput& enc = outputs[i];
        if (cell.candidates.empty()) continue; // reported, never repaired

        Repair rep;
        rep.record = cell.cell.record;
        rep.attr = cell.cell.attr;
        rep.old_value = cell.original >= 0
                            ? Value(matrix.values.name(cell.original))
                            : std::nullopt;

        if (cell.label) {
            rep.source = Repair::Source::auto_label;
            rep.new_value = matrix.values.name(*cell.label);
            rep.score = cell.top_norm_prob;
            for (const auto& c : cell.candidates)
                if (c.value == *cell.label) { rep.score = c.norm_prob; break; }
        } else {
            rep.source = Repair::Source::formulator;
            size_t best = 0;
            for (size_t j = 1; j < enc.scores.size(); ++j) {
                const auto& cur = enc.scores[j];
                const auto& b = enc.scores[best];
                bool better;
                if (cur.score != b.score) {
                    better = enc.higher_better ? cur.score > b.score
                                               : cur.score < b.score;
                } else {
                    bool cur_orig = cur.value == cell.original;
                    bool best_orig = b.value == cell.original;
                    if (cur_orig != best_orig)
                        better = cur_orig;
                    else
                        better = matrix.values.name(cur.value) <
                                 matrix.values.name(b.value);
                }
                if (better) best = j;
            }
            rep.new_value = matrix.values.name(enc.scores[best].value);
            rep.score = enc.scores[best].score;
        }
        repairs.push_back(std::move(rep));
    }
    return repairs;
}

Dataset apply_repairs(const Dataset& ds, const std::vector<Repair>& repairs) {
    Dataset out = ds;
    for (const auto& rep : repairs) {
        if (rep.record >= out.records.size())
            throw std::runtime_error("repair for unknown record index " +
                                     std::to_string(rep.record));
        if (rep.attr < 0 ||
            rep.attr >= static_cast<int>(out.attr_names.size()))
            throw std::runtime_error("repair for unknown attribute index " +
                                     std::to_string(rep.attr));
        out.records[rep.record].attrs[rep.attr] = rep.new_value;
    }
    return out;
}

} // namespace geoclean
