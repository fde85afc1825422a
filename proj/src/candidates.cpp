#include "geoclean/candidates.hpp"

#include <algorithm>
#include <cmath>

namespace geoclean {

namespace {

std::string cooc_key(const std::string& attr_value, int32_t target_value) {
    std::string key = attr_value;
    key.push_back('\x1f');
    key += std::to_string(target_value);
    return key;
}

} // namespace

CooccurrenceTable::CooccurrenceTable(const Dataset& ds,
                                     const DistanceMatrix& matrix)
    : target_attr_(matrix.target_attr) {
    maps_.resize(ds.attr_names.size());
    for (size_t r = 0; r < ds.records.size(); ++r) {
        int32_t tv = matrix.record_value[r];
        if (tv < 0) continue;
        const auto& attrs = ds.records[r].attrs;
        for (size_t a = 0; a < attrs.size(); ++a) {
            if (static_cast<int>(a) == target_attr_ || !attrs[a]) continue;
            ++maps_[a][cooc_key(*attrs[a], tv)];
        }
    }
}

int64_t CooccurrenceTable::count(int attr, int32_t target_value,
                                 const std::string& attr_value) const {
    const auto& m = maps_[attr];
    auto it = m.find(cooc_key(attr_value, target_value));
    return it == m.end() ? 0 : it->second;
}

std::vector<Candidate> collect_candidates(const Dataset& ds,
                                          const DistanceMatrix& matrix,
                                          uint32_t record,
                                          double default_min_weight) {
    (void)ds;
    std::vector<double> sums(matrix.values.size(), 0.0);
    std::vector<uint8_t> seen(matrix.values.size(), 0);
    auto [begin, end] = matrix.spans[record];
    for (size_t i = begin; i < end; ++i) {
        const MatrixRow& row = matrix.rows[i];
        if (row.v2 < 0) continue; // NULL neighbors support nothing
        sums[row.v2] += row.w;
        seen[row.v2] = 1;
    }
    std::vector<Candidate> out;
    for (int32_t v = 0; v < static_cast<int32_t>(sums.size()); ++v)
        if (seen[v]) out.push_back({v, sums[v], true, 0, std::nullopt, 0, 0});
    int32_t original = matrix.record_value[record];
    if (original >= 0 && !seen[original])
        out.push_back({original, default_min_weight, false, 0, std::nullopt, 0, 0});
    std::sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.sum_weights != b.sum_weights) return a.sum_weights > b.sum_weights;
        return matrix.values.name(a.value) < matrix.values.name(b.value);
    });
    return out;
}

void score_candidates(std::vector<Candidate>& cands, const Dataset& ds,
                      const DistanceMatrix& matrix, const FrequencyTable& freq,
                      const CooccurrenceTable& cooc, uint32_t record,
                      double minimality_pseudocount) {
    int32_t original = matrix.record_value[record];
    const auto& attrs = ds.records[record].attrs;
    const int64_t total = std::max<int64_t>(freq.total_records, 1);

    for (auto& c : cands) {
        int64_t denom = freq.count_of(c.value);
        if (denom == 0) denom = 1;

        double prob = c.sum_weights / static_cast<double>(total);
        // rational bookkeeping: numerator scale 100 covers 2-decimal weights
        double s100 = c.sum_weights * 100.0;
        bool exact = std::abs(s100 - std::round(s100)) <= 1e-6 &&
                     std::abs(s100) < 9e15;
        int64_t num = exact ? static_cast<int64_t>(std::llround(s100)) : 0;
        std::optional<int64_t> den = exact
            ? checked_mul(100, total)
            : std::optional<int64_t>();

        // the record-id factor: its numerator counts records with this id and
        // value v, so 1 for the original value, else the pseudo-count
        {
            bool is_orig = original >= 0 && c.value == original;
            double fnum = is_orig ? 1.0 : minimality_pseudocount;
            prob *= fnum / static_cast<double>(denom);
            if (den) {
                // x10 clears the 0.1 pseudo-count
                auto n2 = checked_mul(num, is_orig ? 10 : 1);
                auto d2 = den ? checked_mul(*den, checked_mul(denom, 10).value_or(0))
                              : std::nullopt;
                if (n2 && d2 && *d2 != 0) { num = *n2; den = d2; }
                else den = std::nullopt;
            }
        }
        // same rule for every other non-target attribute with a present value
        for (size_t a = 0; a < attrs.size(); ++a) {
            if (static_cast<int>(a) == matrix.target_attr || !attrs[a]) continue;
            int64_t c_num = cooc.count(static_cast<int>(a), c.value, *attrs[a]);
            double fnum =
                c_num > 0 ? static_cast<double>(c_num) : minimality_pseudocount;
            prob *= fnum / static_cast<double>(denom);
            if (den) {
                auto n2 = checked_mul(num, c_num > 0 ? c_num * 10 : 1);
                auto dd = checked_mul(denom, 10);
                auto d2 = dd ? checked_mul(*den, *dd) : std::nullopt;
                if (n2 && d2 && *d2 != 0) { num = *n2; den = d2; }
                else den = std::nullopt;
            }
        }
        c.raw_prob = prob;
        if (den) {
            Rational r{num, *den};
            r.reduce();
            c.raw_exact = r;
        } else {
            c.raw_exact.reset();
        }
    }
}

CellCandidates normalize_and_label(CellRef cell, int32_t original,
                                   std::vector<Candidate> cands,
                                   const ValueTable& values, double min_prob,
                                   double max_prob) {
    (void)values;
    CellCandidates out;
    out.cell = cell;
    out.original = original;
    if (cands.empty()) return out;

    double total = 0.0;
    for (const auto& c : cands) total += c.raw_prob;
    size_t top = 0;
    for (size_t i = 0; i < cands.size(); ++i) {
        cands[i].norm_prob = total > 0 ? cands[i].raw_prob / total : 0.0;
        if (cands[i].norm_prob > cands[top].norm_prob) top = i;
    }
    out.top_norm_prob = cands[top].norm_prob;

    std::vector<Candidate> kept;
    for (size_t i = 0; i < cands.size(); ++i) {
        if (i == top || cands[i].norm_prob >= min_prob)
            kept.push_back(cands[i]);
        else
            out.pruned.push_back(cands[i].value);
    }
    double kept_total = 0.0;
    for (const auto& c : kept) kept_total += c.norm_prob;
    for (auto& c : kept)
        c.renorm_prob = kept_total > 0 ? c.norm_prob / kept_total : 0.0;

    if (kept.size() == 1)
        out.label = kept[0].value;
    else if (out.top_norm_prob > max_prob)
        out.label = cands[top].value;
    out.candidates = std::move(kept);
    return out;
}

std::vector<CellCandidates> generate_candidates(
    const Dataset& ds, const DistanceMatrix& matrix, const FrequencyTable& freq,
    const DetectionResult& detection, const CleaningConfig& config) {
    CooccurrenceTable cooc(ds, matrix);
    std::vector<CellCandidates> out;
    out.reserve(detection.erroneous.size());
    for (const CellRef& cell : detection.erroneous) {
        auto cands = collect_candidates(ds, matrix, cell.record,
                                        config.default_min_weight);
        score_candidates(cands, ds, matrix, freq, cooc, cell.record,
                         config.minimality_pseudocount);
        out.push_back(normalize_and_label(cell, matrix.record_value[cell.record],
                                          std::move(cands), matrix.values,
                                          config.min_prob, config.max_prob));
    }
    return out;
}

} // namespace geoclean
