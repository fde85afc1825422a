#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geoclean/dataset.hpp"
#include "geoclean/detector.hpp"
#include "geoclean/distance_matrix.hpp"
#include "geoclean/rational.hpp"

namespace geoclean {

struct Candidate {
    int32_t value = -1;
    double sum_weights = 0.0;     // neighborhood support; floor when unsupported
    bool supported = false;       // had at least one matrix row
    double raw_prob = 0.0;
    std::optional<Rational> raw_exact;
    double norm_prob = 0.0;       // normalized before pruning
    double renorm_prob = 0.0;     // renormalized among survivors
};

struct CellCandidates {
    CellRef cell;
    int32_t original = -1; // -1 = NULL
    // survivors after pruning, ordered by (-sum_weights, value string)
    std::vector<Candidate> candidates;
    std::vector<int32_t> pruned;   // values dropped in Phase 3
    std::optional<int32_t> label;  // auto-label
    double top_norm_prob = 0.0;    // pre-prune top, drives the MaxProb test
};

// per-other-attribute co-occurrence counts Count((target_v, attr_v), D)
class CooccurrenceTable {
public:
    CooccurrenceTable(const Dataset& ds, const DistanceMatrix& matrix);
    // 0 when never co-observed
    int64_t count(int attr, int32_t target_value, const std::string& attr_value)
        const;

    int target_attr() const { return target_attr_; }

private:
    // one map per attribute, keyed by attr value + 0x1f + target value id
    std::vector<std::unordered_map<std::string, int64_t>> maps_;
    int target_attr_ = -1;
};

// Phase 1: collect weighted support for one flagged record, add the original
// value at the floor weight when unsupported, sort by (-sum_weights, value)
std::vector<Candidate> collect_candidates(const Dataset& ds,
                                          const DistanceMatrix& matrix,
                                          uint32_t record,
                                          double default_min_weight);

// Phase 2: raw_prob = (sum_weights/|D|) * prod over record-id and other
// attributes of Count((v, R.A'), D)/Count(v, D); zero numerators become the
// minimality pseudo-count, zero denominators 1; exact rationals kept when
// representable
void score_candidates(std::vector<Candidate>& cands, const Dataset& ds,
                      const DistanceMatrix& matrix,
                      const FrequencyTable& freq, const CooccurrenceTable& cooc,
                      uint32_t record, double minimality_pseudocount);

// Phase 3 on a scored list: normalize, prune below min_prob (top exempt),
// renormalize, auto-label on a single survivor or top norm > max_prob
CellCandidates normalize_and_label(CellRef cell, int32_t original,
                                   std::vector<Candidate> cands,
                                   const ValueTable& values, double min_prob,
                                   double max_prob);

// all three phases for every flagged cell, in record order
std::vector<CellCandidates> generate_candidates(
    const Dataset& ds, const DistanceMatrix& matrix, const FrequencyTable& freq,
    const DetectionResult& detection, const CleaningConfig& config);

} // namespace geoclean
