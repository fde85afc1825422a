#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "geoclean/dataset.hpp"
#include "geoclean/rng.hpp"

namespace geoclean {

// Voronoi labeling from random seed points: every point in the box maps to
// the label of its nearest seed (haversine; ties to the smaller seed index)
struct RegionMap {
    std::vector<GeoPoint> seeds;
    std::vector<std::string> labels; // R1..Rk zero-padded
    int assign(const GeoPoint& p) const;
};

RegionMap make_region_map(const BBox& bbox, int n_regions, Rng& rng);

struct SyntheticOptions {
    int n_records = 20000;
    int n_regions = 50;
    int n_errors = 2000;
    double dup_ratio = 0.0;
    uint64_t seed = 0;
    BBox bbox{41.64, 42.02, -87.94, -87.52};
    double null_prob = 0.1; // chance a corrupted cell becomes NULL
    std::string target_name = "region";
};

struct GroundTruthRow {
    std::string id;
    std::string true_value;
    bool is_error = false;
    bool is_duplicate_location = false;
};

struct SyntheticData {
    Dataset data;
    std::vector<GroundTruthRow> truth;
    RegionMap regions;
};

SyntheticData generate_synthetic(const SyntheticOptions& opt);

struct MetricCounts {
    int64_t errors = 0;
    int64_t repairs = 0;
    int64_t correct = 0;
    int64_t dup_errors = 0, dup_correct = 0; // split by duplicate location
    int64_t new_errors = 0, new_correct = 0;
};

struct Metrics {
    double precision = 0.0; // correct / repairs, 0 when no repairs
    double recall = 0.0;    // correct / errors
    double f1 = 0.0;
    MetricCounts counts;
};

// a repair is any NULL-aware change between original and repaired
Metrics evaluate(const Dataset& original, const Dataset& repaired,
                 const std::vector<GroundTruthRow>& truth, int target_attr);

// repairs each record to the majority value among records at exactly the same
// coordinates (bit-equal lat/lon); no qualifying majority leaves it unchanged
Dataset baseline_exact_cooccurrence(const Dataset& ds, int target_attr);

void write_truth_csv(std::ostream& out, const std::vector<GroundTruthRow>& rows);
std::vector<GroundTruthRow> read_truth_csv(const CsvTable& table);

} // namespace geoclean
