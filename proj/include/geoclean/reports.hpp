#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "geoclean/candidates.hpp"
#include "geoclean/corrector.hpp"
#include "geoclean/detector.hpp"
#include "geoclean/evaluation.hpp"
#include "geoclean/formulator.hpp"

namespace geoclean {

// detection report: counts plus the flagged cells (record order)
void write_detection_report(std::ostream& out, const Dataset& ds,
                            const DetectionResult& detection);

// candidate report: per cell the surviving candidates with sums, raw
// probabilities (exact fraction when representable), normalized and
// renormalized probabilities, pruned values and the auto-label
void write_candidate_report(std::ostream& out, const Dataset& ds,
                            const DistanceMatrix& matrix,
                            const std::vector<CellCandidates>& cells);

// JSON Lines, one object per cell; scores carry 9 significant digits
void write_formulator_dump(std::ostream& out, const Dataset& ds,
                           const DistanceMatrix& matrix,
                           const std::vector<FormulatorOutput>& outputs);

// CSV: record_id,attribute,old_value,new_value,source,score
void write_repair_log(std::ostream& out, const Dataset& ds,
                      const std::vector<Repair>& repairs);

// CSV: R1,R2,v1,v2,D,W with D at 3 decimals and W at 6, NULL as empty field
void write_matrix_csv(std::ostream& out, const Dataset& ds,
                      const DistanceMatrix& matrix);

void write_metrics_json(std::ostream& out, const Metrics& m);

struct RunManifest {
    std::string command;
    std::string version;
    std::map<std::string, std::string> inputs;  // name -> path
    std::string config_hash;                    // fnv1a-64 of config bytes
    uint64_t seed = 0;
    int threads = 1;
    std::string formulator;
    std::map<std::string, double> stage_ms;     // per-stage wall clock
    std::map<std::string, int64_t> counts;
    std::map<std::string, std::string> outputs; // name -> path
};

void write_manifest(std::ostream& out, const RunManifest& m);

uint64_t fnv1a64(const std::string& bytes);
std::string hex64(uint64_t v);

// 9 significant digits, shortest form ("%.9g")
std::string format_score(double v);
std::string json_escape(const std::string& s);

} // namespace geoclean
