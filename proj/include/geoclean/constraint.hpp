#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoclean/geo.hpp"

namespace geoclean {

enum class PredicateKind { range, knn };
enum class FormulatorKind { violation, probability, factor };

struct ConfigError : std::runtime_error {
    size_t line; // 0 when not tied to a source line
    ConfigError(size_t line_, const std::string& msg)
        : std::runtime_error(line_ ? "config line " + std::to_string(line_) +
                                         ": " + msg
                                   : "config: " + msg),
          line(line_) {}
};

// one spatial dependency (lat, lon) -> target over a neighborhood predicate
struct SpatialConstraint {
    PredicateKind kind = PredicateKind::range;
    double d_meters = 0.0; // range only
    int k = 0;             // knn only
    CoordMode distance = CoordMode::geographic;
    int n = 2; // distance-weighting exponent, 0 disables weighting
    std::string lat_col = "lat";
    std::string lon_col = "lon";
    std::string target;

    bool operator==(const SpatialConstraint&) const = default;
};

struct CleaningConfig {
    std::vector<SpatialConstraint> constraints;
    double min_prob = 0.05;
    double max_prob = 0.95;
    FormulatorKind formulator = FormulatorKind::factor;
    uint64_t seed = 0;
    // fixed engine constants, not part of the config grammar
    double default_min_weight = 0.01;     // unsupported original's weight floor
    double minimality_pseudocount = 0.1;  // numerator when a factor count is 0

    bool operator==(const CleaningConfig&) const = default;
};

// flat INI-style text: [constraint] sections then at most one [cleaning]
CleaningConfig parse_config(const std::string& text);
CleaningConfig parse_config_file(const std::string& path);
std::string render_config(const CleaningConfig& config); // parse(render(c)) == c

enum class ColumnRole { record_id, latitude, longitude, target, other };

struct SchemaColumn {
    std::string name;
    ColumnRole role = ColumnRole::other;
    bool operator==(const SchemaColumn&) const = default;
};
using Schema = std::vector<SchemaColumn>;

// assigns a role to every CSV header column. the column named "id"
// (case-insensitive) is the record id; lat/lon/target come from the config;
// everything else is role `other`. throws ConfigError when a required column
// is missing or one column would need two roles.
Schema derive_schema(const CleaningConfig& config,
                     const std::vector<std::string>& csv_header);

struct Diagnostic {
    enum Level { warning, error };
    Level level = error;
    std::string message;
};

struct DatasetStats {
    size_t record_count = 0;
    // distinct non-NULL values observed per target column
    std::map<std::string, size_t> distinct_target_values;
};

std::vector<Diagnostic> validate_against_schema(const CleaningConfig& config,
                                                const Schema& schema);
// same checks plus dataset-dependent ones (the k <= |D|/|A| ceiling warning)
std::vector<Diagnostic> validate_against_schema(const CleaningConfig& config,
                                                const Schema& schema,
                                                const DatasetStats& stats);

const char* to_string(FormulatorKind kind);
const char* to_string(PredicateKind kind);
const char* to_string(CoordMode mode);
FormulatorKind formulator_from_string(const std::string& s); // throws ConfigError

} // namespace geoclean
