#include "geoclean/constraint.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace geoclean {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_double(const std::string& v, size_t line, const std::string& key) {
    double out = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(line, "value of '" + key + "' is not a number: " + v);
    return out;
}

int64_t parse_int(const std::string& v, size_t line, const std::string& key) {
    int64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError(line, "value of '" + key + "' is not an integer: " + v);
    return out;
}

} // namespace

const char* to_string(FormulatorKind kind) {
    switch (kind) {
        case FormulatorKind::violation: return "violation";
        case FormulatorKind::probability: return "probability";
        case FormulatorKind::factor: return "factor";
    }
    return "?";
}

const char* to_string(PredicateKind kind) {
    return kind == PredicateKind::range ? "range" : "knn";
}

const char* to_string(CoordMode mode) {
    return mode == CoordMode::geographic ? "haversine" : "planar";
}

FormulatorKind formulator_from_string(const std::string& s) {
    if (s == "violation") return FormulatorKind::violation;
    if (s == "probability") return FormulatorKind::probability;
    if (s == "factor") return FormulatorKind::factor;
    throw ConfigError(0, "unknown formulator '" + s +
                             "' (expected violation, probability or factor)");
}

CleaningConfig parse_config(const std::string& text) {
    CleaningConfig config;
    enum Section { none, constraint, cleaning };
    Section section = none;
    bool saw_cleaning = false;
    SpatialConstraint current;
    bool have_type = false, have_d = false, have_k = false;
    size_t constraint_line = 0;

    auto finish_constraint = [&] {
        if (section != constraint) return;
        if (!have_type)
            throw ConfigError(constraint_line, "[constraint] requires 'type'");
        if (current.kind == PredicateKind::range && !have_d)
            throw ConfigError(constraint_line,
                              "range constraint requires 'd_meters'");
        if (current.kind == PredicateKind::knn && !have_k)
            throw ConfigError(constraint_line, "knn constraint requires 'k'");
        if (current.target.empty())
            throw ConfigError(constraint_line, "[constraint] requires 'target'");
        config.constraints.push_back(current);
    };

    std::istringstream in(text);
    std::string raw;
    size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError(line, "unterminated section header: " + s);
            std::string name = lower(trim(s.substr(1, s.size() - 2)));
            finish_constraint();
            if (name == "constraint") {
                section = constraint;
                current = SpatialConstraint{};
                have_type = have_d = have_k = false;
                constraint_line = line;
            } else if (name == "cleaning") {
                if (saw_cleaning)
                    throw ConfigError(line, "duplicate [cleaning] section");
                saw_cleaning = true;
                section = cleaning;
            } else {
                throw ConfigError(line, "unknown section [" + name + "]");
            }
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "expected key = value, got: " + s);
        std::string key = lower(trim(s.substr(0, eq)));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError(line, "empty key");
        if (value.empty()) throw ConfigError(line, "empty value for '" + key + "'");

        if (section == constraint) {
            if (key == "type") {
                std::string v = lower(value);
                if (v == "range") current.kind = PredicateKind::range;
                else if (v == "knn") current.kind = PredicateKind::knn;
                else throw ConfigError(line, "unknown constraint type: " + value);
                have_type = true;
            } else if (key == "d_meters") {
                current.d_meters = parse_double(value, line, key);
                have_d = true;
            } else if (key == "k") {
                int64_t k = parse_int(value, line, key);
                if (k < 1 || k > INT32_MAX)
                    throw ConfigError(line, "k must be a positive integer");
                current.k = static_cast<int>(k);
                have_k = true;
            } else if (key == "distance") {
                std::string v = lower(value);
                if (v == "haversine") current.distance = CoordMode::geographic;
                else if (v == "planar") current.distance = CoordMode::planar;
                else throw ConfigError(line, "unknown distance function: " + value);
            } else if (key == "n") {
                int64_t n = parse_int(value, line, key);
                if (n < 0) throw ConfigError(line, "n must be >= 0");
                current.n = static_cast<int>(n);
            } else if (key == "lat") {
                current.lat_col = value;
            } else if (key == "lon") {
                current.lon_col = value;
            } else if (key == "target") {
                current.target = value;
            } else {
                throw ConfigError(line, "unknown key '" + key +
                                            "' in [constraint]");
            }
        } else if (section == cleaning) {
            if (key == "min_prob") {
                config.min_prob = parse_double(value, line, key);
            } else if (key == "max_prob") {
                config.max_prob = parse_double(value, line, key);
            } else if (key == "formulator") {
                std::string v = lower(value);
                if (v != "violation" && v != "probability" && v != "factor")
                    throw ConfigError(line, "unknown formulator '" + value + "'");
                config.formulator = formulator_from_string(v);
            } else if (key == "seed") {
                uint64_t out = 0;
                auto [p, ec] =
                    std::from_chars(value.data(), value.data() + value.size(), out);
                if (ec != std::errc() || p != value.data() + value.size())
                    throw ConfigError(line, "seed must be a non-negative integer");
                config.seed = out;
            } else {
                throw ConfigError(line, "unknown key '" + key + "' in [cleaning]");
            }
        } else {
            throw ConfigError(line, "key outside any section: " + key);
        }
    }
    finish_constraint();

    if (config.constraints.empty())
        throw ConfigError(0, "at least one [constraint] section is required");
    if (config.min_prob < 0.0 || config.max_prob > 1.0 ||
        config.min_prob > config.max_prob)
        throw ConfigError(0, "need 0 <= min_prob <= max_prob <= 1");
    for (const auto& c : config.constraints) {
        if (c.kind == PredicateKind::range &&
            !(c.d_meters > 0.0 && std::isfinite(c.d_meters)))
            throw ConfigError(0, "d_meters must be a positive finite number");
    }
    return config;
}

CleaningConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render_config(const CleaningConfig& config) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& c : config.constraints) {
        out << "[constraint]\n";
        out << "type = " << to_string(c.kind) << "\n";
        if (c.kind == PredicateKind::range)
            out << "d_meters = " << c.d_meters << "\n";
        else
            out << "k = " << c.k << "\n";
        out << "distance = " << to_string(c.distance) << "\n";
        out << "n = " << c.n << "\n";
        out << "lat = " << c.lat_col << "\n";
        out << "lon = " << c.lon_col << "\n";
        out << "target = " << c.target << "\n";
    }
    out << "[cleaning]\n";
    out << "min_prob = " << config.min_prob << "\n";
    out << "max_prob = " << config.max_prob << "\n";
    out << "formulator = " << to_string(config.formulator) << "\n";
    out << "seed = " << config.seed << "\n";
    return out.str();
}

Schema derive_schema(const CleaningConfig& config,
                     const std::vector<std::string>& csv_header) {
    Schema schema;
    schema.reserve(csv_header.size());
    std::set<std::string> lats, lons, targets;
    for (const auto& c : config.constraints) {
        lats.insert(c.lat_col);
        lons.insert(c.lon_col);
        targets.insert(c.target);
    }
    bool have_id = false;
    for (const auto& name : csv_header) {
        SchemaColumn col{name, ColumnRole::other};
        int roles = 0;
        if (lower(name) == "id") { col.role = ColumnRole::record_id; ++roles; }
        if (lats.count(name)) { col.role = ColumnRole::latitude; ++roles; }
        if (lons.count(name)) { col.role = ColumnRole::longitude; ++roles; }
        if (targets.count(name)) { col.role = ColumnRole::target; ++roles; }
        if (roles > 1)
            throw ConfigError(0, "column '" + name +
                                     "' matches more than one role");
        if (col.role == ColumnRole::record_id) {
            if (have_id)
                throw ConfigError(0, "more than one id column in header");
            have_id = true;
        }
        schema.push_back(col);
    }
    if (!have_id) throw ConfigError(0, "no 'id' column in header");
    auto require = [&](const std::string& name, const char* what) {
        for (const auto& col : schema)
            if (col.name == name) return;
        throw ConfigError(0, std::string(what) + " column '" + name +
                                 "' not found in header");
    };
    for (const auto& c : config.constraints) {
        require(c.lat_col, "latitude");
        require(c.lon_col, "longitude");
        require(c.target, "target");
    }
    return schema;
}

static void validate_common(const CleaningConfig& config, const Schema& schema,
                            std::vector<Diagnostic>& out) {
    auto error = [&](const std::string& m) {
        out.push_back({Diagnostic::error, m});
    };
    if (config.constraints.empty()) error("no constraints declared");
    if (!(config.min_prob >= 0.0 && config.max_prob <= 1.0 &&
          config.min_prob <= config.max_prob))
        error("need 0 <= min_prob <= max_prob <= 1");
    auto has_col = [&](const std::string& name, ColumnRole role) {
        for (const auto& col : schema)
            if (col.name == name && col.role == role) return true;
        return false;
    };
    for (size_t i = 0; i < config.constraints.size(); ++i) {
        const auto& c = config.constraints[i];
        std::string where = "constraint " + std::to_string(i + 1) + ": ";
        if (c.kind == PredicateKind::range) {
            if (!(c.d_meters > 0.0 && std::isfinite(c.d_meters)))
                error(where + "d_meters must be positive and finite");
        } else if (c.k < 1) {
            error(where + "k must be >= 1");
        }
        if (c.n < 0) error(where + "n must be >= 0");
        if (c.target.empty()) error(where + "empty target");
        if (!schema.empty()) {
            if (!has_col(c.lat_col, ColumnRole::latitude))
                error(where + "latitude column '" + c.lat_col + "' missing");
            if (!has_col(c.lon_col, ColumnRole::longitude))
                error(where + "longitude column '" + c.lon_col + "' missing");
            if (!has_col(c.target, ColumnRole::target))
                error(where + "target column '" + c.target + "' missing");
        }
    }
}

std::vector<Diagnostic> validate_against_schema(const CleaningConfig& config,
                                                const Schema& schema) {
    std::vector<Diagnostic> out;
    validate_common(config, schema, out);
    return out;
}

std::vector<Diagnostic> validate_against_schema(const CleaningConfig& config,
                                                const Schema& schema,
                                                const DatasetStats& stats) {
    std::vector<Diagnostic> out;
    validate_common(config, schema, out);
    for (size_t i = 0; i < config.constraints.size(); ++i) {
        const auto& c = config.constraints[i];
        if (c.kind != PredicateKind::knn) continue;
        auto it = stats.distinct_target_values.find(c.target);
        if (it == stats.distinct_target_values.end() || it->second == 0) continue;
        double ceiling = static_cast<double>(stats.record_count) /
                         static_cast<double>(it->second);
        if (static_cast<double>(c.k) > ceiling) {
            std::ostringstream msg;
            msg.precision(3);
            msg << "constraint " << (i + 1) << ": k = " << c.k
                << " exceeds |D|/|A| = " << std::fixed << ceiling << " for '"
                << c.target
                << "'; neighborhoods will mix values and most cells will be "
                   "flagged";
            out.push_back({Diagnostic::warning, msg.str()});
        }
    }
    return out;
}

} // namespace geoclean
