#include "geoclean/reports.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace geoclean {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_score(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

void write_detection_report(std::ostream& out, const Dataset& ds,
                            const DetectionResult& detection) {
    ordered_json doc;
    doc["record_count"] = ds.records.size();
    doc["attribute"] = ds.attr_names.at(detection.target_attr);
    doc["flagged"] = detection.erroneous.size();
    doc["clean"] = detection.clean.size();
    json cells = json::array();
    for (const auto& cell : detection.erroneous)
        cells.push_back(ds.records[cell.record].id);
    doc["erroneous_record_ids"] = std::move(cells);
    out << doc.dump(2) << '\n';
}

void write_candidate_report(std::ostream& out, const Dataset& ds,
                            const DistanceMatrix& matrix,
                            const std::vector<CellCandidates>& cells) {
    ordered_json doc;
    doc["attribute"] = ds.attr_names.at(matrix.target_attr);
    doc["cell_count"] = cells.size();
    ordered_json arr = ordered_json::array();
    for (const auto& cell : cells) {
        ordered_json c;
        c["record_id"] = ds.records[cell.cell.record].id;
        if (cell.original >= 0)
            c["original"] = matrix.values.name(cell.original);
        else
            c["original"] = nullptr;
        ordered_json cands = ordered_json::array();
        for (const auto& cand : cell.candidates) {
            ordered_json x;
            x["value"] = matrix.values.name(cand.value);
            x["sum_weights"] = cand.sum_weights;
            x["supported"] = cand.supported;
            x["raw_prob"] = cand.raw_prob;
            if (cand.raw_exact) x["raw_prob_exact"] = cand.raw_exact->str();
            x["norm_prob"] = cand.norm_prob;
            x["renorm_prob"] = cand.renorm_prob;
            cands.push_back(std::move(x));
        }
        c["candidates"] = std::move(cands);
        ordered_json pruned = ordered_json::array();
        for (int32_t v : cell.pruned) pruned.push_back(matrix.values.name(v));
        c["pruned"] = std::move(pruned);
        if (cell.label)
            c["label"] = matrix.values.name(*cell.label);
        else
            c["label"] = nullptr;
        arr.push_back(std::move(c));
    }
    doc["cells"] = std::move(arr);
    out << doc.dump(2) << '\n';
}

void write_formulator_dump(std::ostream& out, const Dataset& ds,
                           const DistanceMatrix& matrix,
                           const std::vector<FormulatorOutput>& outputs) {
    const std::string attr = ds.attr_names.at(matrix.target_attr);
    for (const auto& enc : outputs) {
        out << "{\"record_id\":\"" << json_escape(ds.records[enc.cell.record].id)
            << "\",\"attribute\":\"" << json_escape(attr) << "\",\"encoding\":\""
            << to_string(enc.kind) << "\",\"direction\":\""
            << (enc.higher_better ? "max" : "min") << "\",\"scores\":[";
        for (size_t i = 0; i < enc.scores.size(); ++i) {
            if (i) out << ',';
            out << "{\"value\":\""
                << json_escape(matrix.values.name(enc.scores[i].value))
                << "\",\"score\":" << format_score(enc.scores[i].score) << '}';
        }
        out << "],\"label\":";
        if (enc.label)
            out << '"' << json_escape(matrix.values.name(*enc.label)) << '"';
        else
            out << "null";
        out << "}\n";
    }
}

void write_repair_log(std::ostream& out, const Dataset& ds,
                      const std::vector<Repair>& repairs) {
    out << "record_id,attribute,old_value,new_value,source,score\n";
    for (const auto& rep : repairs) {
        out << csv_escape(ds.records[rep.record].id) << ','
            << csv_escape(ds.attr_names.at(rep.attr)) << ',';
        if (rep.old_value) out << csv_escape(*rep.old_value);
        out << ',' << csv_escape(rep.new_value) << ','
            << (rep.source == Repair::Source::auto_label ? "auto_label"
                                                         : "formulator")
            << ',' << format_score(rep.score) << '\n';
    }
}

void write_matrix_csv(std::ostream& out, const Dataset& ds,
                      const DistanceMatrix& matrix) {
    out << "R1,R2,v1,v2,D,W\n";
    char buf[64];
    for (const auto& row : matrix.rows) {
        out << csv_escape(ds.records[row.r1].id) << ','
            << csv_escape(ds.records[row.r2].id) << ',';
        if (row.v1 >= 0) out << csv_escape(matrix.values.name(row.v1));
        out << ',';
        if (row.v2 >= 0) out << csv_escape(matrix.values.name(row.v2));
        std::snprintf(buf, sizeof buf, ",%.3f,%.6f\n", row.d, row.w);
        out << buf;
    }
}

void write_metrics_json(std::ostream& out, const Metrics& m) {
    ordered_json doc;
    doc["precision"] = m.precision;
    doc["recall"] = m.recall;
    doc["f1"] = m.f1;
    ordered_json counts;
    counts["errors"] = m.counts.errors;
    counts["repairs"] = m.counts.repairs;
    counts["correct"] = m.counts.correct;
    doc["counts"] = std::move(counts);
    ordered_json split;
    split["duplicate_location"] = {{"errors", m.counts.dup_errors},
                                   {"correct", m.counts.dup_correct}};
    split["new_location"] = {{"errors", m.counts.new_errors},
                             {"correct", m.counts.new_correct}};
    doc["split"] = std::move(split);
    out << doc.dump(2) << '\n';
}

void write_manifest(std::ostream& out, const RunManifest& m) {
    ordered_json doc;
    doc["command"] = m.command;
    doc["version"] = m.version;
    ordered_json inputs;
    for (const auto& [k, v] : m.inputs) inputs[k] = v;
    doc["inputs"] = std::move(inputs);
    doc["config_hash"] = m.config_hash;
    doc["seed"] = m.seed;
    doc["threads"] = m.threads;
    doc["formulator"] = m.formulator;
    ordered_json stages;
    for (const auto& [k, v] : m.stage_ms) stages[k] = v;
    doc["stage_ms"] = std::move(stages);
    ordered_json counts;
    for (const auto& [k, v] : m.counts) counts[k] = v;
    doc["counts"] = std::move(counts);
    ordered_json outputs;
    for (const auto& [k, v] : m.outputs) outputs[k] = v;
    doc["outputs"] = std::move(outputs);
    out << doc.dump(2) << '\n';
}

} // namespace geoclean
