#include "geoclean/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "geoclean/spatial_index.hpp"

namespace geoclean {

int RegionMap::assign(const GeoPoint& p) const {
    int best = -1;
    double best_d = 0.0;
    for (size_t i = 0; i < seeds.size(); ++i) {
        double d = haversine_m(p, seeds[i]);
        if (best < 0 || d < best_d) {
            best = static_cast<int>(i);
            best_d = d;
        }
    }
    return best;
}

RegionMap make_region_map(const BBox& bbox, int n_regions, Rng& rng) {
    RegionMap map;
    map.seeds.reserve(n_regions);
    size_t width = std::to_string(n_regions).size();
    for (int i = 0; i < n_regions; ++i) {
        GeoPoint s;
        s.lat = rng.uniform(bbox.lat_min, bbox.lat_max);
        s.lon = rng.uniform(bbox.lon_min, bbox.lon_max);
        map.seeds.push_back(s);
        std::string num = std::to_string(i + 1);
        map.labels.push_back("R" + std::string(width - num.size(), '0') + num);
    }
    return map;
}

SyntheticData generate_synthetic(const SyntheticOptions& opt) {
    if (opt.n_records < 1 || opt.n_regions < 2 || opt.n_errors < 0 ||
        opt.n_errors > opt.n_records || opt.dup_ratio < 0.0 ||
        opt.dup_ratio > 1.0)
        throw std::runtime_error("bad synthetic options");

    Rng rng(opt.seed);
    SyntheticData out;
    out.regions = make_region_map(opt.bbox, opt.n_regions, rng);

    int n = opt.n_records;
    out.data.mode = CoordMode::geographic;
    out.data.attr_names = {opt.target_name};
    out.data.records.resize(n);
    std::vector<int> truth_region(n);

    // nearest-seed assignment through the index; ties resolve to the smaller
    // seed index, same as RegionMap::assign
    GridIndex seed_index(out.regions.seeds, CoordMode::geographic);
    for (int i = 0; i < n; ++i) {
        Record& rec = out.data.records[i];
        rec.id = std::to_string(i + 1);
        rec.pos.lat = rng.uniform(opt.bbox.lat_min, opt.bbox.lat_max);
        rec.pos.lon = rng.uniform(opt.bbox.lon_min, opt.bbox.lon_max);
        rec.attrs.resize(1);
        auto nearest = seed_index.knn_query(rec.pos, 1);
        truth_region[i] = static_cast<int>(nearest.at(0).index);
    }

    // error positions: partial Fisher-Yates over the record indices
    std::vector<uint32_t> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = 0; i < opt.n_errors; ++i) {
        size_t j = i + rng.below(n - i);
        std::swap(order[i], order[j]);
    }
    std::vector<uint8_t> is_error(n, 0), is_dup(n, 0);
    for (int i = 0; i < opt.n_errors; ++i) is_error[order[i]] = 1;

    // the first round(dup*errors) chosen errors move onto clean records
    int n_dup = static_cast<int>(std::llround(opt.dup_ratio * opt.n_errors));
    std::vector<uint32_t> clean_pool;
    clean_pool.reserve(n - opt.n_errors);
    for (int i = 0; i < n; ++i)
        if (!is_error[i]) clean_pool.push_back(i);
    if (n_dup > 0 && clean_pool.empty())
        throw std::runtime_error("duplication needs at least one clean record");
    for (int e = 0; e < n_dup; ++e) {
        uint32_t err = order[e];
        uint32_t host = clean_pool[rng.below(clean_pool.size())];
        out.data.records[err].pos = out.data.records[host].pos;
        truth_region[err] = truth_region[host];
        is_dup[err] = 1;
    }

    // corrupt observed values: NULL with null_prob, else a uniformly wrong label
    for (int i = 0; i < n; ++i)
        out.data.records[i].attrs[0] = out.regions.labels[truth_region[i]];
    for (int e = 0; e < opt.n_errors; ++e) {
        uint32_t err = order[e];
        if (rng.uniform01() < opt.null_prob) {
            out.data.records[err].attrs[0] = std::nullopt;
        } else {
            uint64_t w = rng.below(opt.n_regions - 1);
            if (w >= static_cast<uint64_t>(truth_region[err])) ++w;
            out.data.records[err].attrs[0] = out.regions.labels[w];
        }
    }

    out.truth.reserve(n);
    for (int i = 0; i < n; ++i)
        out.truth.push_back({out.data.records[i].id,
                             out.regions.labels[truth_region[i]],
                             is_error[i] != 0, is_dup[i] != 0});
    return out;
}

namespace {

bool value_changed(const Value& a, const Value& b) {
    if (a.has_value() != b.has_value()) return true;
    return a.has_value() && *a != *b;
}

} // namespace

Metrics evaluate(const Dataset& original, const Dataset& repaired,
                 const std::vector<GroundTruthRow>& truth, int target_attr) {
    if (original.records.size() != repaired.records.size())
        throw std::runtime_error("original/repaired record counts differ");
    std::unordered_map<std::string, const GroundTruthRow*> by_id;
    by_id.reserve(truth.size() * 2);
    for (const auto& row : truth) by_id[row.id] = &row;

    Metrics m;
    for (size_t i = 0; i < original.records.size(); ++i) {
        const Record& before = original.records[i];
        const Record& after = repaired.records[i];
        if (before.id != after.id)
            throw std::runtime_error("record order differs at " + before.id);
        auto it = by_id.find(before.id);
        if (it == by_id.end())
            throw std::runtime_error("no ground truth for id " + before.id);
        const GroundTruthRow& gt = *it->second;

        if (gt.is_error) {
            ++m.counts.errors;
            (gt.is_duplicate_location ? m.counts.dup_errors
                                      : m.counts.new_errors)++;
        }
        const Value& v0 = before.attrs[target_attr];
        const Value& v1 = after.attrs[target_attr];
        if (!value_changed(v0, v1)) continue;
        ++m.counts.repairs;
        if (v1 && *v1 == gt.true_value) {
            ++m.counts.correct;
            if (gt.is_error)
                (gt.is_duplicate_location ? m.counts.dup_correct
                                          : m.counts.new_correct)++;
        }
    }
    m.precision = m.counts.repairs
                      ? static_cast<double>(m.counts.correct) / m.counts.repairs
                      : 0.0;
    m.recall = m.counts.errors
                   ? static_cast<double>(m.counts.correct) / m.counts.errors
                   : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

Dataset baseline_exact_cooccurrence(const Dataset& ds, int target_attr) {
    Dataset out = ds;
    std::map<std::pair<double, double>, std::vector<uint32_t>> groups;
    for (uint32_t i = 0; i < ds.records.size(); ++i)
        groups[{ds.records[i].pos.lat, ds.records[i].pos.lon}].push_back(i);

    for (const auto& [pos, members] : groups) {
        if (members.size() < 2) continue;
        for (uint32_t i : members) {
            std::map<std::string, int> votes;
            for (uint32_t j : members) {
                if (j == i) continue;
                const Value& v = ds.records[j].attrs[target_attr];
                if (v) ++votes[*v];
            }
            if (votes.empty()) continue;
            int best = 0;
            const std::string* winner = nullptr;
            bool unique = false;
            for (const auto& [value, count] : votes) {
                if (count > best) {
                    best = count;
                    winner = &value;
                    unique = true;
                } else if (count == best) {
                    unique = false;
                }
            }
            if (unique) out.records[i].attrs[target_attr] = *winner;
        }
    }
    return out;
}

void write_truth_csv(std::ostream& out,
                     const std::vector<GroundTruthRow>& rows) {
    out << "id,true_value,is_error,is_duplicate_location\n";
    for (const auto& r : rows)
        out << csv_escape(r.id) << ',' << csv_escape(r.true_value) << ','
            << (r.is_error ? '1' : '0') << ','
            << (r.is_duplicate_location ? '1' : '0') << '\n';
}

std::vector<GroundTruthRow> read_truth_csv(const CsvTable& table) {
    const std::vector<std::string> want = {"id", "true_value", "is_error",
                                           "is_duplicate_location"};
    if (table.header != want)
        throw CsvError(1, "truth header must be id,true_value,is_error,"
                          "is_duplicate_location");
    std::vector<GroundTruthRow> rows;
    rows.reserve(table.rows.size());
    auto flag = [](const CsvField& f, size_t line) {
        if (!f || (*f != "0" && *f != "1"))
            throw CsvError(line, "flag fields must be 0 or 1");
        return *f == "1";
    };
    for (size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        size_t line = i + 2;
        if (!r[0] || !r[1]) throw CsvError(line, "NULL id or true_value");
        rows.push_back({*r[0], *r[1], flag(r[2], line), flag(r[3], line)});
    }
    return rows;
}

} // namespace geoclean
