#include "geoclean/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <unordered_set>

namespace geoclean {

int Dataset::attr_index(const std::string& name) const {
    for (size_t i = 0; i < attr_names.size(); ++i)
        if (attr_names[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

double parse_coord(const CsvField& f, size_t row, const char* what) {
    if (!f) throw CsvError(row, std::string("NULL ") + what);
    double out = 0.0;
    auto [p, ec] = std::from_chars(f->data(), f->data() + f->size(), out);
    if (ec != std::errc() || p != f->data() + f->size() || !std::isfinite(out))
        throw CsvError(row, std::string("bad ") + what + ": " + *f);
    return out;
}

} // namespace

Dataset load_dataset(const CsvTable& table, const Schema& schema,
                     CoordMode mode) {
    if (table.header.size() != schema.size())
        throw CsvError(1, "header does not match schema");
    int id_col = -1, lat_col = -1, lon_col = -1;
    Dataset ds;
    ds.mode = mode;
    std::vector<int> attr_cols;
    for (size_t i = 0; i < schema.size(); ++i) {
        switch (schema[i].role) {
            case ColumnRole::record_id: id_col = static_cast<int>(i); break;
            case ColumnRole::latitude: lat_col = static_cast<int>(i); break;
            case ColumnRole::longitude: lon_col = static_cast<int>(i); break;
            default:
                attr_cols.push_back(static_cast<int>(i));
                ds.attr_names.push_back(schema[i].name);
        }
    }
    if (id_col < 0 || lat_col < 0 || lon_col < 0)
        throw ConfigError(0, "schema lacks id/lat/lon roles");

    ds.records.reserve(table.rows.size());
    std::unordered_set<std::string> seen_ids;
    seen_ids.reserve(table.rows.size() * 2);
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        size_t line = r + 2; // 1-based, after header
        Record rec;
        if (!row[id_col]) throw CsvError(line, "NULL id");
        rec.id = *row[id_col];
        if (!seen_ids.insert(rec.id).second)
            throw CsvError(line, "duplicate id: " + rec.id);
        rec.pos.lat = parse_coord(row[lat_col], line, "latitude");
        rec.pos.lon = parse_coord(row[lon_col], line, "longitude");
        if (mode == CoordMode::geographic) {
            if (rec.pos.lat < -90.0 || rec.pos.lat > 90.0)
                throw CsvError(line, "latitude out of [-90, 90]");
            if (rec.pos.lon < -180.0 || rec.pos.lon > 180.0)
                throw CsvError(line, "longitude out of [-180, 180]");
        }
        rec.attrs.reserve(attr_cols.size());
        for (int c : attr_cols) rec.attrs.push_back(row[c]);
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

Dataset load_dataset_file(const std::string& path, const Schema& schema,
                          CoordMode mode) {
    return load_dataset(read_csv_file(path), schema, mode);
}

void write_dataset(std::ostream& out, const Dataset& ds,
                   const std::string& id_col, const std::string& lat_col,
                   const std::string& lon_col) {
    out << csv_escape(id_col) << ',' << csv_escape(lat_col) << ','
        << csv_escape(lon_col);
    for (const auto& name : ds.attr_names) out << ',' << csv_escape(name);
    out << '\n';
    char buf[64];
    auto coord = [&](double v) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
        (void)ec;
        out.write(buf, p - buf);
    };
    for (const auto& rec : ds.records) {
        out << csv_escape(rec.id) << ',';
        coord(rec.pos.lat);
        out << ',';
        coord(rec.pos.lon);
        for (const auto& v : rec.attrs) {
            out << ',';
            if (v) out << csv_escape(*v);
        }
        out << '\n';
    }
}

DatasetStats dataset_stats(const Dataset& ds) {
    DatasetStats stats;
    stats.record_count = ds.records.size();
    for (size_t a = 0; a < ds.attr_names.size(); ++a) {
        std::set<std::string> distinct;
        for (const auto& rec : ds.records)
            if (rec.attrs[a]) distinct.insert(*rec.attrs[a]);
        stats.distinct_target_values[ds.attr_names[a]] = distinct.size();
    }
    return stats;
}

} // namespace geoclean
