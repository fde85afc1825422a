#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geoclean/constraint.hpp"
#include "geoclean/csv.hpp"
#include "geoclean/geo.hpp"

namespace geoclean {

using Value = std::optional<std::string>;

struct Record {
    std::string id;
    GeoPoint pos;
    std::vector<Value> attrs; // parallel to Dataset::attr_names
};

struct Dataset {
    CoordMode mode = CoordMode::geographic;
    std::vector<std::string> attr_names; // target + other columns, CSV order
    std::vector<Record> records;

    int attr_index(const std::string& name) const;
    const Value& value(uint32_t record, int attr) const {
        return records[record].attrs[attr];
    }
};

// one attribute of one record, the unit of detection and repair
struct CellRef {
    uint32_t record = 0;
    int attr = 0;
    bool operator==(const CellRef&) const = default;
};

// parses a dataset CSV against the derived schema. lat in [-90, 90] and lon in
// [-180, 180] are enforced in geographic mode; ids must be unique and non-NULL.
Dataset load_dataset(const CsvTable& table, const Schema& schema, CoordMode mode);
Dataset load_dataset_file(const std::string& path, const Schema& schema,
                          CoordMode mode);

// writes id,lat,lon,<attrs...> preserving the attr order of the dataset
void write_dataset(std::ostream& out, const Dataset& ds,
                   const std::string& id_col, const std::string& lat_col,
                   const std::string& lon_col);

DatasetStats dataset_stats(const Dataset& ds);

} // namespace geoclean
