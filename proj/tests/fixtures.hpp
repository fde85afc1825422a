#pragma once

// seven-record borough walkthrough used across the test suite.
//
// the matrix variant is hand-built: the weights are round two-decimal numbers
// and the pair set is deliberately sparse (no coordinate layout reproduces it,
// the r2 row set violates the triangle inequality), which keeps every phase
// value exactly checkable by hand. the planar variant is a real coordinate
// layout with the same r1 neighborhood (200/500/800/800/800 meters) for tests
// that must run the spatial join end to end; it adds a few extra in-range
// pairs for r2/r5/r6.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "geoclean/constraint.hpp"
#include "geoclean/dataset.hpp"
#include "geoclean/distance_matrix.hpp"

namespace fixtures {

using namespace geoclean;

struct WorkedExample {
    Dataset ds;
    DistanceMatrix matrix;
    FrequencyTable freq; // frequencies of the full 1000-record collection
    int32_t S = 0, M = 0, Q = 0;
};

inline Dataset borough_records() {
    Dataset ds;
    ds.mode = CoordMode::planar;
    ds.attr_names = {"borough"};
    const char* vals[7] = {"StatenIsland", "Manhattan", "Manhattan", "Queens",
                           "Queens",       "Queens",    "Queens"};
    for (int i = 0; i < 7; ++i) {
        Record rec;
        rec.id = "r" + std::to_string(i + 1);
        rec.attrs = {std::string(vals[i])};
        ds.records.push_back(rec);
    }
    return ds;
}

inline WorkedExample worked_example() {
    WorkedExample ex;
    ex.ds = borough_records();

    DistanceMatrix& m = ex.matrix;
    m.target_attr = 0;
    ex.S = m.values.intern("StatenIsland");
    ex.M = m.values.intern("Manhattan");
    ex.Q = m.values.intern("Queens");
    m.record_value = {ex.S, ex.M, ex.M, ex.Q, ex.Q, ex.Q, ex.Q};

    auto add = [&](uint32_t a, uint32_t b, double d, double w) {
        m.rows.push_back({a, b, m.record_value[a], m.record_value[b], d, w});
    };
    add(0, 1, 200, 0.64);
    add(0, 2, 500, 0.25);
    add(0, 3, 800, 0.04);
    add(0, 4, 800, 0.04);
    add(0, 5, 800, 0.04);
    add(1, 0, 200, 0.64);
    add(1, 2, 600, 0.16);
    add(1, 3, 900, 0.01);
    add(2, 0, 500, 0.25);
    add(2, 1, 600, 0.16);
    add(3, 4, 600, 0.16);
    add(3, 0, 800, 0.04);
    add(3, 1, 900, 0.01);
    add(4, 3, 600, 0.16);
    add(4, 5, 600, 0.16);
    add(4, 0, 800, 0.04);
    add(4, 6, 900, 0.01);
    add(5, 4, 600, 0.16);
    add(5, 0, 800, 0.04);
    add(6, 4, 900, 0.01);
    m.spans = {{0, 5}, {5, 8}, {8, 10}, {10, 13}, {13, 17}, {17, 19}, {19, 20}};

    ex.freq.counts = {100, 300, 300}; // S, M, Q across the 1000-record source
    ex.freq.total_records = 1000;
    return ex;
}

// r3 closes exact 500/600 triangles with r1 and r2; r4/r5/r6 sit on the 800 m
// circle around r1 with 600 m chords between the consecutive ones; r7 is 900 m
// below r5 and out of r1's range
inline Dataset planar_layout() {
    Dataset ds = borough_records();
    double th = 2.0 * std::asin(3.0 / 8.0);
    double qx = 800.0 * std::sin(th);
    double qy = -800.0 * std::cos(th);
    const double xs[7] = {0, -200, 175, qx, 0, -qx, 0};
    const double ys[7] = {0, 0, std::sqrt(219375.0), qy, -800, qy, -1700};
    for (int i = 0; i < 7; ++i) {
        ds.records[i].pos.lon = xs[i]; // planar: lon carries x meters
        ds.records[i].pos.lat = ys[i];
    }
    return ds;
}

inline CleaningConfig example_config() {
    SpatialConstraint c;
    c.kind = PredicateKind::range;
    c.d_meters = 1000.0;
    c.distance = CoordMode::planar;
    c.n = 2;
    c.target = "borough";
    CleaningConfig cfg;
    cfg.constraints = {c};
    return cfg;
}

inline const char* example_config_text() {
    return "[constraint]\n"
           "type = range\n"
           "d_meters = 1000\n"
           "distance = planar\n"
           "n = 2\n"
           "target = borough\n"
           "\n"
           "[cleaning]\n"
           "formulator = factor\n";
}

// fresh scratch directory under the system temp root
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static int counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("geoclean_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    out << bytes;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return bytes;
}

// writes data.csv and config.ini for CLI-level runs, returns the directory
inline std::filesystem::path write_cli_fixture(const std::string& tag) {
    auto dir = scratch_dir(tag);
    std::ofstream data(dir / "data.csv", std::ios::binary);
    write_dataset(data, planar_layout(), "id", "lat", "lon");
    data.close();
    write_file(dir / "config.ini", example_config_text());
    return dir;
}

} // namespace fixtures
