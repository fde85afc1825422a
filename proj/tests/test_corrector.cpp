#include <doctest.h>

#include <cmath>

#include "geoclean/corrector.hpp"
#include "fixtures.hpp"

using namespace geoclean;

namespace {

struct Resolved {
    Dataset ds;
    DistanceMatrix matrix;
    std::vector<CellCandidates> cells;
    std::vector<FormulatorOutput> outputs;
    std::vector<Repair> repairs;
};

Resolved resolve_dataset(Dataset ds, const SpatialConstraint& c,
                         FormulatorKind kind) {
    Resolved r;
    r.ds = std::move(ds);
    CleaningConfig cfg;
    cfg.constraints = {c};
    r.matrix = build_distance_matrix(r.ds, c);
    FrequencyTable freq = build_frequency_table(r.ds, r.matrix);
    r.cells = generate_candidates(r.ds, r.matrix, freq,
                                  detect_errors(r.ds, r.matrix), cfg);
    r.outputs = encode_all(kind, r.cells, r.matrix);
    r.repairs = resolve(r.cells, r.outputs, r.matrix);
    return r;
}

SpatialConstraint planar_range(double d, int n) {
    SpatialConstraint c;
    c.kind = PredicateKind::range;
    c.d_meters = d;
    c.distance = CoordMode::planar;
    c.target = "t";
    c.n = n;
    return c;
}

Dataset line_dataset(const std::vector<const char*>& vals, double step) {
    Dataset ds;
    ds.mode = CoordMode::planar;
    ds.attr_names = {"t"};
    for (size_t i = 0; i < vals.size(); ++i) {
        Record rec;
        rec.id = "p" + std::to_string(i + 1);
        rec.pos = {0.0, static_cast<double>(i) * step};
        rec.attrs = {vals[i] ? Value(vals[i]) : Value()};
        ds.records.push_back(rec);
    }
    return ds;
}

} // namespace

TEST_CASE("worked example: label plus factor repairs") {
    auto ex = fixtures::worked_example();
    CleaningConfig cfg = fixtures::example_config();
    FrequencyTable freq = ex.freq;
    auto cells = generate_candidates(ex.ds, ex.matrix, freq,
                                     detect_errors(ex.ds, ex.matrix), cfg);
    auto outputs = encode_all(FormulatorKind::factor, cells, ex.matrix);
    auto repairs = resolve(cells, outputs, ex.matrix);

    REQUIRE(repairs.size() == 6); // r1..r6, r7 stays clean
    const char* expect_val[6] = {"Manhattan",    "StatenIsland", "StatenIsland",
                                 "Queens",       "Queens",       "Queens"};
    const double expect_score[6] = {0.77, 0.47, 0.09, 0.11, 330.0 / 342.0,
                                    0.12};
    for (int i = 0; i < 6; ++i) {
        CHECK(repairs[i].record == static_cast<uint32_t>(i));
        CHECK(repairs[i].attr == 0);
        CHECK(repairs[i].new_value == expect_val[i]);
        CHECK(std::abs(repairs[i].score - expect_score[i]) < 1e-9);
    }
    // only r5 is auto-labeled; its score is the label's normalized probability
    for (int i = 0; i < 6; ++i)
        CHECK((repairs[i].source == Repair::Source::auto_label) == (i == 4));
    CHECK(repairs[4].old_value == Value("Queens"));
    CHECK(repairs[0].old_value == Value("StatenIsland"));

    // r4 and r6 restate the value already present
    CHECK(*repairs[3].old_value == repairs[3].new_value);
    CHECK(*repairs[5].old_value == repairs[5].new_value);
}

TEST_CASE("score tie prefers the original value") {
    // b sees A and B at the same distance, so factor ties at 0; the original
    // B must win even though A sorts first
    auto ds = line_dataset({"A", "B", "B"}, 10.0);
    auto r = resolve_dataset(std::move(ds), planar_range(20.0, 1),
                             FormulatorKind::factor);
    REQUIRE(r.repairs.size() == 2); // a and b flagged, c clean
    CHECK(r.repairs[0].record == 0);
    CHECK(r.repairs[0].new_value == "B");
    CHECK(r.repairs[1].record == 1);
    CHECK(r.repairs[1].new_value == "B"); // the tie case
    CHECK(r.repairs[1].score == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& rep : r.repairs)
        CHECK(rep.source == Repair::Source::formulator);
}

TEST_CASE("score tie without the original picks the smallest name") {
    // b (B) sees A and C at equal distance; A and C tie ahead of B
    auto ds = line_dataset({"A", "B", "C"}, 10.0);
    auto r = resolve_dataset(std::move(ds), planar_range(20.0, 1),
                             FormulatorKind::factor);
    const Repair* mid = nullptr;
    for (const auto& rep : r.repairs)
        if (rep.record == 1) mid = &rep;
    REQUIRE(mid != nullptr);
    CHECK(mid->new_value == "A");
    CHECK(mid->old_value == Value("B"));
}

TEST_CASE("NULL cell with zero-weight support still gets a labeled repair") {
    // k = 1 with n = 2 zeroes the only row; the lone candidate survives with
    // probability mass 0 and is labeled anyway
    auto ds = line_dataset({"X", nullptr}, 10.0);
    SpatialConstraint c;
    c.kind = PredicateKind::knn;
    c.k = 1;
    c.distance = CoordMode::planar;
    c.target = "t";
    c.n = 2;
    auto r = resolve_dataset(std::move(ds), c, FormulatorKind::factor);
    REQUIRE(r.repairs.size() == 1);
    CHECK(r.repairs[0].record == 1);
    CHECK(!r.repairs[0].old_value.has_value());
    CHECK(r.repairs[0].new_value == "X");
    CHECK(r.repairs[0].source == Repair::Source::auto_label);
    CHECK(r.repairs[0].score == 0.0);
}

TEST_CASE("apply_repairs is pure, targeted and idempotent") {
    auto ex = fixtures::worked_example();
    CleaningConfig cfg = fixtures::example_config();
    auto cells = generate_candidates(ex.ds, ex.matrix, ex.freq,
                                     detect_errors(ex.ds, ex.matrix), cfg);
    auto outputs = encode_all(FormulatorKind::factor, cells, ex.matrix);
    auto repairs = resolve(cells, outputs, ex.matrix);

    Dataset before = ex.ds;
    Dataset once = apply_repairs(ex.ds, repairs);
    Dataset twice = apply_repairs(once, repairs);

    // the input dataset is untouched
    for (size_t i = 0; i < before.records.size(); ++i)
        CHECK(before.records[i].attrs == ex.ds.records[i].attrs);

    for (size_t i = 0; i < once.records.size(); ++i) {
        CHECK(once.records[i].id == ex.ds.records[i].id);
        CHECK(once.records[i].pos.lat == ex.ds.records[i].pos.lat);
        CHECK(once.records[i].pos.lon == ex.ds.records[i].pos.lon);
        CHECK(once.records[i].attrs == twice.records[i].attrs);
    }
    const char* final_vals[7] = {"Manhattan", "StatenIsland", "StatenIsland",
                                 "Queens",    "Queens",       "Queens",
                                 "Queens"};
    for (int i = 0; i < 7; ++i)
        CHECK(once.records[i].attrs[0] == Value(final_vals[i]));
}

TEST_CASE("apply_repairs validates record and attribute indices") {
    auto ex = fixtures::worked_example();
    Repair bad_rec;
    bad_rec.record = 99;
    bad_rec.attr = 0;
    bad_rec.new_value = "Queens";
    CHECK_THROWS_AS(apply_repairs(ex.ds, {bad_rec}), std::runtime_error);

    Repair bad_attr;
    bad_attr.record = 0;
    bad_attr.attr = 7;
    bad_attr.new_value = "Queens";
    CHECK_THROWS_AS(apply_repairs(ex.ds, {bad_attr}), std::runtime_error);
}

TEST_CASE("resolve rejects mismatched outputs and skips empty cells") {
    auto ex = fixtures::worked_example();
    CleaningConfig cfg = fixtures::example_config();
    auto cells = generate_candidates(ex.ds, ex.matrix, ex.freq,
                                     detect_errors(ex.ds, ex.matrix), cfg);
    auto outputs = encode_all(FormulatorKind::violation, cells, ex.matrix);
    outputs.pop_back();
    CHECK_THROWS_AS(resolve(cells, outputs, ex.matrix), std::runtime_error);

    // an isolated NULL record is flagged but has nothing to offer
    Dataset ds;
    ds.mode = CoordMode::planar;
    ds.attr_names = {"t"};
    Record rec;
    rec.id = "solo";
    rec.pos = {0.0, 0.0};
    rec.attrs = {Value()};
    ds.records.push_back(rec);
    SpatialConstraint c = planar_range(100.0, 1);
    DistanceMatrix m = build_distance_matrix(ds, c);
    FrequencyTable freq = build_frequency_table(ds, m);
    CleaningConfig solo_cfg;
    solo_cfg.constraints = {c};
    auto solo_cells =
        generate_candidates(ds, m, freq, detect_errors(ds, m), solo_cfg);
    REQUIRE(solo_cells.size() == 1);
    CHECK(solo_cells[0].candidates.empty());
    auto solo_out = encode_all(FormulatorKind::factor, solo_cells, m);
    CHECK(resolve(solo_cells, solo_out, m).empty());
}
