#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "geoclean/evaluation.hpp"
#include "fixtures.hpp"

using namespace geoclean;

namespace {

Dataset tiny_dataset(const std::vector<std::pair<std::string, Value>>& rows) {
    Dataset ds;
    ds.mode = CoordMode::planar;
    ds.attr_names = {"t"};
    double x = 0.0;
    for (const auto& [id, val] : rows) {
        Record rec;
        rec.id = id;
        rec.pos = {0.0, x};
        rec.attrs = {val};
        ds.records.push_back(rec);
        x += 100.0;
    }
    return ds;
}

} // namespace

TEST_CASE("region labels are zero padded to a fixed width") {
    BBox bbox{41.64, 42.02, -87.94, -87.52};
    Rng rng(3);
    RegionMap ten = make_region_map(bbox, 10, rng);
    REQUIRE(ten.labels.size() == 10);
    CHECK(ten.labels.front() == "R01");
    CHECK(ten.labels[8] == "R09");
    CHECK(ten.labels.back() == "R10");

    Rng rng2(3);
    RegionMap big = make_region_map(bbox, 801, rng2);
    CHECK(big.labels.front() == "R001");
    CHECK(big.labels[98] == "R099");
    CHECK(big.labels.back() == "R801");

    for (const auto& s : big.seeds) {
        CHECK(s.lat >= bbox.lat_min);
        CHECK(s.lat <= bbox.lat_max);
        CHECK(s.lon >= bbox.lon_min);
        CHECK(s.lon <= bbox.lon_max);
    }
}

TEST_CASE("region assignment breaks distance ties toward the smaller index") {
    RegionMap map;
    map.seeds = {{0.0, 1.0}, {0.0, -1.0}, {0.0, 5.0}};
    map.labels = {"R1", "R2", "R3"};
    CHECK(map.assign({0.0, 0.0}) == 0); // equidistant from seeds 0 and 1
    CHECK(map.assign({0.0, -0.5}) == 1);
    CHECK(map.assign({0.0, 4.0}) == 2);
}

TEST_CASE("synthetic generation meets its own contract") {
    SyntheticOptions opt;
    opt.n_records = 500;
    opt.n_regions = 7;
    opt.n_errors = 100;
    opt.dup_ratio = 0.4;
    opt.seed = 7;
    SyntheticData syn = generate_synthetic(opt);

    REQUIRE(syn.data.records.size() == 500);
    REQUIRE(syn.truth.size() == 500);
    REQUIRE(syn.regions.labels.size() == 7);

    int errors = 0, dups = 0, nulls_in_errors = 0;
    for (const auto& row : syn.truth) {
        errors += row.is_error;
        dups += row.is_duplicate_location;
        if (row.is_duplicate_location) CHECK(row.is_error);
    }
    CHECK(errors == 100);
    CHECK(dups == 40); // round(0.4 * 100)

    std::map<std::pair<double, double>, int> at_pos;
    for (const auto& rec : syn.data.records)
        ++at_pos[{rec.pos.lat, rec.pos.lon}];

    for (size_t i = 0; i < syn.data.records.size(); ++i) {
        const Record& rec = syn.data.records[i];
        const GroundTruthRow& gt = syn.truth[i];
        CHECK(rec.id == std::to_string(i + 1));
        CHECK(gt.id == rec.id);
        CHECK(rec.pos.lat >= opt.bbox.lat_min);
        CHECK(rec.pos.lat <= opt.bbox.lat_max);
        CHECK(rec.pos.lon >= opt.bbox.lon_min);
        CHECK(rec.pos.lon <= opt.bbox.lon_max);

        // ground truth is always the Voronoi region of the final position
        CHECK(gt.true_value == syn.regions.labels[syn.regions.assign(rec.pos)]);

        const Value& v = rec.attrs[0];
        if (!gt.is_error) {
            REQUIRE(v.has_value());
            CHECK(*v == gt.true_value);
        } else {
            // corrupted cells are NULL or a definitely-wrong label
            if (!v.has_value())
                ++nulls_in_errors;
            else
                CHECK(*v != gt.true_value);
        }
        if (gt.is_duplicate_location)
            CHECK(at_pos[{rec.pos.lat, rec.pos.lon}] >= 2);
    }
    // null_prob 0.1 over 100 corruptions; allow generous slack
    CHECK(nulls_in_errors >= 2);
    CHECK(nulls_in_errors <= 30);

    // the same options give the same data
    SyntheticData again = generate_synthetic(opt);
    for (size_t i = 0; i < syn.data.records.size(); ++i) {
        CHECK(syn.data.records[i].pos.lat == again.data.records[i].pos.lat);
        CHECK(syn.data.records[i].attrs == again.data.records[i].attrs);
    }
}

TEST_CASE("synthetic option validation") {
    SyntheticOptions opt;
    opt.n_records = 0;
    CHECK_THROWS_AS(generate_synthetic(opt), std::runtime_error);
    opt = {};
    opt.n_regions = 1;
    CHECK_THROWS_AS(generate_synthetic(opt), std::runtime_error);
    opt = {};
    opt.n_errors = opt.n_records + 1;
    CHECK_THROWS_AS(generate_synthetic(opt), std::runtime_error);
    opt = {};
    opt.dup_ratio = 1.5;
    CHECK_THROWS_AS(generate_synthetic(opt), std::runtime_error);
    opt = {};
    opt.n_records = 10;
    opt.n_errors = 10;
    opt.dup_ratio = 0.5; // no clean record can host a duplicate
    CHECK_THROWS_AS(generate_synthetic(opt), std::runtime_error);
}

TEST_CASE("evaluate counts NULL-aware repairs") {
    Dataset orig = tiny_dataset({{"a", Value("X")},
                                 {"b", Value()},
                                 {"c", Value("C")},
                                 {"d", Value("D")}});
    std::vector<GroundTruthRow> truth = {{"a", "A", true, true},
                                         {"b", "B", true, false},
                                         {"c", "C", false, false},
                                         {"d", "D", false, false}};

    SUBCASE("perfect repair") {
        Dataset rep = orig;
        rep.records[0].attrs[0] = "A";
        rep.records[1].attrs[0] = "B";
        Metrics m = evaluate(orig, rep, truth, 0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK(m.counts.errors == 2);
        CHECK(m.counts.repairs == 2);
        CHECK(m.counts.correct == 2);
        CHECK(m.counts.dup_errors == 1);
        CHECK(m.counts.dup_correct == 1);
        CHECK(m.counts.new_errors == 1);
        CHECK(m.counts.new_correct == 1);
    }

    SUBCASE("no repairs at all") {
        Metrics m = evaluate(orig, orig, truth, 0);
        CHECK(m.precision == 0.0);
        CHECK(m.recall == 0.0);
        CHECK(m.f1 == 0.0);
        CHECK(m.counts.errors == 2);
        CHECK(m.counts.repairs == 0);
    }

    SUBCASE("partial repair") {
        Dataset rep = orig;
        rep.records[0].attrs[0] = "A";  // correct, duplicate-location error
        rep.records[1].attrs[0] = "Z";  // wrong repair of an error
        rep.records[2].attrs[0] = "C2"; // damages a clean cell
        Metrics m = evaluate(orig, rep, truth, 0);
        CHECK(m.counts.repairs == 3);
        CHECK(m.counts.correct == 1);
        CHECK(m.precision == doctest::Approx(1.0 / 3.0));
        CHECK(m.recall == doctest::Approx(0.5));
        CHECK(m.f1 == doctest::Approx(0.4));
        CHECK(m.counts.dup_correct == 1);
        CHECK(m.counts.new_correct == 0);
    }

    SUBCASE("NULLing a value is a repair and never correct") {
        Dataset rep = orig;
        rep.records[2].attrs[0] = std::nullopt;
        Metrics m = evaluate(orig, rep, truth, 0);
        CHECK(m.counts.repairs == 1);
        CHECK(m.counts.correct == 0);
    }

    SUBCASE("restating a value is not a repair") {
        Dataset rep = orig;
        rep.records[3].attrs[0] = "D"; // same value written back
        Metrics m = evaluate(orig, rep, truth, 0);
        CHECK(m.counts.repairs == 0);
    }
}

TEST_CASE("evaluate validates alignment with the truth") {
    Dataset orig = tiny_dataset({{"a", Value("X")}, {"b", Value("Y")}});
    std::vector<GroundTruthRow> truth = {{"a", "X", false, false},
                                         {"b", "Y", false, false}};

    Dataset shorter = orig;
    shorter.records.pop_back();
    CHECK_THROWS_AS(evaluate(orig, shorter, truth, 0), std::runtime_error);

    Dataset swapped = orig;
    std::swap(swapped.records[0], swapped.records[1]);
    CHECK_THROWS_AS(evaluate(orig, swapped, truth, 0), std::runtime_error);

    std::vector<GroundTruthRow> missing = {{"a", "X", false, false}};
    CHECK_THROWS_AS(evaluate(orig, orig, missing, 0), std::runtime_error);
}

TEST_CASE("exact co-occurrence baseline uses a unique plurality") {
    Dataset ds = tiny_dataset({{"a1", Value("A")},
                               {"a2", Value("A")},
                               {"b1", Value("B")},
                               {"solo", Value("Z")}});
    // first three share one location, the last sits alone
    ds.records[1].pos = ds.records[0].pos;
    ds.records[2].pos = ds.records[0].pos;

    Dataset out = baseline_exact_cooccurrence(ds, 0);
    // each A sees {A, B}: tied, so left alone; B sees {A, A}: repaired
    CHECK(out.records[0].attrs[0] == Value("A"));
    CHECK(out.records[1].attrs[0] == Value("A"));
    CHECK(out.records[2].attrs[0] == Value("A"));
    CHECK(out.records[3].attrs[0] == Value("Z"));

    Dataset with_null = tiny_dataset(
        {{"a", Value("A")}, {"n", Value()}, {"b", Value("B")}});
    with_null.records[1].pos = with_null.records[0].pos;
    with_null.records[2].pos = with_null.records[0].pos;
    Dataset out2 = baseline_exact_cooccurrence(with_null, 0);
    CHECK(out2.records[0].attrs[0] == Value("B")); // only B votes for a
    CHECK(out2.records[1].attrs[0] == Value());    // A vs B tie, stays NULL
    CHECK(out2.records[2].attrs[0] == Value("A"));
}

TEST_CASE("truth CSV round trip and validation") {
    std::vector<GroundTruthRow> rows = {{"1", "R1", false, false},
                                        {"2", "R2", true, false},
                                        {"3", "R3", true, true}};
    std::ostringstream out;
    write_truth_csv(out, rows);
    std::istringstream in(out.str());
    auto parsed = read_truth_csv(read_csv(in));
    REQUIRE(parsed.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(parsed[i].id == rows[i].id);
        CHECK(parsed[i].true_value == rows[i].true_value);
        CHECK(parsed[i].is_error == rows[i].is_error);
        CHECK(parsed[i].is_duplicate_location == rows[i].is_duplicate_location);
    }

    std::istringstream bad_header("id,value\nx,y\n");
    CHECK_THROWS_AS(read_truth_csv(read_csv(bad_header)), CsvError);

    std::istringstream bad_flag(
        "id,true_value,is_error,is_duplicate_location\n1,R1,2,0\n");
    CHECK_THROWS_AS(read_truth_csv(read_csv(bad_flag)), CsvError);
}
