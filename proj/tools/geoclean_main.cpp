#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "geoclean/pipeline.hpp"
#include "geoclean/reports.hpp"

namespace fs = std::filesystem;
using namespace geoclean;

namespace {

constexpr const char* kVersion = "geoclean 1.0.0";

struct CliError : std::runtime_error {
    int code;
    CliError(int code_, const std::string& msg)
        : std::runtime_error(msg), code(code_) {}
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(1, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(1, "cannot write " + path.string());
    out << bytes;
    if (!out) throw CliError(1, "write failed: " + path.string());
}

// stderr is for people; stdout stays machine-readable
void note(const std::string& msg) { std::cerr << msg << "\n"; }

CoordMode dataset_mode(const CleaningConfig& config) {
    for (const auto& c : config.constraints)
        if (c.distance == CoordMode::planar) return CoordMode::planar;
    return CoordMode::geographic;
}

int report_diagnostics(const std::vector<Diagnostic>& diags) {
    int errors = 0;
    for (const auto& d : diags) {
        note(std::string(d.level == Diagnostic::error ? "error: " : "warning: ") +
             d.message);
        if (d.level == Diagnostic::error) ++errors;
    }
    return errors;
}

// names like detection.json, detection.c2.json for later constraints
fs::path run_file(const fs::path& dir, const std::string& stem, size_t index,
                  const std::string& ext) {
    std::string name = stem;
    if (index > 0) name += ".c" + std::to_string(index + 1);
    return dir / (name + ext);
}

struct LoadedInput {
    CleaningConfig config;
    Schema schema;
    CsvTable table;
    Dataset dataset;
};

LoadedInput load_input(const std::string& input_path,
                       const std::string& config_path) {
    LoadedInput in;
    in.config = parse_config_file(config_path);
    in.table = read_csv_file(input_path);
    in.schema = derive_schema(in.config, in.table.header);
    in.dataset = load_dataset(in.table, in.schema, dataset_mode(in.config));
    auto diags = validate_against_schema(in.config, in.schema,
                                         dataset_stats(in.dataset));
    if (report_diagnostics(diags) > 0)
        throw CliError(2, "configuration rejected");
    return in;
}

// repaired CSV keeps the input's column order and untouched fields verbatim
std::string render_repaired_csv(const CsvTable& input, const Schema& schema,
                                const Dataset& repaired) {
    std::vector<int> attr_col_of; // dataset attr -> csv column
    for (size_t c = 0; c < schema.size(); ++c) {
        if (schema[c].role == ColumnRole::target ||
            schema[c].role == ColumnRole::other)
            attr_col_of.push_back(static_cast<int>(c));
    }
    CsvTable out = input;
    for (size_t r = 0; r < out.rows.size(); ++r)
        for (size_t a = 0; a < attr_col_of.size(); ++a)
            out.rows[r][attr_col_of[a]] = repaired.records[r].attrs[a];
    std::ostringstream s;
    write_csv(s, out);
    return s.str();
}

int cmd_clean(const std::string& input_path, const std::string& config_path,
              const std::string& out_dir, std::optional<uint64_t> seed,
              std::optional<std::string> formulator, int threads,
              bool dump_matrix) {
    LoadedInput in = load_input(input_path, config_path);
    if (seed) in.config.seed = *seed;
    if (formulator) in.config.formulator = formulator_from_string(*formulator);

    fs::create_directories(out_dir);
    note("cleaning " + std::to_string(in.dataset.records.size()) +
         " records under " + std::to_string(in.config.constraints.size()) +
         " constraint(s), formulator=" + to_string(in.config.formulator));

    CleanRun run = run_clean(in.dataset, in.config, threads);

    RunManifest manifest;
    manifest.command = "clean";
    manifest.version = kVersion;
    manifest.inputs = {{"data", input_path}, {"config", config_path}};
    manifest.config_hash = hex64(fnv1a64(slurp(config_path)));
    manifest.seed = in.config.seed;
    manifest.threads = threads;
    manifest.formulator = to_string(in.config.formulator);
    manifest.stage_ms = run.stage_ms;

    int64_t matrix_rows = 0, flagged = 0, auto_labeled = 0, repairs = 0,
            no_candidates = 0;
    fs::path dir(out_dir);
    for (size_t ci = 0; ci < run.constraints.size(); ++ci) {
        const ConstraintRun& cr = run.constraints[ci];
        matrix_rows += static_cast<int64_t>(cr.matrix.rows.size());
        flagged += static_cast<int64_t>(cr.detection.erroneous.size());
        repairs += static_cast<int64_t>(cr.repairs.size());
        no_candidates += static_cast<int64_t>(cr.cells_without_candidates);
        for (const auto& cell : cr.cells)
            if (cell.label) ++auto_labeled;

        std::ostringstream buf;
        write_detection_report(buf, in.dataset, cr.detection);
        spill(run_file(dir, "detection", ci, ".json"), buf.str());
        buf.str("");
        write_candidate_report(buf, in.dataset, cr.matrix, cr.cells);
        spill(run_file(dir, "candidates", ci, ".json"), buf.str());
        buf.str("");
        write_formulator_dump(buf, in.dataset, cr.matrix, cr.encoded);
        spill(run_file(dir, "formulator", ci, ".jsonl"), buf.str());
        buf.str("");
        write_repair_log(buf, in.dataset, cr.repairs);
        spill(run_file(dir, "repairs", ci, ".csv"), buf.str());
        if (dump_matrix) {
            buf.str("");
            write_matrix_csv(buf, in.dataset, cr.matrix);
            spill(run_file(dir, "matrix", ci, ".csv"), buf.str());
        }
        if (cr.cells_without_candidates > 0)
            note("constraint " + std::to_string(ci + 1) + ": " +
                 std::to_string(cr.cells_without_candidates) +
                 " flagged cell(s) have no candidates and stay unrepaired");
    }
    spill(dir / "repaired.csv",
          render_repaired_csv(in.table, in.schema, run.repaired));

    manifest.counts = {{"records", (int64_t)in.dataset.records.size()},
                       {"matrix_rows", matrix_rows},
                       {"flagged", flagged},
                       {"auto_labeled", auto_labeled},
                       {"repairs", repairs},
                       {"cells_without_candidates", no_candidates}};
    manifest.outputs["repaired"] = (dir / "repaired.csv").string();
    manifest.outputs["detection"] = run_file(dir, "detection", 0, ".json").string();
    manifest.outputs["candidates"] =
        run_file(dir, "candidates", 0, ".json").string();
    manifest.outputs["formulator"] =
        run_file(dir, "formulator", 0, ".jsonl").string();
    manifest.outputs["repairs"] = run_file(dir, "repairs", 0, ".csv").string();
    if (dump_matrix)
        manifest.outputs["matrix"] = run_file(dir, "matrix", 0, ".csv").string();
    manifest.outputs["manifest"] = (dir / "manifest.json").string();

    std::ostringstream buf;
    write_manifest(buf, manifest);
    spill(dir / "manifest.json", buf.str());
    std::cout << buf.str();
    note("done: " + std::to_string(repairs) + " repair(s) written to " +
         (dir / "repaired.csv").string());
    return 0;
}

int cmd_detect(const std::string& input_path, const std::string& config_path,
               const std::string& out_path, int threads) {
    LoadedInput in = load_input(input_path, config_path);
    std::ostringstream all;
    for (size_t ci = 0; ci < in.config.constraints.size(); ++ci) {
        DistanceMatrix matrix =
            build_distance_matrix(in.dataset, in.config.constraints[ci], threads);
        DetectionResult det = detect_errors(in.dataset, matrix);
        note("constraint " + std::to_string(ci + 1) + ": flagged " +
             std::to_string(det.erroneous.size()) + " of " +
             std::to_string(in.dataset.records.size()));
        write_detection_report(all, in.dataset, det);
    }
    if (!out_path.empty()) {
        spill(out_path, all.str());
        std::cout << "{\"detection\":\"" << json_escape(out_path) << "\"}\n";
    } else {
        std::cout << all.str();
    }
    return 0;
}

int cmd_generate(int records, int regions, int errors, double dup,
                 uint64_t seed, const std::string& out_dir,
                 const std::string& bbox_arg) {
    SyntheticOptions opt;
    opt.n_records = records;
    opt.n_regions = regions;
    opt.n_errors = errors;
    opt.dup_ratio = dup;
    opt.seed = seed;
    if (!bbox_arg.empty()) {
        double a, b, c, d;
        char comma;
        std::istringstream s(bbox_arg);
        if (!(s >> a >> comma >> b >> comma >> c >> comma >> d) || !s.eof())
            throw CliError(2, "bad --bbox, expected latmin,latmax,lonmin,lonmax");
        opt.bbox = {a, b, c, d};
        if (!(a < b && c < d))
            throw CliError(2, "bad --bbox, expected latmin,latmax,lonmin,lonmax");
    }
    SyntheticData syn = generate_synthetic(opt);

    fs::create_directories(out_dir);
    fs::path dir(out_dir);
    std::ostringstream buf;
    write_dataset(buf, syn.data, "id", "lat", "lon");
    spill(dir / "data.csv", buf.str());
    buf.str("");
    write_truth_csv(buf, syn.truth);
    spill(dir / "truth.csv", buf.str());

    int64_t dups = 0;
    for (const auto& row : syn.truth) dups += row.is_duplicate_location;
    std::cout << "{\"records\":" << records << ",\"regions\":" << regions
              << ",\"errors\":" << errors << ",\"duplicated\":" << dups
              << ",\"seed\":" << seed << ",\"data\":\""
              << json_escape((dir / "data.csv").string()) << "\",\"truth\":\""
              << json_escape((dir / "truth.csv").string()) << "\"}\n";
    return 0;
}

Schema eval_schema(const CsvTable& table, std::string& target,
                   const std::string& requested) {
    CleaningConfig probe; // only to reuse role derivation
    SpatialConstraint c;
    c.target = requested;
    if (requested.empty()) {
        for (const auto& name : table.header) {
            std::string low;
            for (char ch : name) low += static_cast<char>(std::tolower(ch));
            if (low != "id" && low != "lat" && low != "lon") {
                c.target = name;
                break;
            }
        }
        if (c.target.empty()) throw CliError(2, "cannot infer target column");
    }
    target = c.target;
    probe.constraints.push_back(c);
    return derive_schema(probe, table.header);
}

int cmd_eval(const std::string& original_path, const std::string& repaired_path,
             const std::string& truth_path, const std::string& target_arg) {
    CsvTable orig_table = read_csv_file(original_path);
    std::string target;
    Schema schema = eval_schema(orig_table, target, target_arg);
    // planar load skips geographic bounds checks; coordinates are irrelevant
    Dataset original = load_dataset(orig_table, schema, CoordMode::planar);
    Dataset repaired =
        load_dataset(read_csv_file(repaired_path), schema, CoordMode::planar);
    std::vector<GroundTruthRow> truth =
        read_truth_csv(read_csv_file(truth_path));
    int attr = original.attr_index(target);
    Metrics m = evaluate(original, repaired, truth, attr);
    write_metrics_json(std::cout, m);
    return 0;
}

int cmd_sweep(const std::string& input_path, const std::string& config_path,
              const std::string& truth_path, const std::string& param,
              const std::string& values_arg, const std::string& n_values_arg,
              const std::string& out_path, int threads) {
    LoadedInput in = load_input(input_path, config_path);
    std::vector<GroundTruthRow> truth =
        read_truth_csv(read_csv_file(truth_path));

    auto parse_list = [](const std::string& s) {
        std::vector<double> out;
        std::istringstream is(s);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (tok.empty()) continue;
            out.push_back(std::stod(tok));
        }
        if (out.empty()) throw CliError(2, "empty value list");
        return out;
    };
    std::vector<double> values = parse_list(values_arg);
    std::vector<double> n_values =
        n_values_arg.empty() ? std::vector<double>{2} : parse_list(n_values_arg);
    std::sort(values.begin(), values.end());
    std::sort(n_values.begin(), n_values.end());
    if (param != "d" && param != "k")
        throw CliError(2, "--param must be d or k");

    int attr = in.dataset.attr_index(in.config.constraints[0].target);
    std::ostringstream csv;
    csv << "param,value,n,precision,recall,f1,runtime_ms,status\n";
    double best_f1 = -1, best_value = 0, best_n = 0;
    for (double v : values) {
        for (double n : n_values) {
            CleaningConfig cfg = in.config;
            auto& c0 = cfg.constraints[0];
            if (param == "d") {
                c0.kind = PredicateKind::range;
                c0.d_meters = v;
            } else {
                c0.kind = PredicateKind::knn;
                c0.k = static_cast<int>(v);
            }
            c0.n = static_cast<int>(n);
            csv << param << ',' << format_score(v) << ',' << (int)n << ',';
            auto t0 = std::chrono::steady_clock::now();
            try {
                CleanRun run = run_clean(in.dataset, cfg, threads);
                Metrics m = evaluate(in.dataset, run.repaired, truth, attr);
                double ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
                csv << format_score(m.precision) << ',' << format_score(m.recall)
                    << ',' << format_score(m.f1) << ',' << format_score(ms)
                    << ",ok\n";
                note("sweep " + param + "=" + format_score(v) +
                     " n=" + std::to_string((int)n) + " f1=" +
                     format_score(m.f1));
                if (m.f1 > best_f1) {
                    best_f1 = m.f1;
                    best_value = v;
                    best_n = n;
                }
            } catch (const std::exception& e) {
                csv << ",,,," << "failed\n";
                note(std::string("sweep point failed: ") + e.what());
            }
        }
    }
    spill(out_path, csv.str());
    std::cout << "{\"out\":\"" << json_escape(out_path) << "\",\"points\":"
              << values.size() * n_values.size();
    if (best_f1 >= 0)
        std::cout << ",\"best\":{\"param\":\"" << param << "\",\"value\":"
                  << format_score(best_value) << ",\"n\":" << (int)best_n
                  << ",\"f1\":" << format_score(best_f1) << "}";
    std::cout << "}\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spatially aware cleaning of (lat, lon) -> value datasets"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string input, config, out, formulator, bbox, original, repaired, truth;
    std::string param, values, n_values, target;
    std::optional<uint64_t> seed_opt;
    uint64_t gen_seed = 0;
    int threads = 1;
    int records = 20000, regions = 50, errors = 2000;
    double dup = 0.0;
    bool dump_matrix = false;

    auto add_threads = [&](CLI::App* cmd) {
        cmd->add_option("--threads", threads, "worker threads for the join")
            ->check(CLI::Range(1, 256));
    };

    CLI::App* clean = app.add_subcommand("clean", "detect and repair");
    clean->add_option("--input", input, "dataset CSV")->required();
    clean->add_option("--config", config, "constraint config")->required();
    clean->add_option("--out", out, "output directory")->required();
    clean->add_option("--seed", seed_opt, "override config seed");
    clean->add_option("--formulator", formulator,
                      "violation | probability | factor");
    clean->add_flag("--dump-matrix", dump_matrix, "also write matrix.csv");
    add_threads(clean);

    CLI::App* detect = app.add_subcommand("detect", "detection only");
    detect->add_option("--input", input, "dataset CSV")->required();
    detect->add_option("--config", config, "constraint config")->required();
    detect->add_option("--out", out, "report path (default stdout)");
    add_threads(detect);

    CLI::App* generate =
        app.add_subcommand("generate", "synthetic dataset with ground truth");
    generate->add_option("--records", records)->check(CLI::PositiveNumber);
    generate->add_option("--regions", regions)->check(CLI::Range(2, 1000000));
    generate->add_option("--errors", errors)->check(CLI::NonNegativeNumber);
    generate->add_option("--dup", dup, "duplication ratio")
        ->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen_seed);
    generate->add_option("--out", out, "output directory")->required();
    generate->add_option("--bbox", bbox, "latmin,latmax,lonmin,lonmax");

    CLI::App* eval = app.add_subcommand("eval", "precision/recall/F1");
    eval->add_option("--original", original)->required();
    eval->add_option("--repaired", repaired)->required();
    eval->add_option("--truth", truth)->required();
    eval->add_option("--target", target, "target column (default: first "
                                         "non-core column)");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter grid");
    sweep->add_option("--input", input)->required();
    sweep->add_option("--config", config)->required();
    sweep->add_option("--truth", truth)->required();
    sweep->add_option("--param", param, "d or k")->required();
    sweep->add_option("--values", values, "comma-separated")->required();
    sweep->add_option("--n-values", n_values, "comma-separated");
    sweep->add_option("--out", out, "sweep CSV path")->required();
    add_threads(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*clean)
            return cmd_clean(input, config, out, seed_opt,
                             formulator.empty()
                                 ? std::nullopt
                                 : std::optional<std::string>(formulator),
                             threads, dump_matrix);
        if (*detect) return cmd_detect(input, config, out, threads);
        if (*generate)
            return cmd_generate(records, regions, errors, dup, gen_seed, out,
                                bbox);
        if (*eval) return cmd_eval(original, repaired, truth, target);
        if (*sweep)
            return cmd_sweep(input, config, truth, param, values, n_values, out,
                             threads);
    } catch (const CliError& e) {
        note(std::string("error: ") + e.what());
        return e.code;
    } catch (const ConfigError& e) {
        note(std::string("error: ") + e.what());
        return 2;
    } catch (const CsvError& e) {
        note(std::string("error: ") + e.what());
        return 1;
    } catch (const std::exception& e) {
        note(std::string("error: ") + e.what());
        return 1;
    }
    return 2;
}
