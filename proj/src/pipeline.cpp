#include "geoclean/pipeline.hpp"

#include <chrono>

namespace geoclean {

CleanRun run_clean(const Dataset& ds, const CleaningConfig& config,
                   int threads) {
    using clock = std::chrono::steady_clock;
    auto since = [](clock::time_point t) {
        return std::chrono::duration<double, std::milli>(clock::now() - t)
            .count();
    };

    CleanRun run;
    run.stage_ms = {{"index_build", 0}, {"matrix_build", 0}, {"detect", 0},
                    {"generate", 0},    {"formulate", 0},    {"resolve", 0}};
    std::vector<Repair> all_repairs;

    for (const auto& constraint : config.constraints) {
        ConstraintRun cr;
        cr.constraint = constraint;

        MatrixBuildStats stats;
        cr.matrix = build_distance_matrix(ds, constraint, threads, &stats);
        run.stage_ms["index_build"] += stats.index_ms;
        run.stage_ms["matrix_build"] += stats.join_ms;
        cr.freq = build_frequency_table(ds, cr.matrix);

        auto t = clock::now();
        cr.detection = detect_errors(ds, cr.matrix);
        run.stage_ms["detect"] += since(t);

        t = clock::now();
        cr.cells = generate_candidates(ds, cr.matrix, cr.freq, cr.detection,
                                       config);
        for (const auto& cell : cr.cells)
            if (cell.candidates.empty()) ++cr.cells_without_candidates;
        run.stage_ms["generate"] += since(t);

        t = clock::now();
        cr.encoded = encode_all(config.formulator, cr.cells, cr.matrix);
        run.stage_ms["formulate"] += since(t);

        t = clock::now();
        cr.repairs = resolve(cr.cells, cr.encoded, cr.matrix);
        run.stage_ms["resolve"] += since(t);

        all_repairs.insert(all_repairs.end(), cr.repairs.begin(),
                           cr.repairs.end());
        run.constraints.push_back(std::move(cr));
    }

    run.repaired = apply_repairs(ds, all_repairs);
    return run;
}

} // namespace geoclean
