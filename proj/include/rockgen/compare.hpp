// Scenario harness: run every catalog dataset against every requested
// engine, evaluate, render figures, and write a cross-engine summary.

#ifndef ROCKGEN_COMPARE_HPP
#define ROCKGEN_COMPARE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rockgen/ddpm.hpp"
#include "rockgen/gan.hpp"
#include "rockgen/metrics.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

struct RunConfig {
    std::string catalog_path;
    std::vector<std::string> engines;  // monte_carlo | bootstrap | gan | ddpm | external
    std::uint64_t master_seed = 0;
    std::string output_dir;
    // 0 = generate as many records as observed (the default comparison design);
    // otherwise a fixed diagnostic size.
    std::size_t fixed_n = 0;
    // Directory of <dataset-name>.csv files for the external engine.
    std::string external_dir;
    EvaluationConfig eval;
    GanTrainConfig gan;
    DdpmTrainConfig ddpm;
    bool write_figures = true;
};

struct PairOutcome {
    std::string dataset;
    std::string engine;
    std::string scenario;
    bool ok = false;
    std::string error;
    EvaluationReport report;
};

struct CompareResult {
    std::vector<PairOutcome> outcomes;
    std::size_t failures = 0;
};

// Per-pair seeds derive from (master_seed, "<dataset>/<engine>") so adding an
// engine or dataset never perturbs another pair's stream. Failures in one
// pair are recorded and the run continues.
CompareResult run_compare(const RunConfig& cfg);

}  // namespace rockgen

#endif
