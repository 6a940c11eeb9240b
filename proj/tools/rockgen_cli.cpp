// rockgen command-line interface.
//
// Exit codes: 0 success, 1 partial failure (compare), 2 usage/validation error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "rockgen/catalog.hpp"
#include "rockgen/compare.hpp"
#include "rockgen/ddpm.hpp"
#include "rockgen/gan.hpp"
#include "rockgen/generators.hpp"
#include "rockgen/report.hpp"
#include "rockgen/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

rockgen::ColumnMap column_map(const std::string& dir_col, const std::string& ang_col,
                              const std::string& len_col) {
    rockgen::ColumnMap cm;
    if (!dir_col.empty()) cm.dip_direction = dir_col;
    if (!ang_col.empty()) cm.dip_angle = ang_col;
    if (!len_col.empty()) cm.trace_length = len_col;
    return cm;
}

std::array<std::string, 3> parse_forced_families(
    const std::vector<std::string>& specs) {
    std::array<std::string, 3> forced;
    for (const auto& spec : specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--family expects parameter=family, got '" + spec +
                                       "'");
        }
        const std::string param = spec.substr(0, eq);
        const std::string family = spec.substr(eq + 1);
        rockgen::family_from_name(family);  // validates
        bool matched = false;
        for (rockgen::Parameter p : rockgen::kParameters) {
            if (param == rockgen::parameter_name(p)) {
                forced[static_cast<std::size_t>(p)] = family;
                matched = true;
            }
        }
        if (!matched) {
            throw CLI::ValidationError("unknown parameter '" + param + "' in --family");
        }
    }
    return forced;
}

void apply_config_file(rockgen::RunConfig& cfg, const std::string& path) {
    const json j = rockgen::read_json(path);
    if (j.contains("catalog")) cfg.catalog_path = j["catalog"].get<std::string>();
    if (j.contains("engines")) cfg.engines = j["engines"].get<std::vector<std::string>>();
    if (j.contains("seed")) cfg.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("n")) cfg.fixed_n = j["n"].get<std::size_t>();
    if (j.contains("external_dir")) cfg.external_dir = j["external_dir"].get<std::string>();
    if (j.contains("permutations")) {
        cfg.eval.permutations = j["permutations"].get<std::size_t>();
    }
    if (j.contains("gan_epochs")) cfg.gan.epochs = j["gan_epochs"].get<std::size_t>();
    if (j.contains("ddpm_steps")) cfg.ddpm.steps = j["ddpm_steps"].get<std::size_t>();
    if (j.contains("figures")) cfg.write_figures = j["figures"].get<bool>();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic rock-discontinuity generation and evaluation"};
    app.require_subcommand(1);

    std::string input, output, observed_path, generated_path, model_path, fits_path;
    std::string reference_path, catalog_path, out_dir, config_path, external_dir;
    std::string engine, dir_col, ang_col, len_col;
    std::vector<std::string> family_specs, engines;
    std::size_t n = 0, epochs = 0, bins = 10, permutations = 999;
    std::uint64_t seed = 0;
    bool has_seed = false, match_observed = false, no_figures = false;

    auto add_columns = [&](CLI::App* cmd) {
        cmd->add_option("--dipdir-col", dir_col, "CSV column for dip direction");
        cmd->add_option("--dipangle-col", ang_col, "CSV column for dip angle");
        cmd->add_option("--trace-col", len_col, "CSV column for trace length");
    };

    auto* fit = app.add_subcommand("fit", "Fit marginal distributions to a dataset");
    fit->add_option("--input", input, "observed CSV")->required();
    fit->add_option("--out", output, "output fits JSON (default: fits.json)");
    fit->add_option("--family", family_specs,
                    "force a family, e.g. --family trace_length=lognormal");
    add_columns(fit);

    auto* train = app.add_subcommand("train", "Train a GAN or DDPM on a dataset");
    train->add_option("--engine", engine, "gan | ddpm")->required();
    train->add_option("--input", input, "observed CSV")->required();
    train->add_option("--out", output, "output checkpoint JSON")->required();
    train->add_option("--seed", seed, "training seed")->required();
    train->add_option("--epochs", epochs, "training epochs/steps (0 = default)");
    add_columns(train);

    auto* gen = app.add_subcommand("generate", "Generate a synthetic dataset");
    gen->add_option("--engine", engine, "monte_carlo | bootstrap | gan | ddpm");
    gen->add_option("--fits", fits_path, "fits JSON (monte_carlo)");
    gen->add_option("--reference", reference_path, "reference CSV (bootstrap)");
    gen->add_option("--model", model_path, "checkpoint JSON (gan/ddpm)");
    gen->add_option("-n,--n", n, "number of records")->required();
    gen->add_option("--seed", seed, "generation seed")->required();
    gen->add_option("--out", output, "output CSV")->required();
    add_columns(gen);

    auto* eval = app.add_subcommand("evaluate", "Score a generated set against observations");
    eval->add_option("--observed", observed_path, "observed CSV")->required();
    eval->add_option("--generated", generated_path, "generated CSV")->required();
    eval->add_option("--out", output, "report JSON")->required();
    eval->add_option("--seed", seed, "metric seed (permutations, projections)")->required();
    eval->add_option("--bins", bins, "chi-square bins");
    eval->add_option("--permutations", permutations, "PERMANOVA permutations");
    add_columns(eval);

    auto* figs = app.add_subcommand("report", "Render comparison figures (SVG)");
    figs->add_option("--observed", observed_path, "observed CSV")->required();
    figs->add_option("--generated", generated_path, "generated CSV");
    figs->add_option("--out", out_dir, "output directory")->required();
    add_columns(figs);

    auto* cmp = app.add_subcommand("compare", "Run the full dataset x engine comparison");
    cmp->add_option("--config", config_path, "JSON config file (flags override)");
    cmp->add_option("--catalog", catalog_path, "catalog manifest JSON");
    cmp->add_option("--engines", engines, "subset of monte_carlo,bootstrap,gan,ddpm,external")
        ->delimiter(',');
    auto* seed_opt = cmp->add_option("--seed", seed, "master seed (required)");
    cmp->add_option("--out", out_dir, "output directory");
    cmp->add_option("-n,--n", n, "fixed generation size (default: match observed)");
    cmp->add_flag("--match-observed", match_observed, "generate as many rows as observed");
    cmp->add_option("--external-dir", external_dir, "directory of external sample CSVs");
    cmp->add_option("--permutations", permutations, "PERMANOVA permutations");
    cmp->add_option("--gan-epochs", epochs, "override GAN epochs");
    cmp->add_flag("--no-figures", no_figures, "skip SVG rendering");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const rockgen::ColumnMap cm = column_map(dir_col, ang_col, len_col);

        if (*fit) {
            const auto data = rockgen::parse_csv(input, cm);
            const auto forced = parse_forced_families(family_specs);
            const auto model = rockgen::fit_monte_carlo(data, 0, forced);
            const std::string out = output.empty() ? "fits.json" : output;
            rockgen::write_json(rockgen::monte_carlo_to_json(model), out);
            std::cout << "wrote " << out << "\n";
            return 0;
        }

        if (*train) {
            const auto data = rockgen::parse_csv(input, cm);
            if (engine == "gan") {
                rockgen::GanTrainConfig cfg;
                if (epochs > 0) cfg.epochs = epochs;
                const auto model = rockgen::train_gan(data, cfg, seed);
                rockgen::write_json(rockgen::gan_to_json(model), output);
            } else if (engine == "ddpm") {
                rockgen::DdpmTrainConfig cfg;
                if (epochs > 0) cfg.steps = epochs;
                const auto model = rockgen::train_ddpm(data, cfg, seed);
                rockgen::write_json(rockgen::ddpm_to_json(model), output);
            } else {
                std::cerr << "train: engine must be gan or ddpm\n";
                return 2;
            }
            std::cout << "wrote " << output << "\n";
            return 0;
        }

        if (*gen) {
            if (n == 0) {
                std::cerr << "generate: -n must be positive\n";
                return 2;
            }
            rockgen::DiscontinuitySet set;
            json model_info;
            if (!model_path.empty()) {
                const json ckpt = rockgen::read_json(model_path);
                const std::string kind = ckpt.value("engine", "");
                if (kind == "gan") {
                    const auto model = rockgen::gan_from_json(ckpt);
                    set = rockgen::gan_generate(model, n, seed);
                } else if (kind == "ddpm") {
                    const auto model = rockgen::ddpm_from_json(ckpt);
                    set = rockgen::ddpm_sample(model, n, seed);
                } else if (kind == "monte_carlo") {
                    auto model = rockgen::monte_carlo_from_json(ckpt);
                    model.seed = seed;
                    set = rockgen::mc_generate(model, n);
                } else {
                    std::cerr << "generate: unrecognized checkpoint kind '" << kind << "'\n";
                    return 2;
                }
                model_info = {{"checkpoint", model_path}};
            } else if (engine == "monte_carlo") {
                if (fits_path.empty()) {
                    std::cerr << "generate: monte_carlo needs --fits\n";
                    return 2;
                }
                auto model = rockgen::monte_carlo_from_json(rockgen::read_json(fits_path));
                model.seed = seed;
                set = rockgen::mc_generate(model, n);
                model_info = {{"fits", fits_path}};
            } else if (engine == "bootstrap") {
                if (reference_path.empty()) {
                    std::cerr << "generate: bootstrap needs --reference\n";
                    return 2;
                }
                const auto reference = rockgen::parse_csv(reference_path, cm);
                const auto model = rockgen::fit_bootstrap(reference, seed);
                set = rockgen::bootstrap_generate(model, n);
                model_info = {{"reference", reference_path},
                              {"bandwidths", model.bandwidths}};
            } else {
                std::cerr << "generate: need --model or --engine with its inputs\n";
                return 2;
            }
            rockgen::write_csv(set, output);
            rockgen::write_json(rockgen::sidecar_json(set, model_info),
                                output + ".sidecar.json");
            std::cout << "wrote " << output << " (" << set.size() << " records)\n";
            return 0;
        }

        if (*eval) {
            const auto obs = rockgen::parse_csv(observed_path, cm);
            const auto generated = rockgen::parse_csv(generated_path, cm);
            rockgen::EvaluationConfig cfg;
            cfg.chi2_bins = bins;
            cfg.permutations = permutations;
            cfg.seed = seed;
            const auto report = rockgen::evaluate(obs, generated, cfg);
            rockgen::write_json(rockgen::report_to_json(report), output);
            std::cout << "wrote " << output << "\n";
            return 0;
        }

        if (*figs) {
            const auto obs = rockgen::parse_csv(observed_path, cm);
            rockgen::DiscontinuitySet generated;
            if (!generated_path.empty()) generated = rockgen::parse_csv(generated_path, cm);
            fs::create_directories(out_dir);
            for (rockgen::Parameter p : rockgen::kParameters) {
                const std::string name = rockgen::parameter_name(p);
                const auto spec = rockgen::build_histogram(obs, generated, p, 20);
                std::ofstream h(fs::path(out_dir) / ("hist_" + name + ".svg"),
                                std::ios::binary);
                h << rockgen::render_svg(spec);
                std::vector<rockgen::BoxplotStats> boxes = {
                    rockgen::build_boxplot(obs.column(p), "observed")};
                if (!generated.records.empty()) {
                    boxes.push_back(rockgen::build_boxplot(generated.column(p), "generated"));
                }
                std::ofstream b(fs::path(out_dir) / ("box_" + name + ".svg"),
                                std::ios::binary);
                b << rockgen::render_svg(boxes, name);
            }
            std::ofstream s(fs::path(out_dir) / "scatter.svg", std::ios::binary);
            s << rockgen::render_svg(rockgen::build_scatter(obs, generated));
            std::cout << "wrote figures to " << out_dir << "\n";
            return 0;
        }

        if (*cmp) {
            rockgen::RunConfig cfg;
            if (!config_path.empty()) apply_config_file(cfg, config_path);
            if (!catalog_path.empty()) cfg.catalog_path = catalog_path;
            if (!engines.empty()) cfg.engines = engines;
            if (seed_opt->count() > 0) {
                cfg.master_seed = seed;
                has_seed = true;
            } else if (!config_path.empty() &&
                       rockgen::read_json(config_path).contains("seed")) {
                has_seed = true;
            }
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (n > 0) cfg.fixed_n = n;
            if (match_observed) cfg.fixed_n = 0;
            if (!external_dir.empty()) cfg.external_dir = external_dir;
            if (cmp->count("--permutations") > 0) cfg.eval.permutations = permutations;
            if (epochs > 0) cfg.gan.epochs = epochs;
            if (no_figures) cfg.write_figures = false;

            if (!has_seed) {
                std::cerr << "compare: --seed is required (no wall-clock default)\n";
                return 2;
            }
            if (cfg.catalog_path.empty() || cfg.output_dir.empty() || cfg.engines.empty()) {
                std::cerr << "compare: --catalog, --engines and --out are required\n";
                return 2;
            }

            const auto result = rockgen::run_compare(cfg);
            for (const auto& o : result.outcomes) {
                std::cout << o.dataset << " x " << o.engine << ": "
                          << (o.ok ? "ok" : "FAILED (" + o.error + ")") << "\n";
            }
            std::cout << "summary: " << (fs::path(cfg.output_dir) / "summary.csv").string()
                      << "\n";
            return result.failures == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
