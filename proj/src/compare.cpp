#include "rockgen/compare.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>

#include "rockgen/catalog.hpp"
#include "rockgen/errors.hpp"
#include "rockgen/generators.hpp"
#include "rockgen/report.hpp"
#include "rockgen/serialize.hpp"

namespace rockgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, ptr);
}

struct GeneratedPair {
    DiscontinuitySet set;
    json model_info;
};

GeneratedPair generate_for_engine(const RunConfig& cfg, const std::string& engine,
                                  const DiscontinuitySet& observed, std::size_t n,
                                  std::uint64_t seed) {
    if (engine == "monte_carlo") {
        MonteCarloModel model = fit_monte_carlo(observed, seed);
        return {mc_generate(model, n), monte_carlo_to_json(model)};
    }
    if (engine == "bootstrap") {
        SmoothedBootstrapModel model = fit_bootstrap(observed, seed);
        json info = {{"engine", "bootstrap"},
                     {"seed", model.seed},
                     {"bandwidths", model.bandwidths},
                     {"reference_n", model.reference.size()}};
        return {bootstrap_generate(model, n), std::move(info)};
    }
    if (engine == "gan") {
        GanTrainConfig gan_cfg = cfg.gan;
        GanModel model = train_gan(observed, gan_cfg, seed);
        return {gan_generate(model, n, derive_seed(seed, "generate")),
                json{{"engine", "gan"}, {"seed", seed}, {"z_dim", model.z_dim}}};
    }
    if (engine == "ddpm") {
        DdpmModel model = train_ddpm(observed, cfg.ddpm, seed);
        return {ddpm_sample(model, n, derive_seed(seed, "generate")),
                json{{"engine", "ddpm"}, {"seed", seed}, {"T", model.schedule.T}}};
    }
    if (engine == "external") {
        if (cfg.external_dir.empty()) {
            throw Error("external engine requested but no external_dir configured");
        }
        ExternalSampleSource source;
        source.path = (fs::path(cfg.external_dir) / (observed.name + ".csv")).string();
        source.declared_engine = "external";
        return {load_external(source), json{{"engine", "external"}, {"path", source.path}}};
    }
    throw Error("unknown engine '" + engine + "'");
}

void write_figures(const fs::path& dir, const DiscontinuitySet& observed,
                   const DiscontinuitySet& generated) {
    for (Parameter p : kParameters) {
        const std::string name = parameter_name(p);
        {
            const HistogramSpec spec = build_histogram(observed, generated, p, 20);
            std::ofstream f(dir / ("hist_" + name + ".svg"), std::ios::binary);
            f << render_svg(spec);
        }
        {
            std::vector<BoxplotStats> boxes = {
                build_boxplot(observed.column(p), "observed"),
                build_boxplot(generated.column(p), "generated")};
            std::ofstream f(dir / ("box_" + name + ".svg"), std::ios::binary);
            f << render_svg(boxes, name);
        }
    }
    std::ofstream f(dir / "scatter.svg", std::ios::binary);
    f << render_svg(build_scatter(observed, generated));
}

void write_summary(const fs::path& path, const std::vector<PairOutcome>& outcomes) {
    // Per-dataset rank of each engine on the two joint-structure metrics
    // (1 = best). Failed pairs rank last.
    std::map<std::string, std::vector<const PairOutcome*>> by_dataset;
    for (const auto& o : outcomes) by_dataset[o.dataset].push_back(&o);

    auto rank_of = [](const std::vector<const PairOutcome*>& group,
                      const PairOutcome* target, auto metric) {
        std::size_t rank = 1;
        for (const auto* other : group) {
            if (other == target) continue;
            const bool target_ok = target->ok;
            const bool other_ok = other->ok;
            if (!target_ok) {
                rank += other_ok ? 1 : 0;
            } else if (other_ok && metric(*other) < metric(*target)) {
                ++rank;
            }
        }
        return rank;
    };

    std::string csv =
        "dataset,scenario,engine,status,n_observed,n_generated,"
        "mean_rel_error_dip_direction,mean_rel_error_dip_angle,mean_rel_error_trace_length,"
        "std_rel_error_dip_direction,std_rel_error_dip_angle,std_rel_error_trace_length,"
        "ks_p_dip_direction,ks_p_dip_angle,ks_p_trace_length,"
        "wasserstein_dip_direction,wasserstein_dip_angle,wasserstein_trace_length,"
        "chi2_p_dip_direction,chi2_p_dip_angle,chi2_p_trace_length,"
        "frobenius_diff,corr_rmse,corr_mae,permanova_p,sliced_wasserstein,"
        "pearson_dipdir_dipangle_observed,pearson_dipdir_dipangle_generated,"
        "rank_frobenius,rank_sliced_wasserstein,error\n";

    for (const auto& o : outcomes) {
        csv += o.dataset + "," + o.scenario + "," + o.engine + ",";
        csv += o.ok ? "ok" : "failed";
        auto cell = [&csv](double v) {
            csv.push_back(',');
            append_double(csv, v);
        };
        if (o.ok) {
            const auto& r = o.report;
            csv += "," + std::to_string(r.n_observed) + "," + std::to_string(r.n_generated);
            for (const auto& u : r.univariate) cell(u.mean_rel_error);
            for (const auto& u : r.univariate) cell(u.std_rel_error);
            for (const auto& u : r.univariate) cell(u.ks_p);
            for (const auto& u : r.univariate) cell(u.wasserstein_1);
            for (const auto& u : r.univariate) cell(u.chi2_p);
            const auto& mv = r.multivariate;
            cell(mv.frobenius_diff);
            cell(mv.corr_rmse);
            cell(mv.corr_mae);
            cell(mv.permanova_p);
            cell(mv.sliced_wasserstein);
            cell(mv.pearson_dipdir_dipangle_observed);
            cell(mv.pearson_dipdir_dipangle_generated);
            const auto& group = by_dataset[o.dataset];
            csv += "," + std::to_string(rank_of(group, &o, [](const PairOutcome& p) {
                       return p.report.multivariate.frobenius_diff;
                   }));
            csv += "," + std::to_string(rank_of(group, &o, [](const PairOutcome& p) {
                       return p.report.multivariate.sliced_wasserstein;
                   }));
            csv += ",";
        } else {
            csv += ",,";
            for (int i = 0; i < 23; ++i) csv += ",";
            csv += ",,";
            std::string msg = o.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            csv += msg;
        }
        csv += "\n";
    }
    std::ofstream f(path, std::ios::binary);
    f << csv;
}

}  // namespace

CompareResult run_compare(const RunConfig& cfg) {
    if (cfg.engines.empty()) throw Error("compare needs at least one engine");
    const DatasetCatalog catalog = load_catalog(cfg.catalog_path);
    fs::create_directories(cfg.output_dir);

    CompareResult result;
    for (const auto& entry : catalog.entries) {
        DiscontinuitySet observed = load_catalog_entry(entry);
        for (const auto& engine : cfg.engines) {
            PairOutcome outcome;
            outcome.dataset = entry.name;
            outcome.engine = engine;
            outcome.scenario = entry.scenario;
            const std::uint64_t pair_seed =
                derive_seed(cfg.master_seed, entry.name + "/" + engine);
            try {
                const std::size_t n = cfg.fixed_n > 0 ? cfg.fixed_n : observed.size();
                GeneratedPair gen = generate_for_engine(cfg, engine, observed, n, pair_seed);

                EvaluationConfig eval = cfg.eval;
                eval.seed = derive_seed(pair_seed, "metrics");
                outcome.report = evaluate(observed, gen.set, eval);
                outcome.ok = true;

                const fs::path dir = fs::path(cfg.output_dir) / entry.name / engine;
                fs::create_directories(dir);
                write_csv(gen.set, (dir / "generated.csv").string());
                write_json(sidecar_json(gen.set, gen.model_info),
                           (dir / "generated.sidecar.json").string());
                write_json(report_to_json(outcome.report), (dir / "report.json").string());
                if (cfg.write_figures) write_figures(dir, observed, gen.set);
            } catch (const std::exception& e) {
                outcome.ok = false;
                outcome.error = e.what();
                ++result.failures;
            }
            result.outcomes.push_back(std::move(outcome));
        }
    }
    write_summary(fs::path(cfg.output_dir) / "summary.csv", result.outcomes);
    return result;
}

}  // namespace rockgen
