#include "rockgen/serialize.hpp"

#include <fstream>

#include "rockgen/errors.hpp"

namespace rockgen {

using nlohmann::json;

json fit_to_json(const MarginalFit& fit) {
    json params;
    switch (fit.family) {
        case Family::Normal:
            params = {{"mu", fit.p1}, {"sigma", fit.p2}};
            break;
        case Family::LogNormal:
            params = {{"mu_log", fit.p1}, {"sigma_log", fit.p2}};
            break;
        case Family::Exponential:
            params = {{"lambda", fit.p1}};
            break;
    }
    return {{"family", family_name(fit.family)},
            {"params", params},
            {"n", fit.n},
            {"log_likelihood", fit.log_likelihood}};
}

MarginalFit fit_from_json(const json& j) {
    MarginalFit fit;
    fit.family = family_from_name(j.at("family").get<std::string>());
    const json& p = j.at("params");
    switch (fit.family) {
        case Family::Normal:
            fit.p1 = p.at("mu").get<double>();
            fit.p2 = p.at("sigma").get<double>();
            break;
        case Family::LogNormal:
            fit.p1 = p.at("mu_log").get<double>();
            fit.p2 = p.at("sigma_log").get<double>();
            break;
        case Family::Exponential:
            fit.p1 = p.at("lambda").get<double>();
            fit.p2 = 0.0;
            break;
    }
    fit.n = j.at("n").get<std::size_t>();
    fit.log_likelihood = j.at("log_likelihood").get<double>();
    return fit;
}

json monte_carlo_to_json(const MonteCarloModel& model) {
    json fits;
    for (Parameter p : kParameters) {
        fits[parameter_name(p)] = fit_to_json(model.fit(p));
    }
    return {{"engine", "monte_carlo"}, {"seed", model.seed}, {"fits", fits}};
}

MonteCarloModel monte_carlo_from_json(const json& j) {
    MonteCarloModel model;
    model.seed = j.at("seed").get<std::uint64_t>();
    for (Parameter p : kParameters) {
        model.fits[static_cast<std::size_t>(p)] =
            fit_from_json(j.at("fits").at(parameter_name(p)));
    }
    return model;
}

json mlp_to_json(const nn::Mlp& net) {
    json layers = json::array();
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        layers.push_back({{"rows", net.weights[k].rows},
                          {"cols", net.weights[k].cols},
                          {"weights", net.weights[k].data},
                          {"biases", net.biases[k]}});
    }
    return {{"widths", net.widths},
            {"hidden", net.hidden == nn::Activation::ReLU ? "relu" : "tanh"},
            {"head", net.head == nn::Head::Identity ? "identity" : "sigmoid"},
            {"layers", layers}};
}

nn::Mlp mlp_from_json(const json& j) {
    nn::Mlp net;
    net.widths = j.at("widths").get<std::vector<std::size_t>>();
    net.hidden = j.at("hidden").get<std::string>() == "relu" ? nn::Activation::ReLU
                                                             : nn::Activation::Tanh;
    net.head = j.at("head").get<std::string>() == "identity" ? nn::Head::Identity
                                                             : nn::Head::Sigmoid;
    for (const auto& layer : j.at("layers")) {
        nn::Matrix w(layer.at("rows").get<std::size_t>(),
                     layer.at("cols").get<std::size_t>());
        w.data = layer.at("weights").get<std::vector<double>>();
        if (w.data.size() != w.rows * w.cols) {
            throw ShapeMismatch("checkpoint weight count does not match shape");
        }
        net.weights.push_back(std::move(w));
        net.biases.push_back(layer.at("biases").get<std::vector<double>>());
    }
    return net;
}

namespace {

json standardizer_to_json(const Standardizer& s) {
    return {{"mean", s.mean}, {"std", s.std_dev}};
}

Standardizer standardizer_from_json(const json& j) {
    Standardizer s;
    s.mean = j.at("mean").get<std::array<double, 3>>();
    s.std_dev = j.at("std").get<std::array<double, 3>>();
    return s;
}

}  // namespace

json gan_to_json(const GanModel& model) {
    return {{"engine", "gan"},
            {"z_dim", model.z_dim},
            {"seed", model.seed},
            {"standardizer", standardizer_to_json(model.stdz)},
            {"generator", mlp_to_json(model.generator)},
            {"discriminator", mlp_to_json(model.discriminator)}};
}

GanModel gan_from_json(const json& j) {
    GanModel model;
    model.z_dim = j.at("z_dim").get<std::size_t>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.stdz = standardizer_from_json(j.at("standardizer"));
    model.generator = mlp_from_json(j.at("generator"));
    model.discriminator = mlp_from_json(j.at("discriminator"));
    return model;
}

json ddpm_to_json(const DdpmModel& model) {
    return {{"engine", "ddpm"},
            {"seed", model.seed},
            {"embed_freqs", model.embed_freqs},
            {"schedule", {{"T", model.schedule.T}, {"beta", model.schedule.beta}}},
            {"standardizer", standardizer_to_json(model.stdz)},
            {"eps_net", mlp_to_json(model.eps_net)}};
}

DdpmModel ddpm_from_json(const json& j) {
    DdpmModel model;
    model.seed = j.at("seed").get<std::uint64_t>();
    model.embed_freqs = j.at("embed_freqs").get<std::size_t>();
    model.schedule =
        NoiseSchedule::from_betas(j.at("schedule").at("beta").get<std::vector<double>>());
    model.stdz = standardizer_from_json(j.at("standardizer"));
    model.eps_net = mlp_from_json(j.at("eps_net"));
    return model;
}

json report_to_json(const EvaluationReport& report) {
    json univariate = json::array();
    for (const auto& uc : report.univariate) {
        univariate.push_back({{"parameter", uc.parameter},
                              {"mean_rel_error", uc.mean_rel_error},
                              {"std_rel_error", uc.std_rel_error},
                              {"ks_stat", uc.ks_stat},
                              {"ks_p", uc.ks_p},
                              {"wasserstein_1", uc.wasserstein_1},
                              {"chi2_stat", uc.chi2_stat},
                              {"chi2_df", uc.chi2_df},
                              {"chi2_p", uc.chi2_p}});
    }
    const auto& mv = report.multivariate;
    auto corr = [](const CorrMatrix& m) {
        json rows = json::array();
        for (const auto& row : m) rows.push_back(row);
        return rows;
    };
    return {{"schema_version", kReportSchemaVersion},
            {"engine", report.engine},
            {"dataset", report.dataset},
            {"n_observed", report.n_observed},
            {"n_generated", report.n_generated},
            {"generation_seed", report.generation_seed},
            {"metric_seed", report.metric_seed},
            {"univariate", univariate},
            {"multivariate",
             {{"corr_observed", corr(mv.corr_observed)},
              {"corr_generated", corr(mv.corr_generated)},
              {"frobenius_diff", mv.frobenius_diff},
              {"corr_rmse", mv.corr_rmse},
              {"corr_mae", mv.corr_mae},
              {"permanova_f", mv.permanova_f},
              {"permanova_p", mv.permanova_p},
              {"sliced_wasserstein", mv.sliced_wasserstein},
              {"pearson_dipdir_dipangle_observed", mv.pearson_dipdir_dipangle_observed},
              {"pearson_dipdir_dipangle_generated",
               mv.pearson_dipdir_dipangle_generated}}}};
}

json sidecar_json(const DiscontinuitySet& set, const json& model_info) {
    return {{"engine", set.source.engine},
            {"seed", set.source.seed},
            {"count", set.size()},
            {"model", model_info}};
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

}  // namespace rockgen
