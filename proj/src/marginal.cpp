#include "rockgen/marginal.hpp"

#include <algorithm>
#include <cmath>

#include "rockgen/errors.hpp"
#include "rockgen/stats.hpp"

namespace rockgen {

const char* family_name(Family f) {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::LogNormal: return "lognormal";
        default: return "exponential";
    }
}

Family family_from_name(const std::string& name) {
    if (name == "normal") return Family::Normal;
    if (name == "lognormal") return Family::LogNormal;
    if (name == "exponential") return Family::Exponential;
    throw Error("unknown distribution family '" + name + "'");
}

double MarginalFit::model_mean() const {
    switch (family) {
        case Family::Normal: return p1;
        case Family::LogNormal: return std::exp(p1 + 0.5 * p2 * p2);
        default: return 1.0 / p1;
    }
}

double MarginalFit::model_std() const {
    switch (family) {
        case Family::Normal: return p2;
        case Family::LogNormal: {
            const double v = (std::exp(p2 * p2) - 1.0) * std::exp(2.0 * p1 + p2 * p2);
            return std::sqrt(v);
        }
        default: return 1.0 / p1;
    }
}

double MarginalFit::sample(Prng& rng) const {
    switch (family) {
        case Family::Normal: return rng.normal(p1, p2);
        case Family::LogNormal: return std::exp(rng.normal(p1, p2));
        default: return rng.exponential(p1);
    }
}

MarginalFit fit_normal(std::span<const double> samples) {
    if (samples.size() < 2) throw DegenerateSample("need at least 2 samples");
    const double mu = mean(samples);
    const double sigma = population_std(samples, mu);
    if (sigma <= 0.0) throw DegenerateSample("all samples equal");
    const double n = static_cast<double>(samples.size());
    // At the MLE the quadratic term collapses to n/2.
    const double ll = -0.5 * n * (std::log(2.0 * M_PI) + 2.0 * std::log(sigma) + 1.0);
    return MarginalFit{Family::Normal, mu, sigma, samples.size(), ll};
}

MarginalFit fit_lognormal(std::span<const double> samples) {
    std::vector<double> logs;
    logs.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i] > 0.0)) {
            throw NonPositiveSample("sample " + std::to_string(i) + " = " +
                                    std::to_string(samples[i]) + " is not positive");
        }
        logs.push_back(std::log(samples[i]));
    }
    MarginalFit fit = fit_normal(logs);
    fit.family = Family::LogNormal;
    // Jacobian of the log transform: subtract sum of log x.
    double log_sum = 0.0;
    for (double lx : logs) log_sum += lx;
    fit.log_likelihood -= log_sum;
    return fit;
}

MarginalFit fit_exponential(std::span<const double> samples) {
    if (samples.empty()) throw DegenerateSample("empty sample");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i] > 0.0)) {
            throw NonPositiveSample("sample " + std::to_string(i) + " = " +
                                    std::to_string(samples[i]) + " is not positive");
        }
    }
    const double lambda = 1.0 / mean(samples);
    const double n = static_cast<double>(samples.size());
    const double ll = n * std::log(lambda) - n;
    return MarginalFit{Family::Exponential, lambda, 0.0, samples.size(), ll};
}

FamilySelection select_family(std::span<const double> samples,
                              std::span<const Family> candidates) {
    if (candidates.empty()) throw NoViableCandidate("no candidate families supplied");

    // Fixed evaluation order for deterministic tie-breaking.
    std::vector<Family> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end());
    ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

    FamilySelection result;
    bool found = false;
    for (Family f : ordered) {
        MarginalFit fit;
        try {
            switch (f) {
                case Family::Normal: fit = fit_normal(samples); break;
                case Family::LogNormal: fit = fit_lognormal(samples); break;
                case Family::Exponential: fit = fit_exponential(samples); break;
            }
        } catch (const Error&) {
            continue;  // candidate's preconditions not met; skip it
        }
        result.diagnostics.emplace_back(f, fit.log_likelihood);
        if (!found || fit.log_likelihood > result.best.log_likelihood) {
            result.best = fit;
            found = true;
        }
    }
    if (!found) throw NoViableCandidate("no candidate family is viable for this sample");
    return result;
}

}  // namespace rockgen
