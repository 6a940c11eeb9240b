// Maximum-likelihood fits of univariate models (normal, lognormal,
// exponential) and likelihood-based family selection.

#ifndef ROCKGEN_MARGINAL_HPP
#define ROCKGEN_MARGINAL_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rockgen/prng.hpp"

namespace rockgen {

enum class Family { Normal, LogNormal, Exponential };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct MarginalFit {
    Family family = Family::Normal;
    // Normal: p1 = mu, p2 = sigma.  LogNormal: p1 = mu_log, p2 = sigma_log.
    // Exponential: p1 = lambda, p2 unused (0).
    double p1 = 0.0;
    double p2 = 0.0;
    std::size_t n = 0;
    double log_likelihood = 0.0;

    // Analytic moments of the fitted model.
    double model_mean() const;
    double model_std() const;

    // One draw from the fitted model.
    double sample(Prng& rng) const;
};

MarginalFit fit_normal(std::span<const double> samples);
MarginalFit fit_lognormal(std::span<const double> samples);
MarginalFit fit_exponential(std::span<const double> samples);

struct FamilySelection {
    MarginalFit best;
    // (family, log-likelihood) for every viable candidate, in the fixed
    // Normal < LogNormal < Exponential order.
    std::vector<std::pair<Family, double>> diagnostics;
};

// Fits every viable candidate and returns the one with the highest
// log-likelihood; ties break toward the earlier family in the fixed order.
FamilySelection select_family(std::span<const double> samples,
                              std::span<const Family> candidates);

}  // namespace rockgen

#endif
