// Quantitative evaluation battery comparing a generated set to an observed
// set: two-sample KS, Wasserstein-1, chi-square GOF, correlation-matrix
// errors, PERMANOVA, sliced multivariate Wasserstein.

#ifndef ROCKGEN_METRICS_HPP
#define ROCKGEN_METRICS_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rockgen/marginal.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

struct KsResult {
    double d = 0.0;
    double p = 1.0;
};

// Two-sample Kolmogorov-Smirnov: D = sup |F_a - F_b| over the pooled points
// (ECDFs evaluated right-continuously), p from the asymptotic Kolmogorov
// distribution at effective n = n_a * n_b / (n_a + n_b).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// One-sample variant against a fitted marginal CDF.
KsResult ks_one_sample(std::span<const double> a, const MarginalFit& fit);

// Exact W1 between empirical distributions via merged order statistics;
// handles unequal sizes.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

struct Chi2Result {
    double stat = 0.0;
    std::size_t df = 0;
    double p = 1.0;
};

// Bin edges are equiprobable quantiles of the observed sample `a`; expected
// counts are scaled to n_b; adjacent bins with expected < 5 are merged;
// df = final_bins - 1.
Chi2Result chi_square_gof(std::span<const double> a, std::span<const double> b,
                          std::size_t bins);

double pearson(std::span<const double> x, std::span<const double> y);

using CorrMatrix = std::array<std::array<double, 3>, 3>;

CorrMatrix correlation_matrix(const DiscontinuitySet& set);
double frobenius_diff(const CorrMatrix& m1, const CorrMatrix& m2);
// RMSE/MAE over the 3 off-diagonal upper-triangle entries only.
std::pair<double, double> corr_rmse_mae(const CorrMatrix& m1, const CorrMatrix& m2);

struct PermanovaResult {
    double f = 0.0;
    double p = 1.0;
};

// One-way two-level PERMANOVA on jointly z-scored features (trace length in
// log space), Euclidean distances. p = (#{F_perm >= F_obs} + 1) / (perms + 1).
PermanovaResult permanova(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated, std::size_t permutations,
                          std::uint64_t seed);

// Mean 1-D W1 over seeded random unit projections of jointly z-scored rows.
double sliced_wasserstein(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated, std::size_t projections,
                          std::uint64_t seed);

struct UnivariateComparison {
    std::string parameter;
    double mean_rel_error = 0.0;
    double std_rel_error = 0.0;
    double ks_stat = 0.0;
    double ks_p = 1.0;
    double wasserstein_1 = 0.0;
    double chi2_stat = 0.0;
    std::size_t chi2_df = 0;
    double chi2_p = 1.0;
};

struct MultivariateComparison {
    CorrMatrix corr_observed{};
    CorrMatrix corr_generated{};
    double frobenius_diff = 0.0;
    double corr_rmse = 0.0;
    double corr_mae = 0.0;
    double permanova_f = 0.0;
    double permanova_p = 1.0;
    double sliced_wasserstein = 0.0;
    double pearson_dipdir_dipangle_observed = 0.0;
    double pearson_dipdir_dipangle_generated = 0.0;
};

struct EvaluationConfig {
    std::size_t chi2_bins = 10;
    std::size_t permutations = 999;
    std::size_t sliced_projections = 64;
    std::uint64_t seed = 0;
};

struct EvaluationReport {
    std::string engine;
    std::string dataset;
    std::size_t n_observed = 0;
    std::size_t n_generated = 0;
    std::uint64_t generation_seed = 0;
    std::uint64_t metric_seed = 0;
    std::array<UnivariateComparison, 3> univariate;  // indexed by Parameter
    MultivariateComparison multivariate;
};

// Runs the full battery. Relative errors use |gen - obs| / max(|obs|, 1e-9).
EvaluationReport evaluate(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated,
                          const EvaluationConfig& cfg = {});

}  // namespace rockgen

#endif
