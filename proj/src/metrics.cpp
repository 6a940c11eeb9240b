#include "rockgen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rockgen/errors.hpp"
#include "rockgen/prng.hpp"
#include "rockgen/stats.hpp"

namespace rockgen {
namespace {

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2k^2 l^2}.
double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Probability that a uniformly random interleaving of na A's and nb B's keeps
// |i*nb - j*na| < bound at every prefix (i A's, j B's seen so far). Dynamic
// program over the pooled order, O((na+nb)*min(na,nb)).
double ks_path_inside(std::size_t na, std::size_t nb, double bound) {
    if (na > nb) std::swap(na, nb);
    const std::size_t total = na + nb;
    std::vector<double> dp(na + 1, 0.0);
    std::vector<double> next(na + 1, 0.0);
    dp[0] = 1.0;
    for (std::size_t t = 1; t <= total; ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        const std::size_t ilo = t > nb ? t - nb : 0;
        const std::size_t ihi = std::min(t, na);
        for (std::size_t i = ilo; i <= ihi; ++i) {
            const std::size_t j = t - i;
            const double dev =
                std::abs(static_cast<double>(i) * nb - static_cast<double>(j) * na);
            if (t < total && dev >= bound) continue;
            double p = 0.0;
            const double rem = static_cast<double>(total - t + 1);
            if (i > 0 && dp[i - 1] > 0.0) p += dp[i - 1] * static_cast<double>(na - i + 1) / rem;
            if (j > 0 && dp[i] > 0.0) p += dp[i] * static_cast<double>(nb - j + 1) / rem;
            next[i] = p;
        }
        dp.swap(next);
    }
    return dp[na];
}

double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Upper regularized incomplete gamma Q(a, x).
double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error("gamma_q domain error");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    return std::clamp(gamma_q_contfrac(a, x), 0.0, 1.0);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double fit_cdf(const MarginalFit& fit, double x) {
    switch (fit.family) {
        case Family::Normal: return normal_cdf((x - fit.p1) / fit.p2);
        case Family::LogNormal:
            return x <= 0.0 ? 0.0 : normal_cdf((std::log(x) - fit.p1) / fit.p2);
        default: return x <= 0.0 ? 0.0 : 1.0 - std::exp(-fit.p1 * x);
    }
}

std::vector<double> sorted_copy(std::span<const double> xs) {
    std::vector<double> out(xs.begin(), xs.end());
    std::sort(out.begin(), out.end());
    return out;
}

// Right-continuous ECDF of `sorted` at x: fraction of points <= x.
double ecdf_at(const std::vector<double>& sorted, double x) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

// Rows of both sets z-scored jointly, trace length in log space.
std::vector<std::array<double, 3>> pooled_zscores(const DiscontinuitySet& a,
                                                  const DiscontinuitySet& b) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::array<double, 3>> rows;
    rows.reserve(n);
    auto push = [&rows](const DiscontinuityRecord& r) {
        rows.push_back({r.dip_direction, r.dip_angle, std::log(r.trace_length)});
    };
    for (const auto& r : a.records) push(r);
    for (const auto& r : b.records) push(r);
    for (std::size_t j = 0; j < 3; ++j) {
        double mu = 0.0;
        for (const auto& row : rows) mu += row[j];
        mu /= static_cast<double>(n);
        double var = 0.0;
        for (const auto& row : rows) var += (row[j] - mu) * (row[j] - mu);
        const double sd = std::sqrt(var / static_cast<double>(n));
        const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
        for (auto& row : rows) row[j] = (row[j] - mu) * scale;
    }
    return rows;
}

}  // namespace

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptySample("ks_two_sample needs non-empty samples");
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);

    std::vector<double> pooled = sa;
    pooled.insert(pooled.end(), sb.begin(), sb.end());
    std::sort(pooled.begin(), pooled.end());
    pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());

    double d = 0.0;
    for (double x : pooled) d = std::max(d, std::abs(ecdf_at(sa, x) - ecdf_at(sb, x)));

    if (d == 0.0) return {0.0, 1.0};

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    if (a.size() + b.size() <= 2000) {
        // Exact null distribution via lattice-path counting. The statistic is
        // discrete, so report the mid-p value (midpoint of P(D >= d) and
        // P(D > d)); a one-sided tail alone is visibly conservative at these
        // sample sizes. The +-0.5 guards place the integer threshold
        // d*na*nb between lattice levels despite floating-point rounding.
        const double m = d * na * nb;
        const double p_ge = 1.0 - ks_path_inside(a.size(), b.size(), m - 0.5);
        const double p_gt = 1.0 - ks_path_inside(a.size(), b.size(), m + 0.5);
        return {d, std::clamp(0.5 * (p_ge + p_gt), 0.0, 1.0)};
    }

    const double ne = na * nb / (na + nb);
    // Stephens' finite-sample correction to the asymptotic argument.
    const double root = std::sqrt(ne);
    return {d, kolmogorov_q((root + 0.12 + 0.11 / root) * d)};
}

KsResult ks_one_sample(std::span<const double> a, const MarginalFit& fit) {
    if (a.empty()) throw EmptySample("ks_one_sample needs a non-empty sample");
    const auto sa = sorted_copy(a);
    const double n = static_cast<double>(sa.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double f = fit_cdf(fit, sa[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    const double root = std::sqrt(n);
    return {d, kolmogorov_q((root + 0.12 + 0.11 / root) * d)};
}

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw EmptySample("wasserstein_1d needs non-empty samples");
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);
    const std::size_t na = sa.size();
    const std::size_t nb = sb.size();

    // Both quantile functions are step functions with breakpoints at i/na and
    // j/nb; integrate segment by segment.
    std::vector<double> cuts;
    cuts.reserve(na + nb);
    for (std::size_t i = 1; i <= na; ++i) cuts.push_back(static_cast<double>(i) / na);
    for (std::size_t j = 1; j <= nb; ++j) cuts.push_back(static_cast<double>(j) / nb);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    double prev = 0.0;
    for (double u : cuts) {
        const double width = u - prev;
        if (width > 0.0) {
            const double mid = 0.5 * (prev + u);
            const auto qa = sa[std::min(static_cast<std::size_t>(mid * na), na - 1)];
            const auto qb = sb[std::min(static_cast<std::size_t>(mid * nb), nb - 1)];
            total += width * std::abs(qa - qb);
        }
        prev = u;
    }
    return total;
}

Chi2Result chi_square_gof(std::span<const double> a, std::span<const double> b,
                          std::size_t bins) {
    if (a.empty() || b.empty()) throw EmptySample("chi_square_gof needs non-empty samples");
    if (bins < 2) throw TooFewBins("need at least 2 bins");
    const auto sa = sorted_copy(a);
    const auto sb = sorted_copy(b);

    // Interior edges at equiprobable quantiles of the observed sample.
    std::vector<double> edges;
    for (std::size_t k = 1; k < bins; ++k) {
        edges.push_back(quantile_sorted(sa, static_cast<double>(k) / bins));
    }

    auto count_bins = [&edges, bins](const std::vector<double>& sorted) {
        std::vector<double> counts(bins, 0.0);
        for (double x : sorted) {
            const std::size_t bin =
                std::upper_bound(edges.begin(), edges.end(), x) - edges.begin();
            counts[bin] += 1.0;
        }
        return counts;
    };

    std::vector<double> observed = count_bins(sb);
    std::vector<double> expected = count_bins(sa);
    const double scale = static_cast<double>(sb.size()) / static_cast<double>(sa.size());
    for (double& e : expected) e *= scale;

    // Merge adjacent bins until every expected count is >= 5.
    for (std::size_t i = 0; i < expected.size();) {
        if (expected[i] < 5.0 && expected.size() > 1) {
            const std::size_t j = (i + 1 < expected.size()) ? i + 1 : i - 1;
            expected[std::min(i, j)] += expected[std::max(i, j)];
            observed[std::min(i, j)] += observed[std::max(i, j)];
            expected.erase(expected.begin() + std::max(i, j));
            observed.erase(observed.begin() + std::max(i, j));
            if (j < i) i = j;
        } else {
            ++i;
        }
    }
    if (expected.size() < 2) throw TooFewBins("fewer than 2 bins remain after merging");

    double stat = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double diff = observed[i] - expected[i];
        stat += diff * diff / expected[i];
    }
    const std::size_t df = expected.size() - 1;
    const double p = gamma_q(static_cast<double>(df) / 2.0, stat / 2.0);
    return {stat, df, p};
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw Error("pearson: length mismatch");
    if (x.size() < 2) throw Error("pearson: need at least 2 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ConstantInput("pearson: constant input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrMatrix correlation_matrix(const DiscontinuitySet& set) {
    std::array<std::vector<double>, 3> cols;
    for (Parameter p : kParameters) cols[static_cast<std::size_t>(p)] = set.column(p);
    CorrMatrix m{};
    for (std::size_t i = 0; i < 3; ++i) {
        m[i][i] = 1.0;
        for (std::size_t j = i + 1; j < 3; ++j) {
            const double r = pearson(cols[i], cols[j]);
            m[i][j] = r;
            m[j][i] = r;
        }
    }
    return m;
}

double frobenius_diff(const CorrMatrix& m1, const CorrMatrix& m2) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            const double d = m1[i][j] - m2[i][j];
            acc += d * d;
        }
    }
    return std::sqrt(acc);
}

std::pair<double, double> corr_rmse_mae(const CorrMatrix& m1, const CorrMatrix& m2) {
    double sq = 0.0, ab = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
            const double d = m1[i][j] - m2[i][j];
            sq += d * d;
            ab += std::abs(d);
        }
    }
    return {std::sqrt(sq / 3.0), ab / 3.0};
}

PermanovaResult permanova(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated, std::size_t permutations,
                          std::uint64_t seed) {
    if (observed.size() < 2 || generated.size() < 2) {
        throw EmptySample("permanova needs at least 2 records per group");
    }
    if (permutations < 99) throw Error("permanova needs at least 99 permutations");

    const auto rows = pooled_zscores(observed, generated);
    const std::size_t n1 = observed.size();
    const std::size_t n = rows.size();

    // With Euclidean distances, within-group squared-distance sums reduce to
    // centroid sums of squares, so each permutation costs O(n).
    double total_sq = 0.0;
    std::array<double, 3> grand_sum = {0.0, 0.0, 0.0};
    for (const auto& row : rows) {
        for (std::size_t j = 0; j < 3; ++j) {
            total_sq += row[j] * row[j];
            grand_sum[j] += row[j];
        }
    }
    double grand_norm = 0.0;
    for (double s : grand_sum) grand_norm += s * s;
    const double ss_total = total_sq - grand_norm / static_cast<double>(n);

    auto pseudo_f = [&](const std::vector<std::size_t>& group1_idx) {
        std::array<double, 3> s1 = {0.0, 0.0, 0.0};
        for (std::size_t i : group1_idx) {
            for (std::size_t j = 0; j < 3; ++j) s1[j] += rows[i][j];
        }
        double norm1 = 0.0, norm2 = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            norm1 += s1[j] * s1[j];
            const double s2 = grand_sum[j] - s1[j];
            norm2 += s2 * s2;
        }
        const double ss_within = total_sq - norm1 / static_cast<double>(n1) -
                                 norm2 / static_cast<double>(n - n1);
        const double ss_between = ss_total - ss_within;
        return (ss_between / 1.0) / (ss_within / static_cast<double>(n - 2));
    };

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    const double f_obs = pseudo_f(std::vector<std::size_t>(idx.begin(), idx.begin() + n1));

    Prng rng(seed);
    std::size_t count_ge = 0;
    std::vector<std::size_t> perm = idx;
    for (std::size_t p = 0; p < permutations; ++p) {
        // Partial Fisher-Yates: only the first n1 slots matter.
        for (std::size_t i = 0; i < n1; ++i) {
            const std::size_t j = i + rng.index(n - i);
            std::swap(perm[i], perm[j]);
        }
        const double f =
            pseudo_f(std::vector<std::size_t>(perm.begin(), perm.begin() + n1));
        if (f >= f_obs) ++count_ge;
    }
    const double pval = static_cast<double>(count_ge + 1) /
                        static_cast<double>(permutations + 1);
    return {f_obs, pval};
}

double sliced_wasserstein(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated, std::size_t projections,
                          std::uint64_t seed) {
    const auto rows = pooled_zscores(observed, generated);
    const std::size_t n1 = observed.size();
    Prng rng(seed);
    double acc = 0.0;
    std::vector<double> pa(n1), pb(rows.size() - n1);
    for (std::size_t k = 0; k < projections; ++k) {
        std::array<double, 3> dir = {rng.normal(), rng.normal(), rng.normal()};
        double norm = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
        if (norm == 0.0) norm = 1.0;
        for (double& v : dir) v /= norm;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const double proj =
                rows[i][0] * dir[0] + rows[i][1] * dir[1] + rows[i][2] * dir[2];
            if (i < n1) {
                pa[i] = proj;
            } else {
                pb[i - n1] = proj;
            }
        }
        acc += wasserstein_1d(pa, pb);
    }
    return acc / static_cast<double>(projections);
}

EvaluationReport evaluate(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated,
                          const EvaluationConfig& cfg) {
    validate_set(observed);
    validate_set(generated);

    EvaluationReport report;
    report.engine = generated.source.engine;
    report.dataset = observed.name;
    report.n_observed = observed.size();
    report.n_generated = generated.size();
    report.generation_seed = generated.source.seed;
    report.metric_seed = cfg.seed;

    auto rel_err = [](double gen, double obs) {
        return std::abs(gen - obs) / std::max(std::abs(obs), 1e-9);
    };

    for (Parameter p : kParameters) {
        const std::size_t i = static_cast<std::size_t>(p);
        const auto obs = observed.column(p);
        const auto gen = generated.column(p);

        UnivariateComparison& uc = report.univariate[i];
        uc.parameter = parameter_name(p);
        const double obs_mean = mean(obs);
        const double gen_mean = mean(gen);
        uc.mean_rel_error = rel_err(gen_mean, obs_mean);
        uc.std_rel_error = rel_err(population_std(gen, gen_mean),
                                   population_std(obs, obs_mean));
        const KsResult ks = ks_two_sample(obs, gen);
        uc.ks_stat = ks.d;
        uc.ks_p = ks.p;
        uc.wasserstein_1 = wasserstein_1d(obs, gen);
        const Chi2Result c2 = chi_square_gof(obs, gen, cfg.chi2_bins);
        uc.chi2_stat = c2.stat;
        uc.chi2_df = c2.df;
        uc.chi2_p = c2.p;
    }

    MultivariateComparison& mv = report.multivariate;
    mv.corr_observed = correlation_matrix(observed);
    mv.corr_generated = correlation_matrix(generated);
    mv.frobenius_diff = frobenius_diff(mv.corr_observed, mv.corr_generated);
    std::tie(mv.corr_rmse, mv.corr_mae) = corr_rmse_mae(mv.corr_observed, mv.corr_generated);
    const PermanovaResult pr = permanova(observed, generated, cfg.permutations, cfg.seed);
    mv.permanova_f = pr.f;
    mv.permanova_p = pr.p;
    mv.sliced_wasserstein =
        sliced_wasserstein(observed, generated, cfg.sliced_projections, cfg.seed);
    mv.pearson_dipdir_dipangle_observed = mv.corr_observed[0][1];
    mv.pearson_dipdir_dipangle_generated = mv.corr_generated[0][1];
    return report;
}

}  // namespace rockgen
