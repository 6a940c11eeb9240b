#include "rockgen/stats.hpp"

#include <algorithm>
#include <cmath>

namespace rockgen {

double mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs, double mu) {
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

double population_std(std::span<const double> xs) {
    return population_std(xs, mean(xs));
}

double quantile_sorted(std::span<const double> sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SetSummary summary_stats(const DiscontinuitySet& set) {
    SetSummary out;
    for (Parameter p : kParameters) {
        const auto xs = set.column(p);
        ParamSummary s;
        s.count = xs.size();
        s.mean = mean(xs);
        s.std_dev = population_std(xs, s.mean);
        const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
        s.min = *mn;
        s.max = *mx;
        out.params[static_cast<std::size_t>(p)] = s;
    }
    return out;
}

}  // namespace rockgen
