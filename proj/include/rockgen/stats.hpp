// Small shared numeric helpers and per-parameter summary statistics.
//
// Standard deviations use the population denominator n throughout, matching
// the MLE fits in marginal.hpp.

#ifndef ROCKGEN_STATS_HPP
#define ROCKGEN_STATS_HPP

#include <array>
#include <cstddef>
#include <span>

#include "rockgen/types.hpp"

namespace rockgen {

double mean(std::span<const double> xs);
double population_std(std::span<const double> xs);
double population_std(std::span<const double> xs, double mu);

// Type-7 quantile: linear interpolation between order statistics.
// `sorted` must be ascending and non-empty; q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct ParamSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct SetSummary {
    std::array<ParamSummary, 3> params;  // indexed by Parameter

    const ParamSummary& operator[](Parameter p) const {
        return params[static_cast<std::size_t>(p)];
    }
};

SetSummary summary_stats(const DiscontinuitySet& set);

}  // namespace rockgen

#endif
