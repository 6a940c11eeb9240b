#include "rockgen/standardize.hpp"

#include <cmath>

#include "rockgen/stats.hpp"

namespace rockgen {

Standardizer Standardizer::fit(const DiscontinuitySet& set) {
    Standardizer s;
    for (Parameter p : kParameters) {
        auto xs = set.column(p);
        if (p == Parameter::TraceLength) {
            for (double& x : xs) x = std::log(x);
        }
        const std::size_t i = static_cast<std::size_t>(p);
        s.mean[i] = rockgen::mean(xs);
        const double sd = population_std(xs, s.mean[i]);
        s.std_dev[i] = sd > 0.0 ? sd : 1.0;  // constant columns pass through centered
    }
    return s;
}

std::array<double, 3> Standardizer::standardize_row(const DiscontinuityRecord& rec) const {
    return {(rec.dip_direction - mean[0]) / std_dev[0],
            (rec.dip_angle - mean[1]) / std_dev[1],
            (std::log(rec.trace_length) - mean[2]) / std_dev[2]};
}

nn::Matrix Standardizer::standardize(const DiscontinuitySet& set) const {
    nn::Matrix out(set.size(), 3);
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto row = standardize_row(set.records[i]);
        for (std::size_t j = 0; j < 3; ++j) out(i, j) = row[j];
    }
    return out;
}

std::array<double, 3> Standardizer::destandardize_row(const std::array<double, 3>& z) const {
    return {z[0] * std_dev[0] + mean[0], z[1] * std_dev[1] + mean[1],
            std::exp(z[2] * std_dev[2] + mean[2])};
}

}  // namespace rockgen
