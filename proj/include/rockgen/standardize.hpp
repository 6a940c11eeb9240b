// Feature standardization contract shared by the neural trainers:
// z-scored columns, trace length handled in log space.

#ifndef ROCKGEN_STANDARDIZE_HPP
#define ROCKGEN_STANDARDIZE_HPP

#include <array>

#include "rockgen/nn.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

struct Standardizer {
    std::array<double, 3> mean = {0.0, 0.0, 0.0};
    std::array<double, 3> std_dev = {1.0, 1.0, 1.0};

    static Standardizer fit(const DiscontinuitySet& set);

    // (n x 3) matrix of z-scored rows, trace length log-transformed first.
    nn::Matrix standardize(const DiscontinuitySet& set) const;

    std::array<double, 3> standardize_row(const DiscontinuityRecord& rec) const;

    // Inverse transform of one z-scored row; trace length exponentiated,
    // dip_direction NOT reduced here (generators decide range handling).
    std::array<double, 3> destandardize_row(const std::array<double, 3>& z) const;
};

}  // namespace rockgen

#endif
