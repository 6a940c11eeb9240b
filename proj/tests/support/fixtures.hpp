// Deterministic synthetic fixtures shared by the unit and acceptance suites.

#ifndef ROCKGEN_TESTS_FIXTURES_HPP
#define ROCKGEN_TESTS_FIXTURES_HPP

#include <cstdint>
#include <string>

#include "rockgen/types.hpp"

namespace rockgen::testfix {

struct MarginalSpec {
    double dir_mean = 185.0;
    double dir_sd = 25.0;
    double ang_mean = 45.0;
    double ang_sd = 8.0;
    double log_trace_mean = 0.8;
    double log_trace_sd = 0.35;
};

// Normal dip direction / dip angle with EXACT sample correlation `r`
// (constructed by empirical orthogonalization), lognormal trace length
// independent of both. All records satisfy the domain invariants.
DiscontinuitySet correlated_set(const std::string& name, std::size_t n, double r,
                                std::uint64_t seed, const MarginalSpec& spec = {});

// Writes ten dataset CSVs plus catalog.json into `dir`, mirroring the
// published catalog's counts, scenario tags and correlation signs.
// Returns the manifest path.
std::string write_demo_catalog(const std::string& dir, std::uint64_t seed);

}  // namespace rockgen::testfix

#endif
