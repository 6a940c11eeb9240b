// Statistical generator engines: independent Monte Carlo sampling from
// fitted marginals, a correlation-preserving smoothed bootstrap, and an
// adapter for externally generated sample files.

#ifndef ROCKGEN_GENERATORS_HPP
#define ROCKGEN_GENERATORS_HPP

#include <array>
#include <cstdint>
#include <string>

#include "rockgen/csv.hpp"
#include "rockgen/marginal.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

struct MonteCarloModel {
    std::array<MarginalFit, 3> fits;  // indexed by Parameter
    std::uint64_t seed = 0;

    const MarginalFit& fit(Parameter p) const {
        return fits[static_cast<std::size_t>(p)];
    }
};

// Fits each parameter independently. `forced` entries override likelihood
// ranking for that parameter (empty string = select among candidates).
MonteCarloModel fit_monte_carlo(const DiscontinuitySet& data, std::uint64_t seed,
                                const std::array<std::string, 3>& forced_families = {});

// Each parameter drawn independently from its marginal. dip_direction is
// reduced mod 360, dip_angle rejection-resampled into [0, 90], trace_length
// resampled until positive. Bit-identical output for identical inputs.
DiscontinuitySet mc_generate(const MonteCarloModel& model, std::size_t n);

struct SmoothedBootstrapModel {
    DiscontinuitySet reference;
    // Gaussian kernel bandwidths; trace_length bandwidth applies in log space.
    std::array<double, 3> bandwidths = {0.0, 0.0, 0.0};
    std::uint64_t seed = 0;
};

// Silverman's rule per parameter, 1.06 * sigma * n^(-1/5); trace_length
// bandwidth computed on log(trace).
std::array<double, 3> silverman_bandwidths(const DiscontinuitySet& reference);

SmoothedBootstrapModel fit_bootstrap(const DiscontinuitySet& reference,
                                     std::uint64_t seed);

// Resamples a reference record uniformly and jitters each parameter with
// Gaussian kernel noise; range handling as in mc_generate.
DiscontinuitySet bootstrap_generate(const SmoothedBootstrapModel& model, std::size_t n);

struct ExternalSampleSource {
    std::string path;
    std::string declared_engine;
    ColumnMap columns;
};

// Ingests an externally generated sample file through the standard CSV
// validation path and tags it with the declared engine.
DiscontinuitySet load_external(const ExternalSampleSource& source);

// Shared rejection cap: more than this many consecutive rejections for one
// cell signals a pathological model.
inline constexpr int kMaxRejections = 10000;

}  // namespace rockgen

#endif
