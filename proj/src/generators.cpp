#include "rockgen/generators.hpp"

#include <cmath>

#include "rockgen/errors.hpp"
#include "rockgen/stats.hpp"

namespace rockgen {
namespace {

double draw_dip_angle(const MarginalFit& fit, Prng& rng) {
    // Zero-variance fits are legal test fixtures; accept the constant if valid.
    if (fit.family == Family::Normal && fit.p2 == 0.0) {
        if (fit.p1 < 0.0 || fit.p1 > 90.0) {
            throw RejectionOverflow("degenerate dip_angle fit outside [0, 90]");
        }
        return fit.p1;
    }
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double x = fit.sample(rng);
        if (x >= 0.0 && x <= 90.0) return x;
    }
    throw RejectionOverflow("dip_angle fit rejected " + std::to_string(kMaxRejections) +
                            " consecutive draws");
}

double draw_trace_length(const MarginalFit& fit, Prng& rng) {
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double x = fit.sample(rng);
        if (x > 0.0 && std::isfinite(x)) return x;
    }
    throw RejectionOverflow("trace_length fit rejected " +
                            std::to_string(kMaxRejections) + " consecutive draws");
}

}  // namespace

MonteCarloModel fit_monte_carlo(const DiscontinuitySet& data, std::uint64_t seed,
                                const std::array<std::string, 3>& forced_families) {
    static const Family kAngleCandidates[] = {Family::Normal, Family::LogNormal};
    static const Family kLengthCandidates[] = {Family::Normal, Family::LogNormal,
                                               Family::Exponential};
    MonteCarloModel model;
    model.seed = seed;
    for (Parameter p : kParameters) {
        const std::size_t i = static_cast<std::size_t>(p);
        const auto xs = data.column(p);
        if (!forced_families[i].empty()) {
            switch (family_from_name(forced_families[i])) {
                case Family::Normal: model.fits[i] = fit_normal(xs); break;
                case Family::LogNormal: model.fits[i] = fit_lognormal(xs); break;
                case Family::Exponential: model.fits[i] = fit_exponential(xs); break;
            }
            continue;
        }
        const bool is_length = p == Parameter::TraceLength;
        const std::span<const Family> candidates =
            is_length ? std::span<const Family>(kLengthCandidates)
                      : std::span<const Family>(kAngleCandidates);
        model.fits[i] = select_family(xs, candidates).best;
    }
    return model;
}

DiscontinuitySet mc_generate(const MonteCarloModel& model, std::size_t n) {
    if (n == 0) throw Error("generation size must be positive");
    Prng rng(model.seed);
    DiscontinuitySet out;
    out.source = Provenance{Provenance::Kind::Generated, "monte_carlo", model.seed};
    out.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        DiscontinuityRecord rec;
        rec.dip_direction =
            normalize_dip_direction(model.fit(Parameter::DipDirection).sample(rng));
        rec.dip_angle = draw_dip_angle(model.fit(Parameter::DipAngle), rng);
        rec.trace_length = draw_trace_length(model.fit(Parameter::TraceLength), rng);
        out.records.push_back(rec);
    }
    return out;
}

std::array<double, 3> silverman_bandwidths(const DiscontinuitySet& reference) {
    const double n = static_cast<double>(reference.size());
    const double scale = 1.06 * std::pow(n, -0.2);
    std::array<double, 3> bw;
    for (Parameter p : kParameters) {
        auto xs = reference.column(p);
        if (p == Parameter::TraceLength) {
            for (double& x : xs) x = std::log(x);
        }
        bw[static_cast<std::size_t>(p)] = scale * population_std(xs);
    }
    return bw;
}

SmoothedBootstrapModel fit_bootstrap(const DiscontinuitySet& reference,
                                     std::uint64_t seed) {
    validate_set(reference);
    SmoothedBootstrapModel model;
    model.reference = reference;
    model.bandwidths = silverman_bandwidths(reference);
    model.seed = seed;
    return model;
}

DiscontinuitySet bootstrap_generate(const SmoothedBootstrapModel& model, std::size_t n) {
    if (n == 0) throw Error("generation size must be positive");
    if (model.reference.records.empty()) throw EmptySample("empty reference set");
    const double bw_dir = model.bandwidths[0];
    const double bw_ang = model.bandwidths[1];
    const double bw_log_len = model.bandwidths[2];

    Prng rng(model.seed);
    DiscontinuitySet out;
    out.source = Provenance{Provenance::Kind::Generated, "bootstrap", model.seed};
    out.records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DiscontinuityRecord& base =
            model.reference.records[rng.index(model.reference.records.size())];
        DiscontinuityRecord rec;
        rec.dip_direction =
            normalize_dip_direction(base.dip_direction + bw_dir * rng.normal());

        bool accepted = false;
        for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
            const double x = base.dip_angle + bw_ang * rng.normal();
            if (x >= 0.0 && x <= 90.0) {
                rec.dip_angle = x;
                accepted = true;
                break;
            }
        }
        if (!accepted) throw RejectionOverflow("dip_angle jitter never landed in [0, 90]");

        // Log-space jitter keeps trace length positive by construction.
        rec.trace_length = std::exp(std::log(base.trace_length) + bw_log_len * rng.normal());
        out.records.push_back(rec);
    }
    return out;
}

DiscontinuitySet load_external(const ExternalSampleSource& source) {
    DiscontinuitySet set = parse_csv(source.path, source.columns);
    set.source = Provenance{Provenance::Kind::Generated, source.declared_engine, 0};
    return set;
}

}  // namespace rockgen
