#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rockgen/errors.hpp"
#include "rockgen/generators.hpp"
#include "rockgen/metrics.hpp"
#include "rockgen/stats.hpp"
#include "support/fixtures.hpp"

using namespace rockgen;

namespace {

bool sets_equal(const DiscontinuitySet& a, const DiscontinuitySet& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.records[i].dip_direction != b.records[i].dip_direction) return false;
        if (a.records[i].dip_angle != b.records[i].dip_angle) return false;
        if (a.records[i].trace_length != b.records[i].trace_length) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("mc_generate is bit-deterministic") {
    const auto data = testfix::correlated_set("det", 300, -0.5, 17);
    const auto model = fit_monte_carlo(data, 555);
    const auto a = mc_generate(model, 5);
    const auto b = mc_generate(model, 5);
    CHECK(a.size() == 5);
    CHECK(sets_equal(a, b));
    CHECK(a.source.kind == Provenance::Kind::Generated);
    CHECK(a.source.engine == "monte_carlo");
    CHECK(a.source.seed == 555);
}

TEST_CASE("mc_generate with a degenerate forced marginal is constant") {
    MonteCarloModel model;
    model.seed = 1;
    model.fits[0] = {Family::Normal, 185.0, 10.0, 0, 0.0};
    model.fits[1] = {Family::Normal, 45.0, 0.0, 0, 0.0};  // zero-variance limit
    model.fits[2] = {Family::LogNormal, 0.5, 0.2, 0, 0.0};
    const auto set = mc_generate(model, 50);
    for (const auto& rec : set.records) CHECK(rec.dip_angle == 45.0);
}

TEST_CASE("mc_generate reproduces fitted moments within 2%") {
    const auto data = testfix::correlated_set("moments", 766, -0.69, 4242);
    const auto model = fit_monte_carlo(data, 808);
    const auto gen = mc_generate(model, 10000);
    const auto s = summary_stats(gen);
    for (Parameter p : kParameters) {
        const auto& fit = model.fit(p);
        CHECK(std::abs(s[p].mean - fit.model_mean()) / fit.model_mean() < 0.02);
        CHECK(std::abs(s[p].std_dev - fit.model_std()) / fit.model_std() < 0.02);
    }
}

TEST_CASE("mc_generate output satisfies the domain invariants") {
    const auto data = testfix::correlated_set("ranges", 200, 0.0, 3);
    const auto gen = mc_generate(fit_monte_carlo(data, 9), 2000);
    for (const auto& rec : gen.records) {
        CHECK(rec.dip_direction >= 0.0);
        CHECK(rec.dip_direction < 360.0);
        CHECK(rec.dip_angle >= 0.0);
        CHECK(rec.dip_angle <= 90.0);
        CHECK(rec.trace_length > 0.0);
    }
}

TEST_CASE("mc_generate erases cross-parameter correlation") {
    const auto data = testfix::correlated_set("indep", 500, -0.7, 21);
    CHECK(pearson(data.column(Parameter::DipDirection),
                  data.column(Parameter::DipAngle)) == doctest::Approx(-0.7).epsilon(1e-9));
    const auto gen = mc_generate(fit_monte_carlo(data, 33), 10000);
    const double r = pearson(gen.column(Parameter::DipDirection),
                             gen.column(Parameter::DipAngle));
    CHECK(std::abs(r) < 0.1);
}

TEST_CASE("forced families override likelihood ranking") {
    const auto data = testfix::correlated_set("forced", 400, 0.0, 8);
    const auto model =
        fit_monte_carlo(data, 1, {"", "", "exponential"});
    CHECK(model.fit(Parameter::TraceLength).family == Family::Exponential);
    const auto defaulted = fit_monte_carlo(data, 1);
    CHECK(defaulted.fit(Parameter::TraceLength).family == Family::LogNormal);
}

TEST_CASE("silverman bandwidths follow the rule") {
    const auto data = testfix::correlated_set("bw", 250, 0.2, 14);
    const auto bw = silverman_bandwidths(data);
    const double factor = 1.06 * std::pow(250.0, -0.2);
    auto dirs = data.column(Parameter::DipDirection);
    CHECK(bw[0] == doctest::Approx(factor * population_std(dirs)).epsilon(1e-12));
    auto logs = data.column(Parameter::TraceLength);
    for (double& x : logs) x = std::log(x);
    CHECK(bw[2] == doctest::Approx(factor * population_std(logs)).epsilon(1e-12));
}

TEST_CASE("bootstrap with zero bandwidth is an exact resample") {
    const auto data = testfix::correlated_set("resample", 60, 0.3, 6);
    SmoothedBootstrapModel model;
    model.reference = data;
    model.bandwidths = {0.0, 0.0, 0.0};
    model.seed = 12;
    const auto gen = bootstrap_generate(model, 200);
    for (const auto& rec : gen.records) {
        bool found = false;
        for (const auto& ref : data.records) {
            if (rec.dip_direction == ref.dip_direction &&
                rec.dip_angle == ref.dip_angle &&
                rec.trace_length == ref.trace_length) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("bootstrap_generate n=1 and determinism") {
    const auto data = testfix::correlated_set("boot1", 50, 0.0, 2);
    const auto model = fit_bootstrap(data, 77);
    const auto one = bootstrap_generate(model, 1);
    REQUIRE(one.size() == 1);
    validate_set(one);
    CHECK(sets_equal(bootstrap_generate(model, 10), bootstrap_generate(model, 10)));
    CHECK(one.source.engine == "bootstrap");
}

TEST_CASE("bootstrap preserves the reference correlation") {
    const auto data = testfix::correlated_set("bootr", 10000, -0.69, 2026);
    const auto model = fit_bootstrap(data, 31);
    const auto gen = bootstrap_generate(model, 10000);
    const double r = pearson(gen.column(Parameter::DipDirection),
                             gen.column(Parameter::DipAngle));
    CHECK(std::abs(r + 0.69) < 0.08);
}

TEST_CASE("bootstrap marginals stay close to the reference") {
    const auto data = testfix::correlated_set("bootw", 2000, -0.4, 55);
    const auto model = fit_bootstrap(data, 99);
    const auto gen = bootstrap_generate(model, 2000);
    for (Parameter p : {Parameter::DipDirection, Parameter::DipAngle}) {
        const double w1 = wasserstein_1d(data.column(p), gen.column(p));
        const double bw = model.bandwidths[static_cast<std::size_t>(p)];
        CHECK(w1 <= 1.5 * bw);
    }
}

TEST_CASE("load_external validates through the standard path") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rockgen_external";
    fs::remove_all(dir);
    fs::create_directories(dir);

    SUBCASE("valid file gets the declared engine tag") {
        const auto set = testfix::correlated_set("ext", 253, 0.1, 42);
        write_csv(set, (dir / "ext.csv").string());
        ExternalSampleSource src;
        src.path = (dir / "ext.csv").string();
        src.declared_engine = "vendor_tool";
        const auto loaded = load_external(src);
        CHECK(loaded.size() == 253);
        CHECK(loaded.source.kind == Provenance::Kind::Generated);
        CHECK(loaded.source.engine == "vendor_tool");
    }
    SUBCASE("out-of-range dip angle is rejected") {
        std::ofstream out((dir / "bad.csv").string());
        out << "dip_direction,dip_angle,trace_length\n120.0,95.0,1.0\n";
        out.close();
        ExternalSampleSource src;
        src.path = (dir / "bad.csv").string();
        src.declared_engine = "vendor_tool";
        CHECK_THROWS_AS(load_external(src), InvariantViolation);
    }
    SUBCASE("empty file is rejected") {
        std::ofstream out((dir / "empty.csv").string());
        out.close();
        ExternalSampleSource src;
        src.path = (dir / "empty.csv").string();
        src.declared_engine = "vendor_tool";
        CHECK_THROWS_AS(load_external(src), EmptyFile);
    }
    fs::remove_all(dir);
}
