#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rockgen/ddpm.hpp"
#include "rockgen/errors.hpp"
#include "rockgen/metrics.hpp"
#include "rockgen/stats.hpp"
#include "support/fixtures.hpp"

using namespace rockgen;

namespace {

// Zero-weight eps-network: predicts 0 for every input.
nn::Mlp zero_eps_net(std::size_t embed_freqs) {
    nn::Mlp net;
    net.widths = {3 + 2 * embed_freqs, 3};
    net.weights.emplace_back(3, 3 + 2 * embed_freqs);
    net.biases.push_back({0.0, 0.0, 0.0});
    net.hidden = nn::Activation::ReLU;
    net.head = nn::Head::Identity;
    return net;
}

NoiseSchedule zero_beta_schedule(std::size_t T) {
    // from_betas rejects beta = 0, so build the limit case directly.
    NoiseSchedule s;
    s.T = T;
    s.beta.assign(T, 0.0);
    s.alpha.assign(T, 1.0);
    s.alpha_bar.assign(T, 1.0);
    return s;
}

}  // namespace

TEST_CASE("linear schedule endpoints and consistency") {
    const auto s = NoiseSchedule::linear(200, 1e-4, 0.02);
    REQUIRE(s.T == 200);
    CHECK(s.beta.front() == doctest::Approx(1e-4).epsilon(1e-15));
    CHECK(s.beta.back() == doctest::Approx(0.02).epsilon(1e-15));
    double prod = 1.0;
    for (std::size_t i = 0; i < s.T; ++i) {
        CHECK(s.alpha[i] == 1.0 - s.beta[i]);
        prod *= s.alpha[i];
        CHECK(s.alpha_bar[i] == doctest::Approx(prod).epsilon(1e-15));
        if (i > 0) CHECK(s.alpha_bar[i] < s.alpha_bar[i - 1]);
    }
}

TEST_CASE("from_betas validates its input") {
    CHECK_THROWS(NoiseSchedule::from_betas({}));
    CHECK_THROWS(NoiseSchedule::from_betas({0.0, 0.1}));
    CHECK_THROWS(NoiseSchedule::from_betas({0.1, 1.0}));
    CHECK_THROWS(NoiseSchedule::from_betas({0.2, 0.1}));  // decreasing
    CHECK_NOTHROW(NoiseSchedule::from_betas({0.1, 0.1, 0.2}));
}

TEST_CASE("zero-noise limit leaves x0 unchanged") {
    const auto s = zero_beta_schedule(5);
    const std::array<double, 3> x0 = {0.4, -1.2, 2.0};
    const std::array<double, 3> noise = {3.0, -5.0, 7.0};
    for (std::size_t t = 1; t <= 5; ++t) {
        const auto xt = forward_diffuse(x0, t, noise, s);
        for (std::size_t j = 0; j < 3; ++j) CHECK(xt[j] == x0[j]);
    }
}

TEST_CASE("at large t the sample is dominated by the noise") {
    const auto s = NoiseSchedule::from_betas(std::vector<double>(50, 0.5));
    const std::array<double, 3> x0 = {10.0, -10.0, 10.0};
    const std::array<double, 3> noise = {1.0, 2.0, -1.0};
    const auto xt = forward_diffuse(x0, 50, noise, s);
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(xt[j] == doctest::Approx(noise[j]).epsilon(1e-6));
}

TEST_CASE("forward_diffuse rejects out-of-range steps") {
    const auto s = NoiseSchedule::linear(10);
    const std::array<double, 3> x0{}, noise{};
    CHECK_THROWS_AS(forward_diffuse(x0, 0, noise, s), StepOutOfRange);
    CHECK_THROWS_AS(forward_diffuse(x0, 11, noise, s), StepOutOfRange);
}

TEST_CASE("closed form equals step-by-step iteration at T = 3") {
    const auto s = NoiseSchedule::from_betas({0.1, 0.2, 0.3});
    const std::array<double, 3> x0 = {0.7, -0.4, 1.1};
    const std::array<double, 3> steps[3] = {
        {0.3, -0.9, 0.2}, {-1.1, 0.5, 0.8}, {0.6, 0.6, -1.3}};

    // iterate x_t = sqrt(1 - beta_t) x_{t-1} + sqrt(beta_t) eps_t
    std::array<double, 3> x = x0;
    std::array<double, 3> composed = {0.0, 0.0, 0.0};
    for (std::size_t t = 1; t <= 3; ++t) {
        const double a = 1.0 - s.beta[t - 1];
        for (std::size_t j = 0; j < 3; ++j) {
            x[j] = std::sqrt(a) * x[j] + std::sqrt(s.beta[t - 1]) * steps[t - 1][j];
            composed[j] = std::sqrt(a) * composed[j] +
                          std::sqrt(s.beta[t - 1]) * steps[t - 1][j];
        }
        // the iterated noise, renormalized, is the equivalent single draw
        const double ab = s.alpha_bar[t - 1];
        std::array<double, 3> eff;
        for (std::size_t j = 0; j < 3; ++j)
            eff[j] = composed[j] / std::sqrt(1.0 - ab);
        const auto closed = forward_diffuse(x0, t, eff, s);
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(closed[j] == doctest::Approx(x[j]).epsilon(1e-12));
    }
}

TEST_CASE("forward kernel variance matches 1 - alpha_bar for x0 = 0") {
    const auto s = NoiseSchedule::linear(200);
    Prng rng(88);
    const std::array<double, 3> x0 = {0.0, 0.0, 0.0};
    for (std::size_t t : {50u, 200u}) {
        const std::size_t n = 10000;
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::array<double, 3> e = {rng.normal(), rng.normal(), rng.normal()};
            const auto xt = forward_diffuse(x0, t, e, s);
            sq += xt[0] * xt[0];
        }
        const double var = sq / n;
        const double expected = 1.0 - s.alpha_bar[t - 1];
        // Var of a chi-square-ish estimator: SE = expected * sqrt(2/n)
        CHECK(std::abs(var - expected) < 3.0 * expected * std::sqrt(2.0 / n));
    }
}

TEST_CASE("time embedding has the documented layout") {
    const auto emb = embed_time(50, 200, 8);
    REQUIRE(emb.size() == 16);
    const double phase = 2.0 * M_PI * 0.25;
    for (std::size_t k = 0; k < 8; ++k) {
        const double f = std::pow(2.0, double(k));
        CHECK(emb[2 * k] == doctest::Approx(std::sin(f * phase)).epsilon(1e-12));
        CHECK(emb[2 * k + 1] == doctest::Approx(std::cos(f * phase)).epsilon(1e-12));
    }
}

TEST_CASE("loss of a zero network equals the noise energy") {
    DdpmModel model;
    model.embed_freqs = 8;
    model.schedule = NoiseSchedule::linear(200);
    model.eps_net = zero_eps_net(8);

    SUBCASE("expectation is 3 over many draws") {
        nn::Matrix x0(1000, 3);
        Prng init(1);
        for (double& v : x0.data) v = init.normal();
        Prng rng(2);
        const double loss = ddpm_loss(model, x0, rng);
        CHECK(std::abs(loss - 3.0) < 0.3);
    }

    SUBCASE("single fixed case matches hand arithmetic") {
        nn::Matrix x0(1, 3);
        x0.data = {0.5, -0.5, 1.0};
        Prng rng(7);
        // replay the loss's own draws: one timestep index, then three normals
        Prng replay(7);
        (void)replay.index(model.schedule.T);
        const double e0 = replay.normal();
        const double e1 = replay.normal();
        const double e2 = replay.normal();
        const double loss = ddpm_loss(model, x0, rng);
        CHECK(loss == doctest::Approx(e0 * e0 + e1 * e1 + e2 * e2).epsilon(1e-12));
    }
}

TEST_CASE("zero-step training returns the seeded initialization") {
    const auto data = testfix::correlated_set("ddpm_init", 100, 0.0, 4);
    DdpmTrainConfig cfg;
    cfg.steps = 0;
    const auto model = train_ddpm(data, cfg, 55);

    Prng rng(55);
    const auto net = nn::init_mlp({3 + 2 * cfg.embed_freqs, 64, 64, 3},
                                  nn::Activation::ReLU, nn::Head::Identity, rng);
    REQUIRE(model.eps_net.widths == net.widths);
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        CHECK(model.eps_net.weights[k].data == net.weights[k].data);
        CHECK(model.eps_net.biases[k] == net.biases[k]);
    }
}

TEST_CASE("training loss decreases") {
    const auto data = testfix::correlated_set("ddpm_loss", 300, -0.4, 66);
    DdpmTrainConfig cfg;
    cfg.steps = 400;
    std::vector<double> log;
    train_ddpm(data, cfg, 21, &log);
    REQUIRE(log.size() >= 100);
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < 50; ++i) head += log[i];
    for (std::size_t i = log.size() - 50; i < log.size(); ++i) tail += log[i];
    CHECK(tail < head);
}

TEST_CASE("near-identity single reverse step with a perfect zero-noise net") {
    DdpmModel model;
    model.embed_freqs = 8;
    model.schedule = NoiseSchedule::from_betas({1e-9});
    model.eps_net = zero_eps_net(8);
    model.stdz.mean = {0.0, 45.0, 0.0};
    model.stdz.std_dev = {1.0, 1.0, 1.0};
    model.seed = 0;

    // with T=1 and tiny beta, x_0 ~= x_T; reproduce x_T from the seed
    const auto set = ddpm_sample(model, 4, 123);
    REQUIRE(set.size() == 4);
    Prng rng(123);
    for (std::size_t i = 0; i < 4; ++i) {
        std::array<double, 3> xt = {rng.normal(), rng.normal(), rng.normal()};
        const auto raw = model.stdz.destandardize_row(xt);
        CHECK(set.records[i].dip_direction ==
              doctest::Approx(normalize_dip_direction(raw[0])).epsilon(1e-6));
        CHECK(set.records[i].dip_angle == doctest::Approx(raw[1]).epsilon(1e-6));
        CHECK(set.records[i].trace_length == doctest::Approx(raw[2]).epsilon(1e-6));
    }
}

TEST_CASE("sampling is deterministic and valid") {
    const auto data = testfix::correlated_set("ddpm_det", 120, 0.2, 8);
    DdpmTrainConfig cfg;
    cfg.steps = 50;
    const auto model = train_ddpm(data, cfg, 5);
    const auto a = ddpm_sample(model, 4, 9);
    const auto b = ddpm_sample(model, 4, 9);
    REQUIRE(a.size() == 4);
    validate_set(a);
    CHECK(a.source.engine == "ddpm");
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.records[i].dip_direction == b.records[i].dip_direction);
        CHECK(a.records[i].dip_angle == b.records[i].dip_angle);
        CHECK(a.records[i].trace_length == b.records[i].trace_length);
    }
}

TEST_CASE("trained model recovers a near-degenerate spread") {
    // two effectively constant columns plus one varying column
    DiscontinuitySet data;
    data.name = "ddpm_1d";
    Prng rng(314);
    for (int i = 0; i < 500; ++i) {
        DiscontinuityRecord rec;
        rec.dip_direction = 180.0;
        rec.dip_angle = std::clamp(45.0 + 8.0 * rng.normal(), 0.0, 90.0);
        rec.trace_length = 2.0;
        data.records.push_back(rec);
    }
    DdpmTrainConfig cfg;
    cfg.steps = 2000;
    const auto model = train_ddpm(data, cfg, 41);
    const auto gen = ddpm_sample(model, 5000, 11);
    const auto so = summary_stats(data);
    const auto sg = summary_stats(gen);
    CHECK(std::abs(sg[Parameter::DipAngle].std_dev - so[Parameter::DipAngle].std_dev) /
              so[Parameter::DipAngle].std_dev <
          0.15);
}
