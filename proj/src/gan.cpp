#include "rockgen/gan.hpp"

#include <cmath>

#include "rockgen/errors.hpp"
#include "rockgen/generators.hpp"

namespace rockgen {
namespace {

constexpr double kProbClamp = 1e-7;

double clamp_prob(double d) {
    if (d < kProbClamp) return kProbClamp;
    if (d > 1.0 - kProbClamp) return 1.0 - kProbClamp;
    return d;
}

nn::Matrix sample_latent(std::size_t n, std::size_t z_dim, Prng& rng) {
    nn::Matrix z(n, z_dim);
    for (double& v : z.data) v = rng.normal();
    return z;
}

nn::Matrix sample_rows(const nn::Matrix& data, std::size_t count, Prng& rng) {
    nn::Matrix out(count, data.cols);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t r = rng.index(data.rows);
        for (std::size_t j = 0; j < data.cols; ++j) out(i, j) = data(r, j);
    }
    return out;
}

void accumulate(nn::Gradients& into, const nn::Gradients& from) {
    for (std::size_t k = 0; k < into.weights.size(); ++k) {
        for (std::size_t i = 0; i < into.weights[k].data.size(); ++i) {
            into.weights[k].data[i] += from.weights[k].data[i];
        }
        for (std::size_t i = 0; i < into.biases[k].size(); ++i) {
            into.biases[k][i] += from.biases[k][i];
        }
    }
}

}  // namespace

double gan_value(std::span<const double> d_real, std::span<const double> d_fake) {
    if (d_real.empty() || d_fake.empty()) throw EmptySample("gan_value needs both batches");
    double sum_real = 0.0;
    for (double d : d_real) {
        if (!(d > 0.0 && d < 1.0)) {
            throw ProbabilityOutOfRange("discriminator output outside (0, 1)");
        }
        sum_real += std::log(d);
    }
    double sum_fake = 0.0;
    for (double d : d_fake) {
        if (!(d > 0.0 && d < 1.0)) {
            throw ProbabilityOutOfRange("discriminator output outside (0, 1)");
        }
        sum_fake += std::log(1.0 - d);
    }
    return sum_real / static_cast<double>(d_real.size()) +
           sum_fake / static_cast<double>(d_fake.size());
}

GanModel train_gan(const DiscontinuitySet& data, const GanTrainConfig& cfg,
                   std::uint64_t seed, GanTrainLog* log) {
    if (data.size() < 2) throw Error("train_gan needs at least 2 records");

    Prng rng(seed);
    GanModel model;
    model.z_dim = cfg.z_dim;
    model.seed = seed;
    model.stdz = Standardizer::fit(data);

    std::vector<std::size_t> g_widths = {cfg.z_dim};
    g_widths.insert(g_widths.end(), cfg.g_hidden.begin(), cfg.g_hidden.end());
    g_widths.push_back(3);
    model.generator = nn::init_mlp(g_widths, nn::Activation::ReLU, nn::Head::Identity, rng);

    std::vector<std::size_t> d_widths = {3};
    d_widths.insert(d_widths.end(), cfg.d_hidden.begin(), cfg.d_hidden.end());
    d_widths.push_back(1);
    model.discriminator =
        nn::init_mlp(d_widths, nn::Activation::ReLU, nn::Head::Sigmoid, rng);

    const nn::Matrix real_all = model.stdz.standardize(data);
    const bool full_batch = real_all.rows <= cfg.batch_cap;
    const std::size_t batch = full_batch ? real_all.rows : cfg.batch_cap;

    nn::AdamState adam_g = nn::init_adam(model.generator, cfg.lr_g);
    nn::AdamState adam_d = nn::init_adam(model.discriminator, cfg.lr_d);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Discriminator ascent, generator frozen.
        for (std::size_t ds = 0; ds < cfg.d_steps; ++ds) {
            const nn::Matrix real =
                full_batch ? real_all : sample_rows(real_all, batch, rng);
            const nn::Matrix z = sample_latent(batch, cfg.z_dim, rng);
            const nn::Matrix fake = nn::forward(model.generator, z);

            nn::ForwardCache cache_r, cache_f;
            const nn::Matrix d_real = nn::forward(model.discriminator, real, &cache_r);
            const nn::Matrix d_fake = nn::forward(model.discriminator, fake, &cache_f);

            const double inv_m = 1.0 / static_cast<double>(batch);
            nn::Matrix up_real(batch, 1), up_fake(batch, 1);
            for (std::size_t i = 0; i < batch; ++i) {
                // loss_D = -[mean log D(x) + mean log(1 - D(G(z)))]
                up_real(i, 0) = -inv_m / clamp_prob(d_real(i, 0));
                up_fake(i, 0) = inv_m / (1.0 - clamp_prob(d_fake(i, 0)));
            }
            nn::Gradients gd = nn::backward(model.discriminator, real, cache_r, up_real);
            accumulate(gd, nn::backward(model.discriminator, fake, cache_f, up_fake));
            nn::adam_step(model.discriminator, gd, adam_d);
        }

        // Generator step, discriminator frozen.
        {
            const nn::Matrix z = sample_latent(batch, cfg.z_dim, rng);
            nn::ForwardCache cache_g, cache_d;
            const nn::Matrix fake = nn::forward(model.generator, z, &cache_g);
            const nn::Matrix d_fake = nn::forward(model.discriminator, fake, &cache_d);

            const double inv_m = 1.0 / static_cast<double>(batch);
            nn::Matrix up(batch, 1);
            for (std::size_t i = 0; i < batch; ++i) {
                const double d = clamp_prob(d_fake(i, 0));
                if (cfg.saturating_generator) {
                    // minimize mean log(1 - D(G(z)))
                    up(i, 0) = -inv_m / (1.0 - d);
                } else {
                    // non-saturating: minimize -mean log D(G(z))
                    up(i, 0) = -inv_m / d;
                }
            }
            const nn::Gradients gd =
                nn::backward(model.discriminator, fake, cache_d, up);
            const nn::Gradients gg =
                nn::backward(model.generator, z, cache_g, gd.input);
            nn::adam_step(model.generator, gg, adam_g);
        }

        const bool last = epoch + 1 == cfg.epochs;
        if (log && (epoch % cfg.log_every == 0 || last)) {
            const nn::Matrix z = sample_latent(batch, cfg.z_dim, rng);
            const nn::Matrix fake = nn::forward(model.generator, z);
            nn::Matrix d_real = nn::forward(model.discriminator, real_all);
            nn::Matrix d_fake = nn::forward(model.discriminator, fake);
            for (double& d : d_real.data) d = clamp_prob(d);
            for (double& d : d_fake.data) d = clamp_prob(d);
            const double v = gan_value(d_real.data, d_fake.data);
            if (std::abs(v) > 50.0) {
                throw DivergenceDetected("|V(D,G)| = " + std::to_string(v));
            }
            log->value.push_back(v);
            if (last) {
                double acc = 0.0;
                for (double d : d_real.data) acc += d;
                log->final_d_real_mean = acc / static_cast<double>(d_real.data.size());
            }
        }
        if (!nn::all_finite(model.generator) || !nn::all_finite(model.discriminator)) {
            throw NonFiniteGradient("network parameters became non-finite at epoch " +
                                    std::to_string(epoch));
        }
    }
    return model;
}

DiscontinuitySet gan_generate(const GanModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error("generation size must be positive");
    Prng rng(seed);
    DiscontinuitySet out;
    out.source = Provenance{Provenance::Kind::Generated, "gan", seed};
    out.records.reserve(n);

    nn::Matrix z(1, model.z_dim);
    for (std::size_t i = 0; i < n; ++i) {
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
            for (double& v : z.data) v = rng.normal();
            const nn::Matrix row = nn::forward(model.generator, z);
            const auto raw =
                model.stdz.destandardize_row({row(0, 0), row(0, 1), row(0, 2)});
            if (raw[1] < 0.0 || raw[1] > 90.0) continue;
            if (!(raw[2] > 0.0) || !std::isfinite(raw[2])) continue;
            DiscontinuityRecord rec;
            rec.dip_direction = normalize_dip_direction(raw[0]);
            rec.dip_angle = raw[1];
            rec.trace_length = raw[2];
            out.records.push_back(rec);
            accepted = true;
            break;
        }
        if (!accepted) {
            throw RejectionOverflow("gan_generate: no valid row after " +
                                    std::to_string(kMaxRejections) + " draws");
        }
    }
    return out;
}

}  // namespace rockgen
