#include "rockgen/ddpm.hpp"

#include <cmath>

#include "rockgen/errors.hpp"
#include "rockgen/generators.hpp"

namespace rockgen {

NoiseSchedule NoiseSchedule::linear(std::size_t T, double beta_start, double beta_end) {
    std::vector<double> betas(T);
    for (std::size_t i = 0; i < T; ++i) {
        const double frac = T == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(T - 1);
        betas[i] = beta_start + frac * (beta_end - beta_start);
    }
    return from_betas(std::move(betas));
}

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
    if (betas.empty()) throw Error("noise schedule needs at least one step");
    NoiseSchedule s;
    s.T = betas.size();
    s.beta = std::move(betas);
    s.alpha.resize(s.T);
    s.alpha_bar.resize(s.T);
    double prod = 1.0;
    for (std::size_t i = 0; i < s.T; ++i) {
        const double b = s.beta[i];
        if (!(b > 0.0 && b < 1.0)) {
            throw Error("beta_" + std::to_string(i + 1) + " = " + std::to_string(b) +
                        " outside (0, 1)");
        }
        if (i > 0 && b < s.beta[i - 1]) {
            throw Error("beta schedule must be non-decreasing");
        }
        s.alpha[i] = 1.0 - b;
        prod *= s.alpha[i];
        s.alpha_bar[i] = prod;
    }
    return s;
}

std::vector<double> embed_time(std::size_t t, std::size_t T, std::size_t freqs) {
    std::vector<double> emb(2 * freqs);
    const double phase = 2.0 * M_PI * static_cast<double>(t) / static_cast<double>(T);
    double freq = 1.0;
    for (std::size_t k = 0; k < freqs; ++k) {
        emb[2 * k] = std::sin(freq * phase);
        emb[2 * k + 1] = std::cos(freq * phase);
        freq *= 2.0;
    }
    return emb;
}

std::array<double, 3> forward_diffuse(const std::array<double, 3>& x0, std::size_t t,
                                      const std::array<double, 3>& noise,
                                      const NoiseSchedule& schedule) {
    if (t < 1 || t > schedule.T) {
        throw StepOutOfRange("t = " + std::to_string(t) + " outside 1.." +
                             std::to_string(schedule.T));
    }
    const double ab = schedule.alpha_bar[t - 1];
    const double scale_x = std::sqrt(ab);
    const double scale_e = std::sqrt(1.0 - ab);
    return {scale_x * x0[0] + scale_e * noise[0], scale_x * x0[1] + scale_e * noise[1],
            scale_x * x0[2] + scale_e * noise[2]};
}

namespace {

// Assembles the (batch x 3+emb) network input for per-row timesteps.
nn::Matrix build_input(const nn::Matrix& x, const std::vector<std::size_t>& ts,
                       const NoiseSchedule& schedule, std::size_t freqs) {
    nn::Matrix in(x.rows, 3 + 2 * freqs);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < 3; ++j) in(i, j) = x(i, j);
        const auto emb = embed_time(ts[i], schedule.T, freqs);
        for (std::size_t j = 0; j < emb.size(); ++j) in(i, 3 + j) = emb[j];
    }
    return in;
}

struct NoisyBatch {
    nn::Matrix input;   // network input
    nn::Matrix eps;     // injected noise (batch x 3)
};

NoisyBatch make_noisy_batch(const nn::Matrix& x0, const NoiseSchedule& schedule,
                            std::size_t freqs, Prng& rng) {
    const std::size_t b = x0.rows;
    nn::Matrix xt(b, 3);
    nn::Matrix eps(b, 3);
    std::vector<std::size_t> ts(b);
    for (std::size_t i = 0; i < b; ++i) {
        ts[i] = 1 + rng.index(schedule.T);
        std::array<double, 3> e{rng.normal(), rng.normal(), rng.normal()};
        const std::array<double, 3> row{x0(i, 0), x0(i, 1), x0(i, 2)};
        const auto noisy = forward_diffuse(row, ts[i], e, schedule);
        for (std::size_t j = 0; j < 3; ++j) {
            xt(i, j) = noisy[j];
            eps(i, j) = e[j];
        }
    }
    return {build_input(xt, ts, schedule, freqs), std::move(eps)};
}

nn::Matrix sample_rows(const nn::Matrix& data, std::size_t count, Prng& rng) {
    nn::Matrix out(count, data.cols);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t r = rng.index(data.rows);
        for (std::size_t j = 0; j < data.cols; ++j) out(i, j) = data(r, j);
    }
    return out;
}

// Runs the full reverse chain for `m` rows; returns standardized x_0 rows.
nn::Matrix reverse_chain(const DdpmModel& model, std::size_t m, Prng& rng) {
    const NoiseSchedule& s = model.schedule;
    nn::Matrix x(m, 3);
    for (double& v : x.data) v = rng.normal();  // x_T ~ N(0, I)

    std::vector<std::size_t> ts(m);
    for (std::size_t t = s.T; t >= 1; --t) {
        std::fill(ts.begin(), ts.end(), t);
        const nn::Matrix input = build_input(x, ts, s, model.embed_freqs);
        const nn::Matrix pred = nn::forward(model.eps_net, input);

        const double a = s.alpha[t - 1];
        const double ab = s.alpha_bar[t - 1];
        const double beta = s.beta[t - 1];
        const double inv_sqrt_a = 1.0 / std::sqrt(a);
        const double eps_coef = beta / std::sqrt(1.0 - ab);
        const double noise_scale = t > 1 ? std::sqrt(beta) : 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                double v = inv_sqrt_a * (x(i, j) - eps_coef * pred(i, j));
                if (noise_scale > 0.0) v += noise_scale * rng.normal();
                x(i, j) = v;
            }
        }
    }
    return x;
}

}  // namespace

double ddpm_loss(const DdpmModel& model, const nn::Matrix& x0_batch, Prng& rng) {
    if (x0_batch.rows == 0) throw EmptySample("ddpm_loss needs a non-empty batch");
    const NoisyBatch nb = make_noisy_batch(x0_batch, model.schedule, model.embed_freqs, rng);
    const nn::Matrix pred = nn::forward(model.eps_net, nb.input);
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double d = pred.data[i] - nb.eps.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(x0_batch.rows);
}

DdpmModel train_ddpm(const DiscontinuitySet& data, const DdpmTrainConfig& cfg,
                     std::uint64_t seed, std::vector<double>* loss_log) {
    if (data.size() < 2) throw Error("train_ddpm needs at least 2 records");

    Prng rng(seed);
    DdpmModel model;
    model.seed = seed;
    model.embed_freqs = cfg.embed_freqs;
    model.schedule = NoiseSchedule::linear(cfg.T, cfg.beta_start, cfg.beta_end);
    model.stdz = Standardizer::fit(data);

    std::vector<std::size_t> widths = {3 + 2 * cfg.embed_freqs};
    widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
    widths.push_back(3);
    model.eps_net = nn::init_mlp(widths, nn::Activation::ReLU, nn::Head::Identity, rng);

    const nn::Matrix x0_all = model.stdz.standardize(data);
    const bool full_batch = x0_all.rows <= cfg.batch_cap;

    nn::AdamState adam = nn::init_adam(model.eps_net, cfg.lr);
    for (std::size_t step = 0; step < cfg.steps; ++step) {
        const nn::Matrix x0 =
            full_batch ? x0_all : sample_rows(x0_all, cfg.batch_cap, rng);
        const NoisyBatch nb =
            make_noisy_batch(x0, model.schedule, model.embed_freqs, rng);

        nn::ForwardCache cache;
        const nn::Matrix pred = nn::forward(model.eps_net, nb.input, &cache);

        const double inv_b = 1.0 / static_cast<double>(x0.rows);
        nn::Matrix upstream(pred.rows, pred.cols);
        double loss = 0.0;
        for (std::size_t i = 0; i < pred.data.size(); ++i) {
            const double d = pred.data[i] - nb.eps.data[i];
            loss += d * d;
            upstream.data[i] = 2.0 * d * inv_b;
        }
        loss *= inv_b;
        if (loss_log && step % cfg.log_every == 0) loss_log->push_back(loss);

        const nn::Gradients grads = nn::backward(model.eps_net, nb.input, cache, upstream);
        nn::adam_step(model.eps_net, grads, adam);
        if (!nn::all_finite(model.eps_net)) {
            throw NonFiniteGradient("eps-network became non-finite at step " +
                                    std::to_string(step));
        }
    }
    return model;
}

DiscontinuitySet ddpm_sample(const DdpmModel& model, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw Error("generation size must be positive");
    Prng rng(seed);
    DiscontinuitySet out;
    out.source = Provenance{Provenance::Kind::Generated, "ddpm", seed};
    out.records.reserve(n);

    std::size_t remaining = n;
    int rounds = 0;
    while (remaining > 0) {
        if (++rounds > kMaxRejections) {
            throw RejectionOverflow("ddpm_sample: rejection rounds exhausted");
        }
        const nn::Matrix x = reverse_chain(model, remaining, rng);
        for (std::size_t i = 0; i < x.rows; ++i) {
            const auto raw = model.stdz.destandardize_row({x(i, 0), x(i, 1), x(i, 2)});
            if (raw[1] < 0.0 || raw[1] > 90.0) continue;
            if (!(raw[2] > 0.0) || !std::isfinite(raw[2])) continue;
            DiscontinuityRecord rec;
            rec.dip_direction = normalize_dip_direction(raw[0]);
            rec.dip_angle = raw[1];
            rec.trace_length = raw[2];
            out.records.push_back(rec);
        }
        remaining = n - out.records.size();
    }
    return out;
}

}  // namespace rockgen
