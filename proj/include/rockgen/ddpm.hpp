// Tabular denoising diffusion model: forward noising with a linear beta
// schedule, noise-prediction training, ancestral reverse sampling.

#ifndef ROCKGEN_DDPM_HPP
#define ROCKGEN_DDPM_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "rockgen/nn.hpp"
#include "rockgen/standardize.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

struct NoiseSchedule {
    std::size_t T = 0;
    std::vector<double> beta;       // beta[t-1] for t in 1..T; non-decreasing
    std::vector<double> alpha;      // 1 - beta_t
    std::vector<double> alpha_bar;  // prod_{s<=t} alpha_s

    static NoiseSchedule linear(std::size_t T = 200, double beta_start = 1e-4,
                                double beta_end = 0.02);
    // Derives alpha / alpha_bar from an explicit beta list, validating it.
    static NoiseSchedule from_betas(std::vector<double> betas);
};

struct DdpmModel {
    nn::Mlp eps_net;  // input 3 + 2*embed_freqs -> 3, identity head
    NoiseSchedule schedule;
    std::size_t embed_freqs = 8;
    Standardizer stdz;
    std::uint64_t seed = 0;
};

struct DdpmTrainConfig {
    std::size_t steps = 3000;
    double lr = 1e-3;
    std::size_t T = 200;
    double beta_start = 1e-4;
    double beta_end = 0.02;
    std::vector<std::size_t> hidden = {64, 64};
    std::size_t embed_freqs = 8;
    std::size_t batch_cap = 512;
    std::size_t log_every = 1;
};

// Sinusoidal embedding of t/T: [sin(2^k * 2*pi * t/T), cos(...)] for
// k = 0..freqs-1.
std::vector<double> embed_time(std::size_t t, std::size_t T, std::size_t freqs);

// Closed-form jump: x_t = sqrt(alpha_bar_t) * x0 + sqrt(1 - alpha_bar_t) * noise.
std::array<double, 3> forward_diffuse(const std::array<double, 3>& x0, std::size_t t,
                                      const std::array<double, 3>& noise,
                                      const NoiseSchedule& schedule);

// Mean ||eps - eps_theta(x_t, t)||^2 over the batch, with t uniform on 1..T
// and eps ~ N(0, I) drawn from `rng`.
double ddpm_loss(const DdpmModel& model, const nn::Matrix& x0_batch, Prng& rng);

DdpmModel train_ddpm(const DiscontinuitySet& data, const DdpmTrainConfig& cfg,
                     std::uint64_t seed, std::vector<double>* loss_log = nullptr);

// Ancestral sampling from x_T ~ N(0, I) down to x_0; no noise added at t = 1.
DiscontinuitySet ddpm_sample(const DdpmModel& model, std::size_t n, std::uint64_t seed);

}  // namespace rockgen

#endif
