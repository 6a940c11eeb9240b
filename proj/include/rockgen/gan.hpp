// Tabular GAN over standardized discontinuity rows: an adversarially
// trained generator/discriminator pair with the classic minimax value.

#ifndef ROCKGEN_GAN_HPP
#define ROCKGEN_GAN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "rockgen/nn.hpp"
#include "rockgen/standardize.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

struct GanModel {
    nn::Mlp generator;       // z_dim -> 3, identity head
    nn::Mlp discriminator;   // 3 -> 1, sigmoid head
    std::size_t z_dim = 8;
    Standardizer stdz;
    std::uint64_t seed = 0;
};

struct GanTrainConfig {
    std::size_t epochs = 3000;
    std::size_t d_steps = 1;  // discriminator updates per generator update
    // Slower generator with a faster discriminator keeps training stable on
    // the small (n < 200) tables; equal rates tend to drift off the joint
    // correlation structure there.
    double lr_g = 1e-4;
    double lr_d = 3e-4;
    std::size_t z_dim = 8;
    std::vector<std::size_t> g_hidden = {32, 32};
    std::vector<std::size_t> d_hidden = {32, 32};
    // Saturating = literal min log(1 - D(G(z))) generator objective.
    // Default is the non-saturating max log D(G(z)) variant.
    bool saturating_generator = false;
    std::size_t batch_cap = 512;  // full batch when the dataset is smaller
    std::size_t log_every = 50;
};

struct GanTrainLog {
    std::vector<double> value;        // empirical V(D, G) at log cadence
    double final_d_real_mean = 0.0;   // mean D(x) on real data after training
};

// Empirical minimax value: mean(log D_real) + mean(log(1 - D_fake)).
double gan_value(std::span<const double> d_real, std::span<const double> d_fake);

GanModel train_gan(const DiscontinuitySet& data, const GanTrainConfig& cfg,
                   std::uint64_t seed, GanTrainLog* log = nullptr);

// z ~ N(0, I); rows de-standardized, dip_direction reduced mod 360, rows with
// out-of-range dip_angle rejected and redrawn.
DiscontinuitySet gan_generate(const GanModel& model, std::size_t n, std::uint64_t seed);

}  // namespace rockgen

#endif
