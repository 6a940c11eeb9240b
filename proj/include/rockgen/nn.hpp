// Minimal feed-forward substrate shared by the GAN and DDPM trainers:
// dense layers, reverse-mode gradients, Adam. Row-major matrices, batches
// as rows. Deliberately framework-free so training stays bit-deterministic.

#ifndef ROCKGEN_NN_HPP
#define ROCKGEN_NN_HPP

#include <cstddef>
#include <vector>

#include "rockgen/prng.hpp"

namespace rockgen::nn {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class Activation { ReLU, Tanh };
enum class Head { Identity, Sigmoid };

struct Mlp {
    // widths[0] = input size, widths.back() = output size.
    std::vector<std::size_t> widths;
    // weights[k]: (widths[k+1] x widths[k]); layer output = x * W^T + b.
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    Activation hidden = Activation::ReLU;
    Head head = Head::Identity;

    std::size_t input_width() const { return widths.front(); }
    std::size_t output_width() const { return widths.back(); }
    std::size_t layer_count() const { return weights.size(); }
};

// Seeded init: He-style uniform scaling for ReLU hidden layers, Xavier for
// Tanh; biases zero.
Mlp init_mlp(const std::vector<std::size_t>& widths, Activation hidden, Head head,
             Prng& rng);

struct ForwardCache {
    std::vector<Matrix> pre;   // pre-activation per layer
    std::vector<Matrix> post;  // post-activation per layer (post.back() = output)
};

// batch: (n x input_width). Returns (n x output_width).
Matrix forward(const Mlp& net, const Matrix& batch, ForwardCache* cache = nullptr);

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
    Matrix input;  // gradient w.r.t. the batch, for chaining through networks
};

// upstream: dLoss/dOutput, same shape as the forward output. Requires the
// cache from the matching forward pass.
Gradients backward(const Mlp& net, const Matrix& batch, const ForwardCache& cache,
                   const Matrix& upstream);

struct AdamState {
    std::size_t step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<Matrix> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
};

AdamState init_adam(const Mlp& net, double lr);

// Standard bias-corrected Adam update, in place. Throws NonFiniteGradient if
// any gradient entry is not finite.
void adam_step(Mlp& net, const Gradients& grads, AdamState& state);

bool all_finite(const Mlp& net);

}  // namespace rockgen::nn

#endif
