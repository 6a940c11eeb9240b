#include "rockgen/nn.hpp"

#include <cmath>

#include "rockgen/errors.hpp"

namespace rockgen::nn {
namespace {

double activate(double x, Activation a) {
    return a == Activation::ReLU ? (x > 0.0 ? x : 0.0) : std::tanh(x);
}

double activate_grad(double pre, Activation a) {
    if (a == Activation::ReLU) return pre > 0.0 ? 1.0 : 0.0;
    const double t = std::tanh(pre);
    return 1.0 - t * t;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_shape(bool ok, const char* what) {
    if (!ok) throw ShapeMismatch(what);
}

}  // namespace

Mlp init_mlp(const std::vector<std::size_t>& widths, Activation hidden, Head head,
             Prng& rng) {
    check_shape(widths.size() >= 2, "network needs at least input and output widths");
    Mlp net;
    net.widths = widths;
    net.hidden = hidden;
    net.head = head;
    for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
        const std::size_t fan_in = widths[k];
        const std::size_t fan_out = widths[k + 1];
        double limit;
        if (hidden == Activation::ReLU) {
            limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        } else {
            limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        }
        Matrix w(fan_out, fan_in);
        for (double& x : w.data) x = rng.uniform(-limit, limit);
        net.weights.push_back(std::move(w));
        net.biases.emplace_back(fan_out, 0.0);
    }
    return net;
}

Matrix forward(const Mlp& net, const Matrix& batch, ForwardCache* cache) {
    check_shape(batch.cols == net.input_width(), "batch width != network input width");
    if (cache) {
        cache->pre.clear();
        cache->post.clear();
    }
    Matrix x = batch;
    const std::size_t L = net.layer_count();
    for (std::size_t k = 0; k < L; ++k) {
        const Matrix& w = net.weights[k];
        const auto& b = net.biases[k];
        Matrix z(x.rows, w.rows);
        for (std::size_t i = 0; i < x.rows; ++i) {
            for (std::size_t o = 0; o < w.rows; ++o) {
                double acc = b[o];
                const double* xi = &x.data[i * x.cols];
                const double* wo = &w.data[o * w.cols];
                for (std::size_t j = 0; j < w.cols; ++j) acc += xi[j] * wo[j];
                z(i, o) = acc;
            }
        }
        Matrix a = z;
        const bool is_last = k + 1 == L;
        if (is_last) {
            if (net.head == Head::Sigmoid) {
                for (double& v : a.data) v = sigmoid(v);
            }
        } else {
            for (double& v : a.data) v = activate(v, net.hidden);
        }
        if (cache) {
            cache->pre.push_back(std::move(z));
            cache->post.push_back(a);
        }
        x = std::move(a);
    }
    return x;
}

Gradients backward(const Mlp& net, const Matrix& batch, const ForwardCache& cache,
                   const Matrix& upstream) {
    const std::size_t L = net.layer_count();
    check_shape(cache.pre.size() == L, "cache does not match network depth");
    check_shape(upstream.rows == batch.rows && upstream.cols == net.output_width(),
                "upstream gradient shape mismatch");

    Gradients grads;
    grads.weights.resize(L);
    grads.biases.resize(L);

    // delta: dLoss/d(pre-activation of layer k)
    Matrix delta = upstream;
    for (std::size_t k = L; k-- > 0;) {
        const Matrix& pre = cache.pre[k];
        const bool is_last = k + 1 == L;
        if (is_last) {
            if (net.head == Head::Sigmoid) {
                const Matrix& out = cache.post[k];
                for (std::size_t i = 0; i < delta.data.size(); ++i) {
                    const double s = out.data[i];
                    delta.data[i] *= s * (1.0 - s);
                }
            }
        } else {
            for (std::size_t i = 0; i < delta.data.size(); ++i) {
                delta.data[i] *= activate_grad(pre.data[i], net.hidden);
            }
        }

        const Matrix& input = (k == 0) ? batch : cache.post[k - 1];
        const Matrix& w = net.weights[k];
        Matrix gw(w.rows, w.cols);
        std::vector<double> gb(w.rows, 0.0);
        for (std::size_t i = 0; i < input.rows; ++i) {
            const double* xi = &input.data[i * input.cols];
            const double* di = &delta.data[i * delta.cols];
            for (std::size_t o = 0; o < w.rows; ++o) {
                const double d = di[o];
                gb[o] += d;
                double* gwo = &gw.data[o * gw.cols];
                for (std::size_t j = 0; j < w.cols; ++j) gwo[j] += d * xi[j];
            }
        }
        grads.weights[k] = std::move(gw);
        grads.biases[k] = std::move(gb);

        // Propagate to the layer below (or to the input).
        Matrix below(input.rows, input.cols);
        for (std::size_t i = 0; i < input.rows; ++i) {
            const double* di = &delta.data[i * delta.cols];
            double* bi = &below.data[i * below.cols];
            for (std::size_t o = 0; o < w.rows; ++o) {
                const double d = di[o];
                const double* wo = &w.data[o * w.cols];
                for (std::size_t j = 0; j < w.cols; ++j) bi[j] += d * wo[j];
            }
        }
        if (k == 0) {
            grads.input = std::move(below);
        } else {
            delta = std::move(below);
        }
    }
    return grads;
}

AdamState init_adam(const Mlp& net, double lr) {
    AdamState st;
    st.lr = lr;
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        st.m_w.emplace_back(net.weights[k].rows, net.weights[k].cols);
        st.v_w.emplace_back(net.weights[k].rows, net.weights[k].cols);
        st.m_b.emplace_back(net.biases[k].size(), 0.0);
        st.v_b.emplace_back(net.biases[k].size(), 0.0);
    }
    return st;
}

namespace {

void adam_update(double& param, double g, double& m, double& v, const AdamState& st,
                 double corr1, double corr2) {
    if (!std::isfinite(g)) throw NonFiniteGradient("non-finite gradient in adam_step");
    m = st.beta1 * m + (1.0 - st.beta1) * g;
    v = st.beta2 * v + (1.0 - st.beta2) * g * g;
    const double m_hat = m / corr1;
    const double v_hat = v / corr2;
    param -= st.lr * m_hat / (std::sqrt(v_hat) + st.eps);
}

}  // namespace

void adam_step(Mlp& net, const Gradients& grads, AdamState& state) {
    check_shape(grads.weights.size() == net.layer_count(), "gradient depth mismatch");
    state.step += 1;
    const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        check_shape(grads.weights[k].rows == net.weights[k].rows &&
                        grads.weights[k].cols == net.weights[k].cols,
                    "weight gradient shape mismatch");
        for (std::size_t i = 0; i < net.weights[k].data.size(); ++i) {
            adam_update(net.weights[k].data[i], grads.weights[k].data[i],
                        state.m_w[k].data[i], state.v_w[k].data[i], state, corr1, corr2);
        }
        for (std::size_t i = 0; i < net.biases[k].size(); ++i) {
            adam_update(net.biases[k][i], grads.biases[k][i], state.m_b[k][i],
                        state.v_b[k][i], state, corr1, corr2);
        }
    }
}

bool all_finite(const Mlp& net) {
    for (const auto& w : net.weights) {
        for (double x : w.data) {
            if (!std::isfinite(x)) return false;
        }
    }
    for (const auto& b : net.biases) {
        for (double x : b) {
            if (!std::isfinite(x)) return false;
        }
    }
    return true;
}

}  // namespace rockgen::nn
