#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dare/nn/tensor.hpp"
#include "dare/rng.hpp"

namespace dare::nn {

// One strided convolution block: conv (same-padding, stride downsamples)
// followed by ReLU.
struct ConvBlockSpec {
    int filters = 0;
    int kernel = 3;
    int stride = 2;

    bool operator==(const ConvBlockSpec&) const = default;
};

// Architecture of the generic backbone: conv blocks, global average pooling,
// one fully connected feature layer with ReLU and dropout, then independent
// linear classifier heads. head_dims carries the class count of each head.
struct NetShape {
    int in_channels = 1;
    int in_height = 0;
    int in_width = 0;
    std::vector<ConvBlockSpec> blocks;
    int feature_dim = 0;
    double dropout_prob = 0.0;
    std::vector<int> head_dims;

    void validate() const;
    int last_channels() const;

    struct BlockDims {
        int in_c = 0, in_h = 0, in_w = 0;
        int out_c = 0, out_h = 0, out_w = 0;
        int kernel = 0, stride = 0, pad = 0;
        std::size_t cols_size() const {
            return static_cast<std::size_t>(in_c) * kernel * kernel * out_h * out_w;
        }
    };
    std::vector<BlockDims> block_dims() const;

    bool operator==(const NetShape&) const = default;
};

// All learnable tensors, in a fixed declaration order (conv weight/bias per
// block, then fc weight/bias, then head weight/bias per head). Optimizer
// state, gradients, and checkpoints all iterate tensors in this order.
template <typename T>
struct ParamSet {
    std::vector<Tensor<T>> conv_w, conv_b;
    Tensor<T> fc_w, fc_b;
    std::vector<Tensor<T>> head_w, head_b;

    template <typename F>
    void for_each(F&& f) {
        for (std::size_t b = 0; b < conv_w.size(); ++b) {
            f(conv_w[b]);
            f(conv_b[b]);
        }
        f(fc_w);
        f(fc_b);
        for (std::size_t h = 0; h < head_w.size(); ++h) {
            f(head_w[h]);
            f(head_b[h]);
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t b = 0; b < conv_w.size(); ++b) {
            f(conv_w[b]);
            f(conv_b[b]);
        }
        f(fc_w);
        f(fc_b);
        for (std::size_t h = 0; h < head_w.size(); ++h) {
            f(head_w[h]);
            f(head_b[h]);
        }
    }

    std::size_t param_count() const {
        std::size_t n = 0;
        for_each([&](const Tensor<T>& t) { n += t.size(); });
        return n;
    }

    void zero() {
        for_each([](Tensor<T>& t) { t.fill(T(0)); });
    }
};

// Zero-initialised parameters with the right shapes for a net.
template <typename T>
ParamSet<T> make_params(const NetShape& shape);

// Fills parameters with fan-in-scaled normal weights (He initialisation for
// the ReLU layers) and zero biases, deterministically from the seed.
template <typename T>
void init_params(ParamSet<T>& params, const NetShape& shape, std::uint64_t seed);

template <typename T>
struct ConvNet {
    NetShape shape;
    ParamSet<T> params;
};

template <typename T>
ConvNet<T> make_net(const NetShape& shape, std::uint64_t seed);

// Intermediate activations recorded during a forward pass so backward can
// run without recomputation. One trace per in-flight sample.
template <typename T>
struct NetTrace {
    std::vector<Tensor<T>> block_in;        // input image, then each block's output
    std::vector<std::vector<T>> cols;       // im2col buffers
    std::vector<T> pooled;                  // global average pool output
    std::vector<T> fc_z;                    // pre-ReLU feature layer
    std::vector<T> feat;                    // features after ReLU and dropout
    std::vector<T> drop_scale;              // per-unit dropout scale (1/(1-p) or 0)
};

// Runs the net on one image (flat [channels * height * width], row-major,
// values in [0, 1]) and returns per-head logits. In train mode dropout is
// sampled from dropout_rng (required); in eval mode dropout is the identity.
// Pass a trace to enable a subsequent backward call.
template <typename T>
std::vector<std::vector<T>> net_forward(const ConvNet<T>& net, std::span<const T> image,
                                        bool train_mode, Rng* dropout_rng,
                                        NetTrace<T>* trace);

// Accumulates parameter gradients for one sample into grads (+=). dlogits
// must match the head layout of the forward call that produced the trace.
template <typename T>
void net_backward(const ConvNet<T>& net, const NetTrace<T>& trace,
                  const std::vector<std::vector<T>>& dlogits, ParamSet<T>& grads);

}  // namespace dare::nn
