#pragma once

#include <cstdint>

#include "dare/nn/net.hpp"

namespace dare::nn {

// Training hyperparameters. Defaults are the full-scale recipe; small corpora
// train fine with far fewer epochs and a lower peak rate.
struct TrainConfig {
    int batch_size = 256;
    double lr_max = 0.6;
    double momentum = 0.9;
    int epochs = 250;
    int warmup_epochs = 10;
    double grad_clip_value = 0.02;
    double weight_decay = 7e-6;
    double label_smoothing = 0.1;
    double random_erase_prob = 0.4;
    std::uint64_t seed = 0;

    void validate() const;
};

// Linear warmup to lr_max over warmup_epochs, then cosine annealing to zero
// at the final epoch:
//   warmup:  lr_max * (epoch + 1) / warmup_epochs
//   anneal:  lr_max * 0.5 * (1 + cos(pi * (epoch - W) / (E - W)))
double lr_schedule(const TrainConfig& cfg, int epoch);

// Momentum buffers, one per parameter tensor in declaration order.
template <typename T>
struct SgdState {
    ParamSet<T> velocity;
};

template <typename T>
SgdState<T> make_sgd_state(const NetShape& shape);

// One SGD-with-momentum step:
//   g_clip = clip each tensor's L2 norm to grad_clip_value
//   v      = momentum * v + g_clip + weight_decay * w
//   w      = w - lr * v
// Gradients must be pre-averaged over the batch. Throws NonFiniteError if a
// gradient tensor contains NaN or infinity.
template <typename T>
void sgd_step(ParamSet<T>& params, const ParamSet<T>& grads, double lr, const TrainConfig& cfg,
              SgdState<T>& state);

}  // namespace dare::nn
