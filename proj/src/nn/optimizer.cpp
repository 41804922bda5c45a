#include "dare/nn/optimizer.hpp"

#include <cmath>

namespace dare::nn {

void TrainConfig::validate() const {
    if (batch_size <= 0) throw ConfigError("batch_size must be positive");
    if (epochs <= 0) throw ConfigError("epochs must be positive");
    if (warmup_epochs < 0 || warmup_epochs >= epochs) {
        throw ConfigError("warmup_epochs must lie in [0, epochs)");
    }
    if (lr_max <= 0.0) throw ConfigError("lr_max must be positive");
    if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must lie in [0, 1)");
    if (grad_clip_value <= 0.0) throw ConfigError("grad_clip_value must be positive");
    if (weight_decay < 0.0) throw ConfigError("weight_decay must be non-negative");
    if (label_smoothing < 0.0 || label_smoothing > 1.0) {
        throw ConfigError("label_smoothing must lie in [0, 1]");
    }
    if (random_erase_prob < 0.0 || random_erase_prob > 1.0) {
        throw ConfigError("random_erase_prob must lie in [0, 1]");
    }
}

double lr_schedule(const TrainConfig& cfg, int epoch) {
    cfg.validate();
    if (epoch < 0 || epoch >= cfg.epochs) throw ConfigError("epoch out of range for schedule");
    if (epoch < cfg.warmup_epochs) {
        return cfg.lr_max * static_cast<double>(epoch + 1) / cfg.warmup_epochs;
    }
    const double pi = 3.14159265358979323846264338327950288;
    const double progress = static_cast<double>(epoch - cfg.warmup_epochs) /
                            static_cast<double>(cfg.epochs - cfg.warmup_epochs);
    return cfg.lr_max * 0.5 * (1.0 + std::cos(pi * progress));
}

template <typename T>
SgdState<T> make_sgd_state(const NetShape& shape) {
    SgdState<T> s;
    s.velocity = make_params<T>(shape);
    return s;
}

template <typename T>
void sgd_step(ParamSet<T>& params, const ParamSet<T>& grads, double lr, const TrainConfig& cfg,
              SgdState<T>& state) {
    // Walk the three sets in lockstep via index; for_each keeps the order.
    std::vector<Tensor<T>*> w, v;
    std::vector<const Tensor<T>*> g;
    params.for_each([&](Tensor<T>& t) { w.push_back(&t); });
    state.velocity.for_each([&](Tensor<T>& t) { v.push_back(&t); });
    grads.for_each([&](const Tensor<T>& t) { g.push_back(&t); });
    if (w.size() != g.size() || w.size() != v.size()) {
        throw ShapeMismatchError("sgd_step: parameter/gradient/velocity layouts differ");
    }

    for (std::size_t i = 0; i < w.size(); ++i) {
        if (g[i]->size() != w[i]->size()) {
            throw ShapeMismatchError("sgd_step: gradient tensor shape mismatch");
        }
        const double norm = tensor_l2_norm(*g[i]);
        if (!std::isfinite(norm)) throw NonFiniteError("non-finite gradient in sgd_step");
        const T scale =
            norm > cfg.grad_clip_value ? static_cast<T>(cfg.grad_clip_value / norm) : T(1);

        const T wd = static_cast<T>(cfg.weight_decay);
        const T mom = static_cast<T>(cfg.momentum);
        const T step = static_cast<T>(lr);
        T* wp = w[i]->ptr();
        T* vp = v[i]->ptr();
        const T* gp = g[i]->ptr();
        const std::size_t n = w[i]->size();
        for (std::size_t j = 0; j < n; ++j) {
            vp[j] = mom * vp[j] + gp[j] * scale + wd * wp[j];
            wp[j] -= step * vp[j];
        }
    }
}

template SgdState<float> make_sgd_state<float>(const NetShape&);
template SgdState<double> make_sgd_state<double>(const NetShape&);
template void sgd_step<float>(ParamSet<float>&, const ParamSet<float>&, double,
                              const TrainConfig&, SgdState<float>&);
template void sgd_step<double>(ParamSet<double>&, const ParamSet<double>&, double,
                               const TrainConfig&, SgdState<double>&);

}  // namespace dare::nn
