#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "dare/corpus/dataset.hpp"
#include "dare/nn/model.hpp"
#include "dare/nn/optimizer.hpp"

namespace dare::nn {

struct EpochStats {
    int epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;      // mean sequence loss, train-mode forward
    double train_seq_acc = 0.0;   // argmax accuracy under dropout/augmentation
    std::optional<double> val_seq_acc;
};

// One generic training sample: an image plus one target class per head.
struct TrainSample {
    const ImageU8* image = nullptr;
    std::vector<int> targets;
};

// Optional per-epoch evaluation hook; the returned value lands in
// EpochStats::val_seq_acc.
using EvalHook = std::function<double(int epoch)>;

// Core SGD loop over a generic head layout. Deterministic in cfg.seed for a
// fixed dataset: sample order, augmentation, dropout, and the gradient
// reduction order do not depend on thread count (gradients accumulate in
// fixed chunks that are reduced in index order). Augmentation is a small
// affine jitter plus random erase; label smoothing uses cfg.label_smoothing
// for every head.
std::vector<EpochStats> train_net(ConvNet<float>& net, std::span<const TrainSample> data,
                                  const TrainConfig& cfg, int threads = 1,
                                  const EvalHook& eval_hook = nullptr,
                                  std::ostream* log = nullptr);

// Date-model wrapper: checks the dataset format against the model's heads,
// writes cfg.label_smoothing into the head specs, trains, and (optionally)
// reports held-out sequence accuracy each epoch.
std::vector<EpochStats> train(Model& model, const corpus::Dataset& train_set,
                              const corpus::Dataset* val_set, const TrainConfig& cfg,
                              int threads = 1, std::ostream* log = nullptr);

// Sequence accuracy of a model over a dataset (eval mode, no augmentation).
double evaluate_model(const Model& model, const corpus::Dataset& ds);

// Per-item predictions in dataset order.
std::vector<Prediction> predict_dataset(const Model& model, const corpus::Dataset& ds);

}  // namespace dare::nn
