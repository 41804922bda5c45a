#pragma once

#include <cstdint>
#include <vector>

#include "dare/date_model.hpp"
#include "dare/image.hpp"
#include "dare/loss.hpp"
#include "dare/nn/net.hpp"

namespace dare::nn {

// Configuration of a date recognition model. The backbone is shared by all
// formats; the classifier heads carry the per-format alphabets.
struct ModelConfig {
    int input_height = 64;
    int input_width = 160;
    int channels = 1;
    std::vector<ConvBlockSpec> conv_blocks;   // defaults to 16/32/64/64, stride 2
    int feature_dim = 128;
    double dropout_prob = 0.4;
    std::vector<HeadSpec> heads;
    std::uint64_t seed = 0;

    static ModelConfig defaults(SequenceFormat fmt, std::uint64_t seed = 0);

    SequenceFormat format() const;   // derived from the head layout
    NetShape net_shape() const;
    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

struct Model {
    ModelConfig config;
    ConvNet<float> net;
};

Model make_model(const ModelConfig& config);

struct Prediction {
    std::vector<HeadDistribution> dists;   // per-head softmax probabilities
    TokenLabel argmax;                     // ties resolve to the lowest index
    double confidence = 1.0;               // product of per-head max probabilities
};

// Eval-mode forward pass on one image. The image must already have the
// model's input dimensions.
Prediction predict(const Model& model, const ImageF& image);

// Argmax and confidence from per-head logits (shared with the training loop,
// which already has logits in hand).
Prediction prediction_from_logits(const std::vector<std::vector<float>>& logits);

// Starts a model for a new head layout from an already trained one. Backbone
// weights (conv + fc) are copied; input dimensions may differ because the
// backbone is fully convolutional up to the global average pool. Heads with
// the same name and identical alphabet are copied; remaining heads are
// freshly initialised from config.seed. Throws FormatMismatchError when a
// same-named head has a different alphabet, ConfigError when the backbones
// are incompatible.
Model transfer_model(const Model& base, const ModelConfig& config);

}  // namespace dare::nn
