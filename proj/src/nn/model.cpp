#include "dare/nn/model.hpp"

#include <algorithm>

namespace dare::nn {

ModelConfig ModelConfig::defaults(SequenceFormat fmt, std::uint64_t seed) {
    ModelConfig cfg;
    cfg.conv_blocks = {{16, 3, 2}, {32, 3, 2}, {64, 3, 2}, {64, 3, 2}};
    cfg.heads = head_specs(fmt);
    cfg.seed = seed;
    return cfg;
}

SequenceFormat ModelConfig::format() const {
    switch (heads.size()) {
        case 3: return SequenceFormat::ddm();
        case 5: return SequenceFormat::ddmyy();
        case 7: return SequenceFormat::ddmyyyy();
        default:
            throw ConfigError("head count " + std::to_string(heads.size()) +
                              " does not correspond to a date format");
    }
}

NetShape ModelConfig::net_shape() const {
    NetShape s;
    s.in_channels = channels;
    s.in_height = input_height;
    s.in_width = input_width;
    s.blocks = conv_blocks;
    s.feature_dim = feature_dim;
    s.dropout_prob = dropout_prob;
    for (const auto& h : heads) s.head_dims.push_back(h.class_count());
    return s;
}

void ModelConfig::validate() const {
    if (heads.empty()) throw ConfigError("model has no heads");
    for (const auto& h : heads) {
        if (h.alphabet.empty()) {
            throw ConfigError("head " + head_name_string(h.name) + " has an empty alphabet");
        }
        if (h.smoothing_alpha < 0.0 || h.smoothing_alpha > 1.0) {
            throw ConfigError("smoothing alpha must lie in [0, 1]");
        }
    }
    net_shape().validate();
}

Model make_model(const ModelConfig& config) {
    config.validate();
    Model m;
    m.config = config;
    m.net = make_net<float>(config.net_shape(), config.seed);
    return m;
}

Prediction prediction_from_logits(const std::vector<std::vector<float>>& logits) {
    Prediction p;
    p.dists.reserve(logits.size());
    for (const auto& head_logits : logits) {
        std::vector<double> as_double(head_logits.begin(), head_logits.end());
        HeadDistribution dist = softmax(as_double);
        const auto best = std::max_element(dist.probs.begin(), dist.probs.end());
        p.argmax.tokens.push_back(static_cast<int>(best - dist.probs.begin()));
        p.confidence *= *best;
        p.dists.push_back(std::move(dist));
    }
    return p;
}

Prediction predict(const Model& model, const ImageF& image) {
    const auto& cfg = model.config;
    if (image.height != cfg.input_height || image.width != cfg.input_width) {
        throw ShapeMismatchError("image is " + std::to_string(image.height) + "x" +
                                 std::to_string(image.width) + ", model expects " +
                                 std::to_string(cfg.input_height) + "x" +
                                 std::to_string(cfg.input_width));
    }
    const auto logits = net_forward(model.net, std::span<const float>(image.px), false, nullptr,
                                    static_cast<NetTrace<float>*>(nullptr));
    return prediction_from_logits(logits);
}

Model transfer_model(const Model& base, const ModelConfig& config) {
    config.validate();
    if (config.channels != base.config.channels || config.conv_blocks != base.config.conv_blocks ||
        config.feature_dim != base.config.feature_dim) {
        throw ConfigError("transfer_model: backbone architectures differ");
    }

    Model m = make_model(config);  // fresh init; backbone overwritten below
    for (std::size_t b = 0; b < m.net.params.conv_w.size(); ++b) {
        m.net.params.conv_w[b].data = base.net.params.conv_w[b].data;
        m.net.params.conv_b[b].data = base.net.params.conv_b[b].data;
    }
    m.net.params.fc_w.data = base.net.params.fc_w.data;
    m.net.params.fc_b.data = base.net.params.fc_b.data;

    for (std::size_t h = 0; h < config.heads.size(); ++h) {
        const auto& want = config.heads[h];
        for (std::size_t bh = 0; bh < base.config.heads.size(); ++bh) {
            if (base.config.heads[bh].name != want.name) continue;
            if (base.config.heads[bh].alphabet != want.alphabet) {
                throw FormatMismatchError("transfer_model: head " + head_name_string(want.name) +
                                          " has a different alphabet in the base model");
            }
            m.net.params.head_w[h].data = base.net.params.head_w[bh].data;
            m.net.params.head_b[h].data = base.net.params.head_b[bh].data;
            break;
        }
    }
    return m;
}

}  // namespace dare::nn
