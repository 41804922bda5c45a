#include "dare/link/recognizers.hpp"

#include <algorithm>

#include "dare/corpus/dataset.hpp"
#include "dare/corpus/image_io.hpp"
#include "dare/nn/train.hpp"

namespace dare::link {

NnDateRecognizer::NnDateRecognizer(nn::Model model) : model_(std::move(model)) {}

FieldValue NnDateRecognizer::predict(const CensusImage& image) const {
    if (image.date_field.px.empty()) {
        throw EmptyInputError("date recognizer got an image without a date field");
    }
    const ImageU8 sized = corpus::resize_pad(image.date_field, model_.config.input_height,
                                             model_.config.input_width);
    const nn::Prediction p = nn::predict(model_, to_float(sized));
    FieldValue v;
    v.value = format_label(p.argmax, model_.config.format());
    v.confidence = p.confidence;
    return v;
}

NnDateTrainer::NnDateTrainer(nn::ModelConfig architecture, nn::TrainConfig train_config,
                             const nn::Model* base, int threads)
    : architecture_(std::move(architecture)), train_config_(train_config), base_(base),
      threads_(threads) {
    architecture_.validate();
    train_config_.validate();
}

std::unique_ptr<FieldRecognizer> NnDateTrainer::train(const std::vector<TrainExample>& examples,
                                                      std::uint64_t seed) const {
    if (examples.empty()) throw EmptyInputError("NnDateTrainer: no training examples");

    const SequenceFormat fmt = architecture_.format();
    corpus::Dataset ds;
    ds.format = fmt;
    ds.items.reserve(examples.size());
    for (const auto& ex : examples) {
        if (!ex.image) throw EmptyInputError("NnDateTrainer: example without an image");
        corpus::DatasetItem item;
        item.id = ex.image->image_id;
        item.label = parse_date_string(ex.target, fmt);
        item.image = corpus::resize_pad(ex.image->date_field, architecture_.input_height,
                                        architecture_.input_width);
        ds.items.push_back(std::move(item));
    }

    nn::ModelConfig cfg = architecture_;
    cfg.seed = seed;
    nn::Model model = base_ ? nn::transfer_model(*base_, cfg) : nn::make_model(cfg);

    nn::TrainConfig tcfg = train_config_;
    tcfg.seed = seed;
    nn::train(model, ds, nullptr, tcfg, threads_, nullptr);
    return std::make_unique<NnDateRecognizer>(std::move(model));
}

std::vector<int> name_targets(std::string_view name, int max_length) {
    std::vector<int> targets(static_cast<std::size_t>(max_length), kCharEnd);
    const std::size_t n = std::min(name.size(), static_cast<std::size_t>(max_length));
    for (std::size_t i = 0; i < n; ++i) {
        const char c = name[i];
        if (c < 'a' || c > 'z') {
            throw OutOfAlphabetError("name_targets: character outside a-z in \"" +
                                     std::string(name) + "\"");
        }
        targets[i] = c - 'a';
    }
    return targets;
}

std::string name_from_tokens(std::span<const int> tokens) {
    std::string out;
    for (const int t : tokens) {
        if (t == kCharEnd) break;
        if (t < 0 || t >= kCharEnd) throw OutOfAlphabetError("name_from_tokens: bad token");
        out.push_back(static_cast<char>('a' + t));
    }
    return out;
}

nn::NetShape NameModelConfig::net_shape() const {
    nn::NetShape shape;
    shape.in_channels = 1;
    shape.in_height = input_height;
    shape.in_width = input_width;
    shape.blocks = conv_blocks.empty()
                       ? std::vector<nn::ConvBlockSpec>{{8, 3, 2}, {16, 3, 2}, {32, 3, 2}}
                       : conv_blocks;
    shape.feature_dim = feature_dim;
    shape.dropout_prob = dropout_prob;
    shape.head_dims.assign(static_cast<std::size_t>(max_length), kNameAlphabetSize);
    return shape;
}

void NameModelConfig::validate() const {
    if (max_length <= 0) throw ConfigError("name model needs at least one character head");
    net_shape().validate();
}

NnNameRecognizer::NnNameRecognizer(NameModelConfig config, nn::ConvNet<float> net, FieldKind kind)
    : config_(std::move(config)), net_(std::move(net)), kind_(kind) {
    config_.validate();
    if (kind_ == FieldKind::Date) {
        throw ConfigError("name recognizer cannot read the date field");
    }
    if (net_.shape != config_.net_shape()) {
        throw ConfigError("name recognizer net does not match its configuration");
    }
}

FieldValue NnNameRecognizer::predict(const CensusImage& image) const {
    const ImageU8& field =
        kind_ == FieldKind::FirstName ? image.first_name_field : image.last_name_field;
    if (field.px.empty()) {
        throw EmptyInputError("name recognizer got an image without the name field");
    }
    const ImageU8 sized = corpus::resize_pad(field, config_.input_height, config_.input_width);
    const ImageF input = to_float(sized);
    const auto logits =
        nn::net_forward<float>(net_, std::span<const float>(input.px), false, nullptr, nullptr);

    std::vector<int> tokens;
    double confidence = 1.0;
    for (const auto& head : logits) {
        const std::vector<double> z(head.begin(), head.end());
        const std::vector<double>& p = softmax(z).probs;
        int best = 0;
        for (int j = 1; j < static_cast<int>(p.size()); ++j) {
            if (p[static_cast<std::size_t>(j)] > p[static_cast<std::size_t>(best)]) best = j;
        }
        tokens.push_back(best);
        confidence *= p[static_cast<std::size_t>(best)];
    }
    FieldValue v;
    v.value = name_from_tokens(tokens);
    v.confidence = confidence;
    return v;
}

NnNameTrainer::NnNameTrainer(NameModelConfig architecture, nn::TrainConfig train_config,
                             FieldKind kind, const nn::ConvNet<float>* base, int threads)
    : architecture_(std::move(architecture)), train_config_(train_config), kind_(kind),
      base_(base), threads_(threads) {
    architecture_.validate();
    train_config_.validate();
    if (kind_ == FieldKind::Date) throw ConfigError("name trainer cannot train the date field");
    if (base_ && base_->shape != architecture_.net_shape()) {
        throw ConfigError("name trainer base net does not match the architecture");
    }
}

std::unique_ptr<FieldRecognizer> NnNameTrainer::train(const std::vector<TrainExample>& examples,
                                                      std::uint64_t seed) const {
    if (examples.empty()) throw EmptyInputError("NnNameTrainer: no training examples");

    std::vector<ImageU8> images;
    std::vector<nn::TrainSample> samples;
    images.reserve(examples.size());
    samples.reserve(examples.size());
    for (const auto& ex : examples) {
        if (!ex.image) throw EmptyInputError("NnNameTrainer: example without an image");
        const ImageU8& field = kind_ == FieldKind::FirstName ? ex.image->first_name_field
                                                             : ex.image->last_name_field;
        images.push_back(
            corpus::resize_pad(field, architecture_.input_height, architecture_.input_width));
        nn::TrainSample s;
        s.targets = name_targets(normalize_name(ex.target), architecture_.max_length);
        samples.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < samples.size(); ++i) samples[i].image = &images[i];

    nn::ConvNet<float> net =
        base_ ? *base_ : nn::make_net<float>(architecture_.net_shape(),
                                             mix_seed(architecture_.seed, seed));
    nn::TrainConfig tcfg = train_config_;
    tcfg.seed = seed;
    nn::train_net(net, samples, tcfg, threads_, nullptr, nullptr);
    return std::make_unique<NnNameRecognizer>(architecture_, std::move(net), kind_);
}

}  // namespace dare::link
