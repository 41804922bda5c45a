#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dare/image.hpp"
#include "dare/link/linker.hpp"
#include "dare/nn/model.hpp"
#include "dare/nn/optimizer.hpp"

namespace dare::link {

enum class FieldKind { Date, FirstName, LastName };

// One census entry as it reaches the linker: pre-segmented field snippets.
// Pixel payloads may be empty when the recognizers do not read pixels (the
// simulation mocks).
struct CensusImage {
    std::string image_id;
    std::string region_id;
    ImageU8 date_field;
    ImageU8 first_name_field;
    ImageU8 last_name_field;
};

struct FieldValue {
    std::string value;          // canonical text, "" = unreadable
    double confidence = 1.0;
};

// A trained single-field reader.
class FieldRecognizer {
public:
    virtual ~FieldRecognizer() = default;
    virtual FieldValue predict(const CensusImage& image) const = 0;
};

struct TrainExample {
    const CensusImage* image = nullptr;
    std::string target;   // canonical text of the field
};

// Produces a recognizer from matched training pairs. Implementations must be
// deterministic in (examples, seed).
class FieldTrainer {
public:
    virtual ~FieldTrainer() = default;
    virtual std::unique_ptr<FieldRecognizer> train(const std::vector<TrainExample>& examples,
                                                   std::uint64_t seed) const = 0;
};

// Date recognizer backed by the sequence classification model. Reads the
// date_field snippet, resize-padded to the model input.
class NnDateRecognizer : public FieldRecognizer {
public:
    explicit NnDateRecognizer(nn::Model model);
    FieldValue predict(const CensusImage& image) const override;
    const nn::Model& model() const { return model_; }

private:
    nn::Model model_;
};

// Trains date models for the iterative pipeline. Targets are parsed in the
// architecture's format; when a base model is given, training starts from
// its weights (transfer) instead of random initialisation.
class NnDateTrainer : public FieldTrainer {
public:
    NnDateTrainer(nn::ModelConfig architecture, nn::TrainConfig train_config,
                  const nn::Model* base = nullptr, int threads = 1);
    std::unique_ptr<FieldRecognizer> train(const std::vector<TrainExample>& examples,
                                           std::uint64_t seed) const override;

private:
    nn::ModelConfig architecture_;
    nn::TrainConfig train_config_;
    const nn::Model* base_;
    int threads_;
};

// --- character-grid name reader --------------------------------------------

constexpr int kNameAlphabetSize = 27;   // 'a'..'z' plus an end token
constexpr int kCharEnd = 26;

// One target class per grid position: the character's index, then end tokens
// past the final character. Text longer than the grid is truncated; anything
// outside a-z throws OutOfAlphabetError (normalise names first).
std::vector<int> name_targets(std::string_view name, int max_length);

// Characters up to the first end token.
std::string name_from_tokens(std::span<const int> tokens);

// Architecture of the glyph name reader: a small backbone with max_length
// independent character heads.
struct NameModelConfig {
    int input_height = 32;
    int input_width = 128;
    std::vector<nn::ConvBlockSpec> conv_blocks;   // defaults to 8/16/32, stride 2
    int feature_dim = 64;
    double dropout_prob = 0.25;
    int max_length = 10;
    std::uint64_t seed = 0;

    nn::NetShape net_shape() const;
    void validate() const;
};

// Reads the first- or last-name snippet with a character-grid model.
class NnNameRecognizer : public FieldRecognizer {
public:
    NnNameRecognizer(NameModelConfig config, nn::ConvNet<float> net, FieldKind kind);
    FieldValue predict(const CensusImage& image) const override;
    const nn::ConvNet<float>& net() const { return net_; }

private:
    NameModelConfig config_;
    nn::ConvNet<float> net_;
    FieldKind kind_;
};

class NnNameTrainer : public FieldTrainer {
public:
    NnNameTrainer(NameModelConfig architecture, nn::TrainConfig train_config, FieldKind kind,
                  const nn::ConvNet<float>* base = nullptr, int threads = 1);
    std::unique_ptr<FieldRecognizer> train(const std::vector<TrainExample>& examples,
                                           std::uint64_t seed) const override;

private:
    NameModelConfig architecture_;
    nn::TrainConfig train_config_;
    FieldKind kind_;
    const nn::ConvNet<float>* base_;
    int threads_;
};

}  // namespace dare::link
