#include "dare/link/mock.hpp"

#include <cmath>

#include "dare/corpus/dataset.hpp"

namespace dare::link {
namespace {

std::uint64_t hash_id(const std::string& s) {
    // FNV-1a; only needs to be stable and well-mixed.
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

const MockWorld::Truth& MockWorld::truth_of(const std::string& image_id) const {
    const auto it = truth.find(image_id);
    if (it == truth.end()) {
        throw EmptyInputError("mock world has no truth for image " + image_id);
    }
    return it->second;
}

void MockParams::validate() const {
    if (base_accuracy < 0.0 || base_accuracy > 1.0 || memorized_accuracy < 0.0 ||
        memorized_accuracy > 1.0) {
        throw ConfigError("mock accuracies must lie in [0, 1]");
    }
    if (accuracy_scale <= 0.0) throw ConfigError("accuracy_scale must be positive");
}

MockRecognizer::MockRecognizer(std::shared_ptr<const MockWorld> world, FieldKind kind,
                               MockParams params, std::map<std::string, std::string> trained,
                               std::uint64_t seed)
    : world_(std::move(world)), kind_(kind), params_(params), trained_(std::move(trained)),
      seed_(seed) {
    params_.validate();
    if (!world_) throw ConfigError("mock recognizer needs a world");
    generalized_accuracy_ =
        1.0 - (1.0 - params_.base_accuracy) *
                  std::exp(-static_cast<double>(trained_.size()) / params_.accuracy_scale);
}

std::string MockRecognizer::corrupt(const std::string& true_value, Rng& rng) const {
    if (kind_ == FieldKind::FirstName || kind_ == FieldKind::LastName) {
        const auto& pool =
            kind_ == FieldKind::FirstName ? world_->first_name_pool : world_->last_name_pool;
        if (pool.size() < 2) return true_value + "x";
        for (int attempt = 0; attempt < 64; ++attempt) {
            const auto& pick = pool[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
            if (pick != true_value) return pick;
        }
        return true_value + "x";
    }

    // Date: re-randomise one group so the misreading is another real date.
    TokenLabel label;
    SequenceFormat fmt;
    try {
        std::tie(label, fmt) = parse_date_string(true_value);
    } catch (const Error&) {
        return true_value + "?";
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        TokenLabel mutated = label;
        const TokenLabel fresh = corpus::random_nonempty_label(fmt, rng);
        const auto group = rng.uniform_int(0, fmt.year_head_count() > 0 ? 2 : 1);
        if (group == 0) {
            mutated.tokens[0] = fresh.tokens[0];
            mutated.tokens[1] = fresh.tokens[1];
        } else if (group == 1) {
            mutated.tokens[2] = fresh.tokens[2];
        } else {
            for (int i = 3; i < fmt.head_count(); ++i) {
                mutated.tokens[static_cast<std::size_t>(i)] =
                    fresh.tokens[static_cast<std::size_t>(i)];
            }
        }
        if (mutated != label) return format_label(mutated, fmt);
    }
    return true_value + "?";
}

FieldValue MockRecognizer::predict(const CensusImage& image) const {
    const auto& truth = world_->truth_of(image.image_id);
    const std::string& true_value = kind_ == FieldKind::Date ? truth.date
                                    : kind_ == FieldKind::FirstName ? truth.first_name
                                                                    : truth.last_name;
    Rng rng(mix_seed(seed_, hash_id(image.image_id)));

    FieldValue out;
    const auto trained = trained_.find(image.image_id);
    if (trained != trained_.end()) {
        const bool reproduce = rng.bernoulli(params_.memorized_accuracy);
        out.value = reproduce ? trained->second : corrupt(true_value, rng);
        out.confidence = rng.uniform(0.90, 0.999);
    } else {
        const bool correct = rng.bernoulli(generalized_accuracy_);
        out.value = correct ? true_value : corrupt(true_value, rng);
        out.confidence = correct ? rng.uniform(0.75, 0.995) : rng.uniform(0.40, 0.90);
    }
    return out;
}

MockTrainer::MockTrainer(std::shared_ptr<const MockWorld> world, FieldKind kind, MockParams params)
    : world_(std::move(world)), kind_(kind), params_(params) {
    params_.validate();
    if (!world_) throw ConfigError("mock trainer needs a world");
}

std::unique_ptr<FieldRecognizer> MockTrainer::train(const std::vector<TrainExample>& examples,
                                                    std::uint64_t seed) const {
    std::map<std::string, std::string> trained;
    for (const auto& ex : examples) {
        if (!ex.image) throw EmptyInputError("MockTrainer: example without an image");
        trained[ex.image->image_id] = ex.target;
    }
    return std::make_unique<MockRecognizer>(world_, kind_, params_, std::move(trained), seed);
}

}  // namespace dare::link
