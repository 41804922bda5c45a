#pragma once

#include <map>
#include <memory>

#include "dare/link/recognizers.hpp"

namespace dare::link {

// Ground truth shared by the mock recognizers of one simulation: the true
// field values per image and the value pools used to fabricate plausible
// misreadings.
struct MockWorld {
    struct Truth {
        std::string date;
        std::string first_name;
        std::string last_name;
    };
    std::map<std::string, Truth> truth;         // by image_id
    std::vector<std::string> first_name_pool;
    std::vector<std::string> last_name_pool;

    const Truth& truth_of(const std::string& image_id) const;
};

struct MockParams {
    double base_accuracy = 0.85;        // accuracy of an untrained recognizer
    double memorized_accuracy = 0.98;   // accuracy on its own training images
    double accuracy_scale = 1500.0;     // training-set size at which the
                                        // remaining error has decayed by 1/e
    void validate() const;
};

// Simulates a trainable field recognizer without touching pixels. On images
// it was trained on it reproduces the trained target with memorized_accuracy
// (so wrong training labels are faithfully memorized); elsewhere it reads
// the true value with accuracy
//   1 - (1 - base_accuracy) * exp(-n_train / accuracy_scale).
// Errors are plausible confusions: another value drawn from the world pools
// (names) or a date with one group re-randomised. Every prediction is
// deterministic in (model seed, image id), and two mocks trained with
// different seeds err independently.
class MockRecognizer : public FieldRecognizer {
public:
    MockRecognizer(std::shared_ptr<const MockWorld> world, FieldKind kind, MockParams params,
                   std::map<std::string, std::string> trained, std::uint64_t seed);
    FieldValue predict(const CensusImage& image) const override;

private:
    std::string corrupt(const std::string& true_value, Rng& rng) const;

    std::shared_ptr<const MockWorld> world_;
    FieldKind kind_;
    MockParams params_;
    std::map<std::string, std::string> trained_;
    double generalized_accuracy_;
    std::uint64_t seed_;
};

class MockTrainer : public FieldTrainer {
public:
    MockTrainer(std::shared_ptr<const MockWorld> world, FieldKind kind, MockParams params);
    std::unique_ptr<FieldRecognizer> train(const std::vector<TrainExample>& examples,
                                           std::uint64_t seed) const override;

private:
    std::shared_ptr<const MockWorld> world_;
    FieldKind kind_;
    MockParams params_;
};

}  // namespace dare::link
