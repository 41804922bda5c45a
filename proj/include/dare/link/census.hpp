#pragma once

#include <memory>

#include "dare/corpus/render.hpp"
#include "dare/link/mock.hpp"
#include "dare/link/pipeline.hpp"

namespace dare::link {

struct CensusScenarioConfig {
    std::size_t record_count = 5000;       // register entries, one image each
    std::size_t extra_image_count = 3000;  // images without a register entry
    int region_count = 25;
    MockParams mock;
    std::uint64_t seed = 0;

    // With render_pixels the three field snippets are synthesised as
    // handwriting, for the pixel-reading recognizers; the mocks never look at
    // pixels, so simulations leave this off.
    bool render_pixels = false;
    int field_height = 40;
    int field_width = 128;
    corpus::StyleParams style;

    void validate() const;
};

// A synthetic linkage population. Every record owns exactly one image (its
// true pair); extra images carry plausible field values but no record, so
// any link they attract is false. Field values are drawn from shared name
// pools and full day-month-two-digit-year dates, which makes same-region
// value collisions (the realistic source of ambiguity) common.
struct CensusScenario {
    CensusScenarioConfig config;
    std::vector<ManualRecord> records;
    std::vector<CensusImage> images;
    std::shared_ptr<const MockWorld> world;
    MatchSet true_pairs;   // (image_id, record_id)
};

CensusScenario make_census_scenario(const CensusScenarioConfig& config);

// The predictions an error-free reader would produce: the truth of every
// image, extras included.
std::vector<FieldPrediction> perfect_predictions(const CensusScenario& scenario);

// True pairs that even perfect reading links under the criteria. This is the
// ceiling for any recognizer: the remaining records are blocked by genuine
// ambiguity (another record or extra image with the same field values in the
// region), not by reading errors.
MatchSet matchable_pairs(const CensusScenario& scenario, const MatchCriteria& criteria);

struct LinkQuality {
    std::size_t links = 0;              // produced links
    std::size_t correct = 0;            // links that are true pairs
    std::size_t matchable = 0;          // ceiling under the same criteria
    std::size_t matched_matchable = 0;  // matchable pairs among the links
    double precision = 1.0;             // correct / links; 1 with no links
    double match_rate = 0.0;            // matched_matchable / matchable
};

LinkQuality assess_links(const CensusScenario& scenario, const std::vector<MatchEntry>& links,
                         const MatchCriteria& criteria);

// Mock readers for the scenario: one trainer per field and a base model set
// trained on nothing (reading at the configured base accuracy).
struct MockSetup {
    std::unique_ptr<FieldTrainer> date_trainer;
    std::unique_ptr<FieldTrainer> first_name_trainer;
    std::unique_ptr<FieldTrainer> last_name_trainer;
    Pipeline::ModelSet base;
};

MockSetup make_mock_setup(const CensusScenario& scenario);

}  // namespace dare::link
