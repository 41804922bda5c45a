#pragma once

#include <map>
#include <memory>

#include "dare/link/recognizers.hpp"

namespace dare::link {

struct LinkConfig {
    MatchCriteria criteria;
    int rounds = 5;                     // improvement rounds after round 0
    double stop_gain_fraction = 0.005;  // stop when a round gains fewer new
                                        // matches than this share of records
    std::uint64_t seed = 0;

    void validate() const;
};

struct MatchEntry {
    std::string image_id;
    std::string record_id;
    int round_found = 0;   // first round in which the pair was accepted
};

struct RoundReport {
    int round = 0;
    std::size_t matches_a = 0;     // raw matches of model set A (round 0: base)
    std::size_t matches_b = 0;     // raw matches of model set B (round 0: base)
    std::size_t accepted = 0;      // intersection, the new accepted set
    long long gain = 0;            // accepted minus the previous accepted
    bool no_progress = false;      // gain <= 0
};

struct LinkState {
    int round = 0;                      // next round to execute
    std::vector<MatchEntry> matches;    // accepted pairs, sorted by image id
    std::vector<RoundReport> history;
};

// The iterative transcribe-match-train loop. Round 0 matches the base
// recognizers' predictions against the records. Each later round trains two
// independent model sets on disjoint halves of the current matches, matches
// each set's predictions separately, and accepts only the intersection, so a
// spurious match admitted by one set is pushed back out unless the other set
// reproduces it. Rounds re-match every image against the full record set (to
// a consumption fixpoint), so pairs can leave the accepted set again.
class Pipeline {
public:
    struct ModelSet {
        std::unique_ptr<FieldRecognizer> date;
        std::unique_ptr<FieldRecognizer> first_name;
        std::unique_ptr<FieldRecognizer> last_name;
    };

    Pipeline(std::vector<CensusImage> images, std::vector<ManualRecord> records,
             const FieldTrainer& date_trainer, const FieldTrainer& first_name_trainer,
             const FieldTrainer& last_name_trainer, ModelSet base, LinkConfig config);

    LinkState initial_state() const { return LinkState{}; }

    // Executes round state.round and returns the advanced state. Rounds must
    // be executed in order on the state this pipeline produced.
    LinkState run_round(LinkState state);

    struct Result {
        LinkState state;
        std::vector<MatchEntry> links;                  // final-model matches
        std::vector<FieldPrediction> final_predictions;
    };

    // Runs round 0, then improvement rounds until the configured count or
    // until the per-round gain falls under the stop threshold, then trains
    // the final models on every accepted match and produces the final links.
    // With no matchable input (for instance an empty record set) the result
    // is empty and nothing is ever trained.
    Result run();

    const std::vector<CensusImage>& images() const { return images_; }
    const std::vector<ManualRecord>& records() const { return records_; }

    std::vector<FieldPrediction> predict_all(const ModelSet& models) const;

private:
    ModelSet train_models(const std::vector<MatchEntry>& matches, std::uint64_t seed) const;
    std::vector<MatchEntry> to_entries(const MatchSet& accepted, int round);

    std::vector<CensusImage> images_;
    std::vector<ManualRecord> records_;
    const FieldTrainer* date_trainer_;
    const FieldTrainer* first_name_trainer_;
    const FieldTrainer* last_name_trainer_;
    ModelSet base_;
    LinkConfig config_;

    std::map<std::string, std::size_t> image_index_;
    std::map<std::string, std::size_t> record_index_;
    std::map<MatchPair, int> first_seen_;   // pair -> first accepted round
    ModelSet set_a_, set_b_;
    int trained_round_ = -1;   // round whose matches set_a_/set_b_ were trained on
};

}  // namespace dare::link
