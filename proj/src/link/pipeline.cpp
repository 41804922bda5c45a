#include "dare/link/pipeline.hpp"

#include <algorithm>

#include "dare/rng.hpp"

namespace dare::link {

void LinkConfig::validate() const {
    criteria.validate();
    if (rounds < 0) throw ConfigError("round count must be non-negative");
    if (stop_gain_fraction < 0.0 || stop_gain_fraction > 1.0) {
        throw ConfigError("stop_gain_fraction must lie in [0, 1]");
    }
}

Pipeline::Pipeline(std::vector<CensusImage> images, std::vector<ManualRecord> records,
                   const FieldTrainer& date_trainer, const FieldTrainer& first_name_trainer,
                   const FieldTrainer& last_name_trainer, ModelSet base, LinkConfig config)
    : images_(std::move(images)), records_(std::move(records)), date_trainer_(&date_trainer),
      first_name_trainer_(&first_name_trainer), last_name_trainer_(&last_name_trainer),
      base_(std::move(base)), config_(config) {
    config_.validate();
    if (!base_.date || !base_.first_name || !base_.last_name) {
        throw ConfigError("pipeline needs base recognizers for all three fields");
    }
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (!image_index_.emplace(images_[i].image_id, i).second) {
            throw ConfigError("duplicate image id: " + images_[i].image_id);
        }
    }
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (!record_index_.emplace(records_[i].record_id, i).second) {
            throw ConfigError("duplicate record id: " + records_[i].record_id);
        }
    }
}

std::vector<FieldPrediction> Pipeline::predict_all(const ModelSet& models) const {
    std::vector<FieldPrediction> preds;
    preds.reserve(images_.size());
    for (const auto& img : images_) {
        FieldPrediction p;
        p.image_id = img.image_id;
        p.region_id = img.region_id;
        const FieldValue d = models.date->predict(img);
        const FieldValue f = models.first_name->predict(img);
        const FieldValue l = models.last_name->predict(img);
        p.date = d.value;
        p.date_conf = d.confidence;
        p.first_name = f.value;
        p.first_name_conf = f.confidence;
        p.last_name = l.value;
        p.last_name_conf = l.confidence;
        preds.push_back(std::move(p));
    }
    return preds;
}

Pipeline::ModelSet Pipeline::train_models(const std::vector<MatchEntry>& matches,
                                          std::uint64_t seed) const {
    std::vector<TrainExample> date_ex, first_ex, last_ex;
    date_ex.reserve(matches.size());
    first_ex.reserve(matches.size());
    last_ex.reserve(matches.size());
    for (const auto& m : matches) {
        const auto img_it = image_index_.find(m.image_id);
        const auto rec_it = record_index_.find(m.record_id);
        if (img_it == image_index_.end() || rec_it == record_index_.end()) {
            throw ConfigError("match references an unknown image or record id");
        }
        const CensusImage* img = &images_[img_it->second];
        const ManualRecord& rec = records_[rec_it->second];
        date_ex.push_back({img, rec.birth_date});
        first_ex.push_back({img, rec.first_name});
        last_ex.push_back({img, rec.last_name});
    }

    ModelSet set;
    set.date = date_trainer_->train(date_ex, mix_seed(seed, 0xD));
    set.first_name = first_name_trainer_->train(first_ex, mix_seed(seed, 0xF));
    set.last_name = last_name_trainer_->train(last_ex, mix_seed(seed, 0x1));
    return set;
}

std::vector<MatchEntry> Pipeline::to_entries(const MatchSet& accepted, int round) {
    std::vector<MatchEntry> entries;
    entries.reserve(accepted.size());
    for (const auto& pair : accepted) {
        const auto [it, inserted] = first_seen_.emplace(pair, round);
        entries.push_back({pair.first, pair.second, it->second});
        (void)inserted;
    }
    return entries;   // MatchSet iterates sorted by image id already
}

LinkState Pipeline::run_round(LinkState state) {
    const int round = state.round;

    MatchSet accepted;
    RoundReport report;
    report.round = round;

    if (round == 0) {
        const auto preds = predict_all(base_);
        accepted = match_to_fixpoint(preds, records_, config_.criteria);
        report.matches_a = report.matches_b = accepted.size();
    } else {
        if (trained_round_ != round - 1) {
            throw ConfigError("round " + std::to_string(round) +
                              " needs models trained on round " + std::to_string(round - 1));
        }
        const MatchSet ma = match_to_fixpoint(predict_all(set_a_), records_, config_.criteria);
        const MatchSet mb = match_to_fixpoint(predict_all(set_b_), records_, config_.criteria);
        accepted = intersect_matches(ma, mb);
        report.matches_a = ma.size();
        report.matches_b = mb.size();
    }

    report.accepted = accepted.size();
    report.gain = static_cast<long long>(accepted.size()) -
                  static_cast<long long>(state.matches.size());
    report.no_progress = report.gain <= 0;

    state.matches = to_entries(accepted, round);
    state.history.push_back(report);
    state.round = round + 1;

    // Prepare the two half-trained model sets for the next round.
    if (!accepted.empty()) {
        const auto [half_a, half_b] = split_matches(
            accepted, mix_seed(config_.seed, 0xAB, static_cast<std::uint64_t>(round)));
        std::vector<MatchEntry> ea, eb;
        for (const auto& p : half_a) ea.push_back({p.first, p.second, round});
        for (const auto& p : half_b) eb.push_back({p.first, p.second, round});
        set_a_ = train_models(ea, mix_seed(config_.seed, 0xA, static_cast<std::uint64_t>(round)));
        set_b_ = train_models(eb, mix_seed(config_.seed, 0xB, static_cast<std::uint64_t>(round)));
        trained_round_ = round;
    }
    return state;
}

Pipeline::Result Pipeline::run() {
    LinkState state = initial_state();
    state = run_round(state);   // round 0 (zero-shot)

    Result result;
    if (state.matches.empty()) {
        result.state = std::move(state);
        return result;   // nothing matchable, nothing trained
    }

    const double stop_threshold = config_.stop_gain_fraction * static_cast<double>(records_.size());
    for (int r = 1; r <= config_.rounds; ++r) {
        state = run_round(state);
        if (state.matches.empty()) break;
        if (static_cast<double>(state.history.back().gain) < stop_threshold) break;
    }

    result.state = state;
    if (!state.matches.empty()) {
        const ModelSet final_models =
            train_models(state.matches, mix_seed(config_.seed, 0xF17A1));
        result.final_predictions = predict_all(final_models);
        const MatchSet final_set =
            match_to_fixpoint(result.final_predictions, records_, config_.criteria);
        result.links = to_entries(final_set, state.round);
    }
    return result;
}

}  // namespace dare::link
