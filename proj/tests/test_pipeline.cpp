#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "dare/corpus/image_io.hpp"
#include "dare/corpus/render.hpp"
#include "dare/link/census.hpp"
#include "dare/link/mock.hpp"
#include "dare/link/pipeline.hpp"
#include "dare/link/recognizers.hpp"

using namespace dare;
using namespace dare::link;

namespace {

CensusScenarioConfig small_scenario(std::uint64_t seed) {
    CensusScenarioConfig cfg;
    cfg.record_count = 300;
    cfg.extra_image_count = 120;
    cfg.region_count = 3;
    // Faster learning curve than the full-scale default so a 300-record
    // population shows clear round-over-round improvement.
    cfg.mock.accuracy_scale = 150.0;
    cfg.seed = seed;
    return cfg;
}

std::map<std::string, std::string> truth_field(const CensusScenario& sc, FieldKind kind) {
    std::map<std::string, std::string> out;
    for (const auto& [id, t] : sc.world->truth) {
        out[id] = kind == FieldKind::Date ? t.date
                  : kind == FieldKind::FirstName ? t.first_name
                                                 : t.last_name;
    }
    return out;
}

}  // namespace

TEST_CASE("mock recognizer is deterministic and seed-sensitive") {
    const CensusScenario sc = make_census_scenario(small_scenario(1));
    MockTrainer trainer(std::shared_ptr<const MockWorld>(sc.world), FieldKind::Date,
                        sc.config.mock);
    const auto model = trainer.train({}, 7);
    const auto model_same = trainer.train({}, 7);
    const auto model_other = trainer.train({}, 8);

    std::size_t same = 0, diff = 0;
    for (const auto& img : sc.images) {
        const FieldValue a = model->predict(img);
        const FieldValue b = model->predict(img);
        CHECK(a.value == b.value);
        CHECK(a.confidence == b.confidence);
        CHECK(model_same->predict(img).value == a.value);
        if (model_other->predict(img).value == a.value) ++same;
        else ++diff;
    }
    // Different seeds err on different images (they agree on the ~85%
    // both read correctly, and rarely elsewhere).
    CHECK(diff > 0);
    CHECK(same > diff);
}

TEST_CASE("untrained mocks read at roughly base accuracy") {
    const CensusScenario sc = make_census_scenario(small_scenario(2));
    MockTrainer trainer(std::shared_ptr<const MockWorld>(sc.world), FieldKind::FirstName,
                        sc.config.mock);
    const auto model = trainer.train({}, 3);
    const auto truths = truth_field(sc, FieldKind::FirstName);
    std::size_t hit = 0;
    for (const auto& img : sc.images) {
        if (model->predict(img).value == normalize_name(truths.at(img.image_id))) ++hit;
    }
    const double acc = static_cast<double>(hit) / static_cast<double>(sc.images.size());
    CHECK(acc > 0.80);
    CHECK(acc < 0.90);
}

TEST_CASE("mocks memorize their training labels, even wrong ones") {
    const CensusScenario sc = make_census_scenario(small_scenario(3));
    MockTrainer trainer(std::shared_ptr<const MockWorld>(sc.world), FieldKind::LastName,
                        sc.config.mock);

    // Train on 40 images with a deliberately wrong label on the first one.
    std::vector<TrainExample> examples;
    for (std::size_t i = 0; i < 40; ++i) {
        examples.push_back({&sc.images[i],
                            normalize_name(sc.world->truth_of(sc.images[i].image_id).last_name)});
    }
    examples[0].target = "wronglabel";
    const auto model = trainer.train(examples, 5);

    std::size_t memorized = 0;
    for (const auto& ex : examples) {
        if (model->predict(*ex.image).value == ex.target) ++memorized;
    }
    // memorized_accuracy = 0.98 over 40 samples: expect nearly all, and the
    // wrong label is reproduced as trained, not corrected.
    CHECK(memorized >= 36);
    CHECK(model->predict(sc.images[0]).value == "wronglabel");
}

TEST_CASE("mock accuracy grows with training size") {
    const CensusScenario sc = make_census_scenario(small_scenario(4));
    MockTrainer trainer(std::shared_ptr<const MockWorld>(sc.world), FieldKind::Date,
                        sc.config.mock);
    const auto truths = truth_field(sc, FieldKind::Date);

    // Train on a prefix, evaluate on the untrained suffix.
    const auto eval_on_rest = [&](std::size_t n_train) {
        std::vector<TrainExample> examples;
        for (std::size_t i = 0; i < n_train; ++i) {
            examples.push_back({&sc.images[i], truths.at(sc.images[i].image_id)});
        }
        const auto model = trainer.train(examples, 11);
        std::size_t hit = 0, n = 0;
        for (std::size_t i = 300; i < sc.images.size(); ++i) {
            if (model->predict(sc.images[i]).value == truths.at(sc.images[i].image_id)) ++hit;
            ++n;
        }
        return static_cast<double>(hit) / static_cast<double>(n);
    };
    const double none = eval_on_rest(0);
    const double lots = eval_on_rest(250);
    CHECK(lots > none);
}

TEST_CASE("census scenario invariants") {
    const CensusScenario sc = make_census_scenario(small_scenario(6));
    CHECK(sc.records.size() == 300);
    CHECK(sc.images.size() == 420);
    CHECK(sc.true_pairs.size() == 300);

    std::set<std::string> image_ids, record_ids;
    for (const auto& img : sc.images) image_ids.insert(img.image_id);
    for (const auto& r : sc.records) record_ids.insert(r.record_id);
    CHECK(image_ids.size() == sc.images.size());
    CHECK(record_ids.size() == sc.records.size());

    // Every true pair references a real image and record, in the same region.
    std::map<std::string, const CensusImage*> by_image;
    for (const auto& img : sc.images) by_image[img.image_id] = &img;
    std::map<std::string, const ManualRecord*> by_record;
    for (const auto& r : sc.records) by_record[r.record_id] = &r;
    for (const auto& [img_id, rec_id] : sc.true_pairs) {
        REQUIRE(by_image.count(img_id) == 1);
        REQUIRE(by_record.count(rec_id) == 1);
        CHECK(by_image.at(img_id)->region_id == by_record.at(rec_id)->region_id);
        // The record's fields equal the image's truth.
        const auto& t = sc.world->truth_of(img_id);
        CHECK(by_record.at(rec_id)->birth_date == t.date);
        CHECK(by_record.at(rec_id)->first_name == t.first_name);
        CHECK(by_record.at(rec_id)->last_name == t.last_name);
    }

    // Determinism.
    const CensusScenario again = make_census_scenario(small_scenario(6));
    CHECK(again.true_pairs == sc.true_pairs);
    REQUIRE(again.images.size() == sc.images.size());
    for (std::size_t i = 0; i < sc.images.size(); ++i) {
        CHECK(again.images[i].image_id == sc.images[i].image_id);
    }
}

TEST_CASE("matchable pairs are true pairs") {
    const CensusScenario sc = make_census_scenario(small_scenario(7));
    const MatchCriteria crit;
    const MatchSet matchable = matchable_pairs(sc, crit);
    CHECK(!matchable.empty());
    CHECK(matchable.size() <= sc.true_pairs.size());
    for (const auto& pair : matchable) CHECK(sc.true_pairs.count(pair) == 1);
    // Collisions make some records genuinely unmatchable.
    CHECK(matchable.size() < sc.true_pairs.size());
}

TEST_CASE("pipeline with zero records yields nothing and never trains") {
    const CensusScenario sc = make_census_scenario(small_scenario(8));
    MockSetup setup = make_mock_setup(sc);
    LinkConfig cfg;
    cfg.rounds = 3;
    Pipeline pipe(sc.images, {}, *setup.date_trainer, *setup.first_name_trainer,
                  *setup.last_name_trainer, std::move(setup.base), cfg);
    const auto result = pipe.run();
    CHECK(result.links.empty());
    CHECK(result.state.matches.empty());
}

TEST_CASE("pipeline rejects duplicate ids") {
    const CensusScenario sc = make_census_scenario(small_scenario(9));
    MockSetup setup = make_mock_setup(sc);
    auto dup_images = sc.images;
    dup_images.push_back(dup_images.front());
    CHECK_THROWS_AS(Pipeline(dup_images, sc.records, *setup.date_trainer,
                             *setup.first_name_trainer, *setup.last_name_trainer,
                             std::move(setup.base), LinkConfig{}),
                    ConfigError);
}

TEST_CASE("pipeline improves over the base round and stays precise") {
    const CensusScenario sc = make_census_scenario(small_scenario(10));
    MockSetup setup = make_mock_setup(sc);
    LinkConfig cfg;
    cfg.rounds = 3;
    cfg.stop_gain_fraction = 0.0;   // run all rounds
    Pipeline pipe(sc.images, sc.records, *setup.date_trainer, *setup.first_name_trainer,
                  *setup.last_name_trainer, std::move(setup.base), cfg);

    const auto result = pipe.run();
    REQUIRE(!result.state.history.empty());

    const auto& history = result.state.history;
    CHECK(history.front().round == 0);
    // Later rounds accept more than the noisy base round.
    CHECK(history.back().accepted > history.front().accepted);
    // History bookkeeping: gains telescope to the last accepted count.
    long long total = 0;
    for (const auto& r : history) total += r.gain;
    CHECK(total == static_cast<long long>(history.back().accepted));

    const LinkQuality q = assess_links(sc, result.links, cfg.criteria);
    CHECK(q.links == result.links.size());
    CHECK(q.precision > 0.97);
    CHECK(q.match_rate > 0.80);

    // round_found is the first accepted round and never exceeds the last.
    for (const auto& m : result.state.matches) {
        CHECK(m.round_found >= 0);
        CHECK(m.round_found < result.state.round);
    }
}

TEST_CASE("pipeline runs are byte-deterministic") {
    const CensusScenario sc = make_census_scenario(small_scenario(11));
    LinkConfig cfg;
    cfg.rounds = 2;
    cfg.stop_gain_fraction = 0.0;
    cfg.seed = 5;

    const auto run_once = [&]() {
        MockSetup setup = make_mock_setup(sc);
        Pipeline pipe(sc.images, sc.records, *setup.date_trainer, *setup.first_name_trainer,
                      *setup.last_name_trainer, std::move(setup.base), cfg);
        return pipe.run();
    };
    const auto r1 = run_once();
    const auto r2 = run_once();
    REQUIRE(r1.links.size() == r2.links.size());
    for (std::size_t i = 0; i < r1.links.size(); ++i) {
        CHECK(r1.links[i].image_id == r2.links[i].image_id);
        CHECK(r1.links[i].record_id == r2.links[i].record_id);
        CHECK(r1.links[i].round_found == r2.links[i].round_found);
    }
    REQUIRE(r1.state.history.size() == r2.state.history.size());
    for (std::size_t i = 0; i < r1.state.history.size(); ++i) {
        CHECK(r1.state.history[i].accepted == r2.state.history[i].accepted);
    }
}

TEST_CASE("a corrupted pair in one split is pushed out of the intersection") {
    // Construct a two-model disagreement directly: model set A was trained
    // with a corrupted pair (image x mislabeled as record y); model set B
    // never saw it. B's match set cannot contain (x, y), so the
    // intersection drops it regardless of A.
    const CensusScenario sc = make_census_scenario(small_scenario(12));
    const auto truths_date = truth_field(sc, FieldKind::Date);

    // Pick a matchable pair to corrupt.
    const MatchCriteria crit;
    const MatchSet matchable = matchable_pairs(sc, crit);
    REQUIRE(!matchable.empty());
    const auto [img_x, rec_y] = *matchable.begin();

    // Train A's date model with the corrupted date for img_x (a date that
    // belongs to no record), B's without it.
    MockTrainer date_trainer(std::shared_ptr<const MockWorld>(sc.world), FieldKind::Date,
                             sc.config.mock);
    std::vector<TrainExample> ex_a, ex_b;
    std::map<std::string, const CensusImage*> by_image;
    for (const auto& img : sc.images) by_image[img.image_id] = &img;
    std::size_t used = 0;
    for (const auto& [iid, rid] : matchable) {
        if (used++ >= 200) break;
        TrainExample ex{by_image.at(iid), truths_date.at(iid)};
        if (iid == img_x) {
            ex.target = "29-2-71";   // corrupted label, memorized by A
            ex_a.push_back(ex);
            continue;                // B never sees x at all
        }
        ex_a.push_back(ex);
        ex_b.push_back(ex);
    }
    REQUIRE(!ex_a.empty());
    const auto model_a = date_trainer.train(ex_a, 31);
    const auto model_b = date_trainer.train(ex_b, 32);

    // A memorized the corruption; its prediction for x no longer matches y's
    // date, while B still reads the true value.
    CHECK(model_a->predict(*by_image.at(img_x)).value == "29-2-71");

    // Build full prediction sets (perfect names isolate the date effect).
    const auto make_preds = [&](const FieldRecognizer& date_model) {
        std::vector<FieldPrediction> preds;
        for (const auto& img : sc.images) {
            const auto& t = sc.world->truth_of(img.image_id);
            FieldPrediction p;
            p.image_id = img.image_id;
            p.region_id = img.region_id;
            p.date = date_model.predict(img).value;
            p.first_name = t.first_name;
            p.last_name = t.last_name;
            preds.push_back(std::move(p));
        }
        return preds;
    };

    const MatchSet matches_a = match_to_fixpoint(make_preds(*model_a), sc.records, crit);
    const MatchSet matches_b = match_to_fixpoint(make_preds(*model_b), sc.records, crit);
    const MatchSet accepted = intersect_matches(matches_a, matches_b);

    // The pair survives in B (names still agree twice) but any wrong pair A
    // alone produces is filtered; crucially no (x, wrong-record) pair made
    // it through the intersection.
    for (const auto& [iid, rid] : accepted) {
        if (iid == img_x) CHECK(rid == rec_y);
    }
    // And a pair found by only one set is never accepted.
    for (const auto& pair : accepted) {
        CHECK(matches_a.count(pair) == 1);
        CHECK(matches_b.count(pair) == 1);
    }
}

TEST_CASE("run_round demands rounds in order") {
    const CensusScenario sc = make_census_scenario(small_scenario(13));
    MockSetup setup = make_mock_setup(sc);
    Pipeline pipe(sc.images, sc.records, *setup.date_trainer, *setup.first_name_trainer,
                  *setup.last_name_trainer, std::move(setup.base), LinkConfig{});
    LinkState state = pipe.initial_state();
    state.round = 2;   // skipping rounds 0 and 1
    CHECK_THROWS_AS(pipe.run_round(std::move(state)), ConfigError);
}

TEST_CASE("nn name recognizer memorizes a tiny rendered corpus") {
    // End-to-end smoke for the pixel path: render a few names, train briefly,
    // check the model reads its own training set.
    corpus::StyleParams style;
    const std::vector<std::string> names = {"jens", "anna", "peter", "maren"};

    std::vector<CensusImage> images;
    for (std::size_t i = 0; i < names.size(); ++i) {
        CensusImage img;
        img.image_id = "img-" + std::to_string(i);
        img.region_id = "reg";
        img.first_name_field =
            quantize(corpus::render_text(names[i], style, 32, 96, 100 + i));
        images.push_back(std::move(img));
    }
    std::vector<TrainExample> examples;
    for (std::size_t i = 0; i < names.size(); ++i) {
        examples.push_back({&images[i], names[i]});
    }

    NameModelConfig arch;
    arch.input_height = 32;
    arch.input_width = 96;
    arch.conv_blocks = {{8, 3, 2}, {16, 3, 2}};
    arch.feature_dim = 48;
    arch.dropout_prob = 0.0;
    arch.max_length = 6;

    // One optimizer step per epoch at this size; the always-on affine jitter
    // makes memorization need a few hundred steps.
    nn::TrainConfig tcfg;
    tcfg.batch_size = 4;
    tcfg.epochs = 400;
    tcfg.warmup_epochs = 10;
    tcfg.lr_max = 0.3;
    tcfg.random_erase_prob = 0.0;

    NnNameTrainer trainer(arch, tcfg, FieldKind::FirstName);
    const auto model = trainer.train(examples, 3);
    const auto model2 = trainer.train(examples, 3);

    int correct = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const FieldValue v = model->predict(images[i]);
        if (v.value == names[i]) ++correct;
        CHECK(v.confidence > 0.0);
        CHECK(v.confidence <= 1.0);
        // Determinism across retrains.
        CHECK(model2->predict(images[i]).value == v.value);
    }
    CHECK(correct >= 3);
}

TEST_CASE("name token grid round-trips") {
    CHECK(name_targets("abc", 5) == std::vector<int>{0, 1, 2, kCharEnd, kCharEnd});
    CHECK(name_from_tokens(name_targets("jens", 8)) == "jens");
    CHECK(name_from_tokens(name_targets("toolongname", 4)) == "tool");
    CHECK(name_from_tokens(std::vector<int>{kCharEnd, 0, 1}) == "");
    CHECK_THROWS_AS(name_targets("Jens", 8), OutOfAlphabetError);
    CHECK_THROWS_AS(name_targets("a b", 8), OutOfAlphabetError);
}
