#include "dare/link/census.hpp"

#include <algorithm>
#include <cstdio>

#include "dare/error.hpp"
#include "dare/rng.hpp"

namespace dare::link {
namespace {

const std::vector<std::string> kFirstNames = {
    "anders",  "anna",    "anne",   "bertel",  "birthe",    "bodil",   "carl",     "caroline",
    "christen", "christian", "dorthe", "else",  "erik",      "frederik", "gertrud", "hans",
    "henrik",  "inger",   "jacob",  "jens",    "johanne",   "johannes", "jorgen",  "karen",
    "kirsten", "knud",    "lars",   "laurids", "lene",      "ludvig",  "maren",    "margrethe",
    "marie",   "mathias", "mette",  "mikkel",  "morten",    "niels",   "ole",      "peder",
    "peter",   "poul",    "rasmus", "sidsel",  "soren",     "thomas"};

const std::vector<std::string> kLastNames = {
    "andersen",  "bak",      "bech",      "berg",       "bruun",     "christensen",
    "christiansen", "clausen", "dahl",    "eriksen",    "fischer",   "friis",
    "frandsen",  "gram",     "hansen",    "hedegaard",  "henriksen", "holm",
    "holst",     "iversen",  "jacobsen",  "jensen",     "jeppesen",  "johansen",
    "juhl",      "justesen", "kjaer",     "knudsen",    "larsen",    "lauridsen",
    "lund",      "madsen",   "mortensen", "nielsen",    "olesen",    "pedersen",
    "petersen",  "poulsen",  "rasmussen", "sorensen"};

std::string format_id(const char* fmt, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, fmt, n);
    return buf;
}

MockWorld::Truth random_truth(Rng& rng) {
    MockWorld::Truth t;
    const int day = rng.uniform_int(1, 31);
    const int month = rng.uniform_int(1, 12);
    const int year = rng.uniform_int(0, 99);
    char date[16];
    std::snprintf(date, sizeof date, "%d-%d-%02d", day, month, year);
    t.date = date;
    t.first_name = kFirstNames[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(kFirstNames.size()) - 1))];
    t.last_name = kLastNames[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(kLastNames.size()) - 1))];
    return t;
}

}  // namespace

void CensusScenarioConfig::validate() const {
    if (record_count == 0) throw ConfigError("census scenario needs at least one record");
    if (region_count <= 0) throw ConfigError("census scenario needs at least one region");
    mock.validate();
    if (render_pixels) {
        if (field_height <= 0 || field_width <= 0) {
            throw ConfigError("census field snippets need positive dimensions");
        }
        style.validate();
    }
}

CensusScenario make_census_scenario(const CensusScenarioConfig& config) {
    config.validate();
    CensusScenario scenario;
    scenario.config = config;
    auto world = std::make_shared<MockWorld>();
    world->first_name_pool = kFirstNames;
    world->last_name_pool = kLastNames;

    Rng rng(mix_seed(config.seed, 0xCE4505));
    const std::size_t total = config.record_count + config.extra_image_count;
    for (std::size_t i = 0; i < total; ++i) {
        const MockWorld::Truth truth = random_truth(rng);
        const std::string region =
            format_id("reg-%02zu", static_cast<std::size_t>(rng.uniform_int(
                                       0, config.region_count - 1)));
        CensusImage image;
        image.image_id = format_id("img-%05zu", i);
        image.region_id = region;
        if (config.render_pixels) {
            const auto snippet = [&](const std::string& text, std::uint64_t salt) {
                return quantize(corpus::render_text(text, config.style, config.field_height,
                                                    config.field_width,
                                                    mix_seed(config.seed, salt, i)));
            };
            image.date_field = snippet(truth.date, 0x9E0);
            image.first_name_field = snippet(truth.first_name, 0x9E1);
            image.last_name_field = snippet(truth.last_name, 0x9E2);
        }
        world->truth[image.image_id] = truth;
        scenario.images.push_back(std::move(image));

        if (i < config.record_count) {
            ManualRecord rec;
            rec.record_id = format_id("rec-%05zu", i);
            rec.region_id = region;
            rec.first_name = truth.first_name;
            rec.last_name = truth.last_name;
            rec.birth_date = truth.date;
            scenario.true_pairs.insert({scenario.images.back().image_id, rec.record_id});
            scenario.records.push_back(std::move(rec));
        }
    }
    rng.shuffle(scenario.images);
    rng.shuffle(scenario.records);
    scenario.world = std::move(world);
    return scenario;
}

std::vector<FieldPrediction> perfect_predictions(const CensusScenario& scenario) {
    std::vector<FieldPrediction> preds;
    preds.reserve(scenario.images.size());
    for (const auto& image : scenario.images) {
        const auto& truth = scenario.world->truth_of(image.image_id);
        FieldPrediction p;
        p.image_id = image.image_id;
        p.region_id = image.region_id;
        p.date = truth.date;
        p.first_name = truth.first_name;
        p.last_name = truth.last_name;
        preds.push_back(std::move(p));
    }
    return preds;
}

MatchSet matchable_pairs(const CensusScenario& scenario, const MatchCriteria& criteria) {
    return match_to_fixpoint(perfect_predictions(scenario), scenario.records, criteria);
}

LinkQuality assess_links(const CensusScenario& scenario, const std::vector<MatchEntry>& links,
                         const MatchCriteria& criteria) {
    const MatchSet matchable = matchable_pairs(scenario, criteria);
    LinkQuality q;
    q.links = links.size();
    q.matchable = matchable.size();
    for (const auto& link : links) {
        const MatchPair pair{link.image_id, link.record_id};
        if (scenario.true_pairs.count(pair)) ++q.correct;
        if (matchable.count(pair)) ++q.matched_matchable;
    }
    q.precision = q.links == 0 ? 1.0 : static_cast<double>(q.correct) / static_cast<double>(q.links);
    q.match_rate = q.matchable == 0
                       ? 1.0
                       : static_cast<double>(q.matched_matchable) / static_cast<double>(q.matchable);
    return q;
}

MockSetup make_mock_setup(const CensusScenario& scenario) {
    const MockParams& params = scenario.config.mock;
    MockSetup setup;
    setup.date_trainer = std::make_unique<MockTrainer>(scenario.world, FieldKind::Date, params);
    setup.first_name_trainer =
        std::make_unique<MockTrainer>(scenario.world, FieldKind::FirstName, params);
    setup.last_name_trainer =
        std::make_unique<MockTrainer>(scenario.world, FieldKind::LastName, params);
    const std::uint64_t seed = scenario.config.seed;
    setup.base.date = setup.date_trainer->train({}, mix_seed(seed, 0xBA5E, 0));
    setup.base.first_name = setup.first_name_trainer->train({}, mix_seed(seed, 0xBA5E, 1));
    setup.base.last_name = setup.last_name_trainer->train({}, mix_seed(seed, 0xBA5E, 2));
    return setup;
}

}  // namespace dare::link
