#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <string>
#include <vector>

#include "dare/link/linker.hpp"
#include "dare/rng.hpp"

using namespace dare;
using namespace dare::link;

namespace {

FieldPrediction pred(std::string id, std::string region, std::string date, std::string first,
                     std::string last) {
    FieldPrediction p;
    p.image_id = std::move(id);
    p.region_id = std::move(region);
    p.date = std::move(date);
    p.first_name = std::move(first);
    p.last_name = std::move(last);
    return p;
}

ManualRecord rec(std::string id, std::string region, std::string first, std::string last,
                 std::string date) {
    return ManualRecord{std::move(id), std::move(region), std::move(first), std::move(last),
                        std::move(date)};
}

// Independent quadratic re-implementation of the matching rule, used as an
// oracle against the hash-join production path. A prediction is eligible
// when it has exactly one candidate record (and, with require_uniqueness,
// that record has exactly one candidate prediction); a pair is emitted when
// exactly one eligible prediction claims the record.
MatchSet brute_force_match(const std::vector<FieldPrediction>& preds,
                           const std::vector<ManualRecord>& records,
                           const MatchCriteria& criteria) {
    std::map<std::size_t, std::vector<std::size_t>> cand_of_pred;
    std::map<std::size_t, std::size_t> cand_count_of_rec;
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
        for (std::size_t ri = 0; ri < records.size(); ++ri) {
            if (preds[pi].region_id != records[ri].region_id) continue;
            if (agreeing_fields(preds[pi], records[ri]) < criteria.min_agreeing_fields) continue;
            cand_of_pred[pi].push_back(ri);
            ++cand_count_of_rec[ri];
        }
    }
    std::map<std::size_t, std::size_t> claims;
    for (const auto& [pi, cands] : cand_of_pred) {
        if (cands.size() != 1) continue;
        if (criteria.require_uniqueness && cand_count_of_rec[cands[0]] != 1) continue;
        ++claims[cands[0]];
    }
    MatchSet out;
    for (const auto& [pi, cands] : cand_of_pred) {
        if (cands.size() != 1) continue;
        if (criteria.require_uniqueness && cand_count_of_rec[cands[0]] != 1) continue;
        if (claims[cands[0]] != 1) continue;
        out.insert({preds[pi].image_id, records[cands[0]].record_id});
    }
    return out;
}

}  // namespace

TEST_CASE("normalize_name cleans whitespace and case") {
    CHECK(normalize_name("  Jens   Peter ") == "jens peter");
    CHECK(normalize_name("HANSEN") == "hansen");
    CHECK(normalize_name("a\tb\nc") == "a b c");
    CHECK(normalize_name("   ") == "");
    CHECK(normalize_name("") == "");
    CHECK(normalize_name(normalize_name("  Jens   Peter ")) == "jens peter");
}

TEST_CASE("dates_agree projects onto the narrower format") {
    CHECK(dates_agree("28-8-33", "28-8-33"));
    CHECK(dates_agree("28-8-1833", "28-8-33"));
    CHECK(dates_agree("28-8-33", "28-8-1833"));
    CHECK(dates_agree("28-8", "28-8-1833"));
    CHECK_FALSE(dates_agree("28-8-1833", "28-8-1933"));
    CHECK_FALSE(dates_agree("28-8-33", "28-9-33"));
    CHECK_FALSE(dates_agree("27-8-33", "28-8-33"));
    // Same narrow projection, different full years: narrow vs full agrees
    // with either, but the two full dates disagree with each other.
    CHECK(dates_agree("28-8-33", "28-8-1933"));
    CHECK_FALSE(dates_agree("28-8-1833", "28-8-1933"));
}

TEST_CASE("missing or unreadable dates never agree") {
    CHECK_FALSE(dates_agree("", ""));
    CHECK_FALSE(dates_agree("", "28-8-33"));
    CHECK_FALSE(dates_agree("28-8-33", ""));
    CHECK_FALSE(dates_agree("not a date", "28-8-33"));
    // A missing day does not agree with a written one even if the rest fits.
    CHECK_FALSE(dates_agree("-8-33", "28-8-33"));
    CHECK(dates_agree("-8-33", "-8-33"));
}

TEST_CASE("agreeing_fields counts informative agreements") {
    const auto r = rec("r1", "reg", "jens", "hansen", "28-8-33");
    CHECK(agreeing_fields(pred("i", "reg", "28-8-33", "jens", "hansen"), r) == 3);
    CHECK(agreeing_fields(pred("i", "reg", "28-8-33", "jens", "nielsen"), r) == 2);
    CHECK(agreeing_fields(pred("i", "reg", "1-1-11", "jens", "nielsen"), r) == 1);
    CHECK(agreeing_fields(pred("i", "reg", "", "", ""), r) == 0);
    // Names normalise before comparison.
    CHECK(agreeing_fields(pred("i", "reg", "", " JENS ", "Hansen"), r) == 2);
    // Empty record fields are uninformative too.
    const auto empty_rec = rec("r2", "reg", "", "", "28-8-33");
    CHECK(agreeing_fields(pred("i", "reg", "28-8-33", "", ""), empty_rec) == 1);
}

TEST_CASE("exact_match requires two of three fields in the same region") {
    const std::vector<ManualRecord> records = {
        rec("r1", "reg1", "jens", "hansen", "28-8-33"),
        rec("r2", "reg1", "anna", "nielsen", "5-12-01"),
        rec("r3", "reg2", "jens", "hansen", "28-8-33"),
    };
    const MatchCriteria crit;

    // Date + first name agree: matched despite a botched last name.
    auto m = exact_match({pred("i1", "reg1", "28-8-33", "jens", "xxx")}, records, crit);
    CHECK(m == MatchSet{{"i1", "r1"}});

    // Only the date agrees: no match.
    m = exact_match({pred("i2", "reg1", "28-8-33", "xxx", "yyy")}, records, crit);
    CHECK(m.empty());

    // Region gates everything: the same fields in the wrong region miss.
    m = exact_match({pred("i3", "reg3", "28-8-33", "jens", "hansen")}, records, crit);
    CHECK(m.empty());

    // Two candidate records in one region: ambiguous, no match.
    const std::vector<ManualRecord> twins = {
        rec("r1", "reg1", "jens", "hansen", "28-8-33"),
        rec("r2", "reg1", "jens", "hansen", "1-1-11"),
    };
    m = exact_match({pred("i4", "reg1", "", "jens", "hansen")}, twins, crit);
    CHECK(m.empty());
}

TEST_CASE("uniqueness blocks records claimed by two predictions") {
    const std::vector<ManualRecord> records = {rec("r1", "reg", "jens", "hansen", "28-8-33")};
    const std::vector<FieldPrediction> preds = {
        pred("i1", "reg", "28-8-33", "jens", ""),
        pred("i2", "reg", "28-8-33", "", "hansen"),
    };
    MatchCriteria crit;
    auto m = exact_match(preds, records, crit);
    CHECK(m.empty());
    // Even without require_uniqueness the output stays one-to-one.
    crit.require_uniqueness = false;
    m = exact_match(preds, records, crit);
    CHECK(m.empty());
}

TEST_CASE("relaxed uniqueness ignores ambiguous rivals") {
    // i1's only candidate is r1; i2 is torn between r1 and r2. Strict
    // uniqueness blocks r1 outright, relaxed mode lets i1 take it because
    // i2 never commits to a single record.
    const std::vector<ManualRecord> records = {
        rec("r1", "reg", "jens", "hansen", "28-8-33"),
        rec("r2", "reg", "jens", "hansen", "5-12-01"),
    };
    const std::vector<FieldPrediction> preds = {
        pred("i1", "reg", "28-8-33", "jens", ""),
        pred("i2", "reg", "", "jens", "hansen"),
    };
    MatchCriteria crit;
    CHECK(exact_match(preds, records, crit).empty());
    crit.require_uniqueness = false;
    CHECK(exact_match(preds, records, crit) == MatchSet{{"i1", "r1"}});
}

TEST_CASE("match_to_fixpoint unblocks chains of ambiguity") {
    // i1 fits r1 and r2; i2 fits only r2. Under relaxed uniqueness the first
    // pass matches i2/r2, consuming r2, and the second pass disambiguates i1
    // to r1.
    const std::vector<ManualRecord> records = {
        rec("r1", "reg", "jens", "hansen", "28-8-33"),
        rec("r2", "reg", "jens", "hansen", "5-12-01"),
    };
    const std::vector<FieldPrediction> preds = {
        pred("i1", "reg", "", "jens", "hansen"),
        pred("i2", "reg", "5-12-01", "jens", ""),
    };
    MatchCriteria crit;
    crit.require_uniqueness = false;
    CHECK(exact_match(preds, records, crit) == MatchSet{{"i2", "r2"}});
    CHECK(match_to_fixpoint(preds, records, crit) ==
          MatchSet{{"i1", "r1"}, {"i2", "r2"}});
}

TEST_CASE("a strict-uniqueness pass is already a fixpoint") {
    // With two-way uniqueness, every matched record had exactly one
    // candidate prediction and vice versa, so removing matched pairs never
    // changes the remaining candidate sets.
    Rng rng(55);
    const char* firsts[] = {"jens", "anna", "peter", ""};
    const char* lasts[] = {"hansen", "nielsen", ""};
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ManualRecord> records;
        std::vector<FieldPrediction> preds;
        const auto n = static_cast<std::size_t>(rng.uniform_int(0, 30));
        for (std::size_t i = 0; i < n; ++i) {
            const std::string date = std::to_string(rng.uniform_int(1, 5)) + "-1-11";
            records.push_back(rec("r" + std::to_string(i), "reg",
                                  firsts[rng.uniform_int(0, 3)], lasts[rng.uniform_int(0, 2)],
                                  date));
            preds.push_back(pred("i" + std::to_string(i), "reg",
                                 std::to_string(rng.uniform_int(1, 5)) + "-1-11",
                                 firsts[rng.uniform_int(0, 3)], lasts[rng.uniform_int(0, 2)]));
        }
        const MatchCriteria strict;
        CHECK(match_to_fixpoint(preds, records, strict) ==
              exact_match(preds, records, strict));
    }
}

TEST_CASE("exact_match equals the brute-force oracle on random populations") {
    Rng rng(1234);
    const char* firsts[] = {"jens", "anna", "peter", "maren", "hans", ""};
    const char* lasts[] = {"hansen", "nielsen", "sorensen", "juul", ""};

    for (int trial = 0; trial < 1000; ++trial) {
        const auto n_rec = static_cast<std::size_t>(rng.uniform_int(0, 60));
        const auto n_pred = static_cast<std::size_t>(rng.uniform_int(0, 60));
        const int regions = static_cast<int>(rng.uniform_int(1, 3));

        auto random_date = [&]() -> std::string {
            switch (rng.uniform_int(0, 3)) {
                case 0: return "";
                case 1:
                    return std::to_string(rng.uniform_int(1, 28)) + "-" +
                           std::to_string(rng.uniform_int(1, 12));
                default:
                    return std::to_string(rng.uniform_int(1, 28)) + "-" +
                           std::to_string(rng.uniform_int(1, 12)) + "-" +
                           std::to_string(rng.uniform_int(10, 99));
            }
        };

        std::vector<ManualRecord> records;
        for (std::size_t i = 0; i < n_rec; ++i) {
            records.push_back(rec("r" + std::to_string(i),
                                  "reg" + std::to_string(rng.uniform_int(1, regions)),
                                  firsts[rng.uniform_int(0, 5)], lasts[rng.uniform_int(0, 4)],
                                  random_date()));
        }
        std::vector<FieldPrediction> preds;
        for (std::size_t i = 0; i < n_pred; ++i) {
            preds.push_back(pred("i" + std::to_string(i),
                                 "reg" + std::to_string(rng.uniform_int(1, regions)),
                                 random_date(), firsts[rng.uniform_int(0, 5)],
                                 lasts[rng.uniform_int(0, 4)]));
        }

        MatchCriteria crit;
        crit.min_agreeing_fields = static_cast<int>(rng.uniform_int(1, 3));
        crit.require_uniqueness = rng.bernoulli(0.5);

        const MatchSet fast = exact_match(preds, records, crit);
        const MatchSet slow = brute_force_match(preds, records, crit);
        REQUIRE(fast == slow);
    }
}

TEST_CASE("intersect_matches keeps only pairs present in both") {
    const MatchSet a = {{"i1", "r1"}, {"i2", "r2"}, {"i3", "r3"}};
    const MatchSet b = {{"i2", "r2"}, {"i3", "r4"}, {"i4", "r4"}};
    CHECK(intersect_matches(a, b) == MatchSet{{"i2", "r2"}});
    CHECK(intersect_matches(a, {}).empty());
    CHECK(intersect_matches(a, a) == a);
}

TEST_CASE("split_matches halves deterministically") {
    MatchSet m;
    for (int i = 0; i < 8; ++i) {
        m.insert({"i" + std::to_string(i), "r" + std::to_string(i)});
    }
    auto [a, b] = split_matches(m, 42);
    CHECK(a.size() == 4);
    CHECK(b.size() == 4);

    MatchSet joined = a;
    joined.insert(b.begin(), b.end());
    CHECK(joined == m);

    auto [a2, b2] = split_matches(m, 42);
    CHECK(a2 == a);
    CHECK(b2 == b);
    auto [a3, b3] = split_matches(m, 43);
    CHECK((a3 != a || b3 != b));

    // Odd size: the first part gets the extra pair.
    m.insert({"i8", "r8"});
    auto [c, d] = split_matches(m, 1);
    CHECK(c.size() == 5);
    CHECK(d.size() == 4);
}

TEST_CASE("match criteria validation") {
    MatchCriteria crit;
    crit.min_agreeing_fields = 0;
    CHECK_THROWS_AS(crit.validate(), ConfigError);
    crit.min_agreeing_fields = 4;
    CHECK_THROWS_AS(crit.validate(), ConfigError);
}
