#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "dare/date_model.hpp"
#include "dare/error.hpp"

using namespace dare;

TEST_CASE("head layouts per format") {
    CHECK(SequenceFormat::ddm().head_count() == 3);
    CHECK(SequenceFormat::ddmyy().head_count() == 5);
    CHECK(SequenceFormat::ddmyyyy().head_count() == 7);
    CHECK(SequenceFormat::ddmyy().year_head_count() == 2);

    const auto ddm = head_specs(SequenceFormat::ddm());
    REQUIRE(ddm.size() == 3);
    CHECK(ddm[0].name == HeadName::Day1);
    CHECK(ddm[1].name == HeadName::Day2);
    CHECK(ddm[2].name == HeadName::Month);
    CHECK(ddm[0].class_count() == 4);
    CHECK(ddm[1].class_count() == 11);
    CHECK(ddm[2].class_count() == 14);

    // Year heads are right-aligned: DDMYY uses Year3/Year4 so the low-order
    // digits share names with DDMYYYY.
    const auto yy = head_specs(SequenceFormat::ddmyy());
    REQUIRE(yy.size() == 5);
    CHECK(yy[3].name == HeadName::Year3);
    CHECK(yy[4].name == HeadName::Year4);
    CHECK(yy[3].class_count() == 11);

    const auto yyyy = head_specs(SequenceFormat::ddmyyyy());
    REQUIRE(yyyy.size() == 7);
    CHECK(yyyy[3].name == HeadName::Year1);
    CHECK(yyyy[6].name == HeadName::Year4);
}

TEST_CASE("head spec smoothing and symbol lookup") {
    const auto specs = head_specs(SequenceFormat::ddm(), 0.1);
    for (const auto& s : specs) CHECK(s.smoothing_alpha == 0.1);
    CHECK(specs[2].index_of("12") == 11);
    CHECK(specs[2].index_of("wildcard") == kMonthWildcard);
    CHECK(specs[2].index_of("missing") == kMonthMissing);
    CHECK_THROWS_AS(specs[2].index_of("13"), OutOfAlphabetError);
}

TEST_CASE("token helper constants") {
    CHECK(day1_token(1) == 0);
    CHECK(day1_token(3) == 2);
    CHECK(day2_token(0) == 0);
    CHECK(day2_token(9) == 9);
    CHECK(month_token(1) == 0);
    CHECK(month_token(12) == 11);
    CHECK(year_token(7) == 7);
    CHECK(kDay1Missing == 3);
    CHECK(kDay2Missing == 10);
    CHECK(kMonthMissing == 12);
    CHECK(kMonthWildcard == 13);
    CHECK(kYearMissing == 10);
}

TEST_CASE("format names round-trip") {
    for (auto fmt : {SequenceFormat::ddm(), SequenceFormat::ddmyy(), SequenceFormat::ddmyyyy()})
        CHECK(SequenceFormat::from_name(fmt.name()) == fmt);
    CHECK_THROWS_AS(SequenceFormat::from_name("bogus"), ConfigError);
    CHECK(head_name_from_string(head_name_string(HeadName::Year3)) == HeadName::Year3);
}

TEST_CASE("parse_label basic forms") {
    const auto yy = SequenceFormat::ddmyy();
    CHECK(parse_label("28", "8", "33", yy).tokens ==
          std::vector<int>{day1_token(2), day2_token(8), month_token(8), year_token(3),
                           year_token(3)});
    CHECK(parse_label("5", "12", "", yy).tokens ==
          std::vector<int>{kDay1Missing, day2_token(5), month_token(12), kYearMissing,
                           kYearMissing});
    // One year digit right-aligns into the last head.
    CHECK(parse_label("", "", "7", yy).tokens ==
          std::vector<int>{kDay1Missing, kDay2Missing, kMonthMissing, kYearMissing,
                           year_token(7)});
    CHECK(parse_label("", "=", "", yy).tokens[2] == kMonthWildcard);
    CHECK(parse_label("", "", "", yy) == all_missing_label(yy));
    CHECK(parse_label("28", "8", "1833", SequenceFormat::ddmyyyy()).tokens ==
          std::vector<int>{day1_token(2), day2_token(8), month_token(8), year_token(1),
                           year_token(8), year_token(3), year_token(3)});
}

TEST_CASE("parse_label rejects out-of-alphabet values") {
    const auto yy = SequenceFormat::ddmyy();
    CHECK_THROWS_AS(parse_label("0", "8", "33", yy), OutOfAlphabetError);
    CHECK_THROWS_AS(parse_label("32", "8", "33", yy), OutOfAlphabetError);
    CHECK_THROWS_AS(parse_label("40", "8", "33", yy), OutOfAlphabetError);
    CHECK_THROWS_AS(parse_label("28", "13", "33", yy), OutOfAlphabetError);
    CHECK_THROWS_AS(parse_label("28", "0", "33", yy), OutOfAlphabetError);
    CHECK_THROWS_AS(parse_label("=", "8", "33", yy), OutOfAlphabetError);
    CHECK_THROWS_AS(parse_label("28", "8", "=", yy), OutOfAlphabetError);
}

TEST_CASE("parse_label rejects structurally invalid input") {
    CHECK_THROWS_AS(parse_label("28", "8", "33", SequenceFormat::ddm()), FormatMismatchError);
    CHECK_THROWS_AS(parse_label("28", "8", "123", SequenceFormat::ddmyy()),
                    FormatMismatchError);
    CHECK_THROWS_AS(parse_label("28", "8", "12345", SequenceFormat::ddmyyyy()),
                    FormatMismatchError);
    CHECK_THROWS_AS(parse_label("2x", "8", "33", SequenceFormat::ddmyy()),
                    FormatMismatchError);
    CHECK_THROWS_AS(parse_label("28", "8", "3y", SequenceFormat::ddmyy()),
                    FormatMismatchError);
}

TEST_CASE("format_label canonical text grammar") {
    const auto yy = SequenceFormat::ddmyy();
    CHECK(format_label(parse_label("28", "8", "33", yy), yy) == "28-8-33");
    CHECK(format_label(parse_label("28", "8", "", yy), yy) == "28-8");
    CHECK(format_label(parse_label("", "8", "33", yy), yy) == "-8-33");
    CHECK(format_label(parse_label("28", "", "33", yy), yy) == "28--33");
    CHECK(format_label(parse_label("", "", "33", yy), yy) == "--33");
    CHECK(format_label(all_missing_label(yy), yy) == "");
    CHECK(format_label(parse_label("3", "=", "", yy), yy) == "3-=");
    CHECK(format_label(parse_label("28", "8", "1833", SequenceFormat::ddmyyyy()),
                       SequenceFormat::ddmyyyy()) == "28-8-1833");
}

TEST_CASE("label_groups splits into day/month/year texts") {
    const auto yy = SequenceFormat::ddmyy();
    const auto g = label_groups(parse_label("28", "8", "33", yy), yy);
    CHECK(g[0] == "28");
    CHECK(g[1] == "8");
    CHECK(g[2] == "33");
    const auto e = label_groups(all_missing_label(yy), yy);
    CHECK(e[0] == "");
    CHECK(e[1] == "");
    CHECK(e[2] == "");
    const auto w = label_groups(parse_label("", "=", "7", yy), yy);
    CHECK(w[1] == "=");
    CHECK(w[2] == "7");
}

TEST_CASE("parse_date_string with explicit format") {
    const auto yy = SequenceFormat::ddmyy();
    CHECK(parse_date_string("28-8-33", yy) == parse_label("28", "8", "33", yy));
    CHECK(parse_date_string("-8-33", yy) == parse_label("", "8", "33", yy));
    CHECK(parse_date_string("28-8", yy) == parse_label("28", "8", "", yy));
    CHECK(parse_date_string("", yy) == all_missing_label(yy));
    CHECK_THROWS_AS(parse_date_string("1-2-3-4", yy), FormatMismatchError);
}

TEST_CASE("parse_date_string infers the narrowest format") {
    auto [l1, f1] = parse_date_string("28-8");
    CHECK(f1 == SequenceFormat::ddm());
    CHECK(format_label(l1, f1) == "28-8");
    auto [l2, f2] = parse_date_string("28-8-33");
    CHECK(f2 == SequenceFormat::ddmyy());
    auto [l3, f3] = parse_date_string("28-8-1833");
    CHECK(f3 == SequenceFormat::ddmyyyy());
    auto [l4, f4] = parse_date_string("--833");
    CHECK(f4 == SequenceFormat::ddmyyyy());
    auto [l5, f5] = parse_date_string("");
    CHECK(f5 == SequenceFormat::ddm());
    CHECK(is_all_missing(l5, f5));
}

TEST_CASE("project_label widens with missing and narrows by head selection") {
    const auto ddm = SequenceFormat::ddm();
    const auto yy = SequenceFormat::ddmyy();
    const auto yyyy = SequenceFormat::ddmyyyy();

    const auto full = parse_label("28", "8", "1833", yyyy);
    CHECK(project_label(full, yyyy, yyyy) == full);
    CHECK(format_label(project_label(full, yyyy, yy), yy) == "28-8-33");
    CHECK(format_label(project_label(full, yyyy, ddm), ddm) == "28-8");

    const auto short_date = parse_label("28", "8", "", yy);
    const auto widened = project_label(short_date, yy, yyyy);
    CHECK(format_label(widened, yyyy) == "28-8");
    CHECK(widened.tokens[3] == kYearMissing);

    // Widening a two-digit year keeps it in the low-order heads.
    const auto yy33 = parse_label("28", "8", "33", yy);
    const auto wide33 = project_label(yy33, yy, yyyy);
    CHECK(wide33.tokens[3] == kYearMissing);
    CHECK(wide33.tokens[4] == kYearMissing);
    CHECK(wide33.tokens[5] == year_token(3));
    CHECK(format_label(wide33, yyyy) == "28-8-33");
}

TEST_CASE("validate_label checks shape and ranges") {
    const auto yy = SequenceFormat::ddmyy();
    TokenLabel bad_len{{0, 0, 0}};
    CHECK_THROWS_AS(validate_label(bad_len, yy), ShapeMismatchError);
    TokenLabel bad_tok = all_missing_label(yy);
    bad_tok.tokens[0] = 4;
    CHECK_THROWS_AS(validate_label(bad_tok, yy), ShapeMismatchError);
    bad_tok.tokens[0] = -1;
    CHECK_THROWS_AS(validate_label(bad_tok, yy), ShapeMismatchError);
    CHECK_NOTHROW(validate_label(all_missing_label(yy), yy));
}

TEST_CASE("is_canonical rejects labels parse_label cannot produce") {
    const auto yy = SequenceFormat::ddmyy();
    // Day-tens present without day-ones.
    TokenLabel l = all_missing_label(yy);
    l.tokens[0] = day1_token(2);
    CHECK_FALSE(is_canonical(l, yy));
    // A lone ones digit is canonical, but a lone zero is not a day.
    TokenLabel z = all_missing_label(yy);
    z.tokens[1] = day2_token(5);
    CHECK(is_canonical(z, yy));
    z.tokens[1] = day2_token(0);
    CHECK_FALSE(is_canonical(z, yy));
    // Day 3x with x > 1 is not a real day.
    TokenLabel d39 = all_missing_label(yy);
    d39.tokens[0] = day1_token(3);
    d39.tokens[1] = day2_token(9);
    CHECK_FALSE(is_canonical(d39, yy));
    // Year gap: first year digit present, second missing (left-aligned year).
    TokenLabel gap = all_missing_label(yy);
    gap.tokens[3] = year_token(3);
    CHECK_FALSE(is_canonical(gap, yy));
    // Right-aligned single digit is canonical.
    TokenLabel one = all_missing_label(yy);
    one.tokens[4] = year_token(3);
    CHECK(is_canonical(one, yy));
}

TEST_CASE("canonical label counts") {
    const auto ddm_all = enumerate_canonical_labels(SequenceFormat::ddm());
    CHECK(ddm_all.size() == 448);
    const auto yy_all = enumerate_canonical_labels(SequenceFormat::ddmyy());
    CHECK(yy_all.size() == 49728);

    std::set<TokenLabel> uniq(ddm_all.begin(), ddm_all.end());
    CHECK(uniq.size() == ddm_all.size());
}

TEST_CASE("every enumerated DDMYY label round-trips through text") {
    const auto yy = SequenceFormat::ddmyy();
    const auto all = enumerate_canonical_labels(yy);
    std::set<std::string> texts;
    for (const auto& l : all) {
        CHECK(is_canonical(l, yy));
        const std::string text = format_label(l, yy);
        CHECK(parse_date_string(text, yy) == l);
        texts.insert(text);
    }
    // Distinct labels render to distinct texts.
    CHECK(texts.size() == all.size());
}
