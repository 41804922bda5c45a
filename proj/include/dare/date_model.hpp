#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dare/error.hpp"

namespace dare {

// A date is recognised as a fixed-length sequence of classification heads.
// Three formats are supported:
//   DDM      day-tens, day-ones, month                      (3 heads)
//   DDMYY    ... plus two year digits                       (5 heads)
//   DDMYYYY  ... plus four year digits                      (7 heads)
// Year heads are right-aligned: a two-digit year occupies Year3/Year4, so a
// DDMYYYY model and a DDMYY model share the names of their low-order year
// heads and projections between formats are just head selection.
enum class FormatKind { DDM, DDMYY, DDMYYYY };

struct SequenceFormat {
    FormatKind kind = FormatKind::DDM;

    static SequenceFormat ddm() { return {FormatKind::DDM}; }
    static SequenceFormat ddmyy() { return {FormatKind::DDMYY}; }
    static SequenceFormat ddmyyyy() { return {FormatKind::DDMYYYY}; }
    static SequenceFormat from_name(std::string_view name);

    int head_count() const;
    int year_head_count() const { return head_count() - 3; }
    std::string name() const;

    bool operator==(const SequenceFormat&) const = default;
};

enum class HeadName { Day1, Day2, Month, Year1, Year2, Year3, Year4 };

std::string head_name_string(HeadName name);
HeadName head_name_from_string(std::string_view s);

// One classification head: an ordered class alphabet plus the label-smoothing
// strength used when training against it.
struct HeadSpec {
    HeadName name = HeadName::Day1;
    std::vector<std::string> alphabet;
    double smoothing_alpha = 0.0;

    int class_count() const { return static_cast<int>(alphabet.size()); }
    int index_of(std::string_view symbol) const;  // throws OutOfAlphabetError

    bool operator==(const HeadSpec&) const = default;
};

// The standard head layout for a format. Alphabets:
//   Day1   {1, 2, 3, missing}                         4 classes
//   Day2   {0..9, missing}                            11 classes
//   Month  {1..12, missing, wildcard}                 14 classes
//   YearN  {0..9, missing}                            11 classes each
std::vector<HeadSpec> head_specs(SequenceFormat fmt, double smoothing_alpha = 0.0);

// Token index helpers for the standard alphabets.
inline constexpr int kDay1Missing = 3;
inline constexpr int kDay2Missing = 10;
inline constexpr int kMonthMissing = 12;
inline constexpr int kMonthWildcard = 13;
inline constexpr int kYearMissing = 10;

int day1_token(int digit);      // digit in 1..3
int day2_token(int digit);      // digit in 0..9
int month_token(int month);     // month in 1..12
int year_token(int digit);      // digit in 0..9

// A label is one class index per head, in head order.
struct TokenLabel {
    std::vector<int> tokens;

    bool operator==(const TokenLabel&) const = default;
    auto operator<=>(const TokenLabel&) const = default;
};

// Builds a label from the textual day / month / year fields of a source
// record. Empty fields become missing tokens; "=" in the month field is the
// wildcard. Throws OutOfAlphabetError for values outside the alphabets
// (day 0, month 13, wildcard in day or year) and FormatMismatchError for
// structurally invalid input (non-digits, year text longer than the format's
// year heads, any year text for DDM).
TokenLabel parse_label(std::string_view day, std::string_view month, std::string_view year,
                       SequenceFormat fmt);

// The day / month / year group texts of a label ("28", "8", "33"); missing
// tokens are elided within each group, the month wildcard renders as "=".
std::array<std::string, 3> label_groups(const TokenLabel& label, SequenceFormat fmt);

// Renders a label back to its canonical text, e.g. "28-8-33". Missing day
// digits and year digits are elided; trailing empty groups drop their
// separator ("28-8"), leading/inner empty groups keep it ("-8-33", "28--33").
// The all-missing label renders as "".
std::string format_label(const TokenLabel& label, SequenceFormat fmt);

// Parses canonical text ("28-8-33", "-8-33", "28-8", "") into a label of the
// given format.
TokenLabel parse_date_string(std::string_view text, SequenceFormat fmt);

// As above but infers the narrowest format that fits: no year digits -> DDM,
// 1-2 digits -> DDMYY, 3-4 digits -> DDMYYYY.
std::pair<TokenLabel, SequenceFormat> parse_date_string(std::string_view text);

// Re-expresses a label in another format. Heads present in both formats are
// copied unchanged; heads only in the target become missing; heads only in
// the source are dropped. Projection to the same format is the identity.
TokenLabel project_label(const TokenLabel& label, SequenceFormat from, SequenceFormat to);

TokenLabel all_missing_label(SequenceFormat fmt);
bool is_all_missing(const TokenLabel& label, SequenceFormat fmt);

// True if the label could have been produced by parse_label: the day group
// is a real day (or missing), with no stray leading digit and no day-tens
// without day-ones, and year digits have no missing gaps after the first
// digit. format_label/parse round-trips exactly on this set.
bool is_canonical(const TokenLabel& label, SequenceFormat fmt);

// Checks token count and per-head ranges; throws ShapeMismatchError.
void validate_label(const TokenLabel& label, SequenceFormat fmt);

// All canonical labels of a format, in lexicographic token order. DDM has
// 448 of them, DDMYY 49,728. Intended for exhaustive tests and enumeration
// tools, not hot paths.
std::vector<TokenLabel> enumerate_canonical_labels(SequenceFormat fmt);

}  // namespace dare
