#include "dare/date_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace dare {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int to_int(std::string_view s) {
    int v = 0;
    for (const char c : s) v = v * 10 + (c - '0');
    return v;
}

std::vector<HeadName> head_names(SequenceFormat fmt) {
    switch (fmt.kind) {
        case FormatKind::DDM:
            return {HeadName::Day1, HeadName::Day2, HeadName::Month};
        case FormatKind::DDMYY:
            return {HeadName::Day1, HeadName::Day2, HeadName::Month, HeadName::Year3,
                    HeadName::Year4};
        case FormatKind::DDMYYYY:
            return {HeadName::Day1, HeadName::Day2, HeadName::Month, HeadName::Year1,
                    HeadName::Year2, HeadName::Year3, HeadName::Year4};
    }
    throw ConfigError("unknown format kind");
}

int missing_token(HeadName name) {
    switch (name) {
        case HeadName::Day1: return kDay1Missing;
        case HeadName::Day2: return kDay2Missing;
        case HeadName::Month: return kMonthMissing;
        default: return kYearMissing;
    }
}

}  // namespace

SequenceFormat SequenceFormat::from_name(std::string_view name) {
    if (name == "DDM" || name == "ddm") return ddm();
    if (name == "DDMYY" || name == "ddmyy") return ddmyy();
    if (name == "DDMYYYY" || name == "ddmyyyy") return ddmyyyy();
    throw ConfigError("unknown sequence format: " + std::string(name));
}

int SequenceFormat::head_count() const {
    switch (kind) {
        case FormatKind::DDM: return 3;
        case FormatKind::DDMYY: return 5;
        case FormatKind::DDMYYYY: return 7;
    }
    throw ConfigError("unknown format kind");
}

std::string SequenceFormat::name() const {
    switch (kind) {
        case FormatKind::DDM: return "DDM";
        case FormatKind::DDMYY: return "DDMYY";
        case FormatKind::DDMYYYY: return "DDMYYYY";
    }
    throw ConfigError("unknown format kind");
}

std::string head_name_string(HeadName name) {
    switch (name) {
        case HeadName::Day1: return "Day1";
        case HeadName::Day2: return "Day2";
        case HeadName::Month: return "Month";
        case HeadName::Year1: return "Year1";
        case HeadName::Year2: return "Year2";
        case HeadName::Year3: return "Year3";
        case HeadName::Year4: return "Year4";
    }
    throw ConfigError("unknown head name");
}

HeadName head_name_from_string(std::string_view s) {
    static constexpr std::array<HeadName, 7> all = {
        HeadName::Day1, HeadName::Day2, HeadName::Month, HeadName::Year1,
        HeadName::Year2, HeadName::Year3, HeadName::Year4};
    for (const HeadName h : all) {
        if (head_name_string(h) == s) return h;
    }
    throw ConfigError("unknown head name: " + std::string(s));
}

int HeadSpec::index_of(std::string_view symbol) const {
    for (int i = 0; i < class_count(); ++i) {
        if (alphabet[static_cast<std::size_t>(i)] == symbol) return i;
    }
    throw OutOfAlphabetError("symbol '" + std::string(symbol) + "' not in alphabet of head " +
                             head_name_string(name));
}

std::vector<HeadSpec> head_specs(SequenceFormat fmt, double smoothing_alpha) {
    std::vector<HeadSpec> specs;
    for (const HeadName name : head_names(fmt)) {
        HeadSpec spec;
        spec.name = name;
        spec.smoothing_alpha = smoothing_alpha;
        switch (name) {
            case HeadName::Day1:
                spec.alphabet = {"1", "2", "3", "missing"};
                break;
            case HeadName::Day2:
                for (int d = 0; d <= 9; ++d) spec.alphabet.push_back(std::to_string(d));
                spec.alphabet.push_back("missing");
                break;
            case HeadName::Month:
                for (int m = 1; m <= 12; ++m) spec.alphabet.push_back(std::to_string(m));
                spec.alphabet.push_back("missing");
                spec.alphabet.push_back("wildcard");
                break;
            default:
                for (int d = 0; d <= 9; ++d) spec.alphabet.push_back(std::to_string(d));
                spec.alphabet.push_back("missing");
                break;
        }
        specs.push_back(std::move(spec));
    }
    return specs;
}

int day1_token(int digit) {
    if (digit < 1 || digit > 3) throw OutOfAlphabetError("day tens digit out of range");
    return digit - 1;
}

int day2_token(int digit) {
    if (digit < 0 || digit > 9) throw OutOfAlphabetError("day ones digit out of range");
    return digit;
}

int month_token(int month) {
    if (month < 1 || month > 12) throw OutOfAlphabetError("month out of range");
    return month - 1;
}

int year_token(int digit) {
    if (digit < 0 || digit > 9) throw OutOfAlphabetError("year digit out of range");
    return digit;
}

TokenLabel parse_label(std::string_view day, std::string_view month, std::string_view year,
                       SequenceFormat fmt) {
    day = trim(day);
    month = trim(month);
    year = trim(year);

    TokenLabel label;
    label.tokens.reserve(static_cast<std::size_t>(fmt.head_count()));

    // Day group.
    if (day.empty()) {
        label.tokens.push_back(kDay1Missing);
        label.tokens.push_back(kDay2Missing);
    } else if (day == "=") {
        throw OutOfAlphabetError("wildcard is not allowed in the day field");
    } else if (!all_digits(day)) {
        throw FormatMismatchError("day field is not numeric: '" + std::string(day) + "'");
    } else if (day.size() > 2) {
        throw FormatMismatchError("day field has more than two digits: '" + std::string(day) + "'");
    } else {
        const int value = to_int(day);
        if (value < 1 || value > 31) {
            throw OutOfAlphabetError("day value out of range: " + std::to_string(value));
        }
        if (value < 10) {
            label.tokens.push_back(kDay1Missing);
            label.tokens.push_back(day2_token(value));
        } else {
            label.tokens.push_back(day1_token(value / 10));
            label.tokens.push_back(day2_token(value % 10));
        }
    }

    // Month group.
    if (month.empty()) {
        label.tokens.push_back(kMonthMissing);
    } else if (month == "=") {
        label.tokens.push_back(kMonthWildcard);
    } else if (!all_digits(month)) {
        throw FormatMismatchError("month field is not numeric: '" + std::string(month) + "'");
    } else if (month.size() > 2) {
        throw FormatMismatchError("month field has more than two digits: '" + std::string(month) +
                                  "'");
    } else {
        const int value = to_int(month);
        if (value < 1 || value > 12) {
            throw OutOfAlphabetError("month value out of range: " + std::to_string(value));
        }
        label.tokens.push_back(month_token(value));
    }

    // Year group, right-aligned into the format's year heads.
    const int year_heads = fmt.year_head_count();
    if (year == "=") throw OutOfAlphabetError("wildcard is not allowed in the year field");
    if (!year.empty() && !all_digits(year)) {
        throw FormatMismatchError("year field is not numeric: '" + std::string(year) + "'");
    }
    if (static_cast<int>(year.size()) > year_heads) {
        throw FormatMismatchError("year '" + std::string(year) + "' does not fit format " +
                                  fmt.name());
    }
    const int pad = year_heads - static_cast<int>(year.size());
    for (int i = 0; i < pad; ++i) label.tokens.push_back(kYearMissing);
    for (const char c : year) label.tokens.push_back(year_token(c - '0'));

    return label;
}

std::array<std::string, 3> label_groups(const TokenLabel& label, SequenceFormat fmt) {
    validate_label(label, fmt);
    const auto& t = label.tokens;

    std::string day;
    if (t[0] != kDay1Missing) day += static_cast<char>('1' + t[0]);
    if (t[1] != kDay2Missing) day += static_cast<char>('0' + t[1]);

    std::string month;
    if (t[2] == kMonthWildcard) month = "=";
    else if (t[2] != kMonthMissing) month = std::to_string(t[2] + 1);

    std::string year;
    for (int i = 3; i < fmt.head_count(); ++i) {
        if (t[static_cast<std::size_t>(i)] != kYearMissing) {
            year += static_cast<char>('0' + t[static_cast<std::size_t>(i)]);
        }
    }
    return {std::move(day), std::move(month), std::move(year)};
}

std::string format_label(const TokenLabel& label, SequenceFormat fmt) {
    auto groups = label_groups(label, fmt);

    std::vector<std::string> parts = {std::move(groups[0]), std::move(groups[1])};
    if (fmt.year_head_count() > 0) parts.push_back(std::move(groups[2]));
    while (!parts.empty() && parts.back().empty()) parts.pop_back();

    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.push_back('-');
        out += parts[i];
    }
    return out;
}

namespace {

std::array<std::string_view, 3> split_date_text(std::string_view text) {
    std::array<std::string_view, 3> parts = {"", "", ""};
    std::size_t part = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '-') {
            if (part >= 3) throw FormatMismatchError("too many '-' groups in date text");
            parts[part++] = text.substr(start, i - start);
            start = i + 1;
        }
    }
    return parts;
}

}  // namespace

TokenLabel parse_date_string(std::string_view text, SequenceFormat fmt) {
    const auto [day, month, year] = split_date_text(trim(text));
    return parse_label(day, month, year, fmt);
}

std::pair<TokenLabel, SequenceFormat> parse_date_string(std::string_view text) {
    const auto parts = split_date_text(trim(text));
    const std::string_view year = trim(parts[2]);
    SequenceFormat fmt = SequenceFormat::ddm();
    if (!year.empty()) {
        if (year.size() <= 2) fmt = SequenceFormat::ddmyy();
        else if (year.size() <= 4) fmt = SequenceFormat::ddmyyyy();
        else throw FormatMismatchError("year '" + std::string(year) + "' has too many digits");
    }
    return {parse_label(parts[0], parts[1], year, fmt), fmt};
}

TokenLabel project_label(const TokenLabel& label, SequenceFormat from, SequenceFormat to) {
    validate_label(label, from);
    const auto from_names = head_names(from);
    const auto to_names = head_names(to);

    TokenLabel out;
    out.tokens.reserve(to_names.size());
    for (const HeadName name : to_names) {
        const auto it = std::find(from_names.begin(), from_names.end(), name);
        if (it == from_names.end()) {
            out.tokens.push_back(missing_token(name));
        } else {
            out.tokens.push_back(label.tokens[static_cast<std::size_t>(it - from_names.begin())]);
        }
    }
    return out;
}

TokenLabel all_missing_label(SequenceFormat fmt) {
    TokenLabel label;
    for (const HeadName name : head_names(fmt)) label.tokens.push_back(missing_token(name));
    return label;
}

bool is_all_missing(const TokenLabel& label, SequenceFormat fmt) {
    return label == all_missing_label(fmt);
}

void validate_label(const TokenLabel& label, SequenceFormat fmt) {
    const auto names = head_names(fmt);
    if (label.tokens.size() != names.size()) {
        throw ShapeMismatchError("label has " + std::to_string(label.tokens.size()) +
                                 " tokens, format " + fmt.name() + " needs " +
                                 std::to_string(names.size()));
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        int classes = 0;
        switch (names[i]) {
            case HeadName::Day1: classes = 4; break;
            case HeadName::Month: classes = 14; break;
            default: classes = 11; break;
        }
        if (label.tokens[i] < 0 || label.tokens[i] >= classes) {
            throw ShapeMismatchError("token " + std::to_string(label.tokens[i]) +
                                     " out of range for head " + head_name_string(names[i]));
        }
    }
}

bool is_canonical(const TokenLabel& label, SequenceFormat fmt) {
    validate_label(label, fmt);
    const auto& t = label.tokens;

    // Day group: missing, a single ones digit 1-9, or a full two-digit day
    // no greater than 31.
    const int d1 = t[0];
    const int d2 = t[1];
    if (d1 == kDay1Missing) {
        if (d2 != kDay2Missing && d2 == 0) return false;  // day "0" is not a day
    } else {
        if (d2 == kDay2Missing) return false;  // tens digit with no ones digit
        const int value = (d1 + 1) * 10 + d2;
        if (value > 31) return false;
    }

    // Year group: right-aligned, so no missing token after the first digit.
    bool digit_seen = false;
    for (int i = 3; i < fmt.head_count(); ++i) {
        const int y = t[static_cast<std::size_t>(i)];
        if (y == kYearMissing) {
            if (digit_seen) return false;
        } else {
            digit_seen = true;
        }
    }
    return true;
}

std::vector<TokenLabel> enumerate_canonical_labels(SequenceFormat fmt) {
    const auto specs = head_specs(fmt);
    std::vector<TokenLabel> out;
    TokenLabel current;
    current.tokens.assign(static_cast<std::size_t>(fmt.head_count()), 0);

    // Odometer over the full token product, filtered to canonical labels.
    while (true) {
        if (is_canonical(current, fmt)) out.push_back(current);
        int pos = fmt.head_count() - 1;
        while (pos >= 0) {
            auto& tok = current.tokens[static_cast<std::size_t>(pos)];
            if (++tok < specs[static_cast<std::size_t>(pos)].class_count()) break;
            tok = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

}  // namespace dare
