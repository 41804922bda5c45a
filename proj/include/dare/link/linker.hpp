#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dare/date_model.hpp"

namespace dare::link {

// A transcribed register entry (the trusted side of the linkage).
struct ManualRecord {
    std::string record_id;
    std::string region_id;
    std::string first_name;
    std::string last_name;
    std::string birth_date;   // canonical date text
};

// Machine-read fields for one census image.
struct FieldPrediction {
    std::string image_id;
    std::string region_id;
    std::string date;
    std::string first_name;
    std::string last_name;
    double date_conf = 1.0;
    double first_name_conf = 1.0;
    double last_name_conf = 1.0;
};

// Lowercased, trimmed, inner whitespace collapsed. Empty result means the
// field carries no information and never participates in matching.
std::string normalize_name(std::string_view raw);

// Two date texts agree when both parse, neither is all-missing, and their
// tokens are equal after projecting both onto the narrower of the two
// formats (so "28-8-1833" agrees with "28-8-33", but not with "28-8-1933"
// in the same comparison format, and a missing day never agrees with a
// written one).
bool dates_agree(std::string_view a, std::string_view b);

// Number of fields (date, first name, last name) on which prediction and
// record agree; empty or unparseable fields never count.
int agreeing_fields(const FieldPrediction& pred, const ManualRecord& rec);

struct MatchCriteria {
    int min_agreeing_fields = 2;   // of the three fields
    bool require_uniqueness = true;

    void validate() const;
};

using MatchPair = std::pair<std::string, std::string>;   // (image_id, record_id)
using MatchSet = std::set<MatchPair>;

// Candidate pairs are prediction/record pairs in the same region with at
// least min_agreeing_fields in agreement. A prediction is matched to its
// candidate record only when it has exactly one candidate; with
// require_uniqueness the record must also have exactly one candidate
// prediction. Without it, a record claimed by more than one prediction is
// still dropped, keeping the output one-to-one.
MatchSet exact_match(const std::vector<FieldPrediction>& preds,
                     const std::vector<ManualRecord>& records, const MatchCriteria& criteria);

// Repeats exact_match, removing matched predictions and records from the
// pools after each pass, until a pass adds nothing. Consuming matched pairs
// unblocks matches that were held up only by ambiguity with an already
// matched neighbour.
MatchSet match_to_fixpoint(const std::vector<FieldPrediction>& preds,
                           const std::vector<ManualRecord>& records,
                           const MatchCriteria& criteria);

MatchSet intersect_matches(const MatchSet& a, const MatchSet& b);

// Deterministic 50/50 split (sizes differ by at most one; the first part
// gets the extra pair).
std::pair<MatchSet, MatchSet> split_matches(const MatchSet& matches, std::uint64_t seed);

}  // namespace dare::link
