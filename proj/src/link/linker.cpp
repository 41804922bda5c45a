#include "dare/link/linker.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <unordered_map>

#include "dare/rng.hpp"

namespace dare::link {

std::string normalize_name(std::string_view raw) {
    std::string out;
    bool pending_space = false;
    for (const char c : raw) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

bool dates_agree(std::string_view a, std::string_view b) {
    TokenLabel la, lb;
    SequenceFormat fa, fb;
    try {
        std::tie(la, fa) = parse_date_string(a);
        std::tie(lb, fb) = parse_date_string(b);
    } catch (const Error&) {
        return false;
    }
    if (is_all_missing(la, fa) || is_all_missing(lb, fb)) return false;
    const SequenceFormat common = fa.head_count() <= fb.head_count() ? fa : fb;
    return project_label(la, fa, common) == project_label(lb, fb, common);
}

int agreeing_fields(const FieldPrediction& pred, const ManualRecord& rec) {
    int n = 0;
    if (dates_agree(pred.date, rec.birth_date)) ++n;
    const std::string pf = normalize_name(pred.first_name);
    const std::string pl = normalize_name(pred.last_name);
    if (!pf.empty() && pf == normalize_name(rec.first_name)) ++n;
    if (!pl.empty() && pl == normalize_name(rec.last_name)) ++n;
    return n;
}

void MatchCriteria::validate() const {
    if (min_agreeing_fields < 1 || min_agreeing_fields > 3) {
        throw ConfigError("min_agreeing_fields must lie in [1, 3]");
    }
}

namespace {

// Join keys for the hash prefilter. The date key is the value projected to
// the day-month format: agreement under dates_agree (equality at the
// narrower of the two formats) implies equal day-month projections, so the
// key never misses a true agreement; false hits (same day-month, different
// year) are removed by exact verification afterwards.
struct FieldKeys {
    std::string date;    // empty when unusable
    std::string first;
    std::string last;

    const std::string& field(int f) const { return f == 0 ? date : f == 1 ? first : last; }
};

FieldKeys make_keys(const std::string& date, const std::string& first, const std::string& last) {
    FieldKeys k;
    try {
        const auto [label, fmt] = parse_date_string(date);
        if (!is_all_missing(label, fmt)) {
            k.date = format_label(project_label(label, fmt, SequenceFormat::ddm()),
                                  SequenceFormat::ddm());
            if (k.date.empty()) k.date = "-";   // day+month missing but a year present
        }
    } catch (const Error&) {
        // Unparseable date: carries no information, no key.
    }
    k.first = normalize_name(first);
    k.last = normalize_name(last);
    return k;
}

}  // namespace

MatchSet exact_match(const std::vector<FieldPrediction>& preds,
                     const std::vector<ManualRecord>& records, const MatchCriteria& criteria) {
    criteria.validate();

    std::map<std::string, std::vector<std::size_t>> pred_regions, rec_regions;
    for (std::size_t i = 0; i < preds.size(); ++i) pred_regions[preds[i].region_id].push_back(i);
    for (std::size_t i = 0; i < records.size(); ++i) {
        rec_regions[records[i].region_id].push_back(i);
    }

    // Field combinations whose joint agreement reaches the threshold: single
    // fields for min=1, the three pairs for min=2, the triple for min=3.
    std::vector<std::array<int, 3>> combos;
    if (criteria.min_agreeing_fields == 1) {
        combos = {{0, -1, -1}, {1, -1, -1}, {2, -1, -1}};
    } else if (criteria.min_agreeing_fields == 2) {
        combos = {{0, 1, -1}, {0, 2, -1}, {1, 2, -1}};
    } else {
        combos = {{0, 1, 2}};
    }

    MatchSet out;
    for (const auto& [region, rec_idx] : rec_regions) {
        const auto pit = pred_regions.find(region);
        if (pit == pred_regions.end()) continue;
        const auto& prd_idx = pit->second;

        std::vector<FieldKeys> rk(rec_idx.size()), pk(prd_idx.size());
        for (std::size_t i = 0; i < rec_idx.size(); ++i) {
            const auto& r = records[rec_idx[i]];
            rk[i] = make_keys(r.birth_date, r.first_name, r.last_name);
        }
        for (std::size_t i = 0; i < prd_idx.size(); ++i) {
            const auto& p = preds[prd_idx[i]];
            pk[i] = make_keys(p.date, p.first_name, p.last_name);
        }

        const auto joint_key = [](const FieldKeys& k, const std::array<int, 3>& combo,
                                  std::string& out_key) {
            out_key.clear();
            for (const int f : combo) {
                if (f < 0) continue;
                const std::string& v = k.field(f);
                if (v.empty()) return false;   // missing field cannot agree
                out_key += v;
                out_key.push_back('\x1f');
            }
            return true;
        };

        // Hash-join candidates, then verify exactly.
        std::vector<std::set<std::size_t>> cand_of_pred(prd_idx.size());
        std::string key;
        for (const auto& combo : combos) {
            std::unordered_map<std::string, std::vector<std::size_t>> index;
            for (std::size_t ri = 0; ri < rec_idx.size(); ++ri) {
                if (joint_key(rk[ri], combo, key)) index[key].push_back(ri);
            }
            for (std::size_t pi = 0; pi < prd_idx.size(); ++pi) {
                if (!joint_key(pk[pi], combo, key)) continue;
                const auto it = index.find(key);
                if (it == index.end()) continue;
                for (const std::size_t ri : it->second) cand_of_pred[pi].insert(ri);
            }
        }
        for (std::size_t pi = 0; pi < prd_idx.size(); ++pi) {
            std::set<std::size_t> verified;
            for (const std::size_t ri : cand_of_pred[pi]) {
                if (agreeing_fields(preds[prd_idx[pi]], records[rec_idx[ri]]) >=
                    criteria.min_agreeing_fields) {
                    verified.insert(ri);
                }
            }
            cand_of_pred[pi] = std::move(verified);
        }

        // Uniqueness in both directions.
        std::vector<std::size_t> cand_count_of_rec(rec_idx.size(), 0);
        for (std::size_t pi = 0; pi < prd_idx.size(); ++pi) {
            for (const std::size_t ri : cand_of_pred[pi]) ++cand_count_of_rec[ri];
        }
        std::unordered_map<std::size_t, std::size_t> claims;   // record -> #claiming preds
        for (std::size_t pi = 0; pi < prd_idx.size(); ++pi) {
            if (cand_of_pred[pi].size() != 1) continue;
            const std::size_t ri = *cand_of_pred[pi].begin();
            if (criteria.require_uniqueness && cand_count_of_rec[ri] != 1) continue;
            ++claims[ri];
        }
        for (std::size_t pi = 0; pi < prd_idx.size(); ++pi) {
            if (cand_of_pred[pi].size() != 1) continue;
            const std::size_t ri = *cand_of_pred[pi].begin();
            if (criteria.require_uniqueness && cand_count_of_rec[ri] != 1) continue;
            if (claims[ri] != 1) continue;   // keep the output one-to-one
            out.emplace(preds[prd_idx[pi]].image_id, records[rec_idx[ri]].record_id);
        }
    }
    return out;
}

MatchSet match_to_fixpoint(const std::vector<FieldPrediction>& preds,
                           const std::vector<ManualRecord>& records,
                           const MatchCriteria& criteria) {
    std::vector<FieldPrediction> pred_pool = preds;
    std::vector<ManualRecord> rec_pool = records;

    MatchSet out;
    while (true) {
        const MatchSet found = exact_match(pred_pool, rec_pool, criteria);
        if (found.empty()) break;

        std::set<std::string> matched_images, matched_records;
        for (const auto& [img, rec] : found) {
            matched_images.insert(img);
            matched_records.insert(rec);
        }
        std::erase_if(pred_pool, [&](const FieldPrediction& p) {
            return matched_images.count(p.image_id) > 0;
        });
        std::erase_if(rec_pool, [&](const ManualRecord& r) {
            return matched_records.count(r.record_id) > 0;
        });
        out.insert(found.begin(), found.end());
    }
    return out;
}

MatchSet intersect_matches(const MatchSet& a, const MatchSet& b) {
    MatchSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::inserter(out, out.begin()));
    return out;
}

std::pair<MatchSet, MatchSet> split_matches(const MatchSet& matches, std::uint64_t seed) {
    std::vector<MatchPair> pairs(matches.begin(), matches.end());
    Rng rng(mix_seed(seed, 0x59117));
    rng.shuffle(pairs);

    const std::size_t first_n = (pairs.size() + 1) / 2;
    std::pair<MatchSet, MatchSet> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        (i < first_n ? out.first : out.second).insert(pairs[i]);
    }
    return out;
}

}  // namespace dare::link
