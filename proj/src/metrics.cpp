#include "dare/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dare/error.hpp"

namespace dare {

EvalResult evaluate(const std::vector<TokenLabel>& predictions,
                    const std::vector<TokenLabel>& labels, SequenceFormat fmt) {
    if (predictions.size() != labels.size()) {
        throw FormatMismatchError("evaluate: prediction and label counts differ");
    }
    if (predictions.empty()) throw EmptyInputError("evaluate: no records");

    const int heads = fmt.head_count();
    std::size_t seq = 0, day = 0, month = 0, year = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (static_cast<int>(predictions[i].tokens.size()) != heads ||
            static_cast<int>(labels[i].tokens.size()) != heads) {
            throw FormatMismatchError("evaluate: token count does not match the format");
        }
        validate_label(predictions[i], fmt);
        validate_label(labels[i], fmt);
        const auto& p = predictions[i].tokens;
        const auto& y = labels[i].tokens;
        bool all = true;
        for (int t = 0; t < heads; ++t) {
            if (p[static_cast<std::size_t>(t)] != y[static_cast<std::size_t>(t)]) all = false;
        }
        if (all) ++seq;
        if (p[0] == y[0] && p[1] == y[1]) ++day;
        if (p[2] == y[2]) ++month;
        if (heads > 3) {
            bool y_ok = true;
            for (int t = 3; t < heads; ++t) {
                if (p[static_cast<std::size_t>(t)] != y[static_cast<std::size_t>(t)]) y_ok = false;
            }
            if (y_ok) ++year;
        }
    }

    EvalResult r;
    r.n = labels.size();
    const double n = static_cast<double>(r.n);
    r.seq_acc = static_cast<double>(seq) / n;
    r.day_acc = static_cast<double>(day) / n;
    r.month_acc = static_cast<double>(month) / n;
    if (heads > 3) r.year_acc = static_cast<double>(year) / n;
    return r;
}

std::vector<CoveragePoint> coverage_curve(std::span<const double> confidences,
                                          std::span<const std::uint8_t> correct,
                                          std::span<const double> grid) {
    if (confidences.size() != correct.size()) {
        throw FormatMismatchError("coverage_curve: confidence and correctness counts differ");
    }
    if (confidences.empty()) throw EmptyInputError("coverage_curve: no records");
    for (const double c : confidences) {
        if (!std::isfinite(c)) throw NonFiniteError("coverage_curve: non-finite confidence");
    }

    // Stable order: descending confidence, ties keep input order.
    std::vector<std::size_t> order(confidences.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return confidences[a] > confidences[b];
    });

    // Prefix sums of correctness in that order.
    std::vector<std::size_t> prefix(order.size() + 1, 0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        prefix[i + 1] = prefix[i] + (correct[order[i]] ? 1 : 0);
    }

    std::vector<CoveragePoint> points;
    points.reserve(grid.size());
    const auto n = confidences.size();
    for (const double c : grid) {
        if (!(c > 0.0 && c <= 1.0)) throw ConfigError("coverage values must lie in (0, 1]");
        CoveragePoint p;
        p.coverage = c;
        p.kept = static_cast<std::size_t>(std::ceil(c * static_cast<double>(n)));
        p.kept = std::min(p.kept, n);
        if (p.kept == 0) p.kept = 1;  // c > 0 always keeps at least one record
        p.accuracy = static_cast<double>(prefix[p.kept]) / static_cast<double>(p.kept);
        points.push_back(p);
    }
    return points;
}

double error_rate_reduction(double baseline_acc, double new_acc) {
    if (!(baseline_acc >= 0.0 && baseline_acc <= 1.0) || !(new_acc >= 0.0 && new_acc <= 1.0)) {
        throw ConfigError("accuracies must lie in [0, 1]");
    }
    const double baseline_err = 1.0 - baseline_acc;
    if (baseline_err == 0.0) {
        throw DegenerateBaselineError("baseline has no errors; reduction undefined");
    }
    return ((1.0 - new_acc) - baseline_err) / baseline_err;
}

ReviewBounds review_bounds(std::size_t correct, std::size_t incorrect, std::size_t unverifiable) {
    const std::size_t readable = correct + incorrect + unverifiable;
    if (readable == 0) throw EmptyReadableSetError("no readable records");
    const std::size_t verifiable = correct + incorrect;
    if (verifiable == 0) throw EmptyReadableSetError("no verifiable records");

    ReviewBounds b;
    b.lower = static_cast<double>(correct) / static_cast<double>(readable);
    b.upper = static_cast<double>(correct + unverifiable) / static_cast<double>(readable);
    b.projected = static_cast<double>(correct) / static_cast<double>(verifiable);
    return b;
}

}  // namespace dare
