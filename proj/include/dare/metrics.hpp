#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dare/date_model.hpp"

namespace dare {

struct EvalResult {
    std::size_t n = 0;
    double seq_acc = 0.0;                 // all heads correct
    std::optional<double> day_acc;        // both day heads correct
    std::optional<double> month_acc;
    std::optional<double> year_acc;       // absent for DDM
};

// Accuracy of predictions against labels; a sequence counts as correct only
// when every head token matches. Throws FormatMismatchError if lengths or
// token counts disagree, EmptyInputError on empty input.
EvalResult evaluate(const std::vector<TokenLabel>& predictions,
                    const std::vector<TokenLabel>& labels, SequenceFormat fmt);

struct CoveragePoint {
    double coverage = 0.0;   // requested fraction kept
    double accuracy = 0.0;   // sequence accuracy over the kept records
    std::size_t kept = 0;    // ceil(coverage * n)
};

// Accuracy over the most confident ceil(c * n) records for each c in grid.
// Sorting by confidence is stable: ties keep their input order. coverage = 1
// reproduces the full-set accuracy exactly. Grid values must lie in (0, 1].
std::vector<CoveragePoint> coverage_curve(std::span<const double> confidences,
                                          std::span<const std::uint8_t> correct,
                                          std::span<const double> grid);

// (new error - baseline error) / baseline error, signed; negative means the
// error rate went down. Inputs are accuracies as fractions in [0, 1].
// Throws DegenerateBaselineError when the baseline has no errors.
double error_rate_reduction(double baseline_acc, double new_acc);

struct ReviewBounds {
    double lower = 0.0;       // correct / all readable
    double upper = 0.0;       // (correct + unverifiable) / all readable
    double projected = 0.0;   // correct / verifiable
};

// Accuracy bounds for a manual review that sorted records into correct,
// incorrect, and unverifiable-but-readable. Throws EmptyReadableSetError if
// all three counts are zero, or if there are no verifiable records at all
// (projected would be 0/0).
ReviewBounds review_bounds(std::size_t correct, std::size_t incorrect, std::size_t unverifiable);

}  // namespace dare
