#pragma once

#include <span>
#include <vector>

#include "dare/date_model.hpp"

namespace dare {

// Probabilities are clamped to at least this value inside the log, so the
// loss stays finite for confidently wrong predictions.
inline constexpr double kProbFloor = 1e-12;

struct HeadDistribution {
    std::vector<double> probs;
};

struct LossValue {
    double total = 0.0;              // mean of per_head
    std::vector<double> per_head;
};

// Numerically stable softmax (max-subtracted). Throws NonFiniteError if any
// logit is NaN/inf, ShapeMismatchError if empty.
HeadDistribution softmax(std::span<const double> logits);

// Label-smoothed cross entropy for one head:
//   loss = -sum_j log(max(p_j, floor)) * s_j
// where s is the one-hot target mixed with the uniform distribution:
//   s_j = (1 - alpha) * onehot_j + alpha / C.
// The smoothed target s sums to one for every alpha in [0, 1].
double smoothed_cross_entropy(std::span<const double> probs, int target, double alpha);

// The smoothed target vector itself (mostly for tests and the gradient).
std::vector<double> smoothed_target(int classes, int target, double alpha);

// Sequence loss over all heads: per-head smoothed cross entropy, averaged
// over heads. Head t uses specs[t].smoothing_alpha and class count.
LossValue sequence_loss(const std::vector<HeadDistribution>& dists, const TokenLabel& label,
                        const std::vector<HeadSpec>& specs);

// Same, for callers that carry raw class counts and alphas instead of full
// head specs (non-date heads reuse the identical loss).
LossValue sequence_loss_core(const std::vector<HeadDistribution>& dists,
                             std::span<const int> targets, std::span<const double> alphas);

// d(total loss)/d(logits): softmax(logits) minus the smoothed target, divided
// by the head count (because the total averages over heads).
std::vector<std::vector<double>> sequence_loss_grad(const std::vector<std::vector<double>>& logits,
                                                    const TokenLabel& label,
                                                    const std::vector<HeadSpec>& specs);

std::vector<std::vector<double>> sequence_loss_grad_core(
    const std::vector<std::vector<double>>& logits, std::span<const int> targets,
    std::span<const double> alphas);

}  // namespace dare
