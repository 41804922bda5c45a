#include "dare/loss.hpp"

#include <algorithm>
#include <cmath>

#include "dare/error.hpp"

namespace dare {

HeadDistribution softmax(std::span<const double> logits) {
    if (logits.empty()) throw ShapeMismatchError("softmax of an empty logit vector");
    double max_logit = logits[0];
    for (const double v : logits) {
        if (!std::isfinite(v)) throw NonFiniteError("non-finite logit in softmax");
        max_logit = std::max(max_logit, v);
    }
    HeadDistribution dist;
    dist.probs.resize(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        dist.probs[i] = std::exp(logits[i] - max_logit);
        sum += dist.probs[i];
    }
    for (double& p : dist.probs) p /= sum;
    return dist;
}

std::vector<double> smoothed_target(int classes, int target, double alpha) {
    if (classes <= 0) throw ShapeMismatchError("smoothed_target with no classes");
    if (target < 0 || target >= classes) {
        throw ShapeMismatchError("target index " + std::to_string(target) + " out of range");
    }
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("smoothing alpha must be in [0, 1]");
    std::vector<double> s(static_cast<std::size_t>(classes), alpha / classes);
    s[static_cast<std::size_t>(target)] += 1.0 - alpha;
    return s;
}

double smoothed_cross_entropy(std::span<const double> probs, int target, double alpha) {
    const auto s = smoothed_target(static_cast<int>(probs.size()), target, alpha);
    double loss = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        const double p = probs[j];
        if (!std::isfinite(p)) throw NonFiniteError("non-finite probability in loss");
        loss -= std::log(std::max(p, kProbFloor)) * s[j];
    }
    return loss;
}

LossValue sequence_loss_core(const std::vector<HeadDistribution>& dists,
                             std::span<const int> targets, std::span<const double> alphas) {
    if (dists.empty()) throw ShapeMismatchError("sequence loss with no heads");
    if (dists.size() != targets.size() || dists.size() != alphas.size()) {
        throw ShapeMismatchError("sequence loss: heads/targets/alphas disagree in length");
    }
    LossValue out;
    out.per_head.resize(dists.size());
    for (std::size_t t = 0; t < dists.size(); ++t) {
        out.per_head[t] = smoothed_cross_entropy(dists[t].probs, targets[t], alphas[t]);
        out.total += out.per_head[t];
    }
    out.total /= static_cast<double>(dists.size());
    return out;
}

LossValue sequence_loss(const std::vector<HeadDistribution>& dists, const TokenLabel& label,
                        const std::vector<HeadSpec>& specs) {
    if (dists.size() != specs.size() || label.tokens.size() != specs.size()) {
        throw ShapeMismatchError("sequence loss: distributions/label/specs disagree in length");
    }
    std::vector<double> alphas(specs.size());
    for (std::size_t t = 0; t < specs.size(); ++t) {
        if (static_cast<int>(dists[t].probs.size()) != specs[t].class_count()) {
            throw ShapeMismatchError("head " + head_name_string(specs[t].name) +
                                     " distribution has wrong class count");
        }
        alphas[t] = specs[t].smoothing_alpha;
    }
    return sequence_loss_core(dists, label.tokens, alphas);
}

std::vector<std::vector<double>> sequence_loss_grad_core(
    const std::vector<std::vector<double>>& logits, std::span<const int> targets,
    std::span<const double> alphas) {
    if (logits.empty()) throw ShapeMismatchError("sequence loss gradient with no heads");
    if (logits.size() != targets.size() || logits.size() != alphas.size()) {
        throw ShapeMismatchError("sequence loss gradient: heads/targets/alphas disagree");
    }
    const double inv_heads = 1.0 / static_cast<double>(logits.size());
    std::vector<std::vector<double>> grad(logits.size());
    for (std::size_t t = 0; t < logits.size(); ++t) {
        const auto dist = softmax(logits[t]);
        const auto s = smoothed_target(static_cast<int>(dist.probs.size()), targets[t], alphas[t]);
        grad[t].resize(dist.probs.size());
        for (std::size_t j = 0; j < dist.probs.size(); ++j) {
            grad[t][j] = (dist.probs[j] - s[j]) * inv_heads;
        }
    }
    return grad;
}

std::vector<std::vector<double>> sequence_loss_grad(const std::vector<std::vector<double>>& logits,
                                                    const TokenLabel& label,
                                                    const std::vector<HeadSpec>& specs) {
    if (logits.size() != specs.size() || label.tokens.size() != specs.size()) {
        throw ShapeMismatchError("sequence loss gradient: logits/label/specs disagree in length");
    }
    std::vector<double> alphas(specs.size());
    for (std::size_t t = 0; t < specs.size(); ++t) {
        if (static_cast<int>(logits[t].size()) != specs[t].class_count()) {
            throw ShapeMismatchError("head " + head_name_string(specs[t].name) +
                                     " logits have wrong class count");
        }
        alphas[t] = specs[t].smoothing_alpha;
    }
    return sequence_loss_grad_core(logits, label.tokens, alphas);
}

}  // namespace dare
