#include "dare/nn/train.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "dare/nn/augment.hpp"

namespace dare::nn {
namespace {

// Samples are accumulated into fixed chunks of this size and the chunk
// gradients are reduced in index order, so results do not depend on the
// thread count.
constexpr int kChunkSize = 8;

void add_into(ParamSet<float>& acc, const ParamSet<float>& g) {
    std::vector<Tensor<float>*> a;
    std::vector<const Tensor<float>*> b;
    acc.for_each([&](Tensor<float>& t) { a.push_back(&t); });
    g.for_each([&](const Tensor<float>& t) { b.push_back(&t); });
    for (std::size_t i = 0; i < a.size(); ++i) {
        float* ap = a[i]->ptr();
        const float* bp = b[i]->ptr();
        for (std::size_t j = 0; j < a[i]->size(); ++j) ap[j] += bp[j];
    }
}

void scale(ParamSet<float>& p, float s) {
    p.for_each([&](Tensor<float>& t) {
        for (float& v : t.data) v *= s;
    });
}

struct ChunkStats {
    double loss_sum = 0.0;
    int correct = 0;
};

}  // namespace

std::vector<EpochStats> train_net(ConvNet<float>& net, std::span<const TrainSample> data,
                                  const TrainConfig& cfg, int threads, const EvalHook& eval_hook,
                                  std::ostream* log) {
    cfg.validate();
    if (threads < 1) throw ConfigError("thread count must be at least 1");
    if (data.empty()) throw EmptyInputError("train_net: no training samples");

    const NetShape& shape = net.shape;
    const std::size_t head_count = shape.head_dims.size();
    for (const TrainSample& s : data) {
        if (!s.image) throw EmptyInputError("train_net: sample without an image");
        if (s.image->height != shape.in_height || s.image->width != shape.in_width) {
            throw ShapeMismatchError("train_net: sample image size does not match the net");
        }
        if (s.targets.size() != head_count) {
            throw ShapeMismatchError("train_net: sample target count does not match the heads");
        }
        for (std::size_t h = 0; h < head_count; ++h) {
            if (s.targets[h] < 0 || s.targets[h] >= shape.head_dims[h]) {
                throw ShapeMismatchError("train_net: target class out of range");
            }
        }
    }

    const std::vector<double> alphas(head_count, cfg.label_smoothing);
    SgdState<float> state = make_sgd_state<float>(shape);
    ParamSet<float> total = make_params<float>(shape);

    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng shuffle_rng(mix_seed(cfg.seed, 0x0D0E));

    const std::size_t max_chunks =
        (std::min<std::size_t>(n, static_cast<std::size_t>(cfg.batch_size)) + kChunkSize - 1) /
        kChunkSize;
    std::vector<ParamSet<float>> chunk_grads;
    for (std::size_t c = 0; c < max_chunks; ++c) chunk_grads.push_back(make_params<float>(shape));
    std::vector<ChunkStats> chunk_stats(max_chunks);

    const int worker_count = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(threads), max_chunks));
    std::vector<NetTrace<float>> traces(static_cast<std::size_t>(worker_count));

    std::vector<EpochStats> history;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double lr = lr_schedule(cfg, epoch);
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        std::size_t epoch_correct = 0;

        for (std::size_t batch_start = 0; batch_start < n;
             batch_start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t batch_n =
                std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), n - batch_start);
            const std::size_t n_chunks = (batch_n + kChunkSize - 1) / kChunkSize;

            for (std::size_t c = 0; c < n_chunks; ++c) {
                chunk_grads[c].zero();
                chunk_stats[c] = ChunkStats{};
            }

            const auto run_chunk = [&](std::size_t c, NetTrace<float>& trace) {
                const std::size_t lo = c * kChunkSize;
                const std::size_t hi = std::min(lo + kChunkSize, batch_n);
                for (std::size_t i = lo; i < hi; ++i) {
                    const std::size_t slot = batch_start + i;
                    const TrainSample& sample = data[order[slot]];
                    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(epoch), slot));

                    ImageF img = to_float(*sample.image);
                    img = affine_jitter(img, kJitterMaxRotateDeg, kJitterMaxTranslate, rng);
                    img = random_erase(img, cfg.random_erase_prob, rng);

                    const auto logits =
                        net_forward(net, std::span<const float>(img.px), true, &rng, &trace);

                    // Loss and logit gradient in double.
                    std::vector<std::vector<float>> dlogits(head_count);
                    double loss = 0.0;
                    bool all_correct = true;
                    for (std::size_t h = 0; h < head_count; ++h) {
                        std::vector<double> ld(logits[h].begin(), logits[h].end());
                        const HeadDistribution dist = softmax(ld);
                        loss += smoothed_cross_entropy(dist.probs, sample.targets[h], alphas[h]);
                        const auto smooth = smoothed_target(static_cast<int>(dist.probs.size()),
                                                            sample.targets[h], alphas[h]);
                        dlogits[h].resize(dist.probs.size());
                        std::size_t best = 0;
                        for (std::size_t j = 0; j < dist.probs.size(); ++j) {
                            dlogits[h][j] = static_cast<float>(
                                (dist.probs[j] - smooth[j]) / static_cast<double>(head_count));
                            if (dist.probs[j] > dist.probs[best]) best = j;
                        }
                        if (static_cast<int>(best) != sample.targets[h]) all_correct = false;
                    }
                    loss /= static_cast<double>(head_count);

                    net_backward(net, trace, dlogits, chunk_grads[c]);
                    chunk_stats[c].loss_sum += loss;
                    if (all_correct) ++chunk_stats[c].correct;
                }
            };

            if (worker_count <= 1) {
                for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c, traces[0]);
            } else {
                std::atomic<std::size_t> next{0};
                std::exception_ptr first_error;
                std::mutex error_mutex;
                std::vector<std::thread> pool;
                for (int w = 0; w < worker_count; ++w) {
                    pool.emplace_back([&, w] {
                        try {
                            for (std::size_t c = next.fetch_add(1); c < n_chunks;
                                 c = next.fetch_add(1)) {
                                run_chunk(c, traces[static_cast<std::size_t>(w)]);
                            }
                        } catch (...) {
                            const std::lock_guard<std::mutex> lock(error_mutex);
                            if (!first_error) first_error = std::current_exception();
                        }
                    });
                }
                for (auto& t : pool) t.join();
                if (first_error) std::rethrow_exception(first_error);
            }

            total.zero();
            for (std::size_t c = 0; c < n_chunks; ++c) {
                add_into(total, chunk_grads[c]);
                epoch_loss += chunk_stats[c].loss_sum;
                epoch_correct += static_cast<std::size_t>(chunk_stats[c].correct);
            }
            scale(total, 1.0f / static_cast<float>(batch_n));
            sgd_step(net.params, total, lr, cfg, state);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.lr = lr;
        stats.train_loss = epoch_loss / static_cast<double>(n);
        stats.train_seq_acc = static_cast<double>(epoch_correct) / static_cast<double>(n);
        if (eval_hook) stats.val_seq_acc = eval_hook(epoch);

        if (log) {
            char line[160];
            if (stats.val_seq_acc) {
                std::snprintf(line, sizeof(line),
                              "epoch %4d/%d  lr %.5f  loss %.4f  acc %.4f  val %.4f\n", epoch + 1,
                              cfg.epochs, lr, stats.train_loss, stats.train_seq_acc,
                              *stats.val_seq_acc);
            } else {
                std::snprintf(line, sizeof(line), "epoch %4d/%d  lr %.5f  loss %.4f  acc %.4f\n",
                              epoch + 1, cfg.epochs, lr, stats.train_loss, stats.train_seq_acc);
            }
            (*log) << line << std::flush;
        }
        history.push_back(stats);
    }
    return history;
}

std::vector<EpochStats> train(Model& model, const corpus::Dataset& train_set,
                              const corpus::Dataset* val_set, const TrainConfig& cfg,
                              int threads, std::ostream* log) {
    if (train_set.format != model.config.format()) {
        throw FormatMismatchError("training set format " + train_set.format.name() +
                                  " does not match the model");
    }
    if (val_set && val_set->format != model.config.format()) {
        throw FormatMismatchError("validation set format does not match the model");
    }
    for (auto& head : model.config.heads) head.smoothing_alpha = cfg.label_smoothing;

    std::vector<TrainSample> samples;
    samples.reserve(train_set.items.size());
    for (const auto& item : train_set.items) {
        validate_label(item.label, train_set.format);
        samples.push_back({&item.image, item.label.tokens});
    }

    EvalHook hook;
    if (val_set) hook = [&](int) { return evaluate_model(model, *val_set); };
    return train_net(model.net, samples, cfg, threads, hook, log);
}

double evaluate_model(const Model& model, const corpus::Dataset& ds) {
    if (ds.items.empty()) throw EmptyInputError("evaluate_model: empty dataset");
    std::size_t correct = 0;
    for (const auto& item : ds.items) {
        const Prediction p = predict(model, to_float(item.image));
        if (p.argmax == item.label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(ds.items.size());
}

std::vector<Prediction> predict_dataset(const Model& model, const corpus::Dataset& ds) {
    std::vector<Prediction> out;
    out.reserve(ds.items.size());
    for (const auto& item : ds.items) out.push_back(predict(model, to_float(item.image)));
    return out;
}

}  // namespace dare::nn
