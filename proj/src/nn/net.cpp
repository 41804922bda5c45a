#include "dare/nn/net.hpp"

#include <algorithm>
#include <cmath>

namespace dare::nn {

void NetShape::validate() const {
    if (in_channels <= 0 || in_height <= 0 || in_width <= 0) {
        throw ConfigError("net input dimensions must be positive");
    }
    if (blocks.empty()) throw ConfigError("net needs at least one conv block");
    for (const auto& b : blocks) {
        if (b.filters <= 0) throw ConfigError("conv block filter count must be positive");
        if (b.kernel <= 0 || b.kernel % 2 == 0) {
            throw ConfigError("conv kernel must be positive and odd");
        }
        if (b.stride <= 0) throw ConfigError("conv stride must be positive");
    }
    if (feature_dim <= 0) throw ConfigError("feature_dim must be positive");
    if (!(dropout_prob >= 0.0 && dropout_prob < 1.0)) {
        throw ConfigError("dropout probability must lie in [0, 1)");
    }
    if (head_dims.empty()) throw ConfigError("net needs at least one head");
    for (const int d : head_dims) {
        if (d <= 0) throw ConfigError("head class count must be positive");
    }
    block_dims();  // throws if the input collapses below 1x1
}

int NetShape::last_channels() const { return blocks.back().filters; }

std::vector<NetShape::BlockDims> NetShape::block_dims() const {
    std::vector<BlockDims> dims;
    int c = in_channels, h = in_height, w = in_width;
    for (const auto& b : blocks) {
        BlockDims d;
        d.in_c = c;
        d.in_h = h;
        d.in_w = w;
        d.out_c = b.filters;
        d.kernel = b.kernel;
        d.stride = b.stride;
        d.pad = b.kernel / 2;
        d.out_h = (h + 2 * d.pad - b.kernel) / b.stride + 1;
        d.out_w = (w + 2 * d.pad - b.kernel) / b.stride + 1;
        if (d.out_h < 1 || d.out_w < 1) {
            throw ConfigError("input too small for the conv stack");
        }
        dims.push_back(d);
        c = d.out_c;
        h = d.out_h;
        w = d.out_w;
    }
    return dims;
}

namespace {

// y += a * x. Contiguous, so the compiler turns it into FMA vector code.
template <typename T>
inline void axpy(T a, const T* x, T* y, int n) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

// Eight independent accumulator lanes: vectorizable without reassociating a
// single serial sum, which matters because the build does not use fast-math.
template <typename T>
inline T dot(const T* x, const T* y, int n) {
    T s[8] = {T(0), T(0), T(0), T(0), T(0), T(0), T(0), T(0)};
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        for (int l = 0; l < 8; ++l) s[l] += x[i + l] * y[i + l];
    }
    T tail = T(0);
    for (; i < n; ++i) tail += x[i] * y[i];
    return ((s[0] + s[1]) + (s[2] + s[3])) + ((s[4] + s[5]) + (s[6] + s[7])) + tail;
}

template <typename T>
inline T row_sum(const T* x, int n) {
    T s[8] = {T(0), T(0), T(0), T(0), T(0), T(0), T(0), T(0)};
    int i = 0;
    for (; i + 8 <= n; i += 8) {
        for (int l = 0; l < 8; ++l) s[l] += x[i + l];
    }
    T tail = T(0);
    for (; i < n; ++i) tail += x[i];
    return ((s[0] + s[1]) + (s[2] + s[3])) + ((s[4] + s[5]) + (s[6] + s[7])) + tail;
}

// Unfolds the input into cols[K x N] with K = in_c*k*k and N = out_h*out_w,
// zero-filling the padded border.
template <typename T>
void im2col(const T* in, const NetShape::BlockDims& d, T* cols) {
    const int N = d.out_h * d.out_w;
    for (int c = 0; c < d.in_c; ++c) {
        const T* plane = in + static_cast<std::size_t>(c) * d.in_h * d.in_w;
        for (int ky = 0; ky < d.kernel; ++ky) {
            for (int kx = 0; kx < d.kernel; ++kx) {
                T* row = cols + static_cast<std::size_t>((c * d.kernel + ky) * d.kernel + kx) * N;
                for (int oy = 0; oy < d.out_h; ++oy) {
                    const int iy = oy * d.stride - d.pad + ky;
                    T* out_row = row + static_cast<std::size_t>(oy) * d.out_w;
                    if (iy < 0 || iy >= d.in_h) {
                        std::fill(out_row, out_row + d.out_w, T(0));
                        continue;
                    }
                    const T* in_row = plane + static_cast<std::size_t>(iy) * d.in_w;
                    for (int ox = 0; ox < d.out_w; ++ox) {
                        const int ix = ox * d.stride - d.pad + kx;
                        out_row[ox] = (ix >= 0 && ix < d.in_w) ? in_row[ix] : T(0);
                    }
                }
            }
        }
    }
}

// Scatter-adds cols back into the input layout (adjoint of im2col).
template <typename T>
void col2im_add(const T* cols, const NetShape::BlockDims& d, T* in) {
    const int N = d.out_h * d.out_w;
    for (int c = 0; c < d.in_c; ++c) {
        T* plane = in + static_cast<std::size_t>(c) * d.in_h * d.in_w;
        for (int ky = 0; ky < d.kernel; ++ky) {
            for (int kx = 0; kx < d.kernel; ++kx) {
                const T* row =
                    cols + static_cast<std::size_t>((c * d.kernel + ky) * d.kernel + kx) * N;
                for (int oy = 0; oy < d.out_h; ++oy) {
                    const int iy = oy * d.stride - d.pad + ky;
                    if (iy < 0 || iy >= d.in_h) continue;
                    T* in_row = plane + static_cast<std::size_t>(iy) * d.in_w;
                    const T* col_row = row + static_cast<std::size_t>(oy) * d.out_w;
                    for (int ox = 0; ox < d.out_w; ++ox) {
                        const int ix = ox * d.stride - d.pad + kx;
                        if (ix >= 0 && ix < d.in_w) in_row[ix] += col_row[ox];
                    }
                }
            }
        }
    }
}

// C[M x N] = A[M x K] * B[K x N] + bias (bias per output row), row-major.
template <typename T>
void matmul_bias(const T* A, const T* B, const T* bias, T* C, int M, int K, int N) {
    for (int i = 0; i < M; ++i) {
        T* c_row = C + static_cast<std::size_t>(i) * N;
        std::fill(c_row, c_row + N, bias[i]);
        const T* a_row = A + static_cast<std::size_t>(i) * K;
        for (int k = 0; k < K; ++k) {
            if (a_row[k] != T(0)) axpy(a_row[k], B + static_cast<std::size_t>(k) * N, c_row, N);
        }
    }
}

}  // namespace

template <typename T>
ParamSet<T> make_params(const NetShape& shape) {
    shape.validate();
    ParamSet<T> p;
    for (const auto& d : shape.block_dims()) {
        p.conv_w.emplace_back(std::vector<int>{d.out_c, d.in_c * d.kernel * d.kernel});
        p.conv_b.emplace_back(std::vector<int>{d.out_c});
    }
    p.fc_w = Tensor<T>({shape.feature_dim, shape.last_channels()});
    p.fc_b = Tensor<T>({shape.feature_dim});
    for (const int classes : shape.head_dims) {
        p.head_w.emplace_back(std::vector<int>{classes, shape.feature_dim});
        p.head_b.emplace_back(std::vector<int>{classes});
    }
    return p;
}

template <typename T>
void init_params(ParamSet<T>& params, const NetShape& shape, std::uint64_t seed) {
    Rng rng(mix_seed(seed));
    const auto fill_normal = [&](Tensor<T>& t, double stddev) {
        for (T& v : t.data) v = static_cast<T>(rng.normal() * stddev);
    };
    const auto dims = shape.block_dims();
    for (std::size_t b = 0; b < dims.size(); ++b) {
        const double fan_in = static_cast<double>(dims[b].in_c) * dims[b].kernel * dims[b].kernel;
        fill_normal(params.conv_w[b], std::sqrt(2.0 / fan_in));
        params.conv_b[b].fill(T(0));
    }
    fill_normal(params.fc_w, std::sqrt(2.0 / shape.last_channels()));
    params.fc_b.fill(T(0));
    for (std::size_t h = 0; h < params.head_w.size(); ++h) {
        fill_normal(params.head_w[h], std::sqrt(1.0 / shape.feature_dim));
        params.head_b[h].fill(T(0));
    }
}

template <typename T>
ConvNet<T> make_net(const NetShape& shape, std::uint64_t seed) {
    ConvNet<T> net;
    net.shape = shape;
    net.params = make_params<T>(shape);
    init_params(net.params, shape, seed);
    return net;
}

template <typename T>
std::vector<std::vector<T>> net_forward(const ConvNet<T>& net, std::span<const T> image,
                                        bool train_mode, Rng* dropout_rng, NetTrace<T>* trace) {
    const NetShape& shape = net.shape;
    const auto dims = shape.block_dims();
    const std::size_t in_size =
        static_cast<std::size_t>(shape.in_channels) * shape.in_height * shape.in_width;
    if (image.size() != in_size) {
        throw ShapeMismatchError("net input has " + std::to_string(image.size()) +
                                 " values, expected " + std::to_string(in_size));
    }
    if (train_mode && shape.dropout_prob > 0.0 && dropout_rng == nullptr) {
        throw ConfigError("train-mode forward needs a dropout rng");
    }

    NetTrace<T> local;
    NetTrace<T>& tr = trace ? *trace : local;
    tr.block_in.resize(dims.size() + 1);
    tr.cols.resize(dims.size());

    // Stage the input.
    tr.block_in[0].shape = {shape.in_channels, shape.in_height, shape.in_width};
    tr.block_in[0].data.assign(image.begin(), image.end());

    for (std::size_t b = 0; b < dims.size(); ++b) {
        const auto& d = dims[b];
        const int N = d.out_h * d.out_w;
        const int K = d.in_c * d.kernel * d.kernel;
        tr.cols[b].resize(static_cast<std::size_t>(K) * N);
        im2col(tr.block_in[b].ptr(), d, tr.cols[b].data());

        auto& out = tr.block_in[b + 1];
        out.shape = {d.out_c, d.out_h, d.out_w};
        out.data.resize(static_cast<std::size_t>(d.out_c) * N);
        matmul_bias(net.params.conv_w[b].ptr(), tr.cols[b].data(), net.params.conv_b[b].ptr(),
                    out.ptr(), d.out_c, K, N);
        for (T& v : out.data) v = std::max(v, T(0));  // ReLU
    }

    // Global average pool.
    const auto& last = tr.block_in.back();
    const auto& ld = dims.back();
    const int spatial = ld.out_h * ld.out_w;
    tr.pooled.resize(static_cast<std::size_t>(ld.out_c));
    const T inv_spatial = T(1) / static_cast<T>(spatial);
    for (int c = 0; c < ld.out_c; ++c) {
        tr.pooled[static_cast<std::size_t>(c)] =
            row_sum(last.ptr() + static_cast<std::size_t>(c) * spatial, spatial) * inv_spatial;
    }

    // Feature layer: fc + ReLU + dropout.
    tr.fc_z.resize(static_cast<std::size_t>(shape.feature_dim));
    const T* fw = net.params.fc_w.ptr();
    for (int i = 0; i < shape.feature_dim; ++i) {
        tr.fc_z[static_cast<std::size_t>(i)] =
            dot(fw + static_cast<std::size_t>(i) * ld.out_c, tr.pooled.data(), ld.out_c) +
            net.params.fc_b.data[static_cast<std::size_t>(i)];
    }
    tr.feat.resize(tr.fc_z.size());
    tr.drop_scale.assign(tr.fc_z.size(), T(1));
    if (train_mode && shape.dropout_prob > 0.0) {
        const T keep_scale = static_cast<T>(1.0 / (1.0 - shape.dropout_prob));
        for (std::size_t i = 0; i < tr.drop_scale.size(); ++i) {
            tr.drop_scale[i] = dropout_rng->uniform() < shape.dropout_prob ? T(0) : keep_scale;
        }
    }
    for (std::size_t i = 0; i < tr.feat.size(); ++i) {
        tr.feat[i] = std::max(tr.fc_z[i], T(0)) * tr.drop_scale[i];
    }

    // Heads.
    std::vector<std::vector<T>> logits(shape.head_dims.size());
    for (std::size_t h = 0; h < shape.head_dims.size(); ++h) {
        const int classes = shape.head_dims[h];
        logits[h].resize(static_cast<std::size_t>(classes));
        const T* hw = net.params.head_w[h].ptr();
        for (int j = 0; j < classes; ++j) {
            logits[h][static_cast<std::size_t>(j)] =
                dot(hw + static_cast<std::size_t>(j) * shape.feature_dim, tr.feat.data(),
                    shape.feature_dim) +
                net.params.head_b[h].data[static_cast<std::size_t>(j)];
        }
    }
    return logits;
}

template <typename T>
void net_backward(const ConvNet<T>& net, const NetTrace<T>& trace,
                  const std::vector<std::vector<T>>& dlogits, ParamSet<T>& grads) {
    const NetShape& shape = net.shape;
    const auto dims = shape.block_dims();
    if (dlogits.size() != shape.head_dims.size()) {
        throw ShapeMismatchError("backward: head count mismatch");
    }
    if (trace.block_in.size() != dims.size() + 1 || trace.feat.empty()) {
        throw ShapeMismatchError("backward: trace does not match a completed forward pass");
    }

    // Heads -> feature gradient.
    std::vector<T> dfeat(static_cast<std::size_t>(shape.feature_dim), T(0));
    for (std::size_t h = 0; h < dlogits.size(); ++h) {
        const int classes = shape.head_dims[h];
        if (static_cast<int>(dlogits[h].size()) != classes) {
            throw ShapeMismatchError("backward: dlogits class count mismatch");
        }
        const T* hw = net.params.head_w[h].ptr();
        T* dhw = grads.head_w[h].ptr();
        for (int j = 0; j < classes; ++j) {
            const T g = dlogits[h][static_cast<std::size_t>(j)];
            grads.head_b[h].data[static_cast<std::size_t>(j)] += g;
            if (g != T(0)) {
                axpy(g, trace.feat.data(), dhw + static_cast<std::size_t>(j) * shape.feature_dim,
                     shape.feature_dim);
                axpy(g, hw + static_cast<std::size_t>(j) * shape.feature_dim, dfeat.data(),
                     shape.feature_dim);
            }
        }
    }

    // Dropout and feature ReLU.
    std::vector<T> dfc_z(dfeat.size());
    for (std::size_t i = 0; i < dfeat.size(); ++i) {
        const T through = dfeat[i] * trace.drop_scale[i];
        dfc_z[i] = trace.fc_z[i] > T(0) ? through : T(0);
    }

    // FC layer.
    const auto& ld = dims.back();
    std::vector<T> dpooled(static_cast<std::size_t>(ld.out_c), T(0));
    const T* fw = net.params.fc_w.ptr();
    T* dfw = grads.fc_w.ptr();
    for (int i = 0; i < shape.feature_dim; ++i) {
        const T g = dfc_z[static_cast<std::size_t>(i)];
        grads.fc_b.data[static_cast<std::size_t>(i)] += g;
        if (g != T(0)) {
            axpy(g, trace.pooled.data(), dfw + static_cast<std::size_t>(i) * ld.out_c, ld.out_c);
            axpy(g, fw + static_cast<std::size_t>(i) * ld.out_c, dpooled.data(), ld.out_c);
        }
    }

    // Global average pool -> last activation gradient, with the ReLU mask
    // taken from the stored post-ReLU activations.
    const int spatial = ld.out_h * ld.out_w;
    std::vector<T> dz(static_cast<std::size_t>(ld.out_c) * spatial);
    const T inv_spatial = T(1) / static_cast<T>(spatial);
    {
        const auto& a_last = trace.block_in.back();
        for (int c = 0; c < ld.out_c; ++c) {
            const T g = dpooled[static_cast<std::size_t>(c)] * inv_spatial;
            const T* a_row = a_last.ptr() + static_cast<std::size_t>(c) * spatial;
            T* dz_row = dz.data() + static_cast<std::size_t>(c) * spatial;
            for (int i = 0; i < spatial; ++i) dz_row[i] = a_row[i] > T(0) ? g : T(0);
        }
    }

    // Conv blocks, last to first.
    std::vector<T> dcols;
    std::vector<T> din;
    for (int b = static_cast<int>(dims.size()) - 1; b >= 0; --b) {
        const auto& d = dims[static_cast<std::size_t>(b)];
        const int N = d.out_h * d.out_w;
        const int K = d.in_c * d.kernel * d.kernel;
        const T* cols = trace.cols[static_cast<std::size_t>(b)].data();

        // dW[i, k] += dot(dz row i, cols row k); db[i] += sum(dz row i).
        T* dw = grads.conv_w[static_cast<std::size_t>(b)].ptr();
        for (int i = 0; i < d.out_c; ++i) {
            const T* dz_row = dz.data() + static_cast<std::size_t>(i) * N;
            grads.conv_b[static_cast<std::size_t>(b)].data[static_cast<std::size_t>(i)] +=
                row_sum(dz_row, N);
            T* dw_row = dw + static_cast<std::size_t>(i) * K;
            for (int k = 0; k < K; ++k) {
                dw_row[k] += dot(dz_row, cols + static_cast<std::size_t>(k) * N, N);
            }
        }

        if (b == 0) break;  // no input gradient needed below the first block

        // dcols = W^T dz, then fold back to the input layout.
        dcols.assign(static_cast<std::size_t>(K) * N, T(0));
        const T* w = net.params.conv_w[static_cast<std::size_t>(b)].ptr();
        for (int i = 0; i < d.out_c; ++i) {
            const T* dz_row = dz.data() + static_cast<std::size_t>(i) * N;
            const T* w_row = w + static_cast<std::size_t>(i) * K;
            for (int k = 0; k < K; ++k) {
                if (w_row[k] != T(0)) {
                    axpy(w_row[k], dz_row, dcols.data() + static_cast<std::size_t>(k) * N, N);
                }
            }
        }
        din.assign(static_cast<std::size_t>(d.in_c) * d.in_h * d.in_w, T(0));
        col2im_add(dcols.data(), d, din.data());

        // ReLU mask of the previous block's output.
        const auto& a_prev = trace.block_in[static_cast<std::size_t>(b)];
        dz.resize(din.size());
        for (std::size_t i = 0; i < din.size(); ++i) {
            dz[i] = a_prev.data[i] > T(0) ? din[i] : T(0);
        }
    }
}

template ParamSet<float> make_params<float>(const NetShape&);
template ParamSet<double> make_params<double>(const NetShape&);
template void init_params<float>(ParamSet<float>&, const NetShape&, std::uint64_t);
template void init_params<double>(ParamSet<double>&, const NetShape&, std::uint64_t);
template ConvNet<float> make_net<float>(const NetShape&, std::uint64_t);
template ConvNet<double> make_net<double>(const NetShape&, std::uint64_t);
template std::vector<std::vector<float>> net_forward<float>(const ConvNet<float>&,
                                                            std::span<const float>, bool, Rng*,
                                                            NetTrace<float>*);
template std::vector<std::vector<double>> net_forward<double>(const ConvNet<double>&,
                                                              std::span<const double>, bool, Rng*,
                                                              NetTrace<double>*);
template void net_backward<float>(const ConvNet<float>&, const NetTrace<float>&,
                                  const std::vector<std::vector<float>>&, ParamSet<float>&);
template void net_backward<double>(const ConvNet<double>&, const NetTrace<double>&,
                                   const std::vector<std::vector<double>>&, ParamSet<double>&);

}  // namespace dare::nn
