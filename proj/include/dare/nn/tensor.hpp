#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "dare/error.hpp"

namespace dare::nn {

// Dense row-major tensor. Shape is kept only for bookkeeping; all math
// indexes the flat buffer directly.
template <typename T>
struct Tensor {
    std::vector<int> shape;
    std::vector<T> data;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)), data(numel(shape), T(0)) {}

    static std::size_t numel(const std::vector<int>& s) {
        std::size_t n = 1;
        for (const int d : s) {
            if (d <= 0) throw ShapeMismatchError("tensor dimension must be positive");
            n *= static_cast<std::size_t>(d);
        }
        return n;
    }

    std::size_t size() const { return data.size(); }
    T* ptr() { return data.data(); }
    const T* ptr() const { return data.data(); }
    void fill(T v) { std::fill(data.begin(), data.end(), v); }
};

// L2 norm accumulated in double regardless of T.
template <typename T>
double tensor_l2_norm(const Tensor<T>& t) {
    double sum = 0.0;
    for (const T v : t.data) {
        const double d = static_cast<double>(v);
        sum += d * d;
    }
    return std::sqrt(sum);
}

template <typename T>
bool tensor_all_finite(const Tensor<T>& t) {
    for (const T v : t.data) {
        if (!std::isfinite(static_cast<double>(v))) return false;
    }
    return true;
}

}  // namespace dare::nn
