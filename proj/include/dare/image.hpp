#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace dare {

// Grayscale images, row-major, origin at the top-left. Pixel value 0 is
// background (paper), 1 (or 255) is full ink. Corpora are stored as 8-bit;
// the network consumes the float form.
struct ImageU8 {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> px;

    ImageU8() = default;
    ImageU8(int h, int w) : height(h), width(w), px(static_cast<std::size_t>(h) * w, 0) {}

    std::uint8_t& at(int y, int x) { return px[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(int y, int x) const { return px[static_cast<std::size_t>(y) * width + x]; }
};

struct ImageF {
    int height = 0;
    int width = 0;
    std::vector<float> px;

    ImageF() = default;
    ImageF(int h, int w) : height(h), width(w), px(static_cast<std::size_t>(h) * w, 0.0f) {}

    float& at(int y, int x) { return px[static_cast<std::size_t>(y) * width + x]; }
    float at(int y, int x) const { return px[static_cast<std::size_t>(y) * width + x]; }
};

inline ImageF to_float(const ImageU8& u) {
    ImageF f(u.height, u.width);
    for (std::size_t i = 0; i < u.px.size(); ++i) f.px[i] = static_cast<float>(u.px[i]) * (1.0f / 255.0f);
    return f;
}

inline ImageU8 quantize(const ImageF& f) {
    ImageU8 u(f.height, f.width);
    for (std::size_t i = 0; i < f.px.size(); ++i) {
        const float v = std::clamp(f.px[i], 0.0f, 1.0f);
        u.px[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    return u;
}

}  // namespace dare
