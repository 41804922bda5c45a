#include "dare/nn/augment.hpp"

#include <algorithm>
#include <cmath>

namespace dare::nn {

ImageF affine_jitter(const ImageF& img, double max_rotate_deg, double max_translate_frac,
                     Rng& rng) {
    const double pi = 3.14159265358979323846264338327950288;
    const double theta = rng.uniform(-max_rotate_deg, max_rotate_deg) * pi / 180.0;
    const double dx = rng.uniform(-max_translate_frac, max_translate_frac) * img.width;
    const double dy = rng.uniform(-max_translate_frac, max_translate_frac) * img.height;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double cx = (img.width - 1) * 0.5;
    const double cy = (img.height - 1) * 0.5;

    ImageF out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            // Inverse map: rotate the output pixel back into the source.
            const double rx = x - cx - dx;
            const double ry = y - cy - dy;
            const double sx = cos_t * rx + sin_t * ry + cx;
            const double sy = -sin_t * rx + cos_t * ry + cy;

            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0;
            const double fy = sy - y0;

            const auto sample = [&](int yy, int xx) -> double {
                if (yy < 0 || yy >= img.height || xx < 0 || xx >= img.width) return 0.0;
                return img.at(yy, xx);
            };
            const double v = (1 - fy) * ((1 - fx) * sample(y0, x0) + fx * sample(y0, x0 + 1)) +
                             fy * ((1 - fx) * sample(y0 + 1, x0) + fx * sample(y0 + 1, x0 + 1));
            out.at(y, x) = static_cast<float>(v);
        }
    }
    return out;
}

ImageF random_erase(const ImageF& img, double prob, Rng& rng) {
    if (!rng.bernoulli(prob)) return img;

    const int ew = std::max(1, static_cast<int>(img.width * rng.uniform(kEraseMinFrac, kEraseMaxFrac)));
    const int eh = std::max(1, static_cast<int>(img.height * rng.uniform(kEraseMinFrac, kEraseMaxFrac)));
    const int x0 = static_cast<int>(rng.uniform_int(0, std::max(0, img.width - ew)));
    const int y0 = static_cast<int>(rng.uniform_int(0, std::max(0, img.height - eh)));

    ImageF out = img;
    for (int y = y0; y < std::min(img.height, y0 + eh); ++y) {
        for (int x = x0; x < std::min(img.width, x0 + ew); ++x) {
            out.at(y, x) = 0.0f;
        }
    }
    return out;
}

}  // namespace dare::nn
