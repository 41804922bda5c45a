#pragma once

#include "dare/image.hpp"
#include "dare/rng.hpp"

namespace dare::nn {

// Training-time augmentation ranges. The geometry jitter is deliberately
// small: inputs are already pose-normalised crops.
inline constexpr double kJitterMaxRotateDeg = 3.0;
inline constexpr double kJitterMaxTranslate = 0.05;   // fraction of each dimension
inline constexpr double kEraseMinFrac = 0.10;         // erased rectangle size
inline constexpr double kEraseMaxFrac = 0.40;         // as a fraction of each dimension

// Random rotation and translation around the image centre, bilinear
// sampling, background fill. Always applied; the ranges include zero.
ImageF affine_jitter(const ImageF& img, double max_rotate_deg, double max_translate_frac,
                     Rng& rng);

// With probability prob, blanks a random rectangle to background (simulating
// occlusion or a registrar's strike-through). Otherwise returns the input.
ImageF random_erase(const ImageF& img, double prob, Rng& rng);

}  // namespace dare::nn
