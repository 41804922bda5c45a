#include "dare/corpus/glyphs.hpp"

namespace dare::corpus {
namespace {

using P = std::pair<float, float>;

const Glyph kGlyphs[] = {
    {'0', 0.62f, {{{P{0.30f, 0.08f}, P{0.12f, 0.20f}, P{0.05f, 0.50f}, P{0.12f, 0.80f},
                    P{0.30f, 0.92f}, P{0.48f, 0.80f}, P{0.55f, 0.50f}, P{0.48f, 0.20f},
                    P{0.30f, 0.08f}}}}},
    {'1', 0.50f, {{{P{0.16f, 0.24f}, P{0.32f, 0.08f}, P{0.32f, 0.92f}}}}},
    {'2', 0.62f, {{{P{0.08f, 0.25f}, P{0.16f, 0.10f}, P{0.38f, 0.08f}, P{0.52f, 0.22f},
                    P{0.48f, 0.42f}, P{0.10f, 0.88f}, P{0.55f, 0.88f}}}}},
    {'3', 0.62f, {{{P{0.10f, 0.15f}, P{0.30f, 0.08f}, P{0.50f, 0.20f}, P{0.42f, 0.42f},
                    P{0.28f, 0.48f}, P{0.45f, 0.55f}, P{0.52f, 0.75f}, P{0.32f, 0.92f},
                    P{0.10f, 0.82f}}}}},
    {'4', 0.62f, {{{P{0.42f, 0.08f}, P{0.08f, 0.60f}, P{0.55f, 0.60f}}},
                  {{P{0.42f, 0.35f}, P{0.42f, 0.92f}}}}},
    {'5', 0.62f, {{{P{0.50f, 0.10f}, P{0.14f, 0.10f}, P{0.12f, 0.45f}, P{0.35f, 0.40f},
                    P{0.52f, 0.55f}, P{0.50f, 0.78f}, P{0.30f, 0.92f}, P{0.08f, 0.82f}}}}},
    {'6', 0.62f, {{{P{0.45f, 0.10f}, P{0.20f, 0.30f}, P{0.08f, 0.60f}, P{0.15f, 0.85f},
                    P{0.38f, 0.92f}, P{0.52f, 0.75f}, P{0.45f, 0.55f}, P{0.22f, 0.52f},
                    P{0.10f, 0.62f}}}}},
    {'7', 0.62f, {{{P{0.08f, 0.10f}, P{0.55f, 0.10f}, P{0.28f, 0.92f}}},
                  {{P{0.18f, 0.50f}, P{0.44f, 0.50f}}}}},
    {'8', 0.62f, {{{P{0.30f, 0.08f}, P{0.14f, 0.20f}, P{0.20f, 0.40f}, P{0.40f, 0.52f},
                    P{0.52f, 0.70f}, P{0.40f, 0.90f}, P{0.20f, 0.90f}, P{0.10f, 0.72f},
                    P{0.25f, 0.52f}, P{0.45f, 0.40f}, P{0.50f, 0.20f}, P{0.30f, 0.08f}}}}},
    {'9', 0.62f, {{{P{0.50f, 0.30f}, P{0.35f, 0.45f}, P{0.15f, 0.40f}, P{0.10f, 0.20f},
                    P{0.25f, 0.08f}, P{0.45f, 0.12f}, P{0.50f, 0.30f}, P{0.45f, 0.60f},
                    P{0.35f, 0.92f}}}}},
    {'-', 0.55f, {{{P{0.08f, 0.50f}, P{0.48f, 0.50f}}}}},
    {'=', 0.60f, {{{P{0.08f, 0.40f}, P{0.50f, 0.40f}}}, {{P{0.08f, 0.62f}, P{0.50f, 0.62f}}}}},
    {' ', 0.55f, {}},
    {'a', 0.60f, {{{P{0.45f, 0.50f}, P{0.25f, 0.45f}, P{0.10f, 0.60f}, P{0.12f, 0.82f},
                    P{0.30f, 0.92f}, P{0.45f, 0.80f}}},
                  {{P{0.45f, 0.48f}, P{0.45f, 0.92f}}}}},
    {'b', 0.60f, {{{P{0.10f, 0.08f}, P{0.10f, 0.92f}}},
                  {{P{0.10f, 0.55f}, P{0.30f, 0.45f}, P{0.48f, 0.58f}, P{0.48f, 0.78f},
                    P{0.30f, 0.92f}, P{0.10f, 0.82f}}}}},
    {'c', 0.56f, {{{P{0.48f, 0.52f}, P{0.30f, 0.45f}, P{0.12f, 0.58f}, P{0.10f, 0.75f},
                    P{0.25f, 0.92f}, P{0.48f, 0.85f}}}}},
    {'d', 0.60f, {{{P{0.48f, 0.08f}, P{0.48f, 0.92f}}},
                  {{P{0.48f, 0.55f}, P{0.28f, 0.45f}, P{0.10f, 0.60f}, P{0.12f, 0.80f},
                    P{0.28f, 0.92f}, P{0.48f, 0.82f}}}}},
    {'e', 0.58f, {{{P{0.10f, 0.68f}, P{0.48f, 0.62f}, P{0.42f, 0.48f}, P{0.22f, 0.45f},
                    P{0.10f, 0.62f}, P{0.12f, 0.82f}, P{0.30f, 0.92f}, P{0.48f, 0.85f}}}}},
    {'f', 0.50f, {{{P{0.45f, 0.12f}, P{0.28f, 0.08f}, P{0.20f, 0.25f}, P{0.20f, 0.92f}}},
                  {{P{0.08f, 0.45f}, P{0.40f, 0.45f}}}}},
    {'g', 0.60f, {{{P{0.45f, 0.48f}, P{0.25f, 0.45f}, P{0.10f, 0.60f}, P{0.12f, 0.78f},
                    P{0.28f, 0.85f}, P{0.45f, 0.75f}}},
                  {{P{0.45f, 0.46f}, P{0.45f, 0.95f}, P{0.22f, 0.98f}}}}},
    {'h', 0.60f, {{{P{0.10f, 0.08f}, P{0.10f, 0.92f}}},
                  {{P{0.10f, 0.58f}, P{0.30f, 0.45f}, P{0.45f, 0.55f}, P{0.45f, 0.92f}}}}},
    {'i', 0.38f, {{{P{0.28f, 0.48f}, P{0.28f, 0.92f}}}, {{P{0.27f, 0.32f}, P{0.29f, 0.34f}}}}},
    {'j', 0.40f, {{{P{0.35f, 0.48f}, P{0.35f, 0.92f}, P{0.15f, 0.98f}}},
                  {{P{0.34f, 0.32f}, P{0.36f, 0.34f}}}}},
    {'k', 0.58f, {{{P{0.10f, 0.08f}, P{0.10f, 0.92f}}}, {{P{0.42f, 0.48f}, P{0.12f, 0.70f}}},
                  {{P{0.20f, 0.64f}, P{0.45f, 0.92f}}}}},
    {'l', 0.38f, {{{P{0.28f, 0.08f}, P{0.28f, 0.92f}}}}},
    {'m', 0.78f, {{{P{0.08f, 0.92f}, P{0.08f, 0.48f}}},
                  {{P{0.08f, 0.56f}, P{0.20f, 0.45f}, P{0.30f, 0.55f}, P{0.30f, 0.92f}}},
                  {{P{0.30f, 0.56f}, P{0.44f, 0.45f}, P{0.56f, 0.55f}, P{0.56f, 0.92f}}}}},
    {'n', 0.60f, {{{P{0.10f, 0.92f}, P{0.10f, 0.48f}}},
                  {{P{0.10f, 0.56f}, P{0.28f, 0.45f}, P{0.45f, 0.55f}, P{0.45f, 0.92f}}}}},
    {'o', 0.58f, {{{P{0.30f, 0.45f}, P{0.12f, 0.55f}, P{0.10f, 0.75f}, P{0.25f, 0.92f},
                    P{0.42f, 0.85f}, P{0.48f, 0.65f}, P{0.40f, 0.48f}, P{0.30f, 0.45f}}}}},
    {'p', 0.60f, {{{P{0.10f, 0.48f}, P{0.10f, 0.98f}}},
                  {{P{0.10f, 0.55f}, P{0.30f, 0.45f}, P{0.48f, 0.58f}, P{0.48f, 0.78f},
                    P{0.30f, 0.90f}, P{0.10f, 0.80f}}}}},
    {'q', 0.60f, {{{P{0.45f, 0.55f}, P{0.28f, 0.45f}, P{0.10f, 0.58f}, P{0.12f, 0.78f},
                    P{0.28f, 0.88f}, P{0.45f, 0.78f}}},
                  {{P{0.45f, 0.48f}, P{0.45f, 0.98f}}}}},
    {'r', 0.50f, {{{P{0.12f, 0.48f}, P{0.12f, 0.92f}}},
                  {{P{0.12f, 0.58f}, P{0.28f, 0.45f}, P{0.45f, 0.50f}}}}},
    {'s', 0.54f, {{{P{0.45f, 0.50f}, P{0.25f, 0.45f}, P{0.12f, 0.55f}, P{0.25f, 0.65f},
                    P{0.40f, 0.72f}, P{0.45f, 0.85f}, P{0.28f, 0.92f}, P{0.10f, 0.85f}}}}},
    {'t', 0.50f, {{{P{0.25f, 0.15f}, P{0.25f, 0.85f}, P{0.40f, 0.92f}}},
                  {{P{0.10f, 0.45f}, P{0.45f, 0.45f}}}}},
    {'u', 0.60f, {{{P{0.10f, 0.48f}, P{0.12f, 0.82f}, P{0.28f, 0.92f}, P{0.45f, 0.80f},
                    P{0.45f, 0.48f}, P{0.45f, 0.92f}}}}},
    {'v', 0.58f, {{{P{0.08f, 0.48f}, P{0.28f, 0.92f}, P{0.48f, 0.48f}}}}},
    {'w', 0.78f, {{{P{0.06f, 0.48f}, P{0.18f, 0.92f}, P{0.30f, 0.60f}, P{0.42f, 0.92f},
                    P{0.54f, 0.48f}}}}},
    {'x', 0.58f, {{{P{0.10f, 0.48f}, P{0.48f, 0.92f}}}, {{P{0.48f, 0.48f}, P{0.10f, 0.92f}}}}},
    {'y', 0.58f, {{{P{0.10f, 0.48f}, P{0.28f, 0.85f}}}, {{P{0.48f, 0.48f}, P{0.25f, 0.98f}}}}},
    {'z', 0.58f, {{{P{0.10f, 0.48f}, P{0.45f, 0.48f}, P{0.10f, 0.92f}, P{0.48f, 0.92f}}}}},
};

}  // namespace

const Glyph* find_glyph(char c) {
    for (const Glyph& g : kGlyphs) {
        if (g.ch == c) return &g;
    }
    return nullptr;
}

}  // namespace dare::corpus
