#pragma once

#include <utility>
#include <vector>

namespace dare::corpus {

// Skeleton stroke font. Each glyph is a set of polylines in a unit box
// (x right, y down, baseline at y=0.92, x-height around 0.45). The renderer
// scales, slants, jitters, and inks these; nothing here is anti-aliased.
struct Stroke {
    std::vector<std::pair<float, float>> points;
};

struct Glyph {
    char ch = 0;
    float advance = 0.62f;   // horizontal advance in em units
    std::vector<Stroke> strokes;
};

// Supported: digits, '-', '=', space, and lowercase a-z. Returns nullptr for
// anything else.
const Glyph* find_glyph(char c);

}  // namespace dare::corpus
