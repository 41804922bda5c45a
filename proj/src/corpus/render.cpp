#include "dare/corpus/render.hpp"

#include <algorithm>
#include <cmath>

#include "dare/corpus/glyphs.hpp"
#include "dare/rng.hpp"

namespace dare::corpus {
namespace {

const char* kMonthNames[12] = {"jan", "feb", "mar", "apr", "maj", "jun",
                               "jul", "aug", "sep", "okt", "nov", "dec"};

// Stamps an anti-aliased disc, combining with existing ink via max.
void stamp(ImageF& ink, double cx, double cy, double radius, double intensity) {
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius - 1)));
    const int x1 = std::min(ink.width - 1, static_cast<int>(std::ceil(cx + radius + 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius - 1)));
    const int y1 = std::min(ink.height - 1, static_cast<int>(std::ceil(cy + radius + 1)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double d = std::hypot(x - cx, y - cy);
            const double a = std::clamp(radius + 0.5 - d, 0.0, 1.0) * intensity;
            if (a > ink.at(y, x)) ink.at(y, x) = static_cast<float>(a);
        }
    }
}

void draw_segment(ImageF& ink, double x0, double y0, double x1, double y1, double thickness,
                  double intensity) {
    const double len = std::hypot(x1 - x0, y1 - y0);
    const int steps = std::max(1, static_cast<int>(std::ceil(len / 0.35)));
    for (int s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        stamp(ink, x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, thickness * 0.5, intensity);
    }
}

}  // namespace

void StyleParams::validate() const {
    if (glyph_jitter < 0.0) throw ConfigError("glyph_jitter must be non-negative");
    if (stroke_min <= 0.0 || stroke_max < stroke_min) {
        throw ConfigError("stroke thickness range is invalid");
    }
    if (slant_deg < 0.0 || slant_deg >= 45.0) throw ConfigError("slant_deg must lie in [0, 45)");
    if (noise_level < 0.0 || noise_level > 1.0) throw ConfigError("noise_level must lie in [0, 1]");
    if (fade_level < 0.0 || fade_level >= 1.0) throw ConfigError("fade_level must lie in [0, 1)");
    if (blot_prob < 0.0 || blot_prob > 1.0) throw ConfigError("blot_prob must lie in [0, 1]");
}

std::string date_text(const TokenLabel& label, SequenceFormat fmt, const StyleParams& style) {
    validate_label(label, fmt);
    const auto& t = label.tokens;

    std::string day;
    if (t[0] != kDay1Missing) day += static_cast<char>('1' + t[0]);
    if (t[1] != kDay2Missing) day += static_cast<char>('0' + t[1]);

    std::string month;
    if (t[2] == kMonthWildcard) {
        month = "=";
    } else if (t[2] != kMonthMissing) {
        month = style.month_style == MonthStyle::Text ? kMonthNames[t[2]]
                                                      : std::to_string(t[2] + 1);
    }

    std::string year;
    for (int i = 3; i < fmt.head_count(); ++i) {
        if (t[static_cast<std::size_t>(i)] != kYearMissing) {
            year += static_cast<char>('0' + t[static_cast<std::size_t>(i)]);
        }
    }

    std::vector<std::string> groups;
    if (style.layout == DateLayout::YearDayMonth && fmt.year_head_count() > 0) {
        groups = {year, day, month};
    } else {
        groups = {day, month};
        if (fmt.year_head_count() > 0) groups.push_back(year);
    }
    while (!groups.empty() && groups.back().empty()) groups.pop_back();

    std::string out;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        if (i) out.push_back('-');
        out += groups[i];
    }
    return out;
}

ImageF render_text(const std::string& text, const StyleParams& style, int height, int width,
                   std::uint64_t seed) {
    style.validate();
    if (height <= 0 || width <= 0) throw ConfigError("render target must be non-empty");
    Rng rng(mix_seed(seed));
    const double px_scale = height / 64.0;   // style knobs are calibrated at 64px height

    ImageF ink(height, width);
    if (!text.empty()) {
        // Gather glyphs up front so the text can be scaled to fit.
        std::vector<const Glyph*> glyphs;
        double total_adv = 0.0;
        for (const char c : text) {
            const Glyph* g = find_glyph(c);
            if (!g) throw OutOfAlphabetError(std::string("no glyph for character '") + c + "'");
            glyphs.push_back(g);
            total_adv += g->advance;
        }

        double em = height * rng.uniform(0.50, 0.75);
        const double slant =
            std::tan(rng.uniform(-style.slant_deg, style.slant_deg) * 3.14159265358979323846 /
                     180.0);
        const double thickness = rng.uniform(style.stroke_min, style.stroke_max) * px_scale;

        const double max_text_w = width * 0.92;
        if (total_adv * em > max_text_w) em = max_text_w / total_adv;

        const double free_w = width - total_adv * em;
        double cursor = free_w * rng.uniform(0.15, 0.85);
        const double top = (height - em) * rng.uniform(0.25, 0.75);
        const double baseline = 0.92;

        for (const Glyph* g : glyphs) {
            const double intensity = rng.uniform(1.0 - style.fade_level, 1.0);
            for (const Stroke& stroke : g->strokes) {
                double prev_x = 0.0, prev_y = 0.0;
                for (std::size_t i = 0; i < stroke.points.size(); ++i) {
                    const auto [gx, gy] = stroke.points[i];
                    const double x = cursor + (gx + slant * (baseline - gy)) * em +
                                     rng.normal() * style.glyph_jitter * px_scale;
                    const double y = top + gy * em + rng.normal() * style.glyph_jitter * px_scale;
                    if (i > 0) draw_segment(ink, prev_x, prev_y, x, y, thickness, intensity);
                    prev_x = x;
                    prev_y = y;
                }
                if (stroke.points.size() == 1) {
                    stamp(ink, prev_x, prev_y, thickness * 0.5, intensity);
                }
            }
            cursor += g->advance * em + rng.normal() * 0.02 * em;
        }
    }

    // Ink blots.
    if (rng.bernoulli(style.blot_prob)) {
        const auto blots = rng.uniform_int(1, 3);
        for (std::int64_t i = 0; i < blots; ++i) {
            stamp(ink, rng.uniform(0.0, width - 1.0), rng.uniform(0.0, height - 1.0),
                  rng.uniform(1.5, 4.0) * px_scale, rng.uniform(0.5, 1.0));
        }
    }

    // Paper noise.
    if (style.noise_level > 0.0) {
        for (float& v : ink.px) {
            v = std::clamp(v + static_cast<float>(rng.uniform(-style.noise_level,
                                                              style.noise_level)),
                           0.0f, 1.0f);
        }
    }
    return ink;
}

ImageF render_date(const TokenLabel& label, SequenceFormat fmt, const StyleParams& style,
                   int height, int width, std::uint64_t seed) {
    return render_text(date_text(label, fmt, style), style, height, width, seed);
}

}  // namespace dare::corpus
