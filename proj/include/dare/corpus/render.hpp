#pragma once

#include <cstdint>
#include <string>

#include "dare/date_model.hpp"
#include "dare/image.hpp"

namespace dare::corpus {

// Field order on the page. Most registers write day-month-year; some write
// the year first.
enum class DateLayout { DayMonthYear, YearDayMonth };

// Whether the month appears as a numeral or as a written month name
// abbreviation (jan, feb, ...).
enum class MonthStyle { Numeric, Text };

// Knobs of the synthetic handwriting style. Defaults are the corpus default
// style; all randomness inside the renderer derives from the render seed.
struct StyleParams {
    double glyph_jitter = 1.5;     // per-point positional noise, px at 64px height
    double stroke_min = 1.2;       // stroke thickness range, px
    double stroke_max = 2.6;
    double slant_deg = 10.0;       // max absolute shear angle
    double noise_level = 0.08;     // additive paper noise amplitude
    double fade_level = 0.35;      // max per-stroke ink fade
    double blot_prob = 0.15;       // chance of ink blots per image
    DateLayout layout = DateLayout::DayMonthYear;
    MonthStyle month_style = MonthStyle::Numeric;

    void validate() const;
};

// The text the renderer inks for a label, after layout and month style are
// applied: "28-8-33", "28-aug-33", or "33-28-8". Missing groups keep their
// separator ("-8-33"); the all-missing label yields "".
std::string date_text(const TokenLabel& label, SequenceFormat fmt, const StyleParams& style);

// Renders a text string as synthetic handwriting on paper noise. All
// randomness comes from seed; the same inputs give the same image.
ImageF render_text(const std::string& text, const StyleParams& style, int height, int width,
                   std::uint64_t seed);

// date_text + render_text in one call.
ImageF render_date(const TokenLabel& label, SequenceFormat fmt, const StyleParams& style,
                   int height, int width, std::uint64_t seed);

}  // namespace dare::corpus
