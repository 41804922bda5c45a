#include "dare/corpus/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "dare/corpus/image_io.hpp"
#include "dare/csv.hpp"

namespace dare::corpus {

void CorpusParams::validate() const {
    if (count == 0) throw ConfigError("corpus count must be positive");
    if (empty_fraction < 0.0 || empty_fraction > 1.0) {
        throw ConfigError("empty_fraction must lie in [0, 1]");
    }
    if (height <= 0 || width <= 0) throw ConfigError("corpus image size must be positive");
    style.validate();
}

TokenLabel random_nonempty_label(SequenceFormat fmt, Rng& rng) {
    // Each group is drawn uniformly over its canonical values; rejecting the
    // all-missing combination keeps the draw uniform over all canonical
    // non-empty labels.
    while (true) {
        TokenLabel label;

        // Day: 0 = missing, 1-9 single digit, 10-31 two digits.
        const auto day = rng.uniform_int(0, 31);
        if (day == 0) {
            label.tokens.push_back(kDay1Missing);
            label.tokens.push_back(kDay2Missing);
        } else if (day < 10) {
            label.tokens.push_back(kDay1Missing);
            label.tokens.push_back(day2_token(static_cast<int>(day)));
        } else {
            label.tokens.push_back(day1_token(static_cast<int>(day / 10)));
            label.tokens.push_back(day2_token(static_cast<int>(day % 10)));
        }

        // Month: all 14 classes, missing and wildcard included.
        label.tokens.push_back(static_cast<int>(rng.uniform_int(0, 13)));

        // Year: uniform over the canonical group values (empty, or d digits
        // for d in 1..k, right-aligned). Draw one index, decode its band.
        const int year_heads = fmt.year_head_count();
        if (year_heads > 0) {
            std::int64_t combos = 1, pow10 = 1;
            for (int i = 0; i < year_heads; ++i) {
                pow10 *= 10;
                combos += pow10;
            }
            std::int64_t u = rng.uniform_int(0, combos - 1);
            int digits = 0;
            std::int64_t band = 1;
            while (u >= band) {
                u -= band;
                ++digits;
                band = digits == 1 ? 10 : band * 10;
            }
            for (int i = 0; i < year_heads - digits; ++i) label.tokens.push_back(kYearMissing);
            std::vector<int> ds(static_cast<std::size_t>(digits));
            for (int i = digits - 1; i >= 0; --i) {
                ds[static_cast<std::size_t>(i)] = static_cast<int>(u % 10);
                u /= 10;
            }
            for (const int d : ds) label.tokens.push_back(year_token(d));
        }

        if (!is_all_missing(label, fmt)) return label;
    }
}

Dataset generate_dataset(const CorpusParams& params) {
    params.validate();
    Rng rng(mix_seed(params.seed, 0xDA7A));
    Dataset ds;
    ds.format = params.format;

    const std::size_t n_empty =
        static_cast<std::size_t>(params.empty_fraction * static_cast<double>(params.count));
    const TokenLabel empty = all_missing_label(params.format);

    std::vector<TokenLabel> labels;
    labels.reserve(params.count);
    for (std::size_t i = 0; i < n_empty; ++i) labels.push_back(empty);
    for (std::size_t i = n_empty; i < params.count; ++i) {
        labels.push_back(random_nonempty_label(params.format, rng));
    }
    rng.shuffle(labels);

    ds.items.reserve(params.count);
    for (std::size_t i = 0; i < params.count; ++i) {
        DatasetItem item;
        char buf[32];
        std::snprintf(buf, sizeof(buf), "syn-%06zu", i);
        item.id = buf;
        item.label = labels[i];
        item.image = quantize(render_date(labels[i], params.format, params.style, params.height,
                                          params.width, mix_seed(params.seed, 0x11A6E, i)));
        ds.items.push_back(std::move(item));
    }
    return ds;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double second_fraction,
                                          std::uint64_t seed) {
    if (second_fraction < 0.0 || second_fraction > 1.0) {
        throw ConfigError("split fraction must lie in [0, 1]");
    }
    std::vector<std::size_t> idx(ds.items.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(mix_seed(seed, 0x5B117));
    rng.shuffle(idx);

    const auto second_n = static_cast<std::size_t>(
        std::lround(second_fraction * static_cast<double>(ds.items.size())));
    std::vector<bool> in_second(ds.items.size(), false);
    for (std::size_t i = 0; i < second_n; ++i) in_second[idx[i]] = true;

    std::pair<Dataset, Dataset> out;
    out.first.format = ds.format;
    out.second.format = ds.format;
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        (in_second[i] ? out.second : out.first).items.push_back(ds.items[i]);
    }
    return out;
}

Dataset load_dataset(const std::filesystem::path& images_dir,
                     const std::filesystem::path& labels_csv, SequenceFormat fmt, int height,
                     int width, LoadReport* report) {
    const CsvTable table = read_csv(labels_csv);
    const std::size_t path_col = table.column("image_path");
    const std::size_t day_col = table.column("day");
    const std::size_t month_col = table.column("month");
    const std::size_t year_col = table.column("year");

    Dataset ds;
    ds.format = fmt;
    LoadReport local;
    LoadReport& rep = report ? *report : local;
    rep.rows = table.rows.size();

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        TokenLabel label;
        try {
            label = parse_label(row[day_col], row[month_col], row[year_col], fmt);
        } catch (const Error& e) {
            rep.skipped.push_back("row " + std::to_string(r + 2) + ": " + e.what());
            continue;
        }
        DatasetItem item;
        item.id = std::filesystem::path(row[path_col]).stem().string();
        item.label = std::move(label);
        item.image = resize_pad(read_png_gray(images_dir / row[path_col]), height, width);
        ds.items.push_back(std::move(item));
    }
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir / "images");
    std::ofstream csv(dir / "labels.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (dir / "labels.csv").string());
    csv << "image_path,day,month,year\n";
    for (const auto& item : ds.items) {
        const std::string filename = item.id + ".png";
        write_png_gray(dir / "images" / filename, item.image);
        const auto groups = label_groups(item.label, ds.format);
        csv << csv_join({filename, groups[0], groups[1], groups[2]}) << "\n";
    }
}

}  // namespace dare::corpus
