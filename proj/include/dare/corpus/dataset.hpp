#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dare/corpus/render.hpp"
#include "dare/date_model.hpp"
#include "dare/image.hpp"
#include "dare/rng.hpp"

namespace dare::corpus {

struct DatasetItem {
    std::string id;
    ImageU8 image;
    TokenLabel label;
};

struct Dataset {
    SequenceFormat format;
    std::vector<DatasetItem> items;
};

struct CorpusParams {
    std::size_t count = 0;
    SequenceFormat format;
    double empty_fraction = 0.0;   // share of items with the all-missing label
    int height = 64;
    int width = 160;
    StyleParams style;
    std::uint64_t seed = 0;

    void validate() const;
};

// Uniform draw over the canonical labels that are not all-missing.
TokenLabel random_nonempty_label(SequenceFormat fmt, Rng& rng);

// Synthesises a corpus: floor(empty_fraction * count) items carry the
// all-missing label (blank paper), the rest uniform random non-empty labels.
// Item order is a seeded shuffle; everything is deterministic in params.seed.
Dataset generate_dataset(const CorpusParams& params);

// Splits into (first, second) with round(second_fraction * n) items in the
// second part, selected by a seeded shuffle; each part keeps the original
// relative order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double second_fraction,
                                          std::uint64_t seed);

struct LoadReport {
    std::size_t rows = 0;
    std::vector<std::string> skipped;   // "row N: reason"
};

// Loads images + labels from a directory and a CSV with columns image_path,
// day, month, year (textual groups, empty = missing, "=" = month wildcard).
// Rows whose label does not parse are skipped and reported; missing or
// undecodable image files are an error. Images are resized/padded to
// (height, width). Item ids are the image_path stem.
Dataset load_dataset(const std::filesystem::path& images_dir,
                     const std::filesystem::path& labels_csv, SequenceFormat fmt, int height,
                     int width, LoadReport* report = nullptr);

// Writes items as images/<id>.png plus labels.csv alongside.
void save_dataset(const Dataset& ds, const std::filesystem::path& dir);

}  // namespace dare::corpus
