#pragma once

#include <filesystem>

#include "dare/image.hpp"

namespace dare::corpus {

// Grayscale PNG I/O and geometry, backed by OpenCV. Everything else in the
// library works on plain pixel buffers.

void write_png_gray(const std::filesystem::path& path, const ImageU8& img);

// Decodes any PNG (color collapses to gray). Throws MissingFileError if the
// file does not exist or cannot be decoded.
ImageU8 read_png_gray(const std::filesystem::path& path);

// Scales the image to fit (height, width) preserving aspect ratio, then
// centres it on a background-black canvas of exactly that size.
ImageU8 resize_pad(const ImageU8& img, int height, int width);

}  // namespace dare::corpus
