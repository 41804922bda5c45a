#include "dare/corpus/image_io.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "dare/error.hpp"

namespace dare::corpus {
namespace {

cv::Mat to_mat(const ImageU8& img) {
    cv::Mat m(img.height, img.width, CV_8UC1);
    for (int y = 0; y < img.height; ++y) {
        std::copy_n(img.px.data() + static_cast<std::size_t>(y) * img.width, img.width,
                    m.ptr<std::uint8_t>(y));
    }
    return m;
}

ImageU8 from_mat(const cv::Mat& m) {
    ImageU8 img(m.rows, m.cols);
    for (int y = 0; y < m.rows; ++y) {
        std::copy_n(m.ptr<std::uint8_t>(y), m.cols,
                    img.px.data() + static_cast<std::size_t>(y) * m.cols);
    }
    return img;
}

}  // namespace

void write_png_gray(const std::filesystem::path& path, const ImageU8& img) {
    if (img.height <= 0 || img.width <= 0) throw ShapeMismatchError("cannot write empty image");
    if (!cv::imwrite(path.string(), to_mat(img))) {
        throw Error("failed to write PNG: " + path.string());
    }
}

ImageU8 read_png_gray(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw MissingFileError("image file not found: " + path.string());
    }
    cv::Mat m = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (m.empty()) throw MissingFileError("failed to decode image: " + path.string());
    return from_mat(m);
}

ImageU8 resize_pad(const ImageU8& img, int height, int width) {
    if (height <= 0 || width <= 0) throw ShapeMismatchError("resize target must be non-empty");
    if (img.height == height && img.width == width) return img;

    const double scale =
        std::min(static_cast<double>(height) / img.height, static_cast<double>(width) / img.width);
    const int new_h = std::max(1, static_cast<int>(std::lround(img.height * scale)));
    const int new_w = std::max(1, static_cast<int>(std::lround(img.width * scale)));

    cv::Mat resized;
    cv::resize(to_mat(img), resized, cv::Size(new_w, new_h), 0, 0,
               scale < 1.0 ? cv::INTER_AREA : cv::INTER_LINEAR);

    cv::Mat canvas = cv::Mat::zeros(height, width, CV_8UC1);
    resized.copyTo(canvas(cv::Rect((width - new_w) / 2, (height - new_h) / 2, new_w, new_h)));
    return from_mat(canvas);
}

}  // namespace dare::corpus
