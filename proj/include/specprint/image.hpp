#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "specprint/mat.hpp"

namespace specprint {

// 8-bit sRGB image, row-major RGB triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 3 * width * height

    std::uint8_t* px(int x, int y) { return &pixels[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* px(int x, int y) const {
        return &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
    }
};

// BT.601 luma, normalized to [0,1].
inline GrayImage to_gray(const RgbImage& img) {
    GrayImage g(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t* p = img.px(x, y);
            g.at(y, x) = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
        }
    }
    return g;
}

namespace detail {

// Half-pixel-centered bilinear sample, coordinates clamped to the grid.
inline double bilinear_sample(const Mat& src, double y, double x) {
    y = std::clamp(y, 0.0, static_cast<double>(src.rows - 1));
    x = std::clamp(x, 0.0, static_cast<double>(src.cols - 1));
    const int y0 = static_cast<int>(y);
    const int x0 = static_cast<int>(x);
    const double fy = y - y0;
    const double fx = x - x0;
    if (fy == 0.0 && fx == 0.0) return src.at(y0, x0);
    const int y1 = std::min(y0 + 1, src.rows - 1);
    const int x1 = std::min(x0 + 1, src.cols - 1);
    return (1.0 - fy) * ((1.0 - fx) * src.at(y0, x0) + fx * src.at(y0, x1)) +
           fy * ((1.0 - fx) * src.at(y1, x0) + fx * src.at(y1, x1));
}

}  // namespace detail

// Center-crop to the largest centered square, then bilinear-resample to
// analysis_size x analysis_size. Values stay clamped to [0,1].
inline GrayImage standardize(const GrayImage& img, int analysis_size) {
    if (analysis_size < 2) throw std::invalid_argument("analysis_size must be >= 2");
    if (img.rows < 2 || img.cols < 2)
        throw DegenerateImage("source smaller than 2x2 (" + std::to_string(img.rows) + "x" +
                              std::to_string(img.cols) + ")");

    const int side = std::min(img.rows, img.cols);
    const int off_r = (img.rows - side) / 2;
    const int off_c = (img.cols - side) / 2;

    Mat sq(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) sq.at(r, c) = img.at(off_r + r, off_c + c);

    if (side == analysis_size) return sq;

    const double scale = static_cast<double>(side) / analysis_size;
    GrayImage out(analysis_size, analysis_size);
    for (int r = 0; r < analysis_size; ++r) {
        const double sy = (r + 0.5) * scale - 0.5;
        for (int c = 0; c < analysis_size; ++c) {
            const double sx = (c + 0.5) * scale - 0.5;
            out.at(r, c) = std::clamp(detail::bilinear_sample(sq, sy, sx), 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace specprint
