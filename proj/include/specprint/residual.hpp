#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "specprint/json_writer.hpp"
#include "specprint/mat.hpp"

namespace specprint {

enum class DenoiserKind { identity, gaussian, median };

// CLI form: "identity", "gaussian:<sigma>", "median:<radius>".
struct DenoiserSpec {
    DenoiserKind kind = DenoiserKind::gaussian;
    double sigma = 1.0;  // gaussian
    int radius = 1;      // median

    static DenoiserSpec identity() { return {DenoiserKind::identity, 1.0, 1}; }
    static DenoiserSpec gaussian(double sigma = 1.0) { return {DenoiserKind::gaussian, sigma, 1}; }
    static DenoiserSpec median(int radius = 1) { return {DenoiserKind::median, 1.0, radius}; }

    static DenoiserSpec parse(const std::string& text) {
        const auto colon = text.find(':');
        const std::string kind = text.substr(0, colon);
        const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
        if (kind == "identity") {
            if (!arg.empty()) throw std::invalid_argument("identity takes no parameter");
            return identity();
        }
        if (kind == "gaussian") {
            const double s = arg.empty() ? 1.0 : std::stod(arg);
            if (!(s > 0.0)) throw std::invalid_argument("gaussian sigma must be > 0");
            return gaussian(s);
        }
        if (kind == "median") {
            const int r = arg.empty() ? 1 : std::stoi(arg);
            if (r < 1) throw std::invalid_argument("median radius must be >= 1");
            return median(r);
        }
        throw std::invalid_argument("unknown denoiser \"" + text + "\"");
    }

    std::string str() const {
        switch (kind) {
            case DenoiserKind::identity: return "identity";
            case DenoiserKind::gaussian: return "gaussian:" + JsonWriter::format_double(sigma);
            case DenoiserKind::median: return "median:" + std::to_string(radius);
        }
        return "identity";
    }
};

namespace detail {

inline std::vector<double> gaussian_kernel(double sigma, int half) {
    std::vector<double> k(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        k[i + half] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += k[i + half];
    }
    for (double& w : k) w /= sum;
    return k;
}

inline GrayImage gaussian_denoise(const GrayImage& img, double sigma) {
    const int half = static_cast<int>(std::ceil(4.0 * sigma));
    const auto k = gaussian_kernel(sigma, half);

    Mat tmp(img.rows, img.cols);
    for (int r = 0; r < img.rows; ++r)
        for (int c = 0; c < img.cols; ++c) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += k[i + half] * img.at(r, reflect_index(c + i, img.cols));
            tmp.at(r, c) = acc;
        }
    GrayImage out(img.rows, img.cols);
    for (int r = 0; r < img.rows; ++r)
        for (int c = 0; c < img.cols; ++c) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += k[i + half] * tmp.at(reflect_index(r + i, img.rows), c);
            out.at(r, c) = std::clamp(acc, 0.0, 1.0);
        }
    return out;
}

inline GrayImage median_denoise(const GrayImage& img, int radius) {
    GrayImage out(img.rows, img.cols);
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
    for (int r = 0; r < img.rows; ++r)
        for (int c = 0; c < img.cols; ++c) {
            window.clear();
            for (int i = -radius; i <= radius; ++i)
                for (int j = -radius; j <= radius; ++j)
                    window.push_back(
                        img.at(reflect_index(r + i, img.rows), reflect_index(c + j, img.cols)));
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
            std::nth_element(window.begin(), mid, window.end());
            out.at(r, c) = std::clamp(*mid, 0.0, 1.0);
        }
    return out;
}

}  // namespace detail

inline GrayImage denoise(const GrayImage& img, const DenoiserSpec& spec) {
    switch (spec.kind) {
        case DenoiserKind::identity: return img;
        case DenoiserKind::gaussian: return detail::gaussian_denoise(img, spec.sigma);
        case DenoiserKind::median: return detail::median_denoise(img, spec.radius);
    }
    return img;
}

// Noise residual: image minus its denoised version, then mean-subtracted so
// the spectral DC bin stays clean.
inline Residual residual(const GrayImage& img, const DenoiserSpec& spec) {
    const GrayImage den = denoise(img, spec);
    Residual r(img.rows, img.cols);
    for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] = img.v[i] - den.v[i];
    const double m = mat_mean(r);
    for (double& x : r.v) x -= m;
    return r;
}

}  // namespace specprint
