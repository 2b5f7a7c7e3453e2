#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "specprint/mat.hpp"

namespace specprint {

struct MetricRecord {
    std::string stem;
    double mse = 0.0;
    double psnr = 0.0;  // +infinity when mse == 0
    double ssim = 0.0;
    double hist_corr = 0.0;
};

struct AggregateStats {
    std::string metric;
    double mean = 0.0;
    double std_dev = 0.0;  // population
    long count = 0;
    long excluded = 0;     // non-finite values left out (infinite psnr)
};

inline double mse(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        const double d = a.v[i] - b.v[i];
        s += d * d;
    }
    return s / static_cast<double>(a.v.size());
}

// Peak dynamic range is 1.0 on normalized images.
inline double psnr(const GrayImage& a, const GrayImage& b) {
    const double e = mse(a, b);
    if (e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / e);
}

namespace detail {

// Gaussian-weighted local mean with an explicit window half-width and
// reflective borders; separable passes.
inline Mat windowed_mean(const Mat& src, double sigma, int half) {
    std::vector<double> k(static_cast<std::size_t>(2 * half + 1));
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        k[i + half] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        sum += k[i + half];
    }
    for (double& w : k) w /= sum;

    Mat tmp(src.rows, src.cols), out(src.rows, src.cols);
    for (int r = 0; r < src.rows; ++r)
        for (int c = 0; c < src.cols; ++c) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += k[i + half] * src.at(r, reflect_index(c + i, src.cols));
            tmp.at(r, c) = acc;
        }
    for (int r = 0; r < src.rows; ++r)
        for (int c = 0; c < src.cols; ++c) {
            double acc = 0.0;
            for (int i = -half; i <= half; ++i)
                acc += k[i + half] * tmp.at(reflect_index(r + i, src.rows), c);
            out.at(r, c) = acc;
        }
    return out;
}

}  // namespace detail

// Mean SSIM with the standard 11x11 Gaussian window (sigma 1.5), C1=(0.01L)^2,
// C2=(0.03L)^2, L=1, reflective borders.
inline double ssim(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b);
    if (a.rows < 11 || a.cols < 11)
        throw TooSmall("ssim needs at least 11x11, got " + std::to_string(a.rows) + "x" +
                       std::to_string(a.cols));

    constexpr double kSigma = 1.5;
    constexpr int kHalf = 5;  // 11x11 window
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;

    Mat aa(a.rows, a.cols), bb(a.rows, a.cols), ab(a.rows, a.cols);
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        aa.v[i] = a.v[i] * a.v[i];
        bb.v[i] = b.v[i] * b.v[i];
        ab.v[i] = a.v[i] * b.v[i];
    }
    const Mat mu_a = detail::windowed_mean(a, kSigma, kHalf);
    const Mat mu_b = detail::windowed_mean(b, kSigma, kHalf);
    const Mat m_aa = detail::windowed_mean(aa, kSigma, kHalf);
    const Mat m_bb = detail::windowed_mean(bb, kSigma, kHalf);
    const Mat m_ab = detail::windowed_mean(ab, kSigma, kHalf);

    double total = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        const double ma = mu_a.v[i], mb = mu_b.v[i];
        const double va = m_aa.v[i] - ma * ma;
        const double vb = m_bb.v[i] - mb * mb;
        const double cov = m_ab.v[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                 ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / static_cast<double>(a.v.size());
}

namespace detail {

inline std::array<double, 256> luminance_histogram(const GrayImage& img) {
    std::array<double, 256> h{};
    for (double v : img.v) {
        int bin = static_cast<int>(std::floor(v * 256.0));
        bin = std::min(std::max(bin, 0), 255);
        h[static_cast<std::size_t>(bin)] += 1.0;
    }
    const double n = static_cast<double>(img.v.size());
    for (double& x : h) x /= n;
    return h;
}

}  // namespace detail

// Pearson correlation between 256-bin normalized luminance histograms.
// Dimensions of a and b may differ. Zero-variance histograms compare as 1
// when identical and 0 otherwise.
inline double hist_correlation(const GrayImage& a, const GrayImage& b) {
    const auto ha = detail::luminance_histogram(a);
    const auto hb = detail::luminance_histogram(b);

    double mean_a = 0.0, mean_b = 0.0;
    for (int i = 0; i < 256; ++i) {
        mean_a += ha[i];
        mean_b += hb[i];
    }
    mean_a /= 256.0;
    mean_b /= 256.0;

    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double da = ha[i] - mean_a;
        const double db = hb[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) return ha == hb ? 1.0 : 0.0;
    return cov / std::sqrt(var_a * var_b);
}

inline double metric_field(const MetricRecord& r, const std::string& name) {
    if (name == "mse") return r.mse;
    if (name == "psnr") return r.psnr;
    if (name == "ssim") return r.ssim;
    if (name == "hist_corr") return r.hist_corr;
    throw std::invalid_argument("unknown metric: " + name);
}

// Mean and population std over finite values, folded in record order.
// Infinite values (psnr on identical pairs) are excluded and counted.
inline AggregateStats aggregate(const std::vector<MetricRecord>& records,
                                const std::string& metric) {
    if (records.empty()) throw EmptyInput("aggregate over zero records");
    AggregateStats st;
    st.metric = metric;

    double sum = 0.0;
    for (const auto& r : records) {
        const double v = metric_field(r, metric);
        if (std::isinf(v)) {
            ++st.excluded;
            continue;
        }
        sum += v;
        ++st.count;
    }
    if (st.count == 0) throw EmptyInput("aggregate(" + metric + "): no finite values");
    st.mean = sum / static_cast<double>(st.count);

    double sq = 0.0;
    for (const auto& r : records) {
        const double v = metric_field(r, metric);
        if (std::isinf(v)) continue;
        const double d = v - st.mean;
        sq += d * d;
    }
    st.std_dev = std::sqrt(sq / static_cast<double>(st.count));
    return st;
}

}  // namespace specprint
