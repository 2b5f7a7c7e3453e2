#pragma once

#include <cstddef>
#include <vector>

#include "specprint/errors.hpp"

namespace specprint {

// Dense row-major matrix of doubles. GrayImage restricts values to [0,1];
// Residual is signed. Both are plain Mats by convention.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {}

    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }

    std::size_t size() const { return v.size(); }
    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

    bool operator==(const Mat& o) const {
        return rows == o.rows && cols == o.cols && v == o.v;
    }
};

using GrayImage = Mat;
using Residual = Mat;

inline void require_same_shape(const Mat& a, const Mat& b) {
    if (!a.same_shape(b))
        throw ShapeMismatch("got " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                            " vs " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

inline double mat_mean(const Mat& m) {
    double s = 0.0;
    for (double x : m.v) s += x;
    return m.v.empty() ? 0.0 : s / static_cast<double>(m.v.size());
}

// Triangle-wave index fold, edge-repeating (..cba|abc..|cba..). Valid for any
// offset and n >= 1.
inline int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    int m = i % period;
    if (m < 0) m += period;
    return m < n ? m : period - 1 - m;
}

}  // namespace specprint
