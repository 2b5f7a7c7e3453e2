#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace specprint::fft {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

namespace detail {

constexpr double kPi = 3.14159265358979323846;

// Iterative radix-2 Cooley-Tukey, in place. sign = -1 forward, +1 inverse
// (unscaled; the caller applies 1/n).
inline void transform_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * kPi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx t = a[i + j + len / 2] * w;
                a[i + j] = u + t;
                a[i + j + len / 2] = u - t;
                w *= wlen;
            }
        }
    }
}

// Chirp angles need n^2 reduced mod 2n before hitting the trig functions,
// otherwise large n^2 values lose precision in the argument.
inline cplx chirp(std::uint64_t idx, std::uint64_t n, int sign) {
    const std::uint64_t r = (idx * idx) % (2 * n);
    const double ang = sign * kPi * static_cast<double>(r) / static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

// Bluestein: DFT of arbitrary length via one pow2 circular convolution.
inline void transform_bluestein(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);

    std::vector<cplx> fa(m, cplx{});
    std::vector<cplx> fb(m, cplx{});
    for (std::size_t i = 0; i < n; ++i) {
        const cplx c = chirp(i, n, sign);
        fa[i] = a[i] * c;
        fb[i] = std::conj(c);
        if (i != 0) fb[m - i] = std::conj(c);
    }

    transform_pow2(fa, -1);
    transform_pow2(fb, -1);
    for (std::size_t i = 0; i < m; ++i) fa[i] *= fb[i];
    transform_pow2(fa, +1);
    const double scale = 1.0 / static_cast<double>(m);

    for (std::size_t i = 0; i < n; ++i)
        a[i] = fa[i] * scale * chirp(i, n, sign);
}

inline void transform(std::vector<cplx>& a, int sign) {
    if (a.size() < 2) return;
    if (is_pow2(a.size()))
        transform_pow2(a, sign);
    else
        transform_bluestein(a, sign);
}

}  // namespace detail

// Unnormalized forward DFT: X[k] = sum_n x[n] e^{-2*pi*i*n*k/N}.
inline void fft_inplace(std::vector<cplx>& a) { detail::transform(a, -1); }

// Inverse with the 1/N factor, so ifft(fft(x)) == x.
inline void ifft_inplace(std::vector<cplx>& a) {
    detail::transform(a, +1);
    const double scale = 1.0 / static_cast<double>(a.empty() ? 1 : a.size());
    for (cplx& x : a) x *= scale;
}

// 2-D transforms over a row-major buffer, rows first then columns. The
// traversal order is fixed so results are bit-reproducible.
inline void fft2_inplace(std::vector<cplx>& a, int rows, int cols) {
    std::vector<cplx> line;
    line.resize(static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) line[c] = a[static_cast<std::size_t>(r) * cols + c];
        fft_inplace(line);
        for (int c = 0; c < cols; ++c) a[static_cast<std::size_t>(r) * cols + c] = line[c];
    }
    line.resize(static_cast<std::size_t>(rows));
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) line[r] = a[static_cast<std::size_t>(r) * cols + c];
        fft_inplace(line);
        for (int r = 0; r < rows; ++r) a[static_cast<std::size_t>(r) * cols + c] = line[r];
    }
}

inline void ifft2_inplace(std::vector<cplx>& a, int rows, int cols) {
    std::vector<cplx> line;
    line.resize(static_cast<std::size_t>(cols));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) line[c] = a[static_cast<std::size_t>(r) * cols + c];
        ifft_inplace(line);
        for (int c = 0; c < cols; ++c) a[static_cast<std::size_t>(r) * cols + c] = line[c];
    }
    line.resize(static_cast<std::size_t>(rows));
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) line[r] = a[static_cast<std::size_t>(r) * cols + c];
        ifft_inplace(line);
        for (int r = 0; r < rows; ++r) a[static_cast<std::size_t>(r) * cols + c] = line[r];
    }
}

}  // namespace specprint::fft
