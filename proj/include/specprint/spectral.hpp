#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "specprint/fft.hpp"
#include "specprint/mat.hpp"

namespace specprint {

constexpr double kPi = 3.14159265358979323846;

// Magnitudes below this count as null bins; their phase is 0 by convention.
constexpr double kNullMagnitude = 1e-12;
// Zero-lag values below this leave the autocorrelation unnormalized.
constexpr double kDegenerateZeroLag = 1e-15;

struct ComplexSpectrum {
    int rows = 0;
    int cols = 0;
    std::vector<std::complex<double>> v;  // row-major, DC at (0,0)

    std::complex<double>& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    const std::complex<double>& at(int r, int c) const {
        return v[static_cast<std::size_t>(r) * cols + c];
    }
};

enum class MapKind { power, phase, autocorr, generic };

inline const char* map_kind_name(MapKind k) {
    switch (k) {
        case MapKind::power: return "power";
        case MapKind::phase: return "phase";
        case MapKind::autocorr: return "autocorr";
        case MapKind::generic: return "generic";
    }
    return "generic";
}

inline MapKind map_kind_from_name(const std::string& s) {
    if (s == "power") return MapKind::power;
    if (s == "phase") return MapKind::phase;
    if (s == "autocorr") return MapKind::autocorr;
    if (s == "generic") return MapKind::generic;
    throw FormatError("unknown map kind \"" + s + "\"");
}

struct SpectralMap {
    Mat m;
    MapKind kind = MapKind::generic;
    bool centered = false;    // zero-lag/DC at (rows/2, cols/2) when true
    bool normalized = false;  // autocorr divided by its zero-lag value

    int rows() const { return m.rows; }
    int cols() const { return m.cols; }
    double& at(int r, int c) { return m.at(r, c); }
    double at(int r, int c) const { return m.at(r, c); }
};

// Forward 2-D DFT, unnormalized: X(k,l) = sum x(m,n) e^{-j2pi(km/M + ln/N)}.
inline ComplexSpectrum dft2(const Mat& img) {
    ComplexSpectrum s;
    s.rows = img.rows;
    s.cols = img.cols;
    s.v.assign(img.v.begin(), img.v.end());
    fft::fft2_inplace(s.v, s.rows, s.cols);
    return s;
}

inline SpectralMap power_spectrum(const ComplexSpectrum& spec) {
    SpectralMap out;
    out.kind = MapKind::power;
    out.m = Mat(spec.rows, spec.cols);
    for (std::size_t i = 0; i < spec.v.size(); ++i) {
        const double re = spec.v[i].real(), im = spec.v[i].imag();
        out.m.v[i] = re * re + im * im;
    }
    return out;
}

namespace detail {

inline double wrap_phase(double p) {
    // atan2 lands in [-pi, pi]; fold the -pi edge onto +pi.
    if (p <= -kPi) p += 2.0 * kPi;
    return p;
}

}  // namespace detail

// Per-bin phase in (-pi, pi]; null bins (|X| < 1e-12) report 0.
inline SpectralMap phase_spectrum(const ComplexSpectrum& spec) {
    SpectralMap out;
    out.kind = MapKind::phase;
    out.m = Mat(spec.rows, spec.cols);
    for (std::size_t i = 0; i < spec.v.size(); ++i) {
        const double mag = std::abs(spec.v[i]);
        out.m.v[i] = mag < kNullMagnitude
                         ? 0.0
                         : detail::wrap_phase(std::atan2(spec.v[i].imag(), spec.v[i].real()));
    }
    return out;
}

namespace detail {

// Unnormalized circular autocorrelation via Wiener-Khinchin:
// R = IDFT[|X|^2] / (M*N), real part.
inline Mat autocorr_unnormalized(const Mat& img) {
    std::vector<std::complex<double>> buf(img.v.begin(), img.v.end());
    fft::fft2_inplace(buf, img.rows, img.cols);
    for (auto& z : buf) z = std::complex<double>(std::norm(z), 0.0);
    fft::ifft2_inplace(buf, img.rows, img.cols);
    Mat r(img.rows, img.cols);
    const double inv = 1.0 / (static_cast<double>(img.rows) * img.cols);
    for (std::size_t i = 0; i < buf.size(); ++i) r.v[i] = buf[i].real() * inv;
    return r;
}

}  // namespace detail

// Circular autocorrelation with zero lag at (0,0), normalized by R(0,0) when
// that value is meaningful; otherwise returned unnormalized (degenerate).
inline SpectralMap autocorrelation(const Mat& img) {
    SpectralMap out;
    out.kind = MapKind::autocorr;
    out.m = detail::autocorr_unnormalized(img);
    const double zero_lag = out.m.v.empty() ? 0.0 : out.m.v[0];
    if (zero_lag >= kDegenerateZeroLag) {
        for (double& x : out.m.v) x /= zero_lag;
        out.normalized = true;
    }
    return out;
}

// Per-item transforms feeding the dataset averages. Kept as a separate value
// type so batch pipelines compute items in parallel and fold in order.
struct ItemSpectra {
    Mat power;          // |X|^2
    Mat phase;          // wrapped phase, empty unless requested
    Mat autocorr;       // unnormalized R, empty unless requested
};

inline ItemSpectra compute_item_spectra(const Mat& item, bool want_phase, bool want_autocorr) {
    ItemSpectra out;
    const ComplexSpectrum spec = dft2(item);
    out.power = power_spectrum(spec).m;
    if (want_phase) out.phase = phase_spectrum(spec).m;
    if (want_autocorr) out.autocorr = detail::autocorr_unnormalized(item);
    return out;
}

// Ordered accumulator for the dataset-level averages: power as the plain
// per-bin mean of |X_i|^2, autocorrelation averaged unnormalized then divided
// by its averaged zero lag, phase as the per-bin circular mean.
class SpectraAccumulator {
public:
    SpectraAccumulator(bool want_phase, bool want_autocorr)
        : want_phase_(want_phase), want_autocorr_(want_autocorr) {}

    void add(const ItemSpectra& s) {
        if (count_ == 0) {
            rows_ = s.power.rows;
            cols_ = s.power.cols;
            power_sum_ = Mat(rows_, cols_);
            if (want_phase_) {
                cos_sum_ = Mat(rows_, cols_);
                sin_sum_ = Mat(rows_, cols_);
            }
            if (want_autocorr_) acorr_sum_ = Mat(rows_, cols_);
        } else if (s.power.rows != rows_ || s.power.cols != cols_) {
            throw ShapeMismatch("item " + std::to_string(count_) + " is " +
                                std::to_string(s.power.rows) + "x" + std::to_string(s.power.cols) +
                                ", expected " + std::to_string(rows_) + "x" +
                                std::to_string(cols_));
        }
        for (std::size_t i = 0; i < power_sum_.v.size(); ++i) power_sum_.v[i] += s.power.v[i];
        if (want_phase_)
            for (std::size_t i = 0; i < cos_sum_.v.size(); ++i) {
                cos_sum_.v[i] += std::cos(s.phase.v[i]);
                sin_sum_.v[i] += std::sin(s.phase.v[i]);
            }
        if (want_autocorr_)
            for (std::size_t i = 0; i < acorr_sum_.v.size(); ++i) acorr_sum_.v[i] += s.autocorr.v[i];
        ++count_;
    }

    long count() const { return count_; }

    SpectralMap mean_power() const {
        require_items();
        SpectralMap out;
        out.kind = MapKind::power;
        out.m = power_sum_;
        const double inv = 1.0 / static_cast<double>(count_);
        for (double& x : out.m.v) x *= inv;
        return out;
    }

    SpectralMap mean_phase() const {
        require_items();
        SpectralMap out;
        out.kind = MapKind::phase;
        out.m = Mat(rows_, cols_);
        for (std::size_t i = 0; i < out.m.v.size(); ++i) {
            const double c = cos_sum_.v[i], s = sin_sum_.v[i];
            out.m.v[i] = std::hypot(c, s) < kNullMagnitude ? 0.0
                                                           : detail::wrap_phase(std::atan2(s, c));
        }
        return out;
    }

    SpectralMap mean_autocorr() const {
        require_items();
        SpectralMap out;
        out.kind = MapKind::autocorr;
        out.m = acorr_sum_;
        const double inv = 1.0 / static_cast<double>(count_);
        for (double& x : out.m.v) x *= inv;
        const double zero_lag = out.m.v[0];
        if (zero_lag >= kDegenerateZeroLag) {
            for (double& x : out.m.v) x /= zero_lag;
            out.normalized = true;
        }
        return out;
    }

private:
    void require_items() const {
        if (count_ == 0) throw EmptyInput("no items accumulated");
    }

    bool want_phase_;
    bool want_autocorr_;
    int rows_ = 0, cols_ = 0;
    long count_ = 0;
    Mat power_sum_, cos_sum_, sin_sum_, acorr_sum_;
};

// Dataset mean of |X_i|^2, folded in list order.
inline SpectralMap mean_power_spectrum(std::span<const Mat> residuals) {
    if (residuals.empty()) throw EmptyInput("mean_power_spectrum over zero residuals");
    SpectraAccumulator acc(false, false);
    for (const Mat& r : residuals) acc.add(compute_item_spectra(r, false, false));
    return acc.mean_power();
}

// Dataset mean of unnormalized autocorrelations, normalized by the averaged
// zero-lag value, folded in list order.
inline SpectralMap mean_autocorrelation(std::span<const Mat> items) {
    if (items.empty()) throw EmptyInput("mean_autocorrelation over zero items");
    SpectraAccumulator acc(false, true);
    for (const Mat& r : items) acc.add(compute_item_spectra(r, false, true));
    return acc.mean_autocorr();
}

// Per-bin circular mean of phase maps.
inline SpectralMap mean_phase_spectrum(std::span<const Mat> phase_maps) {
    if (phase_maps.empty()) throw EmptyInput("mean_phase_spectrum over zero maps");
    SpectraAccumulator acc(true, false);
    for (const Mat& p : phase_maps) {
        ItemSpectra s;
        s.power = Mat(p.rows, p.cols);
        s.phase = p;
        acc.add(s);
    }
    return acc.mean_phase();
}

// Quadrant swap moving (0,0) to (rows/2, cols/2); self-inverse on even sizes.
inline SpectralMap center_shift(const SpectralMap& map) {
    if (map.centered) throw AlreadyCentered("map is already centered");
    SpectralMap out = map;
    out.centered = true;
    const int sr = map.rows() / 2, sc = map.cols() / 2;
    for (int r = 0; r < map.rows(); ++r) {
        const int src_r = (r - sr + map.rows()) % map.rows();
        for (int c = 0; c < map.cols(); ++c) {
            const int src_c = (c - sc + map.cols()) % map.cols();
            out.m.at(r, c) = map.m.at(src_r, src_c);
        }
    }
    return out;
}

// Odd side x side window centered on the zero-lag/DC cell.
inline SpectralMap central_crop(const SpectralMap& map, int side) {
    if (!map.centered) throw std::invalid_argument("central_crop needs a centered map");
    if (side < 1 || side % 2 == 0)
        throw BadSide("side must be odd and positive, got " + std::to_string(side));
    if (side > std::min(map.rows(), map.cols()))
        throw BadSide("side " + std::to_string(side) + " exceeds map extent");
    const int cr = map.rows() / 2, cc = map.cols() / 2;
    const int half = side / 2;
    if (cr - half < 0 || cc - half < 0 || cr + half >= map.rows() || cc + half >= map.cols())
        throw BadSide("crop window falls outside the map");

    SpectralMap out;
    out.kind = map.kind;
    out.centered = true;
    out.normalized = map.normalized;
    out.m = Mat(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) out.m.at(r, c) = map.m.at(cr - half + r, cc - half + c);
    return out;
}

// log(1+v) then min-max to [0,1]; constant maps flatten to zero.
inline SpectralMap log_normalize(const SpectralMap& map) {
    if (map.kind != MapKind::power)
        throw std::invalid_argument("log_normalize expects a power map");
    SpectralMap out;
    out.kind = MapKind::generic;
    out.centered = map.centered;
    out.m = Mat(map.rows(), map.cols());
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < map.m.v.size(); ++i) {
        const double x = std::log1p(map.m.v[i]);
        out.m.v[i] = x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (!(hi > lo)) {
        for (double& x : out.m.v) x = 0.0;
        return out;
    }
    const double inv = 1.0 / (hi - lo);
    for (double& x : out.m.v) x = (x - lo) * inv;
    return out;
}

}  // namespace specprint
