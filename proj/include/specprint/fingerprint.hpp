#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "specprint/spectral.hpp"

namespace specprint {

// Derived scalar statistics of one set's averaged maps. All fractions live in
// [0,1]; zero_lag_checkerboard is the half-difference score in [-1,1].
struct FingerprintSummary {
    std::string label;
    double cross_pattern_strength = 0.0;
    double mid_freq_intensity = 0.0;
    double axis_asymmetry = 0.0;
    double phase_coherence = 0.0;
    double phase_transition_rate = 0.0;
    double phase_entropy = 0.0;
    double zero_lag_checkerboard = 0.0;
};

struct ComparisonReport {
    std::string reference;
    std::string candidate;
    // per-statistic relative similarities, percent
    double cross_pattern_strength = 0.0;
    double mid_freq_intensity = 0.0;
    double axis_asymmetry = 0.0;
    double phase_coherence = 0.0;
    double phase_transition_rate = 0.0;
    double phase_entropy = 0.0;
    double zero_lag_checkerboard = 0.0;
    // map-level similarities, percent
    double spectrum_similarity = 0.0;
    double phase_similarity = 0.0;
};

namespace detail {

inline void require_centered_power(const SpectralMap& s, const char* who) {
    if (s.kind != MapKind::power) throw std::invalid_argument(std::string(who) + ": not a power map");
    if (!s.centered) throw std::invalid_argument(std::string(who) + ": map not centered");
}

}  // namespace detail

// Fraction of non-DC energy concentrated on the central row and column.
inline double cross_pattern_strength(const SpectralMap& s) {
    detail::require_centered_power(s, "cross_pattern_strength");
    if (s.rows() < 3 || s.cols() < 3)
        throw TooSmall("cross_pattern_strength needs at least 3x3");
    const int cr = s.rows() / 2, cc = s.cols() / 2;
    double axis = 0.0, total = 0.0;
    for (int r = 0; r < s.rows(); ++r)
        for (int c = 0; c < s.cols(); ++c) {
            if (r == cr && c == cc) continue;
            total += s.at(r, c);
            if (r == cr || c == cc) axis += s.at(r, c);
        }
    return total > 0.0 ? axis / total : 0.0;
}

// Mean log-normalized power over the annulus 0.25*r_max <= r <= 0.5*r_max.
inline double mid_freq_intensity(const SpectralMap& s) {
    detail::require_centered_power(s, "mid_freq_intensity");
    const SpectralMap norm = log_normalize(s);
    const int cr = s.rows() / 2, cc = s.cols() / 2;
    const double r_max = std::min(s.rows(), s.cols()) / 2.0;
    const double lo = 0.25 * r_max, hi = 0.5 * r_max;
    double sum = 0.0;
    long n = 0;
    for (int r = 0; r < s.rows(); ++r)
        for (int c = 0; c < s.cols(); ++c) {
            const double d = std::hypot(static_cast<double>(r - cr), static_cast<double>(c - cc));
            if (d >= lo && d <= hi) {
                sum += norm.at(r, c);
                ++n;
            }
        }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

// |E_h - E_v| / (E_h + E_v) over the central row/column, DC excluded.
inline double axis_asymmetry(const SpectralMap& s) {
    detail::require_centered_power(s, "axis_asymmetry");
    const int cr = s.rows() / 2, cc = s.cols() / 2;
    double eh = 0.0, ev = 0.0;
    for (int c = 0; c < s.cols(); ++c)
        if (c != cc) eh += s.at(cr, c);
    for (int r = 0; r < s.rows(); ++r)
        if (r != cr) ev += s.at(r, cc);
    const double denom = eh + ev;
    return denom > 0.0 ? std::abs(eh - ev) / denom : 0.0;
}

// Mean resultant length of e^{i*phi} over 3x3 neighborhoods, interior cells.
inline double phase_coherence(const SpectralMap& p) {
    if (p.kind != MapKind::phase) throw std::invalid_argument("phase_coherence: not a phase map");
    if (p.rows() < 3 || p.cols() < 3) throw TooSmall("phase_coherence needs at least 3x3");
    double sum = 0.0;
    long n = 0;
    for (int r = 1; r + 1 < p.rows(); ++r)
        for (int c = 1; c + 1 < p.cols(); ++c) {
            double re = 0.0, im = 0.0;
            for (int i = -1; i <= 1; ++i)
                for (int j = -1; j <= 1; ++j) {
                    const double phi = p.at(r + i, c + j);
                    re += std::cos(phi);
                    im += std::sin(phi);
                }
            sum += std::hypot(re, im) / 9.0;
            ++n;
        }
    return sum / static_cast<double>(n);
}

// Mean |wrapped phase step| / pi over horizontal and vertical neighbor pairs.
inline double phase_transition_rate(const SpectralMap& p) {
    if (p.kind != MapKind::phase)
        throw std::invalid_argument("phase_transition_rate: not a phase map");
    double sum = 0.0;
    long n = 0;
    for (int r = 0; r < p.rows(); ++r)
        for (int c = 0; c + 1 < p.cols(); ++c) {
            sum += std::abs(std::remainder(p.at(r, c + 1) - p.at(r, c), 2.0 * kPi)) / kPi;
            ++n;
        }
    for (int r = 0; r + 1 < p.rows(); ++r)
        for (int c = 0; c < p.cols(); ++c) {
            sum += std::abs(std::remainder(p.at(r + 1, c) - p.at(r, c), 2.0 * kPi)) / kPi;
            ++n;
        }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

// Shannon entropy of the 64-bin phase histogram, normalized by log(64).
inline double phase_entropy(const SpectralMap& p) {
    if (p.kind != MapKind::phase) throw std::invalid_argument("phase_entropy: not a phase map");
    constexpr int kBins = 64;
    double hist[kBins] = {};
    for (double phi : p.m.v) {
        int bin = static_cast<int>(std::floor((phi + kPi) / (2.0 * kPi) * kBins));
        bin = std::min(std::max(bin, 0), kBins - 1);
        hist[bin] += 1.0;
    }
    const double n = static_cast<double>(p.m.v.size());
    double h = 0.0;
    for (double cnt : hist) {
        if (cnt <= 0.0) continue;
        const double q = cnt / n;
        h -= q * std::log(q);
    }
    return h / std::log(static_cast<double>(kBins));
}

// 100 * (1 + mean cos(wrapped difference)) / 2.
inline double phase_structural_similarity(const SpectralMap& a, const SpectralMap& b) {
    require_same_shape(a.m, b.m);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.m.v.size(); ++i)
        sum += std::cos(std::remainder(a.m.v[i] - b.m.v[i], 2.0 * kPi));
    return 100.0 * (1.0 + sum / static_cast<double>(a.m.v.size())) / 2.0;
}

// 100 * (1 - MSE of the log-normalized maps), clamped to [0,100].
inline double spectrum_similarity(const SpectralMap& a, const SpectralMap& b) {
    require_same_shape(a.m, b.m);
    const SpectralMap na = log_normalize(a);
    const SpectralMap nb = log_normalize(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < na.m.v.size(); ++i) {
        const double d = na.m.v[i] - nb.m.v[i];
        sum += d * d;
    }
    const double mse = sum / static_cast<double>(na.m.v.size());
    return std::clamp(100.0 * (1.0 - mse), 0.0, 100.0);
}

// Diagonal-minus-axial contrast around the zero lag: positive means the
// (+1,+1)-type lags dominate, the checkerboard signature.
inline double zero_lag_checkerboard(const SpectralMap& r) {
    if (r.kind != MapKind::autocorr)
        throw std::invalid_argument("zero_lag_checkerboard: not an autocorr map");
    if (!r.centered) throw std::invalid_argument("zero_lag_checkerboard: map not centered");
    if (!r.normalized) throw DegenerateAutocorr("autocorrelation is degenerate/unnormalized");
    if (r.rows() < 5 || r.cols() < 5) throw TooSmall("zero_lag_checkerboard needs at least 5x5");
    const int cr = r.rows() / 2, cc = r.cols() / 2;
    const double diag = (r.at(cr - 1, cc - 1) + r.at(cr - 1, cc + 1) + r.at(cr + 1, cc - 1) +
                         r.at(cr + 1, cc + 1)) /
                        4.0;
    const double axial =
        (r.at(cr - 1, cc) + r.at(cr + 1, cc) + r.at(cr, cc - 1) + r.at(cr, cc + 1)) / 4.0;
    return diag - axial;
}

// Bundle the statistics for one set. The checkerboard score is halved into
// [-1,1] for the summary field; a degenerate autocorrelation scores 0.
inline FingerprintSummary summarize(const SpectralMap& power, const SpectralMap& phase,
                                    const SpectralMap& autocorr, const std::string& label) {
    FingerprintSummary f;
    f.label = label;
    f.cross_pattern_strength = cross_pattern_strength(power);
    f.mid_freq_intensity = mid_freq_intensity(power);
    f.axis_asymmetry = axis_asymmetry(power);
    f.phase_coherence = phase_coherence(phase);
    f.phase_transition_rate = phase_transition_rate(phase);
    f.phase_entropy = phase_entropy(phase);
    f.zero_lag_checkerboard = autocorr.normalized ? zero_lag_checkerboard(autocorr) / 2.0 : 0.0;
    return f;
}

namespace detail {

inline double relative_similarity(double a, double b) {
    const double denom = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::clamp(100.0 * (1.0 - std::abs(a - b) / denom), 0.0, 100.0);
}

}  // namespace detail

inline ComparisonReport compare(const FingerprintSummary& ref, const SpectralMap& ref_power,
                                const SpectralMap& ref_phase, const FingerprintSummary& cand,
                                const SpectralMap& cand_power, const SpectralMap& cand_phase) {
    ComparisonReport r;
    r.reference = ref.label;
    r.candidate = cand.label;
    r.cross_pattern_strength =
        detail::relative_similarity(ref.cross_pattern_strength, cand.cross_pattern_strength);
    r.mid_freq_intensity =
        detail::relative_similarity(ref.mid_freq_intensity, cand.mid_freq_intensity);
    r.axis_asymmetry = detail::relative_similarity(ref.axis_asymmetry, cand.axis_asymmetry);
    r.phase_coherence = detail::relative_similarity(ref.phase_coherence, cand.phase_coherence);
    r.phase_transition_rate =
        detail::relative_similarity(ref.phase_transition_rate, cand.phase_transition_rate);
    r.phase_entropy = detail::relative_similarity(ref.phase_entropy, cand.phase_entropy);
    r.zero_lag_checkerboard =
        detail::relative_similarity(ref.zero_lag_checkerboard, cand.zero_lag_checkerboard);
    r.spectrum_similarity = spectrum_similarity(ref_power, cand_power);
    r.phase_similarity = phase_structural_similarity(ref_phase, cand_phase);
    return r;
}

}  // namespace specprint
