#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specprint/fingerprint.hpp"
#include "specprint/image_io.hpp"
#include "specprint/json_writer.hpp"
#include "specprint/manifest.hpp"
#include "specprint/metrics.hpp"
#include "specprint/spectral.hpp"

namespace specprint {

namespace detail {

inline void put_le64(std::string& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out += static_cast<char>((bits >> (8 * i)) & 0xFF);
}

inline double get_le64(const char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace detail

// MAT1: ASCII header "MAT1 <rows> <cols>\n", then rows*cols little-endian
// binary64 values, row-major. Kind/centered/normalized flags live in a
// sidecar "<path>.meta.json".
inline void write_matrix(const SpectralMap& map, const std::string& path) {
    std::string blob = "MAT1 " + std::to_string(map.rows()) + " " + std::to_string(map.cols()) + "\n";
    blob.reserve(blob.size() + map.m.v.size() * 8);
    for (double v : map.m.v) detail::put_le64(blob, v);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw IoError("write failed for " + path);
    out.close();

    JsonWriter w;
    w.begin_object();
    w.key("kind").value(map_kind_name(map.kind));
    w.key("centered").value(map.centered);
    w.key("normalized").value(map.normalized);
    w.end_object();
    std::ofstream meta(path + ".meta.json", std::ios::binary);
    if (!meta) throw IoError("cannot create " + path + ".meta.json");
    meta << w.str() << '\n';
    if (!meta) throw IoError("write failed for " + path + ".meta.json");
}

inline SpectralMap read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    const auto nl = blob.find('\n');
    if (nl == std::string::npos) throw FormatError(path + ": missing MAT1 header");
    std::istringstream header(blob.substr(0, nl));
    std::string magic, extra;
    long rows = 0, cols = 0;
    header >> magic >> rows >> cols;
    if (magic != "MAT1" || header.fail() || (header >> extra))
        throw FormatError(path + ": bad MAT1 header");
    if (rows < 1 || cols < 1) throw FormatError(path + ": bad dimensions");

    const std::size_t body = blob.size() - nl - 1;
    const std::size_t expect = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * 8;
    if (body != expect)
        throw FormatError(path + ": body is " + std::to_string(body) + " bytes, expected " +
                          std::to_string(expect));

    SpectralMap map;
    map.m = Mat(static_cast<int>(rows), static_cast<int>(cols));
    const char* p = blob.data() + nl + 1;
    for (std::size_t i = 0; i < map.m.v.size(); ++i) map.m.v[i] = detail::get_le64(p + i * 8);

    const std::string meta_path = path + ".meta.json";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream meta(meta_path, std::ios::binary);
        nlohmann::json j;
        try {
            meta >> j;
            map.kind = map_kind_from_name(j.at("kind").get<std::string>());
            map.centered = j.at("centered").get<bool>();
            map.normalized = j.at("normalized").get<bool>();
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(meta_path + ": " + e.what());
        }
    }
    return map;
}

// Min-max normalized 8-bit grayscale heatmap; constant maps render black.
inline void heatmap_png(const SpectralMap& map, const std::string& path) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : map.m.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<std::uint8_t> gray(map.m.v.size(), 0);
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < map.m.v.size(); ++i) {
            const double norm = (map.m.v[i] - lo) * inv;
            const double q = std::floor(norm * 255.0 + 0.5);
            gray[i] = static_cast<std::uint8_t>(std::clamp(q, 0.0, 255.0));
        }
    }
    write_png_gray8(path, map.cols(), map.rows(), gray);
}

// --- report JSON -----------------------------------------------------------

// Analysis parameters echoed into reports. Thread count is deliberately not
// part of this: outputs must be byte-identical across worker counts.
struct ReportConfig {
    std::string command;
    int analysis_size = 256;
    std::string denoiser;
    int crop = 65;
    std::string source;          // "residual" | "raw"
    std::string set_selection;   // "real" | "fake" | "both" | "single"
};

namespace detail {

inline void emit_manifest(JsonWriter& w, const DatasetManifest& m) {
    w.begin_object();
    w.key("analysis_size").value(m.analysis_size);
    w.key("entries").begin_array();
    for (const auto& e : m.entries) {
        w.begin_object();
        w.key("path").value(e.path);
        w.key("set").value(set_label_name(e.set));
        w.key("generator").value(e.generator);
        w.key("noise_level");
        if (e.noise_level)
            w.value(*e.noise_level);
        else
            w.value_null();
        w.key("stem").value(e.stem);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

inline void emit_metric_record(JsonWriter& w, const MetricRecord& r) {
    w.begin_object();
    w.key("stem").value(r.stem);
    w.key("mse").value(r.mse);
    w.key("psnr").value(r.psnr);
    w.key("ssim").value(r.ssim);
    w.key("hist_corr").value(r.hist_corr);
    w.end_object();
}

inline void emit_aggregate(JsonWriter& w, const AggregateStats& a) {
    w.begin_object();
    w.key("metric").value(a.metric);
    w.key("mean").value(a.mean);
    w.key("std").value(a.std_dev);
    w.key("count").value(a.count);
    w.key("excluded").value(a.excluded);
    w.end_object();
}

inline void emit_fingerprint(JsonWriter& w, const FingerprintSummary& f) {
    w.begin_object();
    w.key("label").value(f.label);
    w.key("cross_pattern_strength").value(f.cross_pattern_strength);
    w.key("mid_freq_intensity").value(f.mid_freq_intensity);
    w.key("axis_asymmetry").value(f.axis_asymmetry);
    w.key("phase_coherence").value(f.phase_coherence);
    w.key("phase_transition_rate").value(f.phase_transition_rate);
    w.key("phase_entropy").value(f.phase_entropy);
    w.key("zero_lag_checkerboard").value(f.zero_lag_checkerboard);
    w.end_object();
}

inline void emit_comparison(JsonWriter& w, const ComparisonReport& c) {
    w.begin_object();
    w.key("reference").value(c.reference);
    w.key("candidate").value(c.candidate);
    w.key("cross_pattern_strength").value(c.cross_pattern_strength);
    w.key("mid_freq_intensity").value(c.mid_freq_intensity);
    w.key("axis_asymmetry").value(c.axis_asymmetry);
    w.key("phase_coherence").value(c.phase_coherence);
    w.key("phase_transition_rate").value(c.phase_transition_rate);
    w.key("phase_entropy").value(c.phase_entropy);
    w.key("zero_lag_checkerboard").value(c.zero_lag_checkerboard);
    w.key("spectrum_similarity").value(c.spectrum_similarity);
    w.key("phase_similarity").value(c.phase_similarity);
    w.end_object();
}

inline void emit_config(JsonWriter& w, const ReportConfig& c) {
    w.begin_object();
    w.key("command").value(c.command);
    w.key("analysis_size").value(c.analysis_size);
    w.key("denoiser").value(c.denoiser);
    w.key("crop").value(c.crop);
    w.key("source").value(c.source);
    w.key("set").value(c.set_selection);
    w.end_object();
}

}  // namespace detail

inline std::string report_to_json(const DatasetManifest* manifest,
                                  const std::vector<MetricRecord>& metrics,
                                  const std::vector<AggregateStats>& aggregates,
                                  const std::vector<FingerprintSummary>& fingerprints,
                                  const std::vector<ComparisonReport>& comparisons,
                                  const ReportConfig& config) {
    JsonWriter w;
    w.begin_object();
    w.key("manifest");
    if (manifest)
        detail::emit_manifest(w, *manifest);
    else
        w.value_null();
    w.key("metrics").begin_array();
    for (const auto& r : metrics) detail::emit_metric_record(w, r);
    w.end_array();
    w.key("aggregates").begin_array();
    for (const auto& a : aggregates) detail::emit_aggregate(w, a);
    w.end_array();
    w.key("fingerprints").begin_array();
    for (const auto& f : fingerprints) detail::emit_fingerprint(w, f);
    w.end_array();
    w.key("comparisons").begin_array();
    for (const auto& c : comparisons) detail::emit_comparison(w, c);
    w.end_array();
    w.key("config");
    detail::emit_config(w, config);
    w.end_object();
    return w.str();
}

inline void write_report(const DatasetManifest* manifest, const std::vector<MetricRecord>& metrics,
                         const std::vector<AggregateStats>& aggregates,
                         const std::vector<FingerprintSummary>& fingerprints,
                         const std::vector<ComparisonReport>& comparisons,
                         const ReportConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out << report_to_json(manifest, metrics, aggregates, fingerprints, comparisons, config) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

// --- metrics CSV -----------------------------------------------------------

inline std::string metrics_to_csv(const std::vector<MetricRecord>& records) {
    std::string out = "stem,mse,psnr,ssim,hist_corr\n";
    for (const auto& r : records) {
        out += r.stem;
        out += ',';
        out += JsonWriter::format_double(r.mse);
        out += ',';
        out += std::isinf(r.psnr) ? std::string("inf") : JsonWriter::format_double(r.psnr);
        out += ',';
        out += JsonWriter::format_double(r.ssim);
        out += ',';
        out += JsonWriter::format_double(r.hist_corr);
        out += '\n';
    }
    return out;
}

inline void write_metrics_csv(const std::vector<MetricRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out << metrics_to_csv(records);
    if (!out) throw IoError("write failed for " + path);
}

inline void write_aggregates_json(const std::vector<AggregateStats>& aggregates,
                                  const std::string& path) {
    JsonWriter w;
    w.begin_object();
    for (const auto& a : aggregates) {
        w.key(a.metric).begin_object();
        if (a.count == 0) {
            w.key("mean").value_null();
            w.key("std").value_null();
        } else {
            w.key("mean").value(a.mean);
            w.key("std").value(a.std_dev);
        }
        w.key("count").value(a.count);
        w.key("excluded").value(a.excluded);
        w.end_object();
    }
    w.end_object();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out << w.str() << '\n';
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace specprint
