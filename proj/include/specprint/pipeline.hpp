#pragma once

#include <string>
#include <vector>

#include "specprint/image.hpp"
#include "specprint/image_io.hpp"
#include "specprint/manifest.hpp"
#include "specprint/metrics.hpp"
#include "specprint/parallel.hpp"
#include "specprint/residual.hpp"
#include "specprint/spectral.hpp"

namespace specprint {

enum class AnalysisSource { residual, raw };

inline const char* analysis_source_name(AnalysisSource s) {
    return s == AnalysisSource::residual ? "residual" : "raw";
}

struct RunConfig {
    int analysis_size = 256;
    DenoiserSpec denoiser = DenoiserSpec::gaussian(1.0);
    int crop = 65;
    int threads = default_threads();
    AnalysisSource source = AnalysisSource::residual;
};

inline GrayImage load_standardized(const std::string& path, int analysis_size) {
    return standardize(to_gray(decode_image(path)), analysis_size);
}

inline Mat analysis_item(const GrayImage& img, const RunConfig& cfg) {
    return cfg.source == AnalysisSource::residual ? residual(img, cfg.denoiser) : img;
}

// Averaged, display-ready maps for one image set: centered power and phase at
// analysis size, centered autocorrelation cropped to cfg.crop.
struct SetMaps {
    SpectralMap power;
    SpectralMap phase;
    SpectralMap autocorr;
};

// Decode, standardize and transform every entry, folding the averages in
// manifest order. Items are computed by a worker pool batch by batch; the
// fold itself is sequential so results do not depend on the thread count.
inline SetMaps compute_set_maps(const std::vector<const ManifestEntry*>& entries,
                                const RunConfig& cfg, bool want_phase, bool want_autocorr) {
    if (entries.empty()) throw EmptyInput("image set is empty");

    SpectraAccumulator acc(want_phase, want_autocorr);
    const long n = static_cast<long>(entries.size());
    const long batch = std::max<long>(16, 2L * cfg.threads);
    std::vector<ItemSpectra> slots;

    for (long start = 0; start < n; start += batch) {
        const long stop = std::min(n, start + batch);
        slots.assign(static_cast<std::size_t>(stop - start), ItemSpectra{});
        parallel_for(stop - start, cfg.threads, [&](long j) {
            const GrayImage img = load_standardized(entries[start + j]->path, cfg.analysis_size);
            slots[j] = compute_item_spectra(analysis_item(img, cfg), want_phase, want_autocorr);
        });
        for (auto& s : slots) acc.add(s);
    }

    SetMaps maps;
    maps.power = center_shift(acc.mean_power());
    if (want_phase) maps.phase = center_shift(acc.mean_phase());
    if (want_autocorr) maps.autocorr = central_crop(center_shift(acc.mean_autocorr()), cfg.crop);
    return maps;
}

// Pairwise metric records in stem order.
inline std::vector<MetricRecord> compute_pair_metrics(const PairList& pairs, int analysis_size,
                                                      int threads) {
    std::vector<MetricRecord> records(pairs.pairs.size());
    parallel_for(static_cast<long>(pairs.pairs.size()), threads, [&](long i) {
        const auto& [re, ge] = pairs.pairs[static_cast<std::size_t>(i)];
        const GrayImage a = load_standardized(re->path, analysis_size);
        const GrayImage b = load_standardized(ge->path, analysis_size);
        MetricRecord rec;
        rec.stem = re->stem;
        rec.mse = mse(a, b);
        rec.psnr = psnr(a, b);
        rec.ssim = ssim(a, b);
        rec.hist_corr = hist_correlation(a, b);
        records[static_cast<std::size_t>(i)] = std::move(rec);
    });
    return records;
}

}  // namespace specprint
