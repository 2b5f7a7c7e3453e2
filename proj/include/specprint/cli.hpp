#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specprint/pipeline.hpp"
#include "specprint/render.hpp"

namespace specprint::cli {

namespace detail {

inline void print_status(bool ok, const std::vector<std::string>& outputs) {
    JsonWriter w;
    w.begin_object();
    w.key("ok").value(ok);
    w.key("outputs").begin_array();
    for (const auto& o : outputs) w.value(o);
    w.end_array();
    w.end_object();
    std::cout << w.str() << std::endl;
}

inline void print_status(const std::vector<std::string>& outputs) { print_status(true, outputs); }

inline const CLI::Validator odd_positive{[](std::string& input) -> std::string {
                                             try {
                                                 const long v = std::stol(input);
                                                 if (v < 1 || v % 2 == 0)
                                                     return "must be odd and positive";
                                             } catch (...) {
                                                 return "not an integer";
                                             }
                                             return {};
                                         },
                                         "ODD"};

inline const CLI::Validator noise_level{[](std::string& input) -> std::string {
                                            try {
                                                const double v = std::stod(input);
                                                if (v == 0.0 || v == 0.25 || v == 0.5 || v == 0.75)
                                                    return {};
                                            } catch (...) {
                                            }
                                            return "must be one of 0.0, 0.25, 0.5, 0.75";
                                        },
                                        "NOISE"};

inline const CLI::Validator denoiser_spec{[](std::string& input) -> std::string {
                                              try {
                                                  DenoiserSpec::parse(input);
                                              } catch (const std::exception& e) {
                                                  return e.what();
                                              }
                                              return {};
                                          },
                                          "DENOISER"};

struct SelectedSets {
    std::vector<std::pair<std::string, SetLabel>> sets;  // (file token, manifest label)
};

inline SelectedSets select_sets(const std::string& which) {
    SelectedSets s;
    if (which == "real" || which == "both") s.sets.emplace_back("real", SetLabel::real);
    if (which == "fake" || which == "both") s.sets.emplace_back("fake", SetLabel::generated);
    return s;
}

inline void ensure_parent_dir(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (parent.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

inline void write_map_pair(const SpectralMap& map, const std::string& base, bool log_norm,
                           std::vector<std::string>& outputs) {
    ensure_parent_dir(base);
    write_matrix(map, base + ".mat");
    heatmap_png(log_norm ? log_normalize(map) : map, base + ".png");
    outputs.push_back(base + ".mat");
    outputs.push_back(base + ".png");
}

}  // namespace detail

struct CommonOpts {
    std::string manifest;
    std::string denoiser = "gaussian:1";
    std::string source = "residual";
    int crop = 65;
    int threads = default_threads();

    RunConfig to_config(int analysis_size) const {
        RunConfig cfg;
        cfg.analysis_size = analysis_size;
        cfg.denoiser = DenoiserSpec::parse(denoiser);
        cfg.crop = crop;
        cfg.threads = threads;
        cfg.source = source == "raw" ? AnalysisSource::raw : AnalysisSource::residual;
        return cfg;
    }
};

inline int cmd_ingest(const std::string& real_dir, const std::string& fake_dir,
                      const std::string& generator, std::optional<double> noise,
                      int analysis_size, const std::string& out) {
    const DatasetManifest m = build_manifest(real_dir, fake_dir, generator, noise, analysis_size);
    detail::ensure_parent_dir(out);
    write_manifest(m, out);
    detail::print_status({out});
    return 0;
}

inline int cmd_metrics(const CommonOpts& opts, const std::string& out) {
    const DatasetManifest m = load_manifest(opts.manifest);
    const PairList pairs = pair_images(m);
    if (!pairs.unmatched_real.empty() || !pairs.unmatched_generated.empty())
        std::cerr << "unmatched stems: " << pairs.unmatched_real.size() << " real, "
                  << pairs.unmatched_generated.size() << " generated\n";
    const std::vector<MetricRecord> records =
        compute_pair_metrics(pairs, m.analysis_size, opts.threads);

    detail::ensure_parent_dir(out);
    write_metrics_csv(records, out);
    std::vector<AggregateStats> aggs;
    for (const char* name : {"mse", "psnr", "ssim", "hist_corr"}) {
        try {
            aggs.push_back(aggregate(records, name));
        } catch (const EmptyInput&) {
            // every value was infinite (identical pairs); keep the schema stable
            AggregateStats st;
            st.metric = name;
            st.excluded = static_cast<long>(records.size());
            aggs.push_back(st);
        }
    }
    write_aggregates_json(aggs, out + ".agg.json");
    detail::print_status({out, out + ".agg.json"});
    return 0;
}

inline int cmd_spectrum(const CommonOpts& opts, const std::string& which,
                        const std::string& single_path, int single_analysis_size,
                        const std::string& prefix) {
    std::vector<std::string> outputs;
    if (!single_path.empty()) {
        const RunConfig cfg = opts.to_config(single_analysis_size);
        const GrayImage img = load_standardized(single_path, cfg.analysis_size);
        const ComplexSpectrum spec = dft2(analysis_item(img, cfg));
        detail::write_map_pair(center_shift(power_spectrum(spec)), prefix + ".single.power", true,
                               outputs);
        detail::write_map_pair(center_shift(phase_spectrum(spec)), prefix + ".single.phase", false,
                               outputs);
        detail::print_status(outputs);
        return 0;
    }

    const DatasetManifest m = load_manifest(opts.manifest);
    const RunConfig cfg = opts.to_config(m.analysis_size);
    for (const auto& [token, label] : detail::select_sets(which).sets) {
        const SetMaps maps = compute_set_maps(m.set_entries(label), cfg, true, false);
        detail::write_map_pair(maps.power, prefix + "." + token + ".power", true, outputs);
        detail::write_map_pair(maps.phase, prefix + "." + token + ".phase", false, outputs);
    }
    detail::print_status(outputs);
    return 0;
}

inline int cmd_autocorr(const CommonOpts& opts, const std::string& which,
                        const std::string& prefix) {
    const DatasetManifest m = load_manifest(opts.manifest);
    if (opts.crop > m.analysis_size) {
        std::cerr << "--crop " << opts.crop << " exceeds the manifest analysis size "
                  << m.analysis_size << "\n";
        return 2;
    }
    const RunConfig cfg = opts.to_config(m.analysis_size);
    std::vector<std::string> outputs;
    for (const auto& [token, label] : detail::select_sets(which).sets) {
        const SetMaps maps = compute_set_maps(m.set_entries(label), cfg, false, true);
        detail::write_map_pair(maps.autocorr, prefix + "." + token + ".autocorr", false, outputs);
    }
    detail::print_status(outputs);
    return 0;
}

inline int cmd_fingerprint(const CommonOpts& opts, const std::string& out) {
    const DatasetManifest m = load_manifest(opts.manifest);
    if (opts.crop > m.analysis_size) {
        std::cerr << "--crop " << opts.crop << " exceeds the manifest analysis size "
                  << m.analysis_size << "\n";
        return 2;
    }
    const RunConfig cfg = opts.to_config(m.analysis_size);

    const SetMaps real_maps = compute_set_maps(m.set_entries(SetLabel::real), cfg, true, true);
    const SetMaps gen_maps = compute_set_maps(m.set_entries(SetLabel::generated), cfg, true, true);
    const FingerprintSummary f_real =
        summarize(real_maps.power, real_maps.phase, real_maps.autocorr, "real");
    const FingerprintSummary f_gen =
        summarize(gen_maps.power, gen_maps.phase, gen_maps.autocorr, "generated");
    const ComparisonReport cmp = compare(f_real, real_maps.power, real_maps.phase, f_gen,
                                         gen_maps.power, gen_maps.phase);

    ReportConfig rc;
    rc.command = "fingerprint";
    rc.analysis_size = cfg.analysis_size;
    rc.denoiser = cfg.denoiser.str();
    rc.crop = cfg.crop;
    rc.source = analysis_source_name(cfg.source);
    rc.set_selection = "both";
    detail::ensure_parent_dir(out);
    write_report(&m, {}, {}, {f_real, f_gen}, {cmp}, rc, out);
    detail::print_status({out});
    return 0;
}

// Parses argv and dispatches. Exit codes: 0 success, 1 data/runtime error,
// 2 usage error.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"Batch spectral-fingerprint forensics for real vs generated image sets"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Build a dataset manifest from two directories");
    std::string real_dir, fake_dir, generator, ingest_out;
    double noise = -1.0;
    int analysis_size = 256;
    ingest->add_option("--real", real_dir, "Directory with real images")->required();
    ingest->add_option("--fake", fake_dir, "Directory with generated images")->required();
    ingest->add_option("--generator", generator, "Generator tag, e.g. sd3")->required();
    auto* noise_opt =
        ingest->add_option("--noise", noise, "Noise level")->check(detail::noise_level);
    ingest->add_option("--analysis-size", analysis_size, "Analysis resolution")
        ->check(CLI::Range(2, 1 << 16));
    ingest->add_option("--out", ingest_out, "Manifest output path")->required();

    // shared analysis flags
    auto add_common = [](CLI::App* cmd, CommonOpts& o, bool with_crop) {
        cmd->add_option("--manifest", o.manifest, "Manifest JSON path");
        cmd->add_option("--denoiser", o.denoiser,
                        "identity | gaussian:<sigma> | median:<radius>")
            ->check(detail::denoiser_spec);
        cmd->add_option("--source", o.source, "Analyze residuals or raw images")
            ->check(CLI::IsMember({"residual", "raw"}));
        if (with_crop)
            cmd->add_option("--crop", o.crop, "Autocorrelation crop side (odd)")
                ->check(detail::odd_positive);
        cmd->add_option("--threads", o.threads, "Worker threads")
            ->check(CLI::PositiveNumber)
            ->envname("SPECPRINT_THREADS");
    };

    auto* metrics = app.add_subcommand("metrics", "Pairwise MSE/PSNR/SSIM/histogram metrics");
    CommonOpts metrics_opts;
    std::string metrics_out;
    add_common(metrics, metrics_opts, false);
    metrics->add_option("--out", metrics_out, "CSV output path")->required();

    auto* spectrum = app.add_subcommand("spectrum", "Averaged power and phase spectra");
    CommonOpts spectrum_opts;
    std::string spectrum_set = "both", spectrum_single, spectrum_prefix;
    int spectrum_single_size = 256;
    add_common(spectrum, spectrum_opts, false);
    spectrum->add_option("--set", spectrum_set, "Which set to analyze")
        ->check(CLI::IsMember({"real", "fake", "both"}));
    spectrum->add_option("--single", spectrum_single, "Analyze one image instead of a manifest");
    spectrum->add_option("--analysis-size", spectrum_single_size,
                         "Analysis resolution for --single")
        ->check(CLI::Range(2, 1 << 16));
    spectrum->add_option("--out-prefix", spectrum_prefix, "Output path prefix")->required();

    auto* autocorr = app.add_subcommand("autocorr", "Averaged central autocorrelation");
    CommonOpts autocorr_opts;
    std::string autocorr_set = "both", autocorr_prefix;
    add_common(autocorr, autocorr_opts, true);
    autocorr->add_option("--set", autocorr_set, "Which set to analyze")
        ->check(CLI::IsMember({"real", "fake", "both"}));
    autocorr->add_option("--out-prefix", autocorr_prefix, "Output path prefix")->required();

    auto* fingerprint =
        app.add_subcommand("fingerprint", "Fingerprint summaries and set comparison report");
    CommonOpts fingerprint_opts;
    std::string fingerprint_out;
    add_common(fingerprint, fingerprint_opts, true);
    fingerprint->add_option("--out", fingerprint_out, "Report JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ingest->parsed()) {
            std::optional<double> n;
            if (noise_opt->count() > 0) n = noise;
            return cmd_ingest(real_dir, fake_dir, generator, n, analysis_size, ingest_out);
        }
        if (metrics->parsed()) {
            if (metrics_opts.manifest.empty()) {
                std::cerr << "metrics requires --manifest\n";
                return 2;
            }
            return cmd_metrics(metrics_opts, metrics_out);
        }
        if (spectrum->parsed()) {
            if (spectrum_opts.manifest.empty() && spectrum_single.empty()) {
                std::cerr << "spectrum requires --manifest or --single\n";
                return 2;
            }
            return cmd_spectrum(spectrum_opts, spectrum_set, spectrum_single,
                                spectrum_single_size, spectrum_prefix);
        }
        if (autocorr->parsed()) {
            if (autocorr_opts.manifest.empty()) {
                std::cerr << "autocorr requires --manifest\n";
                return 2;
            }
            return cmd_autocorr(autocorr_opts, autocorr_set, autocorr_prefix);
        }
        if (fingerprint->parsed()) {
            if (fingerprint_opts.manifest.empty()) {
                std::cerr << "fingerprint requires --manifest\n";
                return 2;
            }
            return cmd_fingerprint(fingerprint_opts, fingerprint_out);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        detail::print_status(false, {});
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        detail::print_status(false, {});
        return 1;
    }
}

}  // namespace specprint::cli
