#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "specprint/errors.hpp"
#include "specprint/json_writer.hpp"

namespace specprint {

enum class SetLabel { real, generated };

inline const char* set_label_name(SetLabel s) {
    return s == SetLabel::real ? "real" : "generated";
}

struct ManifestEntry {
    std::string path;
    SetLabel set = SetLabel::real;
    std::string generator;                // "" for the real set
    std::optional<double> noise_level;    // one of {0, 0.25, 0.5, 0.75} when present
    std::string stem;                     // filename without extension, pairing key
};

struct DatasetManifest {
    int analysis_size = 256;
    std::vector<ManifestEntry> entries;   // lexicographic by path

    std::vector<const ManifestEntry*> set_entries(SetLabel s) const {
        std::vector<const ManifestEntry*> out;
        for (const auto& e : entries)
            if (e.set == s) out.push_back(&e);
        return out;
    }
};

namespace detail {

inline bool has_image_extension(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

inline std::vector<std::filesystem::path> list_images_sorted(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (auto it = fs::recursive_directory_iterator(dir, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw IoError("cannot list " + dir + ": " + ec.message());
        if (it->is_regular_file() && has_image_extension(it->path())) files.push_back(it->path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
    return files;
}

inline void append_set(DatasetManifest& m, const std::string& dir, SetLabel set,
                       const std::string& generator, std::optional<double> noise) {
    const auto files = list_images_sorted(dir);
    if (files.empty()) throw EmptySet(std::string(set_label_name(set)) + " set is empty: " + dir);
    std::map<std::string, std::string> seen;
    for (const auto& f : files) {
        ManifestEntry e;
        e.path = f.string();
        e.set = set;
        e.generator = set == SetLabel::generated ? generator : std::string{};
        e.noise_level = set == SetLabel::generated ? noise : std::nullopt;
        e.stem = f.stem().string();
        auto [it, in] = seen.emplace(e.stem, e.path);
        if (!in)
            throw DuplicateStem("stem \"" + e.stem + "\" appears twice in the " +
                                set_label_name(set) + " set: " + it->second + ", " + e.path);
        m.entries.push_back(std::move(e));
    }
}

}  // namespace detail

// Recursively lists *.png/*.jpg/*.jpeg under both directories and records them
// in lexicographic path order; deterministic across runs.
inline DatasetManifest build_manifest(const std::string& real_dir,
                                      const std::string& generated_dir,
                                      const std::string& generator,
                                      std::optional<double> noise_level, int analysis_size) {
    DatasetManifest m;
    m.analysis_size = analysis_size;
    detail::append_set(m, real_dir, SetLabel::real, generator, std::nullopt);
    detail::append_set(m, generated_dir, SetLabel::generated, generator, noise_level);
    std::sort(m.entries.begin(), m.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    return m;
}

struct PairList {
    std::vector<std::pair<const ManifestEntry*, const ManifestEntry*>> pairs;  // (real, generated)
    std::vector<const ManifestEntry*> unmatched_real;
    std::vector<const ManifestEntry*> unmatched_generated;
};

// Matches entries by stem, pair order lexicographic by stem.
inline PairList pair_images(const DatasetManifest& manifest) {
    std::map<std::string, const ManifestEntry*> real, gen;
    for (const auto& e : manifest.entries)
        (e.set == SetLabel::real ? real : gen).emplace(e.stem, &e);

    PairList out;
    for (const auto& [stem, re] : real) {
        auto it = gen.find(stem);
        if (it != gen.end())
            out.pairs.emplace_back(re, it->second);
        else
            out.unmatched_real.push_back(re);
    }
    for (const auto& [stem, ge] : gen)
        if (!real.count(stem)) out.unmatched_generated.push_back(ge);
    if (out.pairs.empty()) throw NoPairs("no stems match between the real and generated sets");
    return out;
}

inline std::string manifest_to_json(const DatasetManifest& m) {
    JsonWriter w;
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
    return w.str();
}

inline void write_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create " + path);
    out << manifest_to_json(m) << '\n';
    if (!out) throw IoError("write failed for " + path);
}

inline DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("manifest " + path + ": " + e.what());
    }
    try {
        DatasetManifest m;
        m.analysis_size = j.at("analysis_size").get<int>();
        for (const auto& je : j.at("entries")) {
            ManifestEntry e;
            e.path = je.at("path").get<std::string>();
            const std::string set = je.at("set").get<std::string>();
            if (set == "real")
                e.set = SetLabel::real;
            else if (set == "generated")
                e.set = SetLabel::generated;
            else
                throw FormatError("manifest " + path + ": bad set label \"" + set + "\"");
            e.generator = je.at("generator").get<std::string>();
            if (!je.at("noise_level").is_null()) e.noise_level = je.at("noise_level").get<double>();
            e.stem = je.at("stem").get<std::string>();
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("manifest " + path + ": " + e.what());
    }
}

}  // namespace specprint
