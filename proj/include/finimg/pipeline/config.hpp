#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "finimg/cnn/model.hpp"
#include "finimg/image/codec.hpp"
#include "finimg/synth/generator.hpp"

namespace finimg::pipeline {

/// Pipeline settings. Relative paths in the file are resolved against the
/// directory holding the config file.
struct PipelineConfig {
    std::filesystem::path base_dir;
    std::filesystem::path output_dir = "out";
    std::filesystem::path standard_chart;
    std::filesystem::path reference_index;
    std::filesystem::path ratio_definitions;
    std::filesystem::path inflation;
    /// Ledger inputs. When a synth section is present these default to the
    /// synth stage outputs.
    std::optional<std::filesystem::path> source_chart;
    std::optional<std::filesystem::path> entries;
    std::optional<std::filesystem::path> labels;
    std::optional<std::filesystem::path> companies;
    image::Variant variant = image::Variant::accounts;
    std::uint64_t split_seed = 20240517;
    cnn::TrainConfig train;
    std::optional<synth::SynthConfig> synth;
    /// Further image manifests concatenated after this run's own.
    std::vector<std::filesystem::path> extra_manifests;
    /// Keep only these CNAE divisions when building the training set; empty
    /// keeps all.
    std::vector<int> divisions;
    double similarity_floor = 0.30;

    std::filesystem::path resolve(const std::filesystem::path& p) const;
    std::filesystem::path out() const { return resolve(output_dir); }
};

/// Throws DataError on a malformed or invalid document.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

/// Paths as written (relative to base_dir); base_dir itself is omitted.
nlohmann::ordered_json to_json(const PipelineConfig& c);

/// FNV-1a of the canonical JSON form.
std::string config_hash(const PipelineConfig& c);

/// Sets the split, training and synth seeds.
void override_seed(PipelineConfig& c, std::uint64_t seed);

}  // namespace finimg::pipeline
