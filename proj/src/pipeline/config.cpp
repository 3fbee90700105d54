#include "finimg/pipeline/config.hpp"

#include <algorithm>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"
#include "finimg/common/hash.hpp"

namespace finimg::pipeline {

namespace fs = std::filesystem;

fs::path PipelineConfig::resolve(const fs::path& p) const {
    return p.is_absolute() ? p : (base_dir / p).lexically_normal();
}

namespace {

fs::path required_path(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_string())
        throw DataError(std::string("config: '") + key + "' must be a path string");
    return fs::path(j.at(key).get<std::string>());
}

std::optional<fs::path> optional_path(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_string()) throw DataError(std::string("config: '") + key + "' must be a path string");
    return fs::path(j.at(key).get<std::string>());
}

const char* const kKnownKeys[] = {"output_dir", "standard_chart", "reference_index", "ratio_definitions",
                                  "inflation", "source_chart", "entries", "labels", "companies", "variant",
                                  "split_seed", "train", "synth", "extra_manifests", "divisions",
                                  "similarity_floor"};

}  // namespace

PipelineConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw DataError("config: top level must be an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                         [&](const char* k) { return key == k; }) == std::end(kKnownKeys))
            throw DataError("config: unknown key '" + key + "'");
    }
    PipelineConfig c;
    c.base_dir = base_dir;
    try {
        if (j.contains("output_dir")) c.output_dir = required_path(j, "output_dir");
        c.standard_chart = required_path(j, "standard_chart");
        c.reference_index = required_path(j, "reference_index");
        c.ratio_definitions = required_path(j, "ratio_definitions");
        c.inflation = required_path(j, "inflation");
        c.source_chart = optional_path(j, "source_chart");
        c.entries = optional_path(j, "entries");
        c.labels = optional_path(j, "labels");
        c.companies = optional_path(j, "companies");
        if (j.contains("variant")) c.variant = image::parse_variant(j.at("variant").get<std::string>());
        c.split_seed = j.value("split_seed", c.split_seed);
        if (j.contains("train")) c.train = cnn::train_config_from_json(j.at("train"));
        if (j.contains("synth") && !j.at("synth").is_null()) c.synth = synth::synth_config_from_json(j.at("synth"));
        for (const auto& m : j.value("extra_manifests", nlohmann::json::array()))
            c.extra_manifests.emplace_back(m.get<std::string>());
        c.divisions = j.value("divisions", c.divisions);
        c.similarity_floor = j.value("similarity_floor", c.similarity_floor);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    if (!c.synth) {
        for (const auto& [name, p] : {std::pair{"source_chart", c.source_chart}, {"entries", c.entries},
                                      {"labels", c.labels}, {"companies", c.companies}})
            if (!p) throw DataError(std::string("config: '") + name + "' is required without a synth section");
    }
    return c;
}

PipelineConfig load_config(const fs::path& path) {
    const auto j = files::read_json(path);
    return config_from_json(j, fs::absolute(path).parent_path());
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
    auto opt = [](const std::optional<fs::path>& p) {
        return p ? nlohmann::ordered_json(p->generic_string()) : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["output_dir"] = c.output_dir.generic_string();
    j["standard_chart"] = c.standard_chart.generic_string();
    j["reference_index"] = c.reference_index.generic_string();
    j["ratio_definitions"] = c.ratio_definitions.generic_string();
    j["inflation"] = c.inflation.generic_string();
    j["source_chart"] = opt(c.source_chart);
    j["entries"] = opt(c.entries);
    j["labels"] = opt(c.labels);
    j["companies"] = opt(c.companies);
    j["variant"] = std::string(image::to_string(c.variant));
    j["split_seed"] = c.split_seed;
    j["train"] = cnn::to_json(c.train);
    j["synth"] = c.synth ? synth::to_json(*c.synth) : nlohmann::ordered_json(nullptr);
    auto extra = nlohmann::ordered_json::array();
    for (const auto& m : c.extra_manifests) extra.push_back(m.generic_string());
    j["extra_manifests"] = extra;
    j["divisions"] = c.divisions;
    j["similarity_floor"] = c.similarity_floor;
    return j;
}

std::string config_hash(const PipelineConfig& c) { return hex64(fnv1a64(to_json(c).dump())); }

void override_seed(PipelineConfig& c, std::uint64_t seed) {
    c.split_seed = seed;
    c.train.seed = seed;
    if (c.synth) c.synth->seed = seed;
}

}  // namespace finimg::pipeline
