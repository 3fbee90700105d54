#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "finimg/chart/chart.hpp"
#include "finimg/common/period.hpp"
#include "finimg/ledger/entry.hpp"

namespace finimg::synth {

struct DivisionChoice {
    int division = 0;
    int group = 0;
    double weight = 1.0;
};

struct SynthConfig {
    std::uint64_t seed = 20240517;
    int n_companies = 2000;
    /// Fraction labeled 1 (distressed).
    double class_ratio = 0.5;
    int months_per_company = 24;
    double noise_level = 0.5;
    /// A month is drawn from [start_period, start_period + start_spread_months);
    /// the company's ledger opens in January of that month's year.
    Period start_period{2017, 1};
    int start_spread_months = 36;
    std::vector<DivisionChoice> divisions{{47, 472, 1.0}, {47, 475, 1.0}, {86, 863, 1.0}, {82, 821, 1.0}};
    std::vector<int> region_codes{35, 33, 31, 41, 43};
    std::vector<int> country_codes{55};
};

nlohmann::ordered_json to_json(const SynthConfig& c);
/// Missing keys keep their defaults. Throws DataError on invalid values.
SynthConfig synth_config_from_json(const nlohmann::json& j);
/// Throws DataError unless the config is usable.
void validate(const SynthConfig& c);

struct CompanyMeta {
    std::string company_id;
    int label = 0;
    int division = 0;
    int group = 0;
    int region_code = 0;
    int country_code = 0;
    Period first;
    Period last;
};

struct GeneratedCompany {
    CompanyMeta meta;
    /// Postings against the source chart, in date order.
    std::vector<ledger::RawEntry> entries;
};

/// Label of every company index: round(class_ratio * n) ones placed by a
/// seeded permutation.
std::vector<int> assign_labels(const SynthConfig& c);

std::string company_id(std::size_t index);

/// Solvent (label 0) or distressed (label 1) monthly ledger. A pure function
/// of (config, index, label).
GeneratedCompany generate_company(const SynthConfig& c, std::size_t index, int label);

/// The dotted legacy chart the generator posts to.
const std::vector<chart::ChartAccount>& source_chart();
/// The standard account each posted source code is meant to land on.
const std::map<std::string, AccountCode>& intended_targets();

/// Writes entries.csv, labels.jsonl, companies.jsonl, source_chart.csv and
/// synth_manifest.json (config echo, config hash, content hash) to `dir`.
void generate_dataset(const SynthConfig& c, const std::filesystem::path& dir);

void write_companies_jsonl(const std::filesystem::path& path, const std::vector<CompanyMeta>& companies);
std::vector<CompanyMeta> read_companies_jsonl(const std::filesystem::path& path);

}  // namespace finimg::synth
