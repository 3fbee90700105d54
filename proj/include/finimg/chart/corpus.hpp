#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "finimg/chart/matcher.hpp"
#include "finimg/chart/standard_chart.hpp"

namespace finimg::chart {

/// Controls the held-out validation corpus built by perturbing reference
/// descriptions. Each variant receives `edits_per_variant` edits, each one
/// drawn uniformly from: substitute one word from the synonym list, swap two
/// adjacent hierarchy levels, drop one word from a multi-word ancestor level.
/// An operator that cannot apply is replaced by the next applicable one.
struct PerturbationConfig {
    std::uint64_t seed = 865;
    int variants_per_entry = 2;
    int edits_per_variant = 1;
};

/// Fixed synonym list used for substitution (lowercase word -> replacement).
std::span<const std::pair<const char*, const char*>> synonym_wordlist();

std::vector<LabeledQuery> make_perturbation_corpus(const StandardChart& chart,
                                                   const ReferenceIndex& index,
                                                   const PerturbationConfig& config = {});

/// JSON Lines of {description, expected_code}.
void write_corpus_jsonl(const std::filesystem::path& path, std::span<const LabeledQuery> corpus);
std::vector<LabeledQuery> read_corpus_jsonl(const std::filesystem::path& path);

}  // namespace finimg::chart
