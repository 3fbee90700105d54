#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "finimg/chart/chart.hpp"
#include "finimg/chart/embedding.hpp"
#include "finimg/chart/standard_chart.hpp"

namespace finimg::chart {

struct ReferenceEntry {
    std::string description;
    AccountCode target;
    Embedding vector;
};

/// Reference descriptions with their standard targets. Read-only once built;
/// queries are embedded with the same embedder that produced the vectors.
class ReferenceIndex {
public:
    explicit ReferenceIndex(std::shared_ptr<const Embedder> embedder);

    void add(std::string description, AccountCode target);
    void add(std::string description, AccountCode target, Embedding vector);

    /// JSON Lines of {description, target_code[, vector]}. Targets must exist
    /// in `chart`. Lines without a vector are embedded with `embedder`.
    static ReferenceIndex load_jsonl(const std::filesystem::path& path, const StandardChart& chart,
                                     std::shared_ptr<const Embedder> embedder);

    const std::vector<ReferenceEntry>& entries() const { return entries_; }
    const Embedder& embedder() const { return *embedder_; }
    std::size_t dimension() const { return embedder_->dimension(); }
    bool empty() const { return entries_.empty(); }

private:
    std::shared_ptr<const Embedder> embedder_;
    std::vector<ReferenceEntry> entries_;
};

struct AccountMatch {
    std::string original_code;
    AccountCode target;
    double similarity = 0.0;
    std::string matched_description;
    bool low_confidence = false;
};

struct MatchOptions {
    double similarity_floor = 0.30;
};

/// Nearest reference by cosine. Ties go to the lowest target code, then the
/// lexicographically smallest description, so entry order never matters.
AccountMatch match_description(const std::string& full_description, const ReferenceIndex& index,
                               const MatchOptions& options = {});

AccountMatch match_account(const ChartAccount& original, const Chart& chart,
                           const ReferenceIndex& index, const MatchOptions& options = {});

struct LabeledQuery {
    std::string description;
    AccountCode expected;
};

/// Fraction of queries whose match lands on the expected code.
double validate_matcher(std::span<const LabeledQuery> labeled, const ReferenceIndex& index);

/// Matches every account of `chart`.
std::vector<AccountMatch> normalize_chart(const Chart& chart, const ReferenceIndex& index,
                                          const MatchOptions& options = {});

/// CSV: original_code,target_code,similarity,low_confidence
void write_match_table(const std::filesystem::path& path, std::span<const AccountMatch> matches);
std::vector<AccountMatch> read_match_table(const std::filesystem::path& path);

}  // namespace finimg::chart
