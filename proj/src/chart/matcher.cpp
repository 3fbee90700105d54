#include "finimg/chart/matcher.hpp"

#include <cstdio>

#include "finimg/common/csv.hpp"
#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::chart {

ReferenceIndex::ReferenceIndex(std::shared_ptr<const Embedder> embedder)
    : embedder_(std::move(embedder)) {
    if (!embedder_) throw ContractError("reference index needs an embedder");
}

void ReferenceIndex::add(std::string description, AccountCode target) {
    Embedding v = embedder_->embed(description);
    entries_.push_back({std::move(description), target, std::move(v)});
}

void ReferenceIndex::add(std::string description, AccountCode target, Embedding vector) {
    if (vector.size() != dimension())
        throw DataError("reference vector for '" + description + "' has dimension " +
                        std::to_string(vector.size()) + ", index expects " +
                        std::to_string(dimension()));
    normalize_unit(vector);
    entries_.push_back({std::move(description), target, std::move(vector)});
}

ReferenceIndex ReferenceIndex::load_jsonl(const std::filesystem::path& path,
                                          const StandardChart& chart,
                                          std::shared_ptr<const Embedder> embedder) {
    ReferenceIndex index(std::move(embedder));
    std::size_t lineno = 0;
    for (const auto& line : files::read_jsonl(path)) {
        ++lineno;
        const std::string where = path.string() + " entry " + std::to_string(lineno);
        try {
            auto desc = line.at("description").get<std::string>();
            AccountCode target{line.at("target_code").get<int>()};
            if (!chart.contains(target))
                throw DataError(where + ": target " + target.to_string() +
                                " is not a standard account");
            if (line.contains("vector"))
                index.add(std::move(desc), target, line["vector"].get<Embedding>());
            else
                index.add(std::move(desc), target);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(where + ": " + e.what());
        }
    }
    if (index.empty()) throw DataError(path.string() + ": reference index is empty");
    return index;
}

namespace {

bool better(double sim, const ReferenceEntry& cand, double best_sim, const ReferenceEntry& best) {
    if (sim != best_sim) return sim > best_sim;
    if (cand.target != best.target) return cand.target < best.target;
    return cand.description < best.description;
}

}  // namespace

AccountMatch match_description(const std::string& full_description, const ReferenceIndex& index,
                               const MatchOptions& options) {
    if (index.empty()) throw ContractError("match against an empty reference index");
    const Embedding q = index.embedder().embed(full_description);
    const ReferenceEntry* best = nullptr;
    double best_sim = 0.0;
    for (const auto& e : index.entries()) {
        const double sim = cosine(q, e.vector);
        if (!best || better(sim, e, best_sim, *best)) {
            best = &e;
            best_sim = sim;
        }
    }
    AccountMatch m;
    m.target = best->target;
    m.similarity = best_sim;
    m.matched_description = best->description;
    m.low_confidence = best_sim < options.similarity_floor;
    return m;
}

AccountMatch match_account(const ChartAccount& original, const Chart& chart,
                           const ReferenceIndex& index, const MatchOptions& options) {
    AccountMatch m = match_description(concat_full_description(original, chart), index, options);
    m.original_code = original.code;
    return m;
}

double validate_matcher(std::span<const LabeledQuery> labeled, const ReferenceIndex& index) {
    if (labeled.empty()) throw ContractError("validate_matcher needs at least one query");
    std::size_t hits = 0;
    for (const auto& q : labeled)
        if (match_description(q.description, index).target == q.expected) ++hits;
    return static_cast<double>(hits) / static_cast<double>(labeled.size());
}

std::vector<AccountMatch> normalize_chart(const Chart& chart, const ReferenceIndex& index,
                                          const MatchOptions& options) {
    std::vector<AccountMatch> out;
    out.reserve(chart.accounts().size());
    for (const auto& a : chart.accounts()) out.push_back(match_account(a, chart, index, options));
    return out;
}

void write_match_table(const std::filesystem::path& path, std::span<const AccountMatch> matches) {
    std::string out = "original_code,target_code,similarity,low_confidence\n";
    char sim[32];
    for (const auto& m : matches) {
        std::snprintf(sim, sizeof sim, "%.6f", m.similarity);
        out += csv::format_row({m.original_code, m.target.to_string(), sim,
                                m.low_confidence ? "true" : "false"});
    }
    files::write_text(path, out);
}

std::vector<AccountMatch> read_match_table(const std::filesystem::path& path) {
    auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": empty match table");
    const auto col = csv::require_columns(
        rows[0], {"original_code", "target_code", "similarity", "low_confidence"}, path.string());
    std::vector<AccountMatch> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < rows[0].size())
            throw DataError(path.string() + ": short row " + std::to_string(r + 1));
        AccountMatch m;
        m.original_code = row[col[0]];
        try {
            m.target = AccountCode{std::stoi(row[col[1]])};
            m.similarity = std::stod(row[col[2]]);
        } catch (const std::exception&) {
            throw DataError(path.string() + ": bad number in row " + std::to_string(r + 1));
        }
        m.low_confidence = row[col[3]] == "true";
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace finimg::chart
