#include "finimg/chart/corpus.hpp"

#include <array>
#include <sstream>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"
#include "finimg/common/rng.hpp"

namespace finimg::chart {
namespace {

constexpr std::array<std::pair<const char*, const char*>, 44> kSynonyms{{
    {"customers", "clients"},       {"clients", "customers"},      {"suppliers", "vendors"},
    {"vendors", "suppliers"},       {"loans", "borrowings"},       {"financing", "funding"},
    {"expenses", "expenditures"},   {"costs", "charges"},          {"revenue", "income"},
    {"income", "earnings"},         {"stock", "inventory"},        {"inventories", "stock"},
    {"cash", "money"},              {"taxes", "levies"},           {"tax", "levy"},
    {"provision", "allowance"},     {"receivable", "receivables"}, {"payable", "due"},
    {"liabilities", "obligations"}, {"obligations", "liabilities"}, {"investments", "holdings"},
    {"fixed", "tangible"},          {"current", "short-term"},     {"non-current", "long-term"},
    {"long-term", "non-current"},   {"equipment", "apparatus"},    {"salaries", "wages"},
    {"wages", "salaries"},          {"accumulated", "cumulative"}, {"administrative", "admin"},
    {"sales", "sale"},              {"bank", "banking"},           {"goods", "merchandise"},
    {"merchandise", "goods"},       {"services", "service"},       {"operating", "operational"},
    {"operational", "operating"},   {"other", "sundry"},           {"sundry", "other"},
    {"asset", "assets"},            {"result", "results"},         {"deposits", "deposit"},
    {"reserves", "reserve"},        {"profits", "earnings"},
}};

using Segments = std::vector<std::vector<std::string>>;

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string lower(std::string s) {
    for (char& c : s)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return s;
}

const char* synonym_for(const std::string& word) {
    const std::string key = lower(word);
    for (const auto& [from, to] : kSynonyms)
        if (key == from) return to;
    return nullptr;
}

// Hierarchy levels of a reference description, recovered from the chart when
// the description starts with the target's ancestor path. Otherwise the
// whole description is treated as one level.
Segments segment(const ReferenceEntry& entry, const StandardChart& chart) {
    auto path = chart.description_path(entry.target);
    path.pop_back();
    std::string prefix;
    for (const auto& p : path) prefix += p + " ";
    Segments segs;
    if (!path.empty() && entry.description.size() > prefix.size() &&
        entry.description.compare(0, prefix.size(), prefix) == 0) {
        for (const auto& p : path) segs.push_back(split_words(p));
        segs.push_back(split_words(entry.description.substr(prefix.size())));
    } else {
        segs.push_back(split_words(entry.description));
    }
    return segs;
}

std::string join(const Segments& segs) {
    std::string out;
    for (const auto& seg : segs)
        for (const auto& w : seg) {
            if (!out.empty()) out.push_back(' ');
            out += w;
        }
    return out;
}

struct Variant {
    Segments segs;
    std::size_t leaf;  // position of the account's own level after reordering
    bool changed = false;
};

bool substitute_one(Variant& v, Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> eligible;
    for (std::size_t s = 0; s < v.segs.size(); ++s)
        for (std::size_t t = 0; t < v.segs[s].size(); ++t)
            if (synonym_for(v.segs[s][t])) eligible.emplace_back(s, t);
    if (eligible.empty()) return false;
    auto [s, t] = eligible[rng.below(eligible.size())];
    v.segs[s][t] = synonym_for(v.segs[s][t]);
    return true;
}

bool reorder(Variant& v, Rng& rng) {
    if (v.segs.size() < 2) return false;
    const std::size_t i = rng.below(v.segs.size() - 1);
    std::swap(v.segs[i], v.segs[i + 1]);
    if (v.leaf == i) v.leaf = i + 1;
    else if (v.leaf == i + 1) v.leaf = i;
    return true;
}

bool drop_token(Variant& v, Rng& rng) {
    std::vector<std::pair<std::size_t, std::size_t>> eligible;
    for (std::size_t s = 0; s < v.segs.size(); ++s) {
        if (s == v.leaf || v.segs[s].size() < 2) continue;
        for (std::size_t t = 0; t < v.segs[s].size(); ++t) eligible.emplace_back(s, t);
    }
    if (eligible.empty()) return false;
    auto [s, t] = eligible[rng.below(eligible.size())];
    v.segs[s].erase(v.segs[s].begin() + static_cast<std::ptrdiff_t>(t));
    return true;
}

}  // namespace

std::span<const std::pair<const char*, const char*>> synonym_wordlist() { return kSynonyms; }

std::vector<LabeledQuery> make_perturbation_corpus(const StandardChart& chart,
                                                   const ReferenceIndex& index,
                                                   const PerturbationConfig& config) {
    std::vector<LabeledQuery> corpus;
    const auto& entries = index.entries();
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const Segments base = segment(entries[e], chart);
        const std::string original = join(base);
        for (int k = 0; k < config.variants_per_entry; ++k) {
            Rng rng(mix_seed(config.seed, e * 64 + static_cast<std::size_t>(k)));
            Variant v{base, base.size() - 1};
            for (int edit = 0; edit < config.edits_per_variant; ++edit) {
                const std::size_t first = rng.below(3);
                bool applied = false;
                for (std::size_t i = 0; i < 3 && !applied; ++i) {
                    switch ((first + i) % 3) {
                        case 0: applied = substitute_one(v, rng); break;
                        case 1: applied = reorder(v, rng); break;
                        default: applied = drop_token(v, rng); break;
                    }
                }
                v.changed |= applied;
            }
            std::string text = join(v.segs);
            if (!v.changed || text == original || text.empty()) continue;
            corpus.push_back({std::move(text), entries[e].target});
        }
    }
    return corpus;
}

void write_corpus_jsonl(const std::filesystem::path& path, std::span<const LabeledQuery> corpus) {
    std::string out;
    for (const auto& q : corpus) {
        nlohmann::json j{{"description", q.description}, {"expected_code", q.expected.value}};
        out += j.dump() + "\n";
    }
    files::write_text(path, out);
}

std::vector<LabeledQuery> read_corpus_jsonl(const std::filesystem::path& path) {
    std::vector<LabeledQuery> out;
    for (const auto& line : files::read_jsonl(path)) {
        try {
            out.push_back({line.at("description").get<std::string>(),
                           AccountCode{line.at("expected_code").get<int>()}});
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
    }
    return out;
}

}  // namespace finimg::chart
