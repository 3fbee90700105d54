#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <fstream>
#include <random>
#include <set>

#include "finimg/chart/chart.hpp"
#include "finimg/chart/corpus.hpp"
#include "finimg/chart/matcher.hpp"
#include "finimg/common/error.hpp"

using namespace finimg;
using namespace finimg::chart;

namespace {

const std::filesystem::path kData = FINIMG_DATA_DIR;

const StandardChart& standard() {
    static const StandardChart c = StandardChart::load_json(kData / "standard_chart.json");
    return c;
}

const ReferenceIndex& default_index() {
    static const ReferenceIndex idx = ReferenceIndex::load_jsonl(
        kData / "reference_index.jsonl", standard(), std::make_shared<TrigramEmbedder>());
    return idx;
}

Chart table1_chart() {
    return Chart({
        {"1", 1, "Asset", std::nullopt},
        {"1.1", 2, "Current assets", "1"},
        {"1.1.1", 3, "Cash and cash equivalents", "1.1"},
        {"1.1.1.001", 4, "001 Cash", "1.1.1"},
        {"1.1.1.002", 4, "002 Banks", "1.1.1"},
        {"1.1.2", 3, "Accounts receivable", "1.1"},
        {"1.1.2.001", 4, "001 Customers", "1.1.2"},
        {"1.1.2.002", 4, "002 Duplicates", "1.1.2"},
    });
}

// Test-side oracle: sparse trigram counts cosine, computed from scratch in
// the hashed space without going through the embedder or matcher.
std::map<std::uint32_t, double> sparse_trigrams(const std::string& text) {
    std::string norm;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!norm.empty() && norm.back() != ' ') norm.push_back(' ');
        } else {
            norm.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    while (!norm.empty() && norm.back() == ' ') norm.pop_back();
    const std::string padded = " " + norm + " ";
    std::map<std::uint32_t, double> counts;
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        std::uint32_t h = 2166136261u;
        for (std::size_t k = 0; k < 3; ++k) {
            h ^= static_cast<unsigned char>(padded[i + k]);
            h *= 16777619u;
        }
        counts[h % 2048] += 1.0;
    }
    return counts;
}

double sparse_cosine(const std::string& a, const std::string& b) {
    auto va = sparse_trigrams(a), vb = sparse_trigrams(b);
    double dot = 0, na = 0, nb = 0;
    for (auto& [k, v] : va) {
        na += v * v;
        if (auto it = vb.find(k); it != vb.end()) dot += v * it->second;
    }
    for (auto& [k, v] : vb) nb += v * v;
    return dot / std::sqrt(na * nb);
}

AccountCode brute_force_target(const std::string& query) {
    double best = -2;
    AccountCode target{};
    std::string best_desc;
    for (const auto& e : default_index().entries()) {
        double s = sparse_cosine(query, e.description);
        if (s > best + 1e-12 ||
            (std::abs(s - best) <= 1e-12 &&
             (e.target < target || (e.target == target && e.description < best_desc)))) {
            best = s;
            target = e.target;
            best_desc = e.description;
        }
    }
    return target;
}

}  // namespace

TEST_CASE("full description concatenates ancestors and strips numeric prefixes") {
    const Chart chart = table1_chart();
    CHECK(concat_full_description(*chart.find("1.1.2.001"), chart) ==
          "Asset Current assets Accounts receivable Customers");
    CHECK(concat_full_description(*chart.find("1"), chart) == "Asset");
    CHECK(concat_full_description(*chart.find("1.1"), chart) == "Asset Current assets");
    CHECK(concat_full_description(*chart.find("1.1.1.002"), chart) ==
          "Asset Current assets Cash and cash equivalents Banks");
}

TEST_CASE("missing ancestor is a structural error naming the gap") {
    Chart chart({
        {"1", 1, "Asset", std::nullopt},
        {"1.1.2", 3, "Accounts receivable", "1.1"},
        {"1.1.2.001", 4, "001 Customers", "1.1.2"},
    });
    try {
        (void)concat_full_description(*chart.find("1.1.2.001"), chart);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("1.1") != std::string::npos);
    }
}

TEST_CASE("chart rejects levels that disagree with the dotted code") {
    CHECK_THROWS_AS(Chart({{"1.1", 3, "Current assets", "1"}}), DataError);
    CHECK_THROWS_AS(Chart({{"1", 1, "A", std::nullopt}, {"1", 1, "B", std::nullopt}}), DataError);
}

TEST_CASE("standard chart has the expected level counts and vector accounts") {
    const auto& c = standard();
    CHECK(c.accounts().size() == 208);
    std::array<int, 4> counts{};
    for (const auto& a : c.accounts()) ++counts[a.level - 1];
    CHECK(counts == std::array<int, 4>{4, 12, 42, 150});
    for (AccountCode code : kVectorAccounts) CHECK(c.contains(code));
    CHECK(c.full_description(AccountCode{11200}) == "Asset Current assets Customers");
}

TEST_CASE("reference index covers every standard account with unit vectors") {
    const auto& idx = default_index();
    CHECK(idx.entries().size() >= 338);
    std::set<AccountCode> covered;
    for (const auto& e : idx.entries()) {
        covered.insert(e.target);
        CHECK(e.vector.size() == 2048);
        double n = 0;
        for (double x : e.vector) n += x * x;
        CHECK(std::sqrt(n) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(covered.size() == 208);
}

TEST_CASE("embedding contract") {
    TrigramEmbedder emb;
    for (const char* s : {"Asset", "x", "Current liabilities suppliers", "  Mixed   CASE \t text "}) {
        auto v = emb.embed(s);
        double n = 0;
        for (double x : v) n += x * x;
        CHECK(std::abs(std::sqrt(n) - 1.0) <= 1e-9);
    }
    CHECK(cosine(emb.embed("Asset"), emb.embed("Asset")) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(emb.embed("Current  ASSETS") == emb.embed("current assets"));
    CHECK_THROWS_AS(emb.embed(""), DataError);
    CHECK_THROWS_AS(emb.embed(" \t "), DataError);
}

TEST_CASE("sibling receivables are closer than an unrelated non-current account") {
    TrigramEmbedder emb;
    const std::string customers = "Asset Current assets Accounts receivable Customers";
    const std::string duplicates = "Asset Current assets Accounts receivable Duplicates";
    const std::string investments = "Asset Non-current assets Investments";
    const double near = cosine(emb.embed(customers), emb.embed(duplicates));
    const double far = cosine(emb.embed(customers), emb.embed(investments));
    // Frozen from the sparse oracle.
    CHECK(near == doctest::Approx(sparse_cosine(customers, duplicates)).epsilon(1e-12));
    CHECK(far == doctest::Approx(sparse_cosine(customers, investments)).epsilon(1e-12));
    CHECK(near > far);
}

TEST_CASE("match_account on the Table 1 customer account lands on 11200") {
    const Chart chart = table1_chart();
    auto m = match_account(*chart.find("1.1.2.001"), chart, default_index());
    CHECK(m.target == AccountCode{11200});
    CHECK(m.original_code == "1.1.2.001");
    CHECK_FALSE(m.low_confidence);
}

TEST_CASE("paraphrased receivable matches 11200, agreeing with brute force") {
    const std::string q = "Asset Current assets Receivables from clients";
    CHECK(brute_force_target(q) == AccountCode{11200});
    CHECK(match_description(q, default_index()).target == AccountCode{11200});
}

TEST_CASE("every reference description matches itself") {
    for (const auto& e : default_index().entries()) {
        auto m = match_description(e.description, default_index());
        CHECK(m.similarity >= 1.0 - 1e-9);
        // Duplicated descriptions on two targets would make this ambiguous;
        // the shipped index has none.
        CHECK(m.target == e.target);
    }
}

TEST_CASE("matching is deterministic and independent of index order") {
    auto shared = std::make_shared<TrigramEmbedder>();
    std::vector<ReferenceEntry> entries = default_index().entries();
    std::mt19937_64 gen(7);
    std::shuffle(entries.begin(), entries.end(), gen);
    ReferenceIndex shuffled(shared);
    for (const auto& e : entries) shuffled.add(e.description, e.target);

    for (const char* q : {"Asset Current assets Receivables from clients", "Liabilities bank loan",
                          "Result Costs and expenses Rent", "Cash"}) {
        auto a = match_description(q, default_index());
        auto b = match_description(q, shuffled);
        CHECK(a.target == b.target);
        CHECK(a.matched_description == b.matched_description);
        CHECK(a.similarity == b.similarity);
        auto again = match_description(q, default_index());
        CHECK(again.similarity == a.similarity);
    }
}

TEST_CASE("ties are broken by lowest target code, then description") {
    ReferenceIndex idx(std::make_shared<TrigramEmbedder>());
    idx.add("same text", AccountCode{21100});
    idx.add("same text", AccountCode{11100});
    idx.add("same  text", AccountCode{11100});
    auto m = match_description("same text", idx);
    CHECK(m.target == AccountCode{11100});
    CHECK(m.matched_description == "same  text");
}

TEST_CASE("low-confidence matches are flagged but returned") {
    auto m = match_description("zzzz qqqq", default_index());
    CHECK(m.low_confidence);
    CHECK(standard().contains(m.target));
}

TEST_CASE("validate_matcher edge cases") {
    std::vector<LabeledQuery> self;
    for (const auto& e : default_index().entries()) self.push_back({e.description, e.target});
    CHECK(validate_matcher(self, default_index()) == 1.0);

    std::vector<LabeledQuery> wrong;
    for (std::size_t i = 0; i < 10; ++i) wrong.push_back({self[i].description, AccountCode{43000}});
    CHECK(validate_matcher(wrong, default_index()) == 0.0);

    CHECK_THROWS_AS(validate_matcher({}, default_index()), ContractError);
}

TEST_CASE("perturbation corpus is seeded and every variant differs from its source") {
    auto a = make_perturbation_corpus(standard(), default_index());
    auto b = make_perturbation_corpus(standard(), default_index());
    REQUIRE(a.size() == b.size());
    CHECK(a.size() > 600);
    std::set<std::string> refs;
    for (const auto& e : default_index().entries()) refs.insert(e.description);
    std::size_t identical_to_own = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].description == b[i].description);
        CHECK(a[i].expected == b[i].expected);
        if (refs.count(a[i].description)) ++identical_to_own;
    }
    // A synonym may occasionally turn one reference into another; rare.
    CHECK(identical_to_own < a.size() / 50);

    PerturbationConfig other;
    other.seed = 1;
    auto c = make_perturbation_corpus(standard(), default_index(), other);
    bool differs = c.size() != a.size();
    for (std::size_t i = 0; !differs && i < a.size(); ++i) differs = a[i].description != c[i].description;
    CHECK(differs);
}

TEST_CASE("held-out perturbation corpus clears the 86.5% matcher threshold") {
    auto corpus = make_perturbation_corpus(standard(), default_index());
    const double acc = validate_matcher(corpus, default_index());
    MESSAGE("perturbation corpus accuracy: " << acc << " over " << corpus.size());
    CHECK(acc >= 0.865);
}

TEST_CASE("shipped validation corpus file matches the generator") {
    auto shipped = read_corpus_jsonl(kData / "matcher_validation.jsonl");
    auto generated = make_perturbation_corpus(standard(), default_index());
    REQUIRE(shipped.size() == generated.size());
    for (std::size_t i = 0; i < shipped.size(); ++i) {
        CHECK(shipped[i].description == generated[i].description);
        CHECK(shipped[i].expected == generated[i].expected);
    }
}

TEST_CASE("match table CSV round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "finimg_test_chart";
    std::filesystem::create_directories(dir);
    const Chart chart = table1_chart();
    auto matches = normalize_chart(chart, default_index());
    write_match_table(dir / "m.csv", matches);
    auto back = read_match_table(dir / "m.csv");
    REQUIRE(back.size() == matches.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].original_code == matches[i].original_code);
        CHECK(back[i].target == matches[i].target);
        CHECK(back[i].similarity == doctest::Approx(matches[i].similarity).epsilon(1e-6));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("external vectors load through the pluggable index") {
    const auto dir = std::filesystem::temp_directory_path() / "finimg_test_ext";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "idx.jsonl");
        f << R"({"description":"alpha","target_code":11100,"vector":[1,0,0]})" "\n"
          << R"({"description":"beta","target_code":21100,"vector":[0,2,0]})" "\n";
        std::ofstream q(dir / "q.jsonl");
        q << R"({"description":"query","vector":[0.1,0.9,0]})" "\n";
    }
    auto lookup = std::make_shared<LookupEmbedder>(LookupEmbedder::load_jsonl(dir / "q.jsonl"));
    auto idx = ReferenceIndex::load_jsonl(dir / "idx.jsonl", standard(), lookup);
    auto m = match_description("query", idx);
    CHECK(m.target == AccountCode{21100});
    CHECK_THROWS_AS(match_description("unknown text", idx), DataError);
    std::filesystem::remove_all(dir);
}
