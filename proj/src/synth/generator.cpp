#include "finimg/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"
#include "finimg/common/hash.hpp"
#include "finimg/common/rng.hpp"

namespace finimg::synth {

using ledger::Cents;

nlohmann::ordered_json to_json(const SynthConfig& c) {
    nlohmann::ordered_json j;
    j["seed"] = c.seed;
    j["n_companies"] = c.n_companies;
    j["class_ratio"] = c.class_ratio;
    j["months_per_company"] = c.months_per_company;
    j["noise_level"] = c.noise_level;
    j["start_period"] = c.start_period.to_string();
    j["start_spread_months"] = c.start_spread_months;
    auto divisions = nlohmann::ordered_json::array();
    for (const auto& d : c.divisions)
        divisions.push_back({{"division", d.division}, {"group", d.group}, {"weight", d.weight}});
    j["divisions"] = divisions;
    j["region_codes"] = c.region_codes;
    j["country_codes"] = c.country_codes;
    return j;
}

void validate(const SynthConfig& c) {
    if (c.n_companies <= 0) throw DataError("synth: n_companies must be positive");
    if (!(c.class_ratio >= 0.0 && c.class_ratio <= 1.0)) throw DataError("synth: class_ratio must lie in [0, 1]");
    if (c.months_per_company < 13) throw DataError("synth: months_per_company must be at least 13");
    if (!(c.noise_level >= 0.0)) throw DataError("synth: noise_level must be non-negative");
    if (c.start_spread_months <= 0) throw DataError("synth: start_spread_months must be positive");
    if (c.divisions.empty()) throw DataError("synth: divisions must not be empty");
    double total = 0.0;
    for (const auto& d : c.divisions) {
        if (d.group / 10 != d.division || d.division < 0 || d.division > 255)
            throw DataError("synth: group " + std::to_string(d.group) + " is not in division " +
                            std::to_string(d.division));
        if (!(d.weight >= 0.0)) throw DataError("synth: division weights must be non-negative");
        total += d.weight;
    }
    if (!(total > 0.0)) throw DataError("synth: division weights sum to zero");
    if (c.region_codes.empty() || c.country_codes.empty())
        throw DataError("synth: region and country code pools must not be empty");
    for (int code : c.region_codes)
        if (code < 0 || code > 255) throw DataError("synth: region code outside [0, 255]");
    for (int code : c.country_codes)
        if (code < 0 || code > 255) throw DataError("synth: country code outside [0, 255]");
}

SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c;
    try {
        c.seed = j.value("seed", c.seed);
        c.n_companies = j.value("n_companies", c.n_companies);
        c.class_ratio = j.value("class_ratio", c.class_ratio);
        c.months_per_company = j.value("months_per_company", c.months_per_company);
        c.noise_level = j.value("noise_level", c.noise_level);
        if (j.contains("start_period")) c.start_period = Period::parse(j.at("start_period").get<std::string>());
        c.start_spread_months = j.value("start_spread_months", c.start_spread_months);
        if (j.contains("divisions")) {
            c.divisions.clear();
            for (const auto& d : j.at("divisions"))
                c.divisions.push_back({d.at("division").get<int>(), d.at("group").get<int>(), d.value("weight", 1.0)});
        }
        c.region_codes = j.value("region_codes", c.region_codes);
        c.country_codes = j.value("country_codes", c.country_codes);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("synth config: ") + e.what());
    }
    validate(c);
    return c;
}

std::vector<int> assign_labels(const SynthConfig& c) {
    const auto n = static_cast<std::size_t>(c.n_companies);
    const auto positives = static_cast<std::size_t>(std::floor(c.class_ratio * static_cast<double>(n) + 0.5));
    Rng rng(mix_seed(c.seed, 0x1abe1));
    const auto perm = rng.permutation(n);
    std::vector<int> labels(n, 0);
    for (std::size_t k = 0; k < positives; ++k) labels[perm[k]] = 1;
    return labels;
}

std::string company_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%05zu", index);
    return buf;
}

namespace {

struct SourceAccount {
    const char* code;
    int level;
    const char* description;
    int target;  // 0 for synthetic ancestors
};

// Legacy chart: dotted codes, numeric prefixes on the leaves, wording close
// to but not always equal to the standard descriptions.
constexpr SourceAccount kSource[] = {
    {"1", 1, "Asset", 0},
    {"1.1", 2, "Current assets", 0},
    {"1.1.1", 3, "Cash and cash equivalents", 0},
    {"1.1.1.001", 4, "001 Cash on hand", 11101},
    {"1.1.1.002", 4, "002 Bank accounts", 11102},
    {"1.1.2", 3, "Customers", 0},
    {"1.1.2.001", 4, "001 Domestic customers", 11201},
    {"1.1.3", 3, "Stock", 0},
    {"1.1.3.001", 4, "001 Merchandise for resale", 11301},
    {"1.1.5", 3, "Short-term investments", 0},
    {"1.1.5.001", 4, "001 Bank deposit certificates", 11501},
    {"1.3", 2, "Permanent assets", 0},
    {"1.3.2", 3, "Investments", 0},
    {"1.3.2.001", 4, "001 Equity interests in subsidiaries", 13201},
    {"1.3.3", 3, "Fixed assets", 0},
    {"1.3.3.001", 4, "001 Machinery and equipment", 13303},
    {"1.3.4", 3, "Intangible assets", 0},
    {"1.3.4.001", 4, "001 Software", 13401},
    {"2", 1, "Liabilities", 0},
    {"2.1", 2, "Current liabilities", 0},
    {"2.1.1", 3, "Suppliers", 0},
    {"2.1.1.001", 4, "001 Domestic suppliers", 21101},
    {"2.1.2", 3, "Loans and financing", 0},
    {"2.1.2.001", 4, "001 Bank loans", 21201},
    {"2.2", 2, "Non-current liabilities", 0},
    {"2.2.1", 3, "Long-term loans and financing", 0},
    {"2.2.1.001", 4, "001 Long-term bank loans", 22101},
    {"2.2.3", 3, "Other long-term liabilities", 0},
    {"2.2.3.001", 4, "001 Installment tax debts", 22301},
    {"2.3", 2, "Net worth", 0},
    {"2.3.1", 3, "Share capital", 0},
    {"2.3.1.001", 4, "001 Subscribed capital", 23101},
    {"2.3.4", 3, "Accumulated profits or losses", 0},
    {"2.3.4.001", 4, "001 Accumulated profits", 23401},
    {"3", 1, "Result", 0},
    {"3.1", 2, "Revenues", 0},
    {"3.1.1", 3, "Sales revenue", 0},
    {"3.1.1.001", 4, "001 Sales of goods", 31101},
    {"3.2", 2, "Costs and expenses", 0},
    {"3.2.1", 3, "Cost of goods sold", 0},
    {"3.2.1.001", 4, "001 Cost of merchandise sold", 32101},
    {"3.2.2", 3, "Operational expenses", 0},
    {"3.2.2.001", 4, "001 Selling expenses", 32201},
    {"3.2.3", 3, "Financial expenses", 0},
    {"3.2.3.001", 4, "001 Interest expenses", 32301},
    {"3.2.4", 3, "Other operating expenses", 0},
    {"3.2.4.001", 4, "001 Insurance expenses", 32401},
    {"3.2.5", 3, "Income tax and contributions", 0},
    {"3.2.5.001", 4, "001 Income tax provision", 32501},
    {"3.2.7", 3, "Direct costs of services", 0},
    {"3.2.7.001", 4, "001 Direct labor", 32701},
    {"3.2.8", 3, "Costs of services", 0},
    {"3.2.8.001", 4, "001 Professional staff", 32801},
    {"3.2.9", 3, "Administrative expenses", 0},
    {"3.2.9.001", 4, "001 Administrative salaries", 32901},
};

std::string parent_of(const std::string& code) {
    const auto dot = code.rfind('.');
    return dot == std::string::npos ? std::string() : code.substr(0, dot);
}

// Balance-sheet series, in posting order; the last is the balancing equity.
enum Stock { cash, bank, receivables, inventory, deposits, holdings, machinery, software,
             suppliers, loans, lt_loans, tax_debts, capital, retained, kStocks };
constexpr const char* kStockCode[kStocks] = {"1.1.1.001", "1.1.1.002", "1.1.2.001", "1.1.3.001", "1.1.5.001",
                                             "1.3.2.001", "1.3.3.001", "1.3.4.001", "2.1.1.001", "2.1.2.001",
                                             "2.2.1.001", "2.2.3.001", "2.3.1.001", "2.3.4.001"};
constexpr bool kIsAsset[kStocks] = {true, true, true, true, true, true, true, true,
                                    false, false, false, false, false, false};

enum Flow { sales, cogs, selling, interest, insurance, income_tax, labor, services, admin, kFlows };
constexpr const char* kFlowCode[kFlows] = {"3.1.1.001", "3.2.1.001", "3.2.2.001", "3.2.3.001", "3.2.4.001",
                                           "3.2.5.001", "3.2.7.001", "3.2.8.001", "3.2.9.001"};

struct Archetype {
    double revenue_growth;
    double cash_growth;
    double deposit_growth;
    double supplier_growth;  // < 0: suppliers follow revenue
    double loan_growth;
    double lt_loan_growth;
    double tax_debt_growth;
    double cogs_share;
    double tax_share;
};

constexpr Archetype kSolvent{1.01, 1.02, 1.01, -1.0, 1.00, 1.00, 1.00, 0.55, 0.03};
constexpr Archetype kDistressed{0.96, 0.88, 0.90, 1.03, 1.04, 1.01, 1.05, 0.62, 0.005};

ledger::Cents cents(double x) { return static_cast<ledger::Cents>(std::llround(x)); }

}  // namespace

const std::vector<chart::ChartAccount>& source_chart() {
    static const std::vector<chart::ChartAccount> accounts = [] {
        std::vector<chart::ChartAccount> out;
        for (const auto& s : kSource) {
            const std::string parent = parent_of(s.code);
            out.push_back({s.code, s.level, s.description,
                           parent.empty() ? std::nullopt : std::optional<std::string>(parent)});
        }
        return out;
    }();
    return accounts;
}

const std::map<std::string, AccountCode>& intended_targets() {
    static const std::map<std::string, AccountCode> targets = [] {
        std::map<std::string, AccountCode> out;
        for (const auto& s : kSource)
            if (s.target) out[s.code] = AccountCode{s.target};
        return out;
    }();
    return targets;
}

GeneratedCompany generate_company(const SynthConfig& c, std::size_t index, int label) {
    Rng rng(mix_seed(c.seed, index + 1));
    const double noise = c.noise_level;
    GeneratedCompany out;
    CompanyMeta& meta = out.meta;
    meta.company_id = company_id(index);
    meta.label = label;

    double total_weight = 0.0;
    for (const auto& d : c.divisions) total_weight += d.weight;
    double pick = rng.uniform() * total_weight;
    const DivisionChoice* division = &c.divisions.back();
    for (const auto& d : c.divisions) {
        if (pick < d.weight) {
            division = &d;
            break;
        }
        pick -= d.weight;
    }
    meta.division = division->division;
    meta.group = division->group;
    meta.region_code = c.region_codes[rng.below(c.region_codes.size())];
    meta.country_code = c.country_codes[rng.below(c.country_codes.size())];
    // Ledgers open in January so every year-to-date result covers whole years.
    const Period drawn = c.start_period.plus(static_cast<int>(rng.below(static_cast<std::uint64_t>(c.start_spread_months))));
    meta.first = Period{drawn.year, 1};
    meta.last = meta.first.plus(c.months_per_company - 1);

    const Archetype& a = label ? kDistressed : kSolvent;
    // Archetype parameters jittered once per company; monthly lognormal noise.
    auto jitter_rate = [&](double base, double sd) { return base + noise * sd * rng.normal(); };
    auto monthly = [&](double sd) { return std::exp(noise * sd * rng.normal()); };
    const double scale = 1e7 * std::exp(0.8 * rng.normal());  // monthly sales, cents
    const double g_rev = jitter_rate(a.revenue_growth, 0.01);
    const double g_cash = jitter_rate(a.cash_growth, 0.01);
    const double g_dep = jitter_rate(a.deposit_growth, 0.01);
    const double g_sup = a.supplier_growth < 0 ? -1.0 : jitter_rate(a.supplier_growth, 0.01);
    const double g_loan = jitter_rate(a.loan_growth, 0.01);
    const double g_lt = jitter_rate(a.lt_loan_growth, 0.005);
    const double g_tax = jitter_rate(a.tax_debt_growth, 0.01);
    const double cogs_share = a.cogs_share * monthly(0.05);
    const double fixed_assets = 3.0 * scale * monthly(0.2);

    std::vector<Cents> prev(kStocks, 0);
    Cents ytd_result = 0;
    for (int t = 0; t < c.months_per_company; ++t) {
        const Period p = meta.first.plus(t);
        if (p.month == 1) ytd_result = 0;
        const double trend = scale * std::pow(g_rev, t);
        auto day = [&] { return Date{p.year, p.month, 1 + static_cast<int>(rng.below(28))}; };

        std::vector<Cents> stock(kStocks, 0);
        stock[cash] = cents(0.5 * scale * std::pow(g_cash, t) * monthly(0.03));
        stock[bank] = cents(0.3 * scale * std::pow(g_cash, t) * monthly(0.03));
        stock[receivables] = cents(1.1 * trend * monthly(0.03));
        stock[inventory] = cents(0.7 * trend * monthly(0.03));
        stock[deposits] = cents(0.4 * scale * std::pow(g_dep, t) * monthly(0.03));
        stock[holdings] = cents(0.3 * scale);
        stock[machinery] = cents(fixed_assets);
        stock[software] = cents(0.2 * scale);
        stock[suppliers] = cents(0.5 * (g_sup < 0 ? trend : scale * std::pow(g_sup, t)) * monthly(0.03));
        stock[loans] = cents(0.6 * scale * std::pow(g_loan, t) * monthly(0.02));
        stock[lt_loans] = cents(1.0 * scale * std::pow(g_lt, t));
        stock[tax_debts] = cents(0.1 * scale * std::pow(g_tax, t));
        stock[capital] = cents(1.5 * scale);

        std::array<Cents, kFlows> flow{};
        flow[sales] = cents(trend * monthly(0.05));
        flow[cogs] = cents(cogs_share * static_cast<double>(flow[sales]) * monthly(0.02));
        flow[selling] = cents(0.06 * static_cast<double>(flow[sales]) * monthly(0.05));
        flow[interest] = cents(0.015 * static_cast<double>(stock[loans] + stock[lt_loans]));
        flow[insurance] = cents(0.01 * scale);
        flow[income_tax] = cents(a.tax_share * static_cast<double>(flow[sales]));
        flow[labor] = cents(0.08 * static_cast<double>(flow[sales]) * monthly(0.05));
        flow[services] = cents(0.03 * static_cast<double>(flow[sales]) * monthly(0.05));
        flow[admin] = cents(0.12 * scale * monthly(0.02));
        Cents result = flow[sales];
        for (int f = cogs; f < kFlows; ++f) result -= flow[f];
        ytd_result += result;

        // Equity absorbs the difference: assets = liabilities + equity + result.
        Cents assets = 0, claims = 0;
        for (int s = 0; s < retained; ++s) (kIsAsset[s] ? assets : claims) += stock[s];
        stock[retained] = assets - claims - ytd_result;

        for (int f = 0; f < kFlows; ++f) {
            if (flow[f] == 0) continue;
            const bool credit = f == sales;
            out.entries.push_back({meta.company_id, day(), kFlowCode[f], credit ? 0 : flow[f], credit ? flow[f] : 0});
        }
        for (int s = 0; s < kStocks; ++s) {
            const Cents delta = stock[s] - prev[s];
            if (delta == 0) continue;
            // Assets grow with debits, claims with credits.
            const bool debit = kIsAsset[s] == (delta > 0);
            const Cents amount = delta > 0 ? delta : -delta;
            out.entries.push_back({meta.company_id, day(), kStockCode[s], debit ? amount : 0, debit ? 0 : amount});
        }
        prev = stock;
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const ledger::RawEntry& x, const ledger::RawEntry& y) { return x.date < y.date; });
    return out;
}

void write_companies_jsonl(const std::filesystem::path& path, const std::vector<CompanyMeta>& companies) {
    std::string out;
    for (const auto& m : companies) {
        nlohmann::ordered_json j;
        j["company_id"] = m.company_id;
        j["division"] = m.division;
        j["group"] = m.group;
        j["region_code"] = m.region_code;
        j["country_code"] = m.country_code;
        j["first_period"] = m.first.to_string();
        j["last_period"] = m.last.to_string();
        out += j.dump() + "\n";
    }
    files::write_text(path, out);
}

std::vector<CompanyMeta> read_companies_jsonl(const std::filesystem::path& path) {
    std::vector<CompanyMeta> out;
    std::size_t line = 0;
    for (const auto& j : files::read_jsonl(path)) {
        ++line;
        try {
            CompanyMeta m;
            m.company_id = j.at("company_id").get<std::string>();
            m.division = j.at("division").get<int>();
            m.group = j.at("group").get<int>();
            m.region_code = j.at("region_code").get<int>();
            m.country_code = j.at("country_code").get<int>();
            m.first = Period::parse(j.at("first_period").get<std::string>());
            m.last = Period::parse(j.at("last_period").get<std::string>());
            out.push_back(std::move(m));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + " line " + std::to_string(line) + ": " + e.what());
        }
    }
    return out;
}

void generate_dataset(const SynthConfig& c, const std::filesystem::path& dir) {
    validate(c);
    const auto labels = assign_labels(c);
    std::vector<ledger::RawEntry> entries;
    std::vector<CompanyMeta> companies;
    std::string label_lines;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto company = generate_company(c, i, labels[i]);
        entries.insert(entries.end(), company.entries.begin(), company.entries.end());
        nlohmann::ordered_json lj;
        lj["company_id"] = company.meta.company_id;
        lj["label"] = company.meta.label;
        label_lines += lj.dump() + "\n";
        companies.push_back(std::move(company.meta));
    }
    ledger::write_entries_csv(dir / "entries.csv", entries);
    files::write_text(dir / "labels.jsonl", label_lines);
    write_companies_jsonl(dir / "companies.jsonl", companies);
    chart::write_chart_csv(dir / "source_chart.csv", source_chart());

    const auto config = to_json(c);
    std::uint64_t content = kFnvOffset64;
    nlohmann::ordered_json file_hashes;
    for (const char* name : {"entries.csv", "labels.jsonl", "companies.jsonl", "source_chart.csv"}) {
        const std::string h = files::content_hash(dir / name);
        file_hashes[name] = h;
        content = fnv1a64(h, content);
    }
    nlohmann::ordered_json manifest;
    manifest["config"] = config;
    manifest["config_hash"] = hex64(fnv1a64(config.dump()));
    manifest["files"] = file_hashes;
    manifest["content_hash"] = hex64(content);
    files::write_text(dir / "synth_manifest.json", manifest.dump(2) + "\n");
}

}  // namespace finimg::synth
