#include "finimg/ledger/monthly_vector.hpp"

#include <algorithm>

#include "finimg/common/files.hpp"

namespace finimg::ledger {

MonthlyVector build_monthly_vector(std::span<const MonthlyBalance> series,
                                   const VectorMetadata& metadata,
                                   std::span<const RatioDefinition> ratios) {
    if (series.empty()) throw ContractError("build_monthly_vector needs a current balance");
    if (ratios.size() != kVectorWidth)
        throw ContractError("expected " + std::to_string(kVectorWidth) + " ratio definitions, got " +
                            std::to_string(ratios.size()));
    const std::size_t cur = series.size() - 1;
    const MonthlyBalance& balance = series[cur];
    for (std::size_t i = 0; i < cur; ++i)
        if (series[i].company_id != balance.company_id ||
            series[i].period.months_until(balance.period) != static_cast<int>(cur - i))
            throw ContractError("balance history for " + balance.company_id +
                                " is not a run of consecutive months");

    MonthlyVector v;
    v.company_id = balance.company_id;
    v.period = balance.period;
    v.division = metadata.division;
    v.group = metadata.group;
    v.region_code = metadata.region_code;
    v.country_code = metadata.country_code;
    v.inflation_month = metadata.inflation_month;
    v.inflation_12m = metadata.inflation_12m;

    const VerticalAnalysis va = vertical_analysis(balance);
    v.vertical = va.values;
    v.valid = va.valid;
    if (cur > 0) v.horizontal = horizontal_analysis(series[cur - 1], balance);
    for (std::size_t i = 0; i < kVectorWidth; ++i)
        v.ratios[i] = ratios[i].expression.evaluate(series, cur);
    return v;
}

std::vector<MonthlyVector> select_window(std::span<const MonthlyVector> vectors, Period anchor) {
    const std::string who = vectors.empty() ? std::string("company") : vectors.front().company_id;
    auto at = std::find_if(vectors.begin(), vectors.end(),
                           [&](const MonthlyVector& v) { return v.period == anchor; });
    if (at == vectors.end()) throw InsufficientHistory(who + ": no month " + anchor.to_string());
    const auto end = static_cast<std::size_t>(at - vectors.begin()) + 1;
    if (end < kWindowMonths)
        throw InsufficientHistory(who + ": only " + std::to_string(end) + " months up to " +
                                  anchor.to_string() + ", need " + std::to_string(kWindowMonths));
    std::vector<MonthlyVector> window(vectors.begin() + static_cast<std::ptrdiff_t>(end - kWindowMonths),
                                      vectors.begin() + static_cast<std::ptrdiff_t>(end));
    for (std::size_t i = 0; i < window.size(); ++i) {
        if (window[i].period != anchor.plus(static_cast<int>(i) - static_cast<int>(kWindowMonths - 1)))
            throw InsufficientHistory(who + ": months before " + anchor.to_string() +
                                      " are not consecutive");
        if (!window[i].valid)
            throw InsufficientHistory(who + ": month " + window[i].period.to_string() +
                                      " is invalid (total assets <= 0)");
    }
    return window;
}

namespace {

Row row_from_json(const nlohmann::json& j, const char* field) {
    const auto& a = j.at(field);
    if (!a.is_array() || a.size() != kVectorWidth)
        throw DataError(std::string("field '") + field + "' must hold " +
                        std::to_string(kVectorWidth) + " numbers");
    Row r{};
    for (std::size_t i = 0; i < kVectorWidth; ++i) r[i] = a[i].get<double>();
    return r;
}

std::string dump_ordered(const MonthlyVector& v) {
    nlohmann::ordered_json j;
    j["company_id"] = v.company_id;
    j["period"] = v.period.to_string();
    j["division"] = v.division;
    j["group"] = v.group;
    j["region_code"] = v.region_code;
    j["country_code"] = v.country_code;
    j["inflation_month"] = v.inflation_month;
    j["inflation_12m"] = v.inflation_12m;
    j["vertical"] = v.vertical;
    j["horizontal"] = v.horizontal;
    auto ratios = nlohmann::ordered_json::array();
    for (const auto& r : v.ratios) ratios.push_back(r ? nlohmann::ordered_json(*r) : nullptr);
    j["ratios"] = ratios;
    j["valid"] = v.valid;
    return j.dump();
}

}  // namespace

nlohmann::json to_json(const MonthlyVector& v) { return nlohmann::json::parse(dump_ordered(v)); }

MonthlyVector monthly_vector_from_json(const nlohmann::json& j) {
    try {
        MonthlyVector v;
        v.company_id = j.at("company_id").get<std::string>();
        v.period = Period::parse(j.at("period").get<std::string>());
        v.division = j.at("division").get<int>();
        v.group = j.at("group").get<int>();
        v.region_code = j.at("region_code").get<int>();
        v.country_code = j.at("country_code").get<int>();
        v.inflation_month = j.at("inflation_month").get<double>();
        v.inflation_12m = j.at("inflation_12m").get<double>();
        v.vertical = row_from_json(j, "vertical");
        v.horizontal = row_from_json(j, "horizontal");
        const auto& r = j.at("ratios");
        if (!r.is_array() || r.size() != kVectorWidth)
            throw DataError("field 'ratios' must hold " + std::to_string(kVectorWidth) + " entries");
        for (std::size_t i = 0; i < kVectorWidth; ++i)
            if (!r[i].is_null()) v.ratios[i] = r[i].get<double>();
        v.valid = j.at("valid").get<bool>();
        return v;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("monthly vector: ") + e.what());
    }
}

void write_vectors_jsonl(const std::filesystem::path& path, std::span<const MonthlyVector> vectors) {
    std::string out;
    for (const auto& v : vectors) out += dump_ordered(v) + "\n";
    files::write_text(path, out);
}

std::vector<MonthlyVector> read_vectors_jsonl(const std::filesystem::path& path) {
    std::vector<MonthlyVector> out;
    std::size_t n = 0;
    for (const auto& j : files::read_jsonl(path)) {
        ++n;
        try {
            out.push_back(monthly_vector_from_json(j));
        } catch (const DataError& e) {
            throw DataError(path.string() + " line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace finimg::ledger
