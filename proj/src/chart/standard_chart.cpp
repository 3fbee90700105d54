#include "finimg/chart/standard_chart.hpp"

#include <algorithm>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::chart {

StandardChart::StandardChart(std::vector<StandardAccount> accounts)
    : accounts_(std::move(accounts)) {
    std::sort(accounts_.begin(), accounts_.end(),
              [](const auto& a, const auto& b) { return a.code < b.code; });
    std::array<int, 4> counts{};
    for (std::size_t i = 0; i < accounts_.size(); ++i) {
        const auto& a = accounts_[i];
        if (!is_well_formed(a.code))
            throw DataError("standard code " + a.code.to_string() + " is not five digits");
        if (a.level != a.code.level())
            throw DataError("standard account " + a.code.to_string() + ": level " +
                            std::to_string(a.level) + " disagrees with its code");
        if (!by_code_.emplace(a.code, i).second)
            throw DataError("duplicate standard code " + a.code.to_string());
        ++counts[static_cast<std::size_t>(a.level - 1)];
    }
    for (const auto& a : accounts_) {
        if (a.level == 1) continue;
        auto it = by_code_.find(a.parent);
        if (it == by_code_.end() || accounts_[it->second].level != a.level - 1 ||
            !a.parent.contains(a.code))
            throw DataError("standard account " + a.code.to_string() + ": invalid parent " +
                            a.parent.to_string());
    }
    if (accounts_.size() != kStandardAccountCount || counts != kStandardLevelCounts)
        throw DataError("standard chart must hold 4/12/42/150 accounts per level, got " +
                        std::to_string(counts[0]) + "/" + std::to_string(counts[1]) + "/" +
                        std::to_string(counts[2]) + "/" + std::to_string(counts[3]));
    for (AccountCode c : kVectorAccounts)
        if (!contains(c))
            throw DataError("standard chart lacks vector account " + c.to_string());
}

StandardChart StandardChart::load_json(const std::filesystem::path& path) {
    const auto doc = files::read_json(path);
    if (!doc.is_array()) throw DataError(path.string() + ": expected a JSON array");
    std::vector<StandardAccount> accounts;
    try {
        for (const auto& item : doc) {
            StandardAccount a;
            a.code = AccountCode{item.at("code").get<int>()};
            a.level = item.at("level").get<int>();
            a.description = item.at("description").get<std::string>();
            if (item.contains("parent") && !item["parent"].is_null())
                a.parent = AccountCode{item["parent"].get<int>()};
            accounts.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return StandardChart(std::move(accounts));
}

const StandardAccount& StandardChart::at(AccountCode code) const {
    auto it = by_code_.find(code);
    if (it == by_code_.end()) throw DataError("unknown standard code " + code.to_string());
    return accounts_[it->second];
}

std::vector<std::string> StandardChart::description_path(AccountCode code) const {
    std::vector<std::string> path;
    const StandardAccount* a = &at(code);
    while (true) {
        path.push_back(a->description);
        if (a->level == 1) break;
        a = &at(a->parent);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::string StandardChart::full_description(AccountCode code) const {
    std::string out;
    for (const auto& part : description_path(code)) {
        if (!out.empty()) out.push_back(' ');
        out += part;
    }
    return out;
}

}  // namespace finimg::chart
