#include "finimg/chart/chart.hpp"

#include <algorithm>
#include <sstream>

#include "finimg/common/csv.hpp"
#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::chart {

Chart::Chart(std::vector<ChartAccount> accounts) : accounts_(std::move(accounts)) {
    for (std::size_t i = 0; i < accounts_.size(); ++i) {
        const auto& a = accounts_[i];
        if (a.code.empty()) throw DataError("chart account with empty code");
        if (a.level < 1 || a.level > 4)
            throw DataError("account " + a.code + ": level " + std::to_string(a.level) +
                            " outside 1..4");
        if (a.code.find('.') != std::string::npos && dotted_code_level(a.code) != a.level)
            throw DataError("account " + a.code + ": level " + std::to_string(a.level) +
                            " does not match its code");
        if (!by_code_.emplace(a.code, i).second)
            throw DataError("duplicate account code " + a.code);
    }
}

const ChartAccount* Chart::find(const std::string& code) const {
    auto it = by_code_.find(code);
    return it == by_code_.end() ? nullptr : &accounts_[it->second];
}

std::vector<const ChartAccount*> Chart::lineage(const std::string& code) const {
    std::vector<const ChartAccount*> chain;
    const ChartAccount* cur = find(code);
    if (!cur) throw DataError("account " + code + " is not in the chart");
    chain.push_back(cur);
    while (cur->level > 1) {
        if (!cur->parent)
            throw DataError("account " + cur->code + " (level " + std::to_string(cur->level) +
                            ") has no parent");
        const ChartAccount* up = find(*cur->parent);
        if (!up)
            throw DataError("account " + cur->code + ": parent " + *cur->parent +
                            " is missing from the chart");
        if (up->level != cur->level - 1)
            throw DataError("account " + cur->code + ": parent " + up->code + " is at level " +
                            std::to_string(up->level) + ", expected " +
                            std::to_string(cur->level - 1));
        chain.push_back(up);
        cur = up;
    }
    std::reverse(chain.begin(), chain.end());
    return chain;
}

int dotted_code_level(const std::string& code) {
    if (code.empty()) return 0;
    return static_cast<int>(std::count(code.begin(), code.end(), '.')) + 1;
}

std::string strip_numeric_prefix(const std::string& description) {
    std::istringstream in(description);
    std::string token, out;
    bool leading = true;
    while (in >> token) {
        if (leading && std::all_of(token.begin(), token.end(), [](char c) {
                return (c >= '0' && c <= '9') || c == '.' || c == '-';
            }))
            continue;
        leading = false;
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

std::string concat_full_description(const ChartAccount& account, const Chart& chart) {
    std::string out;
    auto append = [&out](const std::string& desc) {
        std::string part = strip_numeric_prefix(desc);
        if (part.empty()) return;
        if (!out.empty()) out.push_back(' ');
        out += part;
    };
    if (account.level > 1) {
        if (!account.parent)
            throw DataError("account " + account.code + " (level " +
                            std::to_string(account.level) + ") has no parent");
        const ChartAccount* parent = chart.find(*account.parent);
        if (!parent)
            throw DataError("account " + account.code + ": parent " + *account.parent +
                            " is missing from the chart");
        for (const ChartAccount* a : chart.lineage(parent->code)) append(a->description);
        if (parent->level != account.level - 1)
            throw DataError("account " + account.code + ": parent " + parent->code +
                            " is not one level up");
    }
    append(account.description);
    return out;
}

Chart read_chart_csv(const std::filesystem::path& path) {
    auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": empty chart file");
    const auto col = csv::require_columns(rows[0], {"code", "level", "description", "parent"},
                                          path.string());
    std::vector<ChartAccount> accounts;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < rows[0].size())
            throw DataError(path.string() + ": row " + std::to_string(r + 1) + " has " +
                            std::to_string(row.size()) + " fields");
        ChartAccount a;
        a.code = row[col[0]];
        try {
            a.level = std::stoi(row[col[1]]);
        } catch (const std::exception&) {
            throw DataError(path.string() + ": row " + std::to_string(r + 1) +
                            ": bad level '" + row[col[1]] + "'");
        }
        a.description = row[col[2]];
        if (!row[col[3]].empty()) a.parent = row[col[3]];
        accounts.push_back(std::move(a));
    }
    return Chart(std::move(accounts));
}

void write_chart_csv(const std::filesystem::path& path, const std::vector<ChartAccount>& accounts) {
    std::string out = "code,level,description,parent\n";
    for (const auto& a : accounts)
        out += csv::format_row({a.code, std::to_string(a.level), a.description,
                                a.parent.value_or("")});
    files::write_text(path, out);
}

}  // namespace finimg::chart
