#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "finimg/common/account_code.hpp"

namespace finimg::chart {

struct StandardAccount {
    AccountCode code;
    int level = 1;
    std::string description;
    AccountCode parent;  // value 0 for level-1 accounts
};

/// The 21 accounts that feed the monthly vector, in their canonical order.
inline constexpr std::array<AccountCode, 21> kVectorAccounts{{
    {11100}, {11200}, {11300}, {11500}, {13200}, {13300}, {13400},
    {21100}, {21200}, {22000}, {22300}, {23000},
    {31100}, {32100}, {32200}, {32300}, {32400}, {32500}, {32700}, {32800}, {32900},
}};

inline constexpr std::array<int, 4> kStandardLevelCounts{4, 12, 42, 150};
inline constexpr std::size_t kStandardAccountCount = 208;

/// The 208-account target chart. Construction enforces the level counts,
/// parent links, and presence of every vector account.
class StandardChart {
public:
    explicit StandardChart(std::vector<StandardAccount> accounts);

    static StandardChart load_json(const std::filesystem::path& path);

    const std::vector<StandardAccount>& accounts() const { return accounts_; }
    bool contains(AccountCode code) const { return by_code_.count(code) != 0; }
    const StandardAccount& at(AccountCode code) const;

    /// Root-first descriptions of the account and its ancestors.
    std::vector<std::string> description_path(AccountCode code) const;
    std::string full_description(AccountCode code) const;

private:
    std::vector<StandardAccount> accounts_;
    std::map<AccountCode, std::size_t> by_code_;
};

}  // namespace finimg::chart
