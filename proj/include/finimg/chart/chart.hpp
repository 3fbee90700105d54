#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace finimg::chart {

/// One account of an arbitrary (source) chart with up to four levels.
struct ChartAccount {
    std::string code;  // hierarchical, e.g. "1.1.2.001"
    int level = 1;
    std::string description;
    std::optional<std::string> parent;
};

/// A source chart of accounts, validated on construction: levels are 1..4,
/// codes are unique, every non-root account's parent exists one level up.
class Chart {
public:
    explicit Chart(std::vector<ChartAccount> accounts);

    const std::vector<ChartAccount>& accounts() const { return accounts_; }
    const ChartAccount* find(const std::string& code) const;

    /// Root-first chain ending at `code`. Throws DataError naming the first gap.
    std::vector<const ChartAccount*> lineage(const std::string& code) const;

private:
    std::vector<ChartAccount> accounts_;
    std::map<std::string, std::size_t> by_code_;
};

/// Reads `code,level,description,parent` CSV (header required).
Chart read_chart_csv(const std::filesystem::path& path);
void write_chart_csv(const std::filesystem::path& path, const std::vector<ChartAccount>& accounts);

/// Number of populated levels in a dotted code ("1.1.2.001" -> 4).
int dotted_code_level(const std::string& code);

/// Drops leading purely numeric tokens ("001 Customers" -> "Customers").
std::string strip_numeric_prefix(const std::string& description);

/// Ancestor descriptions from level 1 down to `account`, single-space joined,
/// numeric prefixes stripped. Throws DataError when an ancestor is missing.
std::string concat_full_description(const ChartAccount& account, const Chart& chart);

}  // namespace finimg::chart
