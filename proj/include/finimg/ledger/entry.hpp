#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finimg/chart/matcher.hpp"
#include "finimg/chart/standard_chart.hpp"
#include "finimg/common/account_code.hpp"
#include "finimg/common/period.hpp"

namespace finimg::ledger {

/// Currency amounts are held as integer cents so that sums are exact and
/// scaling every amount by an integer factor scales every balance exactly.
using Cents = std::int64_t;

/// Non-negative dot-decimal amount with at most two decimals ("1234.5").
Cents parse_amount(std::string_view text);
std::string format_amount(Cents cents);

/// A posting as read from a ledger export, against the source chart's code.
struct RawEntry {
    std::string company_id;
    Date date;
    std::string account;
    Cents debit = 0;
    Cents credit = 0;
};

/// A posting against the standardized chart.
struct AccountingEntry {
    std::string company_id;
    Date date;
    AccountCode account;
    Cents debit = 0;
    Cents credit = 0;
};

/// CSV with header company_id,date,account_code,debit,credit.
std::vector<RawEntry> read_entries_csv(const std::filesystem::path& path);
/// JSON Lines with the same field names; amounts may be numbers or strings.
std::vector<RawEntry> read_entries_jsonl(const std::filesystem::path& path);
/// Dispatches on extension (.jsonl -> JSON Lines, anything else CSV).
std::vector<RawEntry> read_entries(const std::filesystem::path& path);

void write_entries_csv(const std::filesystem::path& path, std::span<const RawEntry> entries);
void write_entries_jsonl(const std::filesystem::path& path, std::span<const RawEntry> entries);

/// Translates source-chart codes to standard codes using a match table.
/// Codes that are already standard pass through when no mapping exists.
class AccountMapping {
public:
    AccountMapping() = default;
    explicit AccountMapping(std::span<const chart::AccountMatch> matches);

    AccountingEntry apply(const RawEntry& raw, const chart::StandardChart& chart) const;
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::string, AccountCode> map_;
};

}  // namespace finimg::ledger
