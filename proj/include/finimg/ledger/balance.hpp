#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "finimg/chart/standard_chart.hpp"
#include "finimg/ledger/entry.hpp"

namespace finimg::ledger {

/// Natural-balance sign: +1 when the balance is debits minus credits
/// (assets, expenses 32xxx, memorandum), -1 when credits minus debits
/// (liabilities and equity, revenues 31xxx, non-operating results 33xxx).
int natural_sign(AccountCode code);

/// Result accounts (class 3) restart from zero every January.
constexpr bool resets_annually(AccountCode code) { return code.account_class() == 3; }

/// Month-end balances of one company, keyed by the codes entries were posted
/// to. Reads roll up descendants, so balance(11100) includes 11101..11199.
struct MonthlyBalance {
    std::string company_id;
    Period period;
    std::map<AccountCode, Cents> balances;

    Cents balance(AccountCode code) const;
    Cents total_assets() const { return balance(AccountCode{10000}); }
};

using CompanyBalances = std::map<std::string, std::vector<MonthlyBalance>>;

/// One balance per company per month from its first to its last entry month.
/// Balance-sheet and memorandum accounts carry forward; result accounts
/// accumulate within the calendar year. Throws DataError for codes outside
/// the chart or postings with negative or all-zero amounts.
CompanyBalances aggregate_monthly(std::span<const AccountingEntry> entries,
                                  const chart::StandardChart& chart);

}  // namespace finimg::ledger
