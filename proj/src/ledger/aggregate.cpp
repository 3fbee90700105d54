#include "finimg/ledger/balance.hpp"

#include "finimg/common/error.hpp"

namespace finimg::ledger {

int natural_sign(AccountCode code) {
    switch (code.account_class()) {
        case 2: return -1;
        case 3: return code.value / 1000 == 32 ? 1 : -1;
        default: return 1;
    }
}

Cents MonthlyBalance::balance(AccountCode code) const {
    int lo = code.value, hi = code.value;
    switch (code.level()) {
        case 1: hi = lo + 9999; break;
        case 2: hi = lo + 999; break;
        case 3: hi = lo + 99; break;
        default: break;
    }
    Cents sum = 0;
    for (auto it = balances.lower_bound(AccountCode{lo}); it != balances.end() && it->first.value <= hi;
         ++it)
        sum += it->second;
    return sum;
}

CompanyBalances aggregate_monthly(std::span<const AccountingEntry> entries,
                                  const chart::StandardChart& chart) {
    // Net natural-sign activity per company, month and account.
    std::map<std::string, std::map<Period, std::map<AccountCode, Cents>>> activity;
    for (const auto& e : entries) {
        const std::string where = "entry for company " + e.company_id + " on " + e.date.to_string();
        if (!chart.contains(e.account))
            throw DataError(where + ": unknown account code " + e.account.to_string());
        if (e.debit < 0 || e.credit < 0) throw DataError(where + ": negative amount");
        if (e.debit == 0 && e.credit == 0) throw DataError(where + ": debit and credit both zero");
        activity[e.company_id][Period::of(e.date)][e.account] +=
            natural_sign(e.account) * (e.debit - e.credit);
    }

    CompanyBalances out;
    for (const auto& [company, months] : activity) {
        auto& series = out[company];
        const Period first = months.begin()->first;
        const Period last = months.rbegin()->first;
        std::map<AccountCode, Cents> running;
        for (Period p = first; p <= last; p = p.next()) {
            if (p.month == 1 && p != first)
                for (auto it = running.begin(); it != running.end();)
                    it = resets_annually(it->first) ? running.erase(it) : std::next(it);
            if (auto it = months.find(p); it != months.end())
                for (const auto& [code, delta] : it->second) running[code] += delta;
            series.push_back({company, p, running});
        }
    }
    return out;
}

}  // namespace finimg::ledger
