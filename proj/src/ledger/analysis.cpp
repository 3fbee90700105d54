#include "finimg/ledger/analysis.hpp"

#include <algorithm>
#include <cstdlib>

#include "finimg/common/error.hpp"

namespace finimg::ledger {

VerticalAnalysis vertical_analysis(const MonthlyBalance& balance) {
    VerticalAnalysis out;
    const Cents total = balance.total_assets();
    if (total <= 0) return out;
    const double denom = static_cast<double>(total);
    for (std::size_t i = 0; i < kVectorWidth; ++i)
        out.values[i] = static_cast<double>(balance.balance(chart::kVectorAccounts[i])) / denom;
    Cents class1 = 0;
    for (const auto& [code, amount] : balance.balances)
        if (code.account_class() == 1) class1 += amount;
    out.total_assets_share = static_cast<double>(class1) / denom;
    out.valid = true;
    return out;
}

double horizontal_change(Cents prev, Cents curr) {
    if (prev == 0) {
        if (curr == 0) return 0.0;
        return curr > 0 ? kSaturation : -kSaturation;
    }
    const double change = static_cast<double>(curr - prev) / static_cast<double>(std::llabs(prev));
    return std::clamp(change, -kSaturation, kSaturation);
}

Row horizontal_analysis(const MonthlyBalance& prev, const MonthlyBalance& curr) {
    if (prev.company_id != curr.company_id)
        throw ContractError("horizontal analysis across companies " + prev.company_id + " and " +
                            curr.company_id);
    if (prev.period.next() != curr.period)
        throw ContractError("horizontal analysis needs consecutive months, got " +
                            prev.period.to_string() + " and " + curr.period.to_string());
    Row out{};
    for (std::size_t i = 0; i < kVectorWidth; ++i) {
        const AccountCode code = chart::kVectorAccounts[i];
        out[i] = horizontal_change(prev.balance(code), curr.balance(code));
    }
    return out;
}

}  // namespace finimg::ledger
