#pragma once

#include <array>

#include "finimg/chart/standard_chart.hpp"
#include "finimg/ledger/balance.hpp"

namespace finimg::ledger {

inline constexpr std::size_t kVectorWidth = chart::kVectorAccounts.size();
using Row = std::array<double, kVectorWidth>;

/// Magnitude where the square-root pixel coding reaches 255; also the cap on
/// horizontal changes.
inline constexpr double kSaturation = 1.69;

struct VerticalAnalysis {
    Row values{};
    /// The class-1 aggregate over total assets; 1 whenever valid.
    double total_assets_share = 0.0;
    bool valid = false;
};

/// Each vector account as a share of total assets. Total assets <= 0 marks
/// the month invalid and leaves the values at zero.
VerticalAnalysis vertical_analysis(const MonthlyBalance& balance);

/// (curr - prev) / |prev|, capped to +-kSaturation. 0 -> 0 stays 0 and
/// 0 -> nonzero saturates with the sign of curr.
double horizontal_change(Cents prev, Cents curr);

/// Throws ContractError unless `curr` is the month right after `prev` for the
/// same company.
Row horizontal_analysis(const MonthlyBalance& prev, const MonthlyBalance& curr);

}  // namespace finimg::ledger
