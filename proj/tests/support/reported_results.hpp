#pragma once

// Precision, recall and F1 of eight reference training runs, as printed
// (percentages rounded to 0.1 points).

#include <array>

#include "finimg/eval/metrics.hpp"

namespace finimg::testing {

inline constexpr std::array<eval::ReportedRow, 8> kReportedRuns{{
    {0.968, 0.899, 0.932},
    {0.994, 0.956, 0.974},
    {0.681, 0.874, 0.765},
    {0.693, 0.836, 0.758},
    {0.965, 0.971, 0.968},
    {0.991, 0.968, 0.979},
    {0.759, 0.682, 0.719},
    {0.991, 0.937, 0.963},
}};

}  // namespace finimg::testing
