#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "finimg/common/error.hpp"
#include "finimg/ledger/analysis.hpp"
#include "finimg/ledger/ratio_expression.hpp"

namespace finimg::ledger {

inline constexpr std::size_t kWindowMonths = 12;

struct VectorMetadata {
    int division = 0;
    int group = 0;
    int region_code = 0;
    int country_code = 0;
    double inflation_month = 0.0;
    double inflation_12m = 0.0;
};

struct MonthlyVector {
    std::string company_id;
    Period period;
    int division = 0;
    int group = 0;
    int region_code = 0;
    int country_code = 0;
    double inflation_month = 0.0;
    double inflation_12m = 0.0;
    Row vertical{};
    Row horizontal{};
    std::array<std::optional<double>, kVectorWidth> ratios{};
    bool valid = false;
};

/// Builds the vector for `series.back()`. The element before it, when
/// present, is the predecessor for horizontal analysis (zeros otherwise);
/// earlier elements serve lagged ratio references. `ratios` must hold 21
/// definitions.
MonthlyVector build_monthly_vector(std::span<const MonthlyBalance> series,
                                   const VectorMetadata& metadata,
                                   std::span<const RatioDefinition> ratios);

class InsufficientHistory : public DataError {
public:
    using DataError::DataError;
};

/// The twelve months ending at `anchor`, oldest first. `vectors` holds one
/// company's months in chronological order. Throws InsufficientHistory when
/// fewer than twelve consecutive valid months end at the anchor.
std::vector<MonthlyVector> select_window(std::span<const MonthlyVector> vectors, Period anchor);

nlohmann::json to_json(const MonthlyVector& v);
MonthlyVector monthly_vector_from_json(const nlohmann::json& j);

void write_vectors_jsonl(const std::filesystem::path& path, std::span<const MonthlyVector> vectors);
std::vector<MonthlyVector> read_vectors_jsonl(const std::filesystem::path& path);

}  // namespace finimg::ledger
