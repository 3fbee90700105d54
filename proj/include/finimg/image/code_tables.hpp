#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "finimg/common/period.hpp"

namespace finimg::image {

/// name,code lookup (region_codes.csv, country_codes.csv).
class CodeTable {
public:
    static CodeTable load_csv(const std::filesystem::path& path);

    /// Throws DataError for unknown names.
    int code(const std::string& name) const;
    bool contains(const std::string& name) const { return codes_.count(name) != 0; }
    const std::map<std::string, int>& entries() const { return codes_; }

private:
    std::map<std::string, int> codes_;
};

struct InflationRates {
    double month = 0.0;
    double twelve_month = 0.0;
};

/// period,month_rate,twelve_month_rate with rates as decimal fractions.
class InflationTable {
public:
    static InflationTable load_csv(const std::filesystem::path& path);

    /// Throws DataError when the month is not in the table.
    InflationRates at(Period p) const;
    /// Months outside the table wrap around its span, so a table covering
    /// whole years keeps each calendar month on the same month.
    InflationRates at_cycled(Period p) const;
    bool contains(Period p) const { return rates_.count(p) != 0; }
    Period first() const { return rates_.begin()->first; }
    Period last() const { return rates_.rbegin()->first; }

private:
    std::map<Period, InflationRates> rates_;
};

}  // namespace finimg::image
