#include "finimg/image/code_tables.hpp"

#include <cstdlib>

#include "finimg/common/csv.hpp"
#include "finimg/common/error.hpp"

namespace finimg::image {
namespace {

double parse_rate(const std::string& text, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0') throw DataError(where + ": malformed rate '" + text + "'");
    return v;
}

}  // namespace

CodeTable CodeTable::load_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": empty code table");
    const auto col = csv::require_columns(rows[0], {"name", "code"}, path.string());
    CodeTable t;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = path.string() + " line " + std::to_string(r + 1);
        const auto& row = rows[r];
        if (row.size() < rows[0].size()) throw DataError(where + ": missing fields");
        char* end = nullptr;
        const long code = std::strtol(row[col[1]].c_str(), &end, 10);
        if (row[col[1]].empty() || *end != '\0' || code < 0 || code > 255)
            throw DataError(where + ": code '" + row[col[1]] + "' is not an integer in [0, 255]");
        if (!t.codes_.emplace(row[col[0]], static_cast<int>(code)).second)
            throw DataError(where + ": duplicate name '" + row[col[0]] + "'");
    }
    return t;
}

int CodeTable::code(const std::string& name) const {
    auto it = codes_.find(name);
    if (it == codes_.end()) throw DataError("no code for '" + name + "'");
    return it->second;
}

InflationTable InflationTable::load_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": empty inflation table");
    const auto col =
        csv::require_columns(rows[0], {"period", "month_rate", "twelve_month_rate"}, path.string());
    InflationTable t;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const std::string where = path.string() + " line " + std::to_string(r + 1);
        const auto& row = rows[r];
        if (row.size() < rows[0].size()) throw DataError(where + ": missing fields");
        Period p;
        try {
            p = Period::parse(row[col[0]]);
        } catch (const DataError& e) {
            throw DataError(where + ": " + e.what());
        }
        const InflationRates rates{parse_rate(row[col[1]], where), parse_rate(row[col[2]], where)};
        if (!t.rates_.emplace(p, rates).second)
            throw DataError(where + ": duplicate period " + p.to_string());
    }
    if (t.rates_.empty()) throw DataError(path.string() + ": no rows");
    return t;
}

InflationRates InflationTable::at(Period p) const {
    auto it = rates_.find(p);
    if (it == rates_.end())
        throw DataError("no inflation figures for " + p.to_string() + " (table covers " +
                        first().to_string() + " to " + last().to_string() + ")");
    return it->second;
}

InflationRates InflationTable::at_cycled(Period p) const {
    if (rates_.empty()) throw DataError("inflation table is empty");
    const int span = first().months_until(last()) + 1;
    int offset = first().months_until(p) % span;
    if (offset < 0) offset += span;
    return at(first().plus(offset));
}

}  // namespace finimg::image
