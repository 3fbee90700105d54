#include "finimg/common/period.hpp"

#include <charconv>
#include <cstdio>

#include "finimg/common/error.hpp"

namespace finimg {
namespace {

bool parse_digits(std::string_view s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

}  // namespace

int days_in_month(int year, int month) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return kDays[month - 1];
}

Date Date::parse(std::string_view text) {
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_digits(text.substr(0, 4), d.year) || !parse_digits(text.substr(5, 2), d.month) ||
        !parse_digits(text.substr(8, 2), d.day)) {
        throw DataError("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw DataError("date out of range '" + std::string(text) + "'");
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

Period Period::parse(std::string_view text) {
    Period p;
    if (text.size() != 7 || text[4] != '-' || !parse_digits(text.substr(0, 4), p.year) ||
        !parse_digits(text.substr(5, 2), p.month) || p.month < 1 || p.month > 12) {
        throw DataError("malformed period '" + std::string(text) + "', expected YYYY-MM");
    }
    return p;
}

std::string Period::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
}

}  // namespace finimg
