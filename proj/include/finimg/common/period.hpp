#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace finimg {

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    constexpr auto operator<=>(const Date&) const = default;

    /// Strict ISO-8601 calendar date, YYYY-MM-DD. Throws DataError.
    static Date parse(std::string_view text);
    std::string to_string() const;
};

/// A calendar month.
struct Period {
    int year = 1970;
    int month = 1;

    constexpr auto operator<=>(const Period&) const = default;

    constexpr int ordinal() const { return year * 12 + (month - 1); }
    static constexpr Period from_ordinal(int ord) { return {ord / 12, ord % 12 + 1}; }
    constexpr Period next() const { return from_ordinal(ordinal() + 1); }
    constexpr Period prev() const { return from_ordinal(ordinal() - 1); }
    constexpr Period plus(int months) const { return from_ordinal(ordinal() + months); }
    constexpr int months_until(Period later) const { return later.ordinal() - ordinal(); }

    static constexpr Period of(const Date& d) { return {d.year, d.month}; }

    /// Accepts YYYY-MM. Throws DataError.
    static Period parse(std::string_view text);
    std::string to_string() const;
};

int days_in_month(int year, int month);

}  // namespace finimg
