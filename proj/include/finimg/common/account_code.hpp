#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace finimg {

/// Five-digit code of the standardized chart: class, group, subgroup and a
/// two-digit detail (e.g. 11200 is class 1, group 1, subgroup 2).
struct AccountCode {
    int value = 0;

    constexpr auto operator<=>(const AccountCode&) const = default;

    constexpr int account_class() const { return value / 10000; }

    /// 1..4, derived from the trailing zeros of the code.
    constexpr int level() const {
        if (value % 10000 == 0) return 1;
        if (value % 1000 == 0) return 2;
        if (value % 100 == 0) return 3;
        return 4;
    }

    /// True when `other` is this account or one of its descendants.
    constexpr bool contains(AccountCode other) const {
        switch (level()) {
            case 1: return other.value / 10000 == value / 10000;
            case 2: return other.value / 1000 == value / 1000;
            case 3: return other.value / 100 == value / 100;
            default: return other.value == value;
        }
    }

    std::string to_string() const { return std::to_string(value); }
};

constexpr bool is_well_formed(AccountCode code) {
    return code.value >= 10000 && code.value <= 99999;
}

}  // namespace finimg

template <>
struct std::hash<finimg::AccountCode> {
    std::size_t operator()(const finimg::AccountCode& c) const noexcept {
        return std::hash<int>{}(c.value);
    }
};
