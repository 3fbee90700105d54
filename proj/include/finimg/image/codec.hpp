#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "finimg/ledger/monthly_vector.hpp"

namespace finimg::image {

struct Pixel {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    constexpr auto operator<=>(const Pixel&) const = default;
};

enum class Variant { accounts, ratios };

std::string_view to_string(Variant v);
/// Accepts "accounts" or "ratios". Throws DataError.
Variant parse_variant(std::string_view text);

inline constexpr int kImageSide = 24;
inline constexpr int kHeaderColumns = 3;
inline constexpr std::size_t kImageBytes = kImageSide * kImageSide * 3;
inline constexpr std::uint8_t kBaseline = 125;

/// (division, last group digit * 10, region). The group's leading digits
/// must equal the division.
Pixel encode_region_pixel(int division, int group, int region_code);
/// ((year - 1970) * 2, month * 10, country).
Pixel encode_period_pixel(int year, int month, int country_code);
/// (100, sqrt-coded monthly rate, sqrt-coded 12-month rate).
Pixel encode_inflation_pixel(double month_rate, double year_rate);

/// clamp(floor(125 + sign(v) * sqrt|v| * 100), 0, 255). Undefined maps to 125.
std::uint8_t encode_scalar(double v);
std::uint8_t encode_scalar(std::optional<double> v);
/// sign(c - 125) * ((c - 125) / 100)^2.
double decode_scalar(std::uint8_t c);

/// Data pixel: R = encode_scalar(v), G = linear 125 + v * 100, B = sqrt|v| * 100.
Pixel encode_value(double v);

struct CompanyImage {
    std::string company_id;
    Period anchor;
    Variant variant = Variant::accounts;
    int label = 0;
    /// Row-major RGB.
    std::array<std::uint8_t, kImageBytes> pixels{};

    Pixel at(int row, int col) const;
    void set(int row, int col, Pixel p);
};

/// Month m of the window fills rows 2m and 2m+1: three header pixels then
/// 21 values. Accounts images put vertical analysis on the first row and
/// horizontal on the second; ratios images repeat the ratios on both.
CompanyImage compose_image(std::span<const ledger::MonthlyVector> window, Variant variant,
                           int label = 0);

}  // namespace finimg::image
