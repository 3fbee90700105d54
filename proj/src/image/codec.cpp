#include "finimg/image/codec.hpp"

#include <algorithm>
#include <cmath>

#include "finimg/common/error.hpp"

namespace finimg::image {
namespace {

// Keeps exact decimal inputs on the right side of the floor: sqrt(0.09) * 100
// evaluates to 29.999999999999996.
constexpr double kFloorGuard = 1e-9;

std::uint8_t to_byte(double x) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(x + kFloorGuard), 0.0, 255.0));
}

void require_byte(int value, const char* what) {
    if (value < 0 || value > 255)
        throw ContractError(std::string(what) + " " + std::to_string(value) + " outside [0, 255]");
}

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::accounts ? "accounts" : "ratios"; }

Variant parse_variant(std::string_view text) {
    if (text == "accounts") return Variant::accounts;
    if (text == "ratios") return Variant::ratios;
    throw DataError("unknown image variant '" + std::string(text) + "' (expected accounts or ratios)");
}

Pixel encode_region_pixel(int division, int group, int region_code) {
    require_byte(division, "division");
    require_byte(region_code, "region code");
    if (group < 0 || group / 10 != division)
        throw ContractError("group " + std::to_string(group) + " does not belong to division " +
                            std::to_string(division));
    return {static_cast<std::uint8_t>(division), static_cast<std::uint8_t>(group % 10 * 10),
            static_cast<std::uint8_t>(region_code)};
}

Pixel encode_period_pixel(int year, int month, int country_code) {
    if (year < 1970 || year > 2097)
        throw ContractError("year " + std::to_string(year) + " outside [1970, 2097]");
    if (month < 1 || month > 12) throw ContractError("month " + std::to_string(month) + " outside [1, 12]");
    require_byte(country_code, "country code");
    return {static_cast<std::uint8_t>((year - 1970) * 2), static_cast<std::uint8_t>(month * 10),
            static_cast<std::uint8_t>(country_code)};
}

Pixel encode_inflation_pixel(double month_rate, double year_rate) {
    return {100, encode_scalar(month_rate), encode_scalar(year_rate)};
}

std::uint8_t encode_scalar(double v) {
    const double root = std::sqrt(std::fabs(v)) * 100.0;
    return to_byte(kBaseline + (v < 0 ? -root : root));
}

std::uint8_t encode_scalar(std::optional<double> v) { return v ? encode_scalar(*v) : kBaseline; }

double decode_scalar(std::uint8_t c) {
    const double d = (static_cast<double>(c) - kBaseline) / 100.0;
    return d < 0 ? -d * d : d * d;
}

Pixel encode_value(double v) {
    return {encode_scalar(v), to_byte(kBaseline + v * 100.0), to_byte(std::sqrt(std::fabs(v)) * 100.0)};
}

Pixel CompanyImage::at(int row, int col) const {
    const std::size_t i = static_cast<std::size_t>((row * kImageSide + col) * 3);
    return {pixels.at(i), pixels.at(i + 1), pixels.at(i + 2)};
}

void CompanyImage::set(int row, int col, Pixel p) {
    const std::size_t i = static_cast<std::size_t>((row * kImageSide + col) * 3);
    pixels.at(i) = p.r;
    pixels.at(i + 1) = p.g;
    pixels.at(i + 2) = p.b;
}

CompanyImage compose_image(std::span<const ledger::MonthlyVector> window, Variant variant, int label) {
    if (window.size() != ledger::kWindowMonths)
        throw ContractError("image window needs " + std::to_string(ledger::kWindowMonths) +
                            " months, got " + std::to_string(window.size()));
    for (std::size_t i = 1; i < window.size(); ++i)
        if (window[i].company_id != window[0].company_id || window[i - 1].period.next() != window[i].period)
            throw ContractError("image window must be consecutive months of one company");
    CompanyImage img;
    img.company_id = window.front().company_id;
    img.anchor = window.back().period;
    img.variant = variant;
    img.label = label;
    for (int m = 0; m < static_cast<int>(window.size()); ++m) {
        const auto& v = window[static_cast<std::size_t>(m)];
        const Pixel header[kHeaderColumns] = {
            encode_region_pixel(v.division, v.group, v.region_code),
            encode_period_pixel(v.period.year, v.period.month, v.country_code),
            encode_inflation_pixel(v.inflation_month, v.inflation_12m),
        };
        for (int r = 2 * m; r <= 2 * m + 1; ++r)
            for (int c = 0; c < kHeaderColumns; ++c) img.set(r, c, header[c]);
        for (std::size_t i = 0; i < ledger::kVectorWidth; ++i) {
            const int col = kHeaderColumns + static_cast<int>(i);
            if (variant == Variant::accounts) {
                img.set(2 * m, col, encode_value(v.vertical[i]));
                img.set(2 * m + 1, col, encode_value(v.horizontal[i]));
            } else {
                const Pixel p = encode_value(v.ratios[i].value_or(0.0));
                img.set(2 * m, col, p);
                img.set(2 * m + 1, col, p);
            }
        }
    }
    return img;
}

}  // namespace finimg::image
