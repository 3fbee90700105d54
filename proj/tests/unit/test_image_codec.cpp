#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"
#include "finimg/common/rng.hpp"
#include "finimg/image/code_tables.hpp"
#include "finimg/image/codec.hpp"
#include "finimg/image/dataset.hpp"

using namespace finimg;
using namespace finimg::image;
using ledger::MonthlyVector;

namespace {

const std::filesystem::path kData = FINIMG_DATA_DIR;

std::vector<MonthlyVector> window(Period anchor) {
    std::vector<MonthlyVector> w(ledger::kWindowMonths);
    for (std::size_t m = 0; m < w.size(); ++m) {
        auto& v = w[m];
        v.company_id = "acme";
        v.period = anchor.plus(static_cast<int>(m) - 11);
        v.division = 47;
        v.group = 472;
        v.region_code = 35;
        v.country_code = 55;
        v.valid = true;
    }
    return w;
}

// Independent oracle for the three data channels, in integer arithmetic:
// the largest k with (k/100)^2 <= |v| is found by search, not by sqrt.
int isqrt_code(double mag) {
    int k = 0;
    while (k < 400 && (k + 1) * (k + 1) <= mag * 10000.0 + 1e-7) ++k;
    return k;
}

Pixel oracle_pixel(double v) {
    const int root = isqrt_code(std::fabs(v));
    // ceil for negative values: smallest k with (k/100)^2 >= |v|
    int up = root;
    if (up * up < std::fabs(v) * 10000.0 - 1e-7) ++up;
    const int r = v >= 0 ? 125 + root : 125 - up;
    const int g = static_cast<int>(std::floor(125.0 + v * 100.0 + 1e-9));
    auto clamp = [](int x) { return static_cast<std::uint8_t>(std::min(255, std::max(0, x))); };
    return {clamp(r), clamp(g), clamp(root)};
}

}  // namespace

TEST_CASE("region pixel") {
    CHECK(encode_region_pixel(47, 472, 35) == Pixel{47, 20, 35});
    CHECK(encode_region_pixel(86, 860, 0) == Pixel{86, 0, 0});
    CHECK(encode_region_pixel(82, 829, 53) == Pixel{82, 90, 53});
    CHECK_THROWS_AS(encode_region_pixel(47, 482, 35), ContractError);
    CHECK_THROWS_AS(encode_region_pixel(47, 472, 300), ContractError);
}

TEST_CASE("period pixel") {
    CHECK(encode_period_pixel(2020, 1, 55) == Pixel{100, 10, 55});
    CHECK(encode_period_pixel(1970, 1, 0) == Pixel{0, 10, 0});
    CHECK(encode_period_pixel(1997, 6, 55) == Pixel{54, 60, 55});
    CHECK(encode_period_pixel(2097, 12, 1) == Pixel{254, 120, 1});
    CHECK_THROWS_AS(encode_period_pixel(1969, 1, 55), ContractError);
    CHECK_THROWS_AS(encode_period_pixel(2098, 1, 55), ContractError);
    CHECK_THROWS_AS(encode_period_pixel(2020, 13, 55), ContractError);
}

TEST_CASE("inflation pixel") {
    CHECK(encode_inflation_pixel(0.0054, 0.0702064) == Pixel{100, 132, 151});
    CHECK(encode_inflation_pixel(0, 0) == Pixel{100, 125, 125});
    CHECK(encode_inflation_pixel(0.01, 0.04) == Pixel{100, 135, 145});
    CHECK(encode_inflation_pixel(-0.01, 0.0) == Pixel{100, 115, 125});
}

TEST_CASE("scalar coding examples") {
    CHECK(encode_scalar(0.0) == 125);
    CHECK(encode_scalar(0.25) == 175);
    CHECK(encode_scalar(-1.0) == 25);
    CHECK(encode_scalar(2.0) == 255);
    CHECK(encode_scalar(1.69) == 255);
    CHECK(encode_scalar(0.09) == 155);
    CHECK(encode_scalar(-5.0) == 0);
    CHECK(encode_scalar(std::optional<double>{}) == 125);
    CHECK(decode_scalar(125) == 0.0);
    CHECK(decode_scalar(175) == doctest::Approx(0.25));
    CHECK(decode_scalar(25) == doctest::Approx(-1.0));
    CHECK(decode_scalar(255) == doctest::Approx(1.69));
    CHECK(decode_scalar(0) == doctest::Approx(-1.5625));
}

TEST_CASE("data pixel channels agree with an integer oracle") {
    CHECK(encode_value(0.25) == Pixel{175, 150, 50});
    CHECK(encode_value(0.0) == Pixel{125, 125, 0});
    Rng rng(5);
    for (int i = 0; i < 20000; ++i) {
        const double v = rng.uniform(-2.5, 2.5);
        INFO(v);
        CHECK(encode_value(v) == oracle_pixel(v));
    }
    for (int k = -300; k <= 300; ++k) {
        const double v = k / 100.0;
        INFO(v);
        CHECK(encode_value(v) == oracle_pixel(v));
    }
}

TEST_CASE("property: round trip error is bounded where the coding does not saturate") {
    // Negative values bottom out at byte 0, i.e. -1.5625; below that the
    // error grows past the bound.
    Rng rng(20240501);
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.uniform(-1.5625, 1.69);
        const double err = std::fabs(decode_scalar(encode_scalar(v)) - v);
        INFO(v);
        CHECK(err <= 0.02 * std::sqrt(std::fabs(v)) + 1e-4);
    }
    CHECK(std::fabs(decode_scalar(encode_scalar(-1.69)) + 1.69) > 0.1);
}

TEST_CASE("property: scalar coding is monotone") {
    int prev = -1;
    for (int i = 0; i <= 10000; ++i) {
        const double v = -2.0 + 4.0 * i / 10000.0;
        const int c = encode_scalar(v);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("all-zero window gives baseline data pixels and per-month headers") {
    const auto w = window(Period{2020, 12});
    for (Variant variant : {Variant::accounts, Variant::ratios}) {
        const auto img = compose_image(w, variant, 1);
        CHECK(img.label == 1);
        CHECK(img.anchor == Period{2020, 12});
        for (int r = 0; r < kImageSide; ++r) {
            CHECK(img.at(r, 0) == Pixel{47, 20, 35});
            CHECK(img.at(r, 1) == encode_period_pixel(2020, r / 2 + 1, 55));
            CHECK(img.at(r, 2) == Pixel{100, 125, 125});
            for (int c = kHeaderColumns; c < kImageSide; ++c) CHECK(img.at(r, c) == Pixel{125, 125, 0});
        }
    }
}

TEST_CASE("accounts image puts vertical then horizontal rows") {
    auto w = window(Period{2021, 3});
    w[0].vertical[0] = 0.25;
    w[0].horizontal[0] = -1.0;
    w[4].vertical[20] = 0.04;
    w[11].horizontal[7] = 1.69;
    w[11].ratios[0] = 0.25;
    const auto img = compose_image(w, Variant::accounts);
    CHECK(img.at(0, 3) == Pixel{175, 150, 50});
    CHECK(img.at(1, 3) == Pixel{25, 25, 100});
    CHECK(img.at(8, 23) == encode_value(0.04));
    CHECK(img.at(23, 10) == Pixel{255, 255, 130});
    CHECK(img.at(22, 3) == Pixel{125, 125, 0});
    CHECK(img.at(0, 1) == Pixel{100, 40, 55});
}

TEST_CASE("ratios image duplicates each month's row") {
    auto w = window(Period{2019, 6});
    Rng rng(3);
    for (auto& v : w) {
        for (auto& r : v.ratios) r = rng.bernoulli(0.1) ? std::nullopt : std::optional<double>(rng.normal());
        v.inflation_month = rng.uniform(-0.01, 0.02);
        v.inflation_12m = rng.uniform(0.0, 0.2);
    }
    const auto img = compose_image(w, Variant::ratios);
    const std::size_t row = kImageSide * 3;
    for (int m = 0; m < 12; ++m)
        CHECK(std::equal(img.pixels.begin() + 2 * m * row, img.pixels.begin() + (2 * m + 1) * row,
                         img.pixels.begin() + (2 * m + 1) * row));
    w[3].ratios[2].reset();
    CHECK(compose_image(w, Variant::ratios).at(6, 5) == Pixel{125, 125, 0});
}

TEST_CASE("compose rejects malformed windows") {
    auto w = window(Period{2020, 12});
    CHECK_THROWS_AS(compose_image(std::span(w).first(11), Variant::accounts), ContractError);
    w[5].period = w[5].period.next();
    CHECK_THROWS_AS(compose_image(w, Variant::accounts), ContractError);
}

TEST_CASE("variant names") {
    CHECK(to_string(Variant::accounts) == "accounts");
    CHECK(parse_variant("ratios") == Variant::ratios);
    CHECK_THROWS_AS(parse_variant("both"), DataError);
}

TEST_CASE("shipped code tables") {
    const auto regions = CodeTable::load_csv(kData / "region_codes.csv");
    const auto countries = CodeTable::load_csv(kData / "country_codes.csv");
    CHECK(regions.code("Sao Paulo") == 35);
    CHECK(regions.entries().size() == 27);
    CHECK(countries.code("Brazil") == 55);
    CHECK_THROWS_AS(regions.code("Atlantis"), DataError);
    const auto ipca = InflationTable::load_csv(kData / "ipca_monthly.csv");
    const auto june97 = ipca.at(Period{1997, 6});
    CHECK(encode_inflation_pixel(june97.month, june97.twelve_month) == Pixel{100, 132, 151});
    CHECK(ipca.contains(Period{2020, 1}));
    CHECK_THROWS_AS(ipca.at(Period{1980, 1}), DataError);
}

TEST_CASE("manifest round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "finimg_test_image";
    std::vector<ManifestEntry> entries{{"a", {2020, 12}, Variant::accounts, 1, "images/a.rgb", 47},
                                       {"b", {2021, 1}, Variant::ratios, 0, "images/b.rgb", 86}};
    write_manifest(dir / "manifest.jsonl", entries);
    const auto back = read_manifest(dir / "manifest.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[1].company_id == "b");
    CHECK(back[1].anchor_period == Period{2021, 1});
    CHECK(back[1].variant == Variant::ratios);
    CHECK(back[0].label == 1);
    CHECK(back[0].pixel_file == "images/a.rgb");
    CHECK(back[1].division == 86);
}

TEST_CASE("raw dumps hold exactly one image") {
    const auto dir = std::filesystem::temp_directory_path() / "finimg_test_image";
    const auto img = compose_image(window(Period{2020, 12}), Variant::accounts);
    CHECK(png_name(img) == "acme_2020-12_accounts.png");
    write_raw(img, dir / raw_name(img));
    CHECK(std::filesystem::file_size(dir / raw_name(img)) == 1728);
    CHECK(read_raw(dir / raw_name(img)) == img.pixels);
    files::write_text(dir / "short.rgb", "abc");
    CHECK_THROWS_AS(read_raw(dir / "short.rgb"), DataError);
}
