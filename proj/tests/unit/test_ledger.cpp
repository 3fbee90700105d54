#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"
#include "finimg/common/rng.hpp"
#include "finimg/ledger/monthly_vector.hpp"

using namespace finimg;
using namespace finimg::ledger;

namespace {

const std::filesystem::path kData = FINIMG_DATA_DIR;

const chart::StandardChart& standard() {
    static const chart::StandardChart c = chart::StandardChart::load_json(kData / "standard_chart.json");
    return c;
}

const std::vector<RatioDefinition>& default_ratios() {
    static const auto defs = load_ratio_definitions(kData / "ratio_definitions.json", standard());
    return defs;
}

AccountingEntry post(std::string company, std::string date, int code, Cents debit, Cents credit) {
    return {std::move(company), Date::parse(date), AccountCode{code}, debit, credit};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "finimg_test_ledger";
    std::filesystem::create_directories(dir);
    return dir / name;
}

// A small trading company: capital in, stock bought, sales and costs booked
// each month, with a loan in month 3.
std::vector<AccountingEntry> company_book(const std::string& id, int months, Cents scale = 1) {
    std::vector<AccountingEntry> out;
    auto add = [&](std::string d, int code, Cents dr, Cents cr) {
        out.push_back(post(id, std::move(d), code, dr * scale, cr * scale));
    };
    add("2019-01-02", 11101, 500000, 0);
    add("2019-01-02", 23100, 0, 500000);
    for (int m = 0; m < months; ++m) {
        const Period p = Period{2019, 1}.plus(m);
        const std::string d = p.to_string() + "-15";
        const Cents sales = 120000 + 3000 * m;
        add(d, 11201, sales, 0);
        add(d, 31101, 0, sales);
        add(d, 32101, sales * 6 / 10, 0);
        add(d, 11301, 0, sales * 6 / 10);
        add(d, 11301, 90000, 0);
        add(d, 21101, 0, 90000);
        add(d, 32201, 15000 + 100 * m, 0);
        add(d, 11101, 0, 15000 + 100 * m);
        add(d, 32301, 1200, 0);
        add(d, 11102, 0, 1200);
        add(d, 11101, sales / 2, 0);
        add(d, 11201, 0, sales / 2);
        if (m == 2) {
            add(d, 11102, 200000, 0);
            add(d, 22101, 0, 200000);
        }
        if (m % 4 == 3) {
            add(d, 13301, 40000, 0);
            add(d, 11102, 0, 40000);
        }
    }
    return out;
}

VectorMetadata meta() { return {47, 472, 35, 55, 0.0054, 0.0702064}; }

std::vector<MonthlyVector> vectors_for(const std::vector<MonthlyBalance>& series) {
    std::vector<MonthlyVector> out;
    for (std::size_t i = 0; i < series.size(); ++i)
        out.push_back(build_monthly_vector(std::span(series).first(i + 1), meta(), default_ratios()));
    return out;
}

}  // namespace

TEST_CASE("amounts are parsed to exact cents") {
    CHECK(parse_amount("100") == 10000);
    CHECK(parse_amount("1234.5") == 123450);
    CHECK(parse_amount("0.07") == 7);
    CHECK(format_amount(123450) == "1234.50");
    CHECK_THROWS_AS(parse_amount("1.234"), DataError);
    CHECK_THROWS_AS(parse_amount("-3"), DataError);
    CHECK_THROWS_AS(parse_amount("abc"), DataError);
    CHECK_THROWS_AS(parse_amount(""), DataError);
}

TEST_CASE("entry files round trip through csv and jsonl") {
    std::vector<RawEntry> entries{
        {"c1", Date::parse("2020-01-31"), "11101", 12345, 0},
        {"c,2", Date::parse("2020-02-29"), "1.1.1.001", 0, 99},
    };
    write_entries_csv(scratch("e.csv"), entries);
    write_entries_jsonl(scratch("e.jsonl"), entries);
    for (const auto& back : {read_entries(scratch("e.csv")), read_entries(scratch("e.jsonl"))}) {
        REQUIRE(back.size() == 2);
        CHECK(back[1].company_id == "c,2");
        CHECK(back[1].date == Date{2020, 2, 29});
        CHECK(back[1].account == "1.1.1.001");
        CHECK(back[0].debit == 12345);
        CHECK(back[1].credit == 99);
    }
}

TEST_CASE("malformed entry rows are rejected with a diagnostic") {
    files::write_text(scratch("bad_date.csv"),
                      "company_id,date,account_code,debit,credit\nc1,2020-13-01,11101,1,0\n");
    CHECK_THROWS_AS(read_entries(scratch("bad_date.csv")), DataError);
    files::write_text(scratch("bad_cols.csv"), "company_id,date,debit,credit\nc1,2020-01-01,1,0\n");
    CHECK_THROWS_AS(read_entries(scratch("bad_cols.csv")), DataError);
}

TEST_CASE("aggregation rejects unknown codes and empty postings") {
    std::vector<AccountingEntry> unknown{post("c", "2020-01-01", 11199, 100, 0)};
    CHECK_THROWS_AS(aggregate_monthly(unknown, standard()), DataError);
    std::vector<AccountingEntry> empty{post("c", "2020-01-01", 11101, 0, 0)};
    CHECK_THROWS_AS(aggregate_monthly(empty, standard()), DataError);
}

TEST_CASE("balance-sheet accounts carry forward") {
    std::vector<AccountingEntry> e{post("c", "2020-01-10", 11100, 100, 0),
                                   post("c", "2020-02-10", 21100, 0, 1)};
    const auto out = aggregate_monthly(e, standard());
    const auto& s = out.at("c");
    REQUIRE(s.size() == 2);
    CHECK(s[0].balance(AccountCode{11100}) == 100);
    CHECK(s[1].balance(AccountCode{11100}) == 100);
    CHECK(s[1].balance(AccountCode{11500}) == 0);
}

TEST_CASE("result accounts reset in January") {
    std::vector<AccountingEntry> e{post("c", "2019-12-05", 31100, 0, 50),
                                   post("c", "2020-01-05", 11100, 1, 0)};
    const auto s = aggregate_monthly(e, standard()).at("c");
    REQUIRE(s.size() == 2);
    CHECK(s[0].balance(AccountCode{31100}) == 50);
    CHECK(s[1].balance(AccountCode{31100}) == 0);
}

TEST_CASE("gap months are filled") {
    std::vector<AccountingEntry> e{post("c", "2020-01-05", 32100, 10, 0),
                                   post("c", "2020-04-05", 32100, 5, 0)};
    const auto s = aggregate_monthly(e, standard()).at("c");
    REQUIRE(s.size() == 4);
    CHECK(s[1].period == Period{2020, 2});
    CHECK(s[2].balance(AccountCode{32100}) == 10);
    CHECK(s[3].balance(AccountCode{32100}) == 15);
}

TEST_CASE("natural signs make healthy balances positive") {
    CHECK(natural_sign(AccountCode{11101}) == 1);
    CHECK(natural_sign(AccountCode{21100}) == -1);
    CHECK(natural_sign(AccountCode{23000}) == -1);
    CHECK(natural_sign(AccountCode{31100}) == -1);
    CHECK(natural_sign(AccountCode{32500}) == 1);
    CHECK(natural_sign(AccountCode{33100}) == -1);
    CHECK(natural_sign(AccountCode{41000}) == 1);
}

TEST_CASE("roll-up reads include descendants") {
    MonthlyBalance b{"c", {2020, 1}, {{AccountCode{11101}, 3}, {AccountCode{11102}, 4}, {AccountCode{11201}, 10}}};
    CHECK(b.balance(AccountCode{11100}) == 7);
    CHECK(b.balance(AccountCode{11000}) == 17);
    CHECK(b.total_assets() == 17);
    CHECK(b.balance(AccountCode{11102}) == 4);
}

TEST_CASE("vertical analysis divides by total assets") {
    MonthlyBalance b{"c", {2020, 1}, {{AccountCode{11100}, 50}, {AccountCode{13300}, 150}}};
    const auto v = vertical_analysis(b);
    CHECK(v.valid);
    CHECK(v.values[0] == doctest::Approx(0.25));
    CHECK(v.values[5] == doctest::Approx(0.75));
    CHECK(v.total_assets_share == 1.0);

    MonthlyBalance empty{"c", {2020, 1}, {{AccountCode{21100}, 10}}};
    const auto z = vertical_analysis(empty);
    CHECK_FALSE(z.valid);
    CHECK(std::all_of(z.values.begin(), z.values.end(), [](double x) { return x == 0.0; }));
}

TEST_CASE("horizontal change conventions") {
    CHECK(horizontal_change(100, 110) == doctest::Approx(0.10));
    CHECK(horizontal_change(100, 100) == 0.0);
    CHECK(horizontal_change(0, 5) == 1.69);
    CHECK(horizontal_change(0, -5) == -1.69);
    CHECK(horizontal_change(0, 0) == 0.0);
    CHECK(horizontal_change(-100, -50) == doctest::Approx(0.5));
    CHECK(horizontal_change(10, 1000) == 1.69);
    CHECK(horizontal_change(10, -1000) == -1.69);
}

TEST_CASE("horizontal analysis needs consecutive months of one company") {
    MonthlyBalance a{"c", {2020, 1}, {}};
    MonthlyBalance b{"c", {2020, 3}, {}};
    MonthlyBalance other{"d", {2020, 2}, {}};
    CHECK_THROWS_AS(horizontal_analysis(a, b), ContractError);
    CHECK_THROWS_AS(horizontal_analysis(a, other), ContractError);
    MonthlyBalance dec{"c", {2019, 12}, {}};
    CHECK_NOTHROW(horizontal_analysis(dec, a));
}

TEST_CASE("default ratio file holds the 21 ratios in order") {
    const auto& defs = default_ratios();
    REQUIRE(defs.size() == kVectorWidth);
    CHECK(defs.front().name == "Quick ratio");
    CHECK(defs[19].name == "Growth");
    CHECK(defs.back().name == "Balance");
}

TEST_CASE("quick ratio hand evaluation") {
    MonthlyBalance b{"c",
                     {2020, 1},
                     {{AccountCode{11100}, 10},
                      {AccountCode{11200}, 20},
                      {AccountCode{11500}, 5},
                      {AccountCode{21100}, 15},
                      {AccountCode{21200}, 10}}};
    auto q = evaluate_ratio(default_ratios()[0], b);
    REQUIRE(q.has_value());
    CHECK(*q == doctest::Approx(1.4));

    MonthlyBalance no_liabilities{"c", {2020, 1}, {{AccountCode{11100}, 10}}};
    CHECK_FALSE(evaluate_ratio(default_ratios()[0], no_liabilities).has_value());
}

TEST_CASE("growth is undefined without a year of history") {
    const auto s = aggregate_monthly(company_book("g", 14), standard()).at("g");
    const RatioExpression& growth = default_ratios()[19].expression;
    CHECK_FALSE(growth.evaluate(s, 11).has_value());
    // Revenue resets in January; month 13 is Jan 2020 against Jan 2019.
    auto g = growth.evaluate(s, 12);
    REQUIRE(g.has_value());
    const double jan19 = static_cast<double>(s[0].balance(AccountCode{31100}));
    const double jan20 = static_cast<double>(s[12].balance(AccountCode{31100}));
    CHECK(*g == doctest::Approx((jan20 - jan19) / jan19));
}

TEST_CASE("first month has zero horizontal analysis") {
    const auto s = aggregate_monthly(company_book("f", 2), standard()).at("f");
    const auto v = build_monthly_vector(std::span(s).first(1), meta(), default_ratios());
    CHECK(v.valid);
    CHECK(std::all_of(v.horizontal.begin(), v.horizontal.end(), [](double x) { return x == 0.0; }));
    CHECK(v.division == 47);
    CHECK(v.group == 472);
    CHECK(v.country_code == 55);
}

TEST_CASE("monthly vector equals its parts") {
    const auto s = aggregate_monthly(company_book("p", 2), standard()).at("p");
    const auto v = build_monthly_vector(s, meta(), default_ratios());
    const auto va = vertical_analysis(s[1]);
    const auto ha = horizontal_analysis(s[0], s[1]);
    CHECK(v.company_id == "p");
    CHECK(v.period == Period{2019, 2});
    CHECK(v.valid == va.valid);
    CHECK(v.vertical == va.values);
    CHECK(v.horizontal == ha);
    for (std::size_t i = 0; i < kVectorWidth; ++i)
        CHECK(v.ratios[i] == default_ratios()[i].expression.evaluate(s, 1));
    CHECK_THROWS_AS(build_monthly_vector(s, meta(), std::span(default_ratios()).first(20)),
                    ContractError);
}

TEST_CASE("valid months have total-assets share exactly one") {
    const auto s = aggregate_monthly(company_book("t", 24), standard()).at("t");
    for (const auto& b : s) {
        const auto va = vertical_analysis(b);
        REQUIRE(va.valid);
        CHECK(std::abs(va.total_assets_share - 1.0) <= 1e-12);
    }
}

TEST_CASE("window is the twelve months ending at the anchor") {
    const auto s = aggregate_monthly(company_book("w", 24), standard()).at("w");
    const auto vs = vectors_for(s);
    const auto w = select_window(vs, Period{2020, 12});
    REQUIRE(w.size() == 12);
    CHECK(w.front().period == Period{2020, 1});
    CHECK(w.back().period == Period{2020, 12});
    const auto mid = select_window(vs, Period{2020, 3});
    CHECK(mid.front().period == Period{2019, 4});
}

TEST_CASE("window excludes short or broken histories") {
    const auto s = aggregate_monthly(company_book("x", 12), standard()).at("x");
    auto vs = vectors_for(s);
    CHECK_NOTHROW(select_window(vs, Period{2019, 12}));
    CHECK_THROWS_AS(select_window(std::span(vs).last(11), Period{2019, 12}), InsufficientHistory);
    CHECK_THROWS_AS(select_window(vs, Period{2019, 11}), InsufficientHistory);
    CHECK_THROWS_AS(select_window(vs, Period{2020, 1}), InsufficientHistory);
    vs[5].valid = false;
    CHECK_THROWS_AS(select_window(vs, Period{2019, 12}), InsufficientHistory);
}

TEST_CASE("vector jsonl round trip keeps undefined ratios") {
    const auto s = aggregate_monthly(company_book("r", 3), standard()).at("r");
    const auto vs = vectors_for(s);
    REQUIRE_FALSE(vs[2].ratios[19].has_value());
    write_vectors_jsonl(scratch("v.jsonl"), vs);
    const auto back = read_vectors_jsonl(scratch("v.jsonl"));
    REQUIRE(back.size() == vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        CHECK(back[i].period == vs[i].period);
        CHECK(back[i].vertical == vs[i].vertical);
        CHECK(back[i].horizontal == vs[i].horizontal);
        CHECK(back[i].ratios == vs[i].ratios);
        CHECK(back[i].inflation_12m == vs[i].inflation_12m);
    }
    CHECK(to_json(vs[0]).at("ratios").size() == kVectorWidth);
}

TEST_CASE("property: aggregation ignores entry order") {
    auto entries = company_book("o", 18);
    auto more = company_book("o2", 7);
    entries.insert(entries.end(), more.begin(), more.end());
    const auto base = aggregate_monthly(entries, standard());
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        rng.shuffle(entries);
        const auto again = aggregate_monthly(entries, standard());
        REQUIRE(again.size() == base.size());
        for (const auto& [id, series] : base) {
            const auto& other = again.at(id);
            REQUIRE(other.size() == series.size());
            for (std::size_t i = 0; i < series.size(); ++i) {
                CHECK(other[i].period == series[i].period);
                CHECK(other[i].balances == series[i].balances);
            }
        }
    }
}

TEST_CASE("property: scaling every amount leaves the vectors unchanged") {
    const auto base = vectors_for(aggregate_monthly(company_book("s", 24), standard()).at("s"));
    for (Cents k : {2, 7, 1000}) {
        const auto scaled = vectors_for(aggregate_monthly(company_book("s", 24, k), standard()).at("s"));
        REQUIRE(scaled.size() == base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(scaled[i].vertical == base[i].vertical);
            CHECK(scaled[i].horizontal == base[i].horizontal);
            CHECK(scaled[i].ratios == base[i].ratios);
        }
    }
}

TEST_CASE("property: a month compared with itself has no change") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        MonthlyBalance b{"c", {2020, 5}, {}};
        for (const auto& acc : standard().accounts())
            if (acc.level == 4 && rng.bernoulli(0.3))
                b.balances[acc.code] = static_cast<Cents>(rng.below(2'000'000)) - 1'000'000;
        MonthlyBalance prev = b;
        prev.period = Period{2020, 4};
        const auto h = horizontal_analysis(prev, b);
        CHECK(std::all_of(h.begin(), h.end(), [](double x) { return x == 0.0; }));
    }
}
