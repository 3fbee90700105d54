#include "finimg/ledger/entry.hpp"

#include <cmath>
#include <cstdio>

#include "finimg/common/csv.hpp"
#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::ledger {

Cents parse_amount(std::string_view text) {
    const std::string s(text);
    if (s.empty()) throw DataError("empty amount");
    Cents whole = 0;
    Cents frac = 0;
    std::size_t i = 0;
    int int_digits = 0;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i, ++int_digits) {
        if (whole > (INT64_MAX / 100 - 9) / 10) throw DataError("amount too large '" + s + "'");
        whole = whole * 10 + (s[i] - '0');
    }
    int frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
            if (frac_digits >= 2) {
                if (s[i] != '0')
                    throw DataError("amount '" + s + "' has more than two decimal places");
                continue;
            }
            frac = frac * 10 + (s[i] - '0');
            ++frac_digits;
        }
    }
    if (i != s.size() || (int_digits == 0 && frac_digits == 0))
        throw DataError("malformed amount '" + s + "'");
    if (frac_digits == 1) frac *= 10;
    return whole * 100 + frac;
}

std::string format_amount(Cents cents) {
    char buf[32];
    const char* sign = cents < 0 ? "-" : "";
    const unsigned long long mag =
        cents < 0 ? 0ULL - static_cast<unsigned long long>(cents) : static_cast<unsigned long long>(cents);
    std::snprintf(buf, sizeof buf, "%s%llu.%02llu", sign, mag / 100, mag % 100);
    return buf;
}

namespace {

Cents amount_from_json(const nlohmann::json& v) {
    if (v.is_string()) return parse_amount(v.get<std::string>());
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x < 0) throw DataError("negative amount");
        return x * 100;
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.2f", x);
        if (!(x >= 0) || std::abs(std::strtod(buf, nullptr) - x) > 1e-9 * std::max(1.0, x))
            throw DataError("amount " + std::to_string(x) + " is not a non-negative cent value");
        return parse_amount(buf);
    }
    throw DataError("amount must be a number or string");
}

}  // namespace

std::vector<RawEntry> read_entries_csv(const std::filesystem::path& path) {
    const auto rows = csv::read_file(path);
    if (rows.empty()) throw DataError(path.string() + ": empty entries file");
    const auto col = csv::require_columns(
        rows[0], {"company_id", "date", "account_code", "debit", "credit"}, path.string());
    std::vector<RawEntry> out;
    out.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        try {
            if (row.size() < rows[0].size())
                throw DataError("expected " + std::to_string(rows[0].size()) + " fields, got " +
                                std::to_string(row.size()));
            RawEntry e;
            e.company_id = row[col[0]];
            e.date = Date::parse(row[col[1]]);
            e.account = row[col[2]];
            e.debit = row[col[3]].empty() ? 0 : parse_amount(row[col[3]]);
            e.credit = row[col[4]].empty() ? 0 : parse_amount(row[col[4]]);
            out.push_back(std::move(e));
        } catch (const DataError& err) {
            throw DataError(path.string() + ":" + std::to_string(r + 1) + ": " + err.what());
        }
    }
    return out;
}

std::vector<RawEntry> read_entries_jsonl(const std::filesystem::path& path) {
    std::vector<RawEntry> out;
    std::size_t n = 0;
    for (const auto& j : files::read_jsonl(path)) {
        ++n;
        try {
            RawEntry e;
            e.company_id = j.at("company_id").get<std::string>();
            e.date = Date::parse(j.at("date").get<std::string>());
            const auto& code = j.at("account_code");
            e.account = code.is_string() ? code.get<std::string>() : code.dump();
            e.debit = amount_from_json(j.at("debit"));
            e.credit = amount_from_json(j.at("credit"));
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& err) {
            throw DataError(path.string() + " entry " + std::to_string(n) + ": " + err.what());
        } catch (const DataError& err) {
            throw DataError(path.string() + " entry " + std::to_string(n) + ": " + err.what());
        }
    }
    return out;
}

std::vector<RawEntry> read_entries(const std::filesystem::path& path) {
    return path.extension() == ".jsonl" ? read_entries_jsonl(path) : read_entries_csv(path);
}

void write_entries_csv(const std::filesystem::path& path, std::span<const RawEntry> entries) {
    std::string out = "company_id,date,account_code,debit,credit\n";
    out.reserve(entries.size() * 48);
    for (const auto& e : entries)
        out += csv::format_row({e.company_id, e.date.to_string(), e.account,
                                format_amount(e.debit), format_amount(e.credit)});
    files::write_text(path, out);
}

void write_entries_jsonl(const std::filesystem::path& path, std::span<const RawEntry> entries) {
    std::string out;
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["company_id"] = e.company_id;
        j["date"] = e.date.to_string();
        j["account_code"] = e.account;
        j["debit"] = format_amount(e.debit);
        j["credit"] = format_amount(e.credit);
        out += j.dump() + "\n";
    }
    files::write_text(path, out);
}

AccountMapping::AccountMapping(std::span<const chart::AccountMatch> matches) {
    for (const auto& m : matches) map_[m.original_code] = m.target;
}

AccountingEntry AccountMapping::apply(const RawEntry& raw, const chart::StandardChart& chart) const {
    AccountingEntry e{raw.company_id, raw.date, AccountCode{}, raw.debit, raw.credit};
    if (auto it = map_.find(raw.account); it != map_.end()) {
        e.account = it->second;
        return e;
    }
    const std::string& code = raw.account;
    const bool five_digits =
        code.size() == 5 && code.find_first_not_of("0123456789") == std::string::npos;
    if (five_digits && chart.contains(AccountCode{std::stoi(code)})) {
        e.account = AccountCode{std::stoi(code)};
        return e;
    }
    throw DataError("entry for company " + raw.company_id + " on " + raw.date.to_string() +
                    ": account '" + code + "' is neither mapped nor a standard code");
}

}  // namespace finimg::ledger
