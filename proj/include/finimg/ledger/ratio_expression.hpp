#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finimg/chart/standard_chart.hpp"
#include "finimg/ledger/balance.hpp"

namespace finimg::ledger {

/// Arithmetic over account balances.
///
/// Grammar (whitespace ignored):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | primary
///   primary := number | code lag? | 'abs' '(' expr ')' | '(' expr ')'
///   lag     := '[' '-' digits ']'
///
/// A bare five-digit integer is an account code and must exist in the chart;
/// write `10000.0` for the literal. `31100[-12]` reads the balance twelve
/// months earlier. Error offsets are 1-based columns.
class RatioExpression {
public:
    enum class Kind { number, account, negate, add, subtract, multiply, divide, abs };

    struct Node {
        Kind kind = Kind::number;
        double number = 0.0;
        AccountCode code{};
        int lag = 0;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    static RatioExpression parse(std::string_view text, const chart::StandardChart& chart);

    const Node& root() const { return *root_; }

    /// Evaluates at `series[index]`. Division by zero, or a lag reaching
    /// before the series start, yields nullopt.
    std::optional<double> evaluate(std::span<const MonthlyBalance> series, std::size_t index) const;
    std::optional<double> evaluate(const MonthlyBalance& balance) const;

    std::string to_string() const;

private:
    explicit RatioExpression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

struct RatioDefinition {
    std::string name;
    std::string expression_text;
    RatioExpression expression;
};

RatioDefinition make_ratio(std::string name, std::string expression,
                           const chart::StandardChart& chart);

/// JSON array of {name, expression}.
std::vector<RatioDefinition> load_ratio_definitions(const std::filesystem::path& path,
                                                    const chart::StandardChart& chart);

inline std::optional<double> evaluate_ratio(const RatioDefinition& def,
                                            const MonthlyBalance& balance) {
    return def.expression.evaluate(balance);
}

}  // namespace finimg::ledger
