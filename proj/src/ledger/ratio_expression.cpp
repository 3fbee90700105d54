#include "finimg/ledger/ratio_expression.hpp"

#include <cmath>
#include <cstdlib>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::ledger {
namespace {

using Node = RatioExpression::Node;
using Kind = RatioExpression::Kind;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
public:
    Parser(std::string_view text, const chart::StandardChart& chart) : text_(text), chart_(chart) {}

    NodePtr parse() {
        skip_space();
        if (pos_ == text_.size()) fail("empty expression");
        NodePtr root = expr();
        skip_space();
        if (pos_ < text_.size()) {
            if (text_[pos_] == ')') fail("unbalanced parenthesis: unexpected ')'");
            fail(std::string("unexpected '") + text_[pos_] + "'");
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_ + 1); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(Kind k, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (eat('+')) lhs = binary(Kind::add, lhs, term());
            else if (eat('-')) lhs = binary(Kind::subtract, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        while (true) {
            if (eat('*')) lhs = binary(Kind::multiply, lhs, unary());
            else if (eat('/')) lhs = binary(Kind::divide, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Kind::negate;
            n->lhs = unary();
            return n;
        }
        return primary();
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("expected operand, found end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            const std::size_t open = pos_;
            ++pos_;
            NodePtr inner = expr();
            if (!eat(')')) {
                skip_space();
                throw ParseError("unbalanced parenthesis: '(' at column " +
                                     std::to_string(open + 1) + " is never closed",
                                 pos_ + 1);
            }
            return inner;
        }
        if (c >= '0' && c <= '9') return number_or_code();
        if (text_.compare(pos_, 3, "abs") == 0) {
            pos_ += 3;
            if (!eat('(')) fail("expected '(' after abs");
            auto n = std::make_shared<Node>();
            n->kind = Kind::abs;
            n->lhs = expr();
            if (!eat(')')) fail("unbalanced parenthesis: abs( is never closed");
            return n;
        }
        if (c == ')') fail("unbalanced parenthesis: unexpected ')'");
        fail(std::string("unexpected '") + c + "'");
    }

    NodePtr number_or_code() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        const std::size_t int_end = pos_;
        bool has_point = false;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            has_point = true;
            ++pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
        }
        const std::string token(text_.substr(start, pos_ - start));
        auto n = std::make_shared<Node>();
        if (!has_point && int_end - start == 5) {
            n->kind = Kind::account;
            n->code = AccountCode{std::atoi(token.c_str())};
            if (!chart_.contains(n->code))
                throw ParseError("unknown account code " + token, start + 1);
            if (eat('[')) {
                if (!eat('-')) fail("expected '-' in lag");
                skip_space();
                const std::size_t lag_start = pos_;
                while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
                if (pos_ == lag_start) fail("expected lag months");
                n->lag = std::atoi(std::string(text_.substr(lag_start, pos_ - lag_start)).c_str());
                if (!eat(']')) fail("expected ']' after lag");
            }
            return n;
        }
        n->kind = Kind::number;
        n->number = std::strtod(token.c_str(), nullptr);
        return n;
    }

    std::string_view text_;
    const chart::StandardChart& chart_;
    std::size_t pos_ = 0;
};

std::optional<double> eval(const Node& n, std::span<const MonthlyBalance> series, std::size_t index) {
    switch (n.kind) {
        case Kind::number: return n.number;
        case Kind::account: {
            if (static_cast<std::size_t>(n.lag) > index) return std::nullopt;
            return static_cast<double>(series[index - static_cast<std::size_t>(n.lag)].balance(n.code));
        }
        case Kind::negate: {
            auto v = eval(*n.lhs, series, index);
            if (!v) return std::nullopt;
            return -*v;
        }
        case Kind::abs: {
            auto v = eval(*n.lhs, series, index);
            if (!v) return std::nullopt;
            return std::abs(*v);
        }
        default: break;
    }
    auto l = eval(*n.lhs, series, index);
    if (!l) return std::nullopt;
    auto r = eval(*n.rhs, series, index);
    if (!r) return std::nullopt;
    switch (n.kind) {
        case Kind::add: return *l + *r;
        case Kind::subtract: return *l - *r;
        case Kind::multiply: return *l * *r;
        case Kind::divide:
            if (*r == 0.0) return std::nullopt;
            return *l / *r;
        default: throw std::logic_error("unreachable ratio node");
    }
}

std::string render(const Node& n) {
    switch (n.kind) {
        case Kind::number: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            std::string s = buf;
            if (s.find_first_of(".e") == std::string::npos) s += ".0";
            return s;
        }
        case Kind::account:
            return n.code.to_string() + (n.lag ? "[-" + std::to_string(n.lag) + "]" : "");
        case Kind::negate: return "-(" + render(*n.lhs) + ")";
        case Kind::abs: return "abs(" + render(*n.lhs) + ")";
        case Kind::add: return "(" + render(*n.lhs) + " + " + render(*n.rhs) + ")";
        case Kind::subtract: return "(" + render(*n.lhs) + " - " + render(*n.rhs) + ")";
        case Kind::multiply: return "(" + render(*n.lhs) + " * " + render(*n.rhs) + ")";
        case Kind::divide: return "(" + render(*n.lhs) + " / " + render(*n.rhs) + ")";
    }
    return {};
}

}  // namespace

RatioExpression RatioExpression::parse(std::string_view text, const chart::StandardChart& chart) {
    return RatioExpression(Parser(text, chart).parse());
}

std::optional<double> RatioExpression::evaluate(std::span<const MonthlyBalance> series,
                                                std::size_t index) const {
    if (index >= series.size()) throw ContractError("ratio evaluation index out of range");
    return eval(*root_, series, index);
}

std::optional<double> RatioExpression::evaluate(const MonthlyBalance& balance) const {
    return evaluate(std::span<const MonthlyBalance>(&balance, 1), 0);
}

std::string RatioExpression::to_string() const { return render(*root_); }

RatioDefinition make_ratio(std::string name, std::string expression,
                           const chart::StandardChart& chart) {
    try {
        auto parsed = RatioExpression::parse(expression, chart);
        return {std::move(name), std::move(expression), std::move(parsed)};
    } catch (const ParseError& e) {
        throw DataError("ratio '" + name + "': " + e.what());
    }
}

std::vector<RatioDefinition> load_ratio_definitions(const std::filesystem::path& path,
                                                    const chart::StandardChart& chart) {
    const auto doc = files::read_json(path);
    if (!doc.is_array()) throw DataError(path.string() + ": expected a JSON array");
    std::vector<RatioDefinition> out;
    for (const auto& item : doc) {
        try {
            out.push_back(make_ratio(item.at("name").get<std::string>(),
                                     item.at("expression").get<std::string>(), chart));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        } catch (const DataError& e) {
            throw DataError(path.string() + ": " + e.what());
        }
    }
    return out;
}

}  // namespace finimg::ledger
