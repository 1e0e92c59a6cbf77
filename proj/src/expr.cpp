#include "modfix/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>
#include <vector>

namespace modfix {

ExprPtr make_number(double value) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ParameterError("number literals must be finite and nonnegative");
    }
    return std::make_shared<const ExprNode>(ExprNode{ExprNode::Number{value}});
}

ExprPtr make_var() { return std::make_shared<const ExprNode>(ExprNode{ExprNode::Var{}}); }

ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs) {
    if (!lhs || !rhs) {
        throw ParameterError("binary expression node requires two operands");
    }
    return std::make_shared<const ExprNode>(ExprNode{ExprNode::Binary{op, std::move(lhs), std::move(rhs)}});
}

ExprPtr make_call(ExprFunc func, ExprPtr arg0, ExprPtr arg1) {
    const bool binary = (func == ExprFunc::min || func == ExprFunc::max);
    if (!arg0 || (binary && !arg1) || (!binary && arg1)) {
        throw ParameterError("function node arity mismatch");
    }
    return std::make_shared<const ExprNode>(ExprNode{ExprNode::Call{func, std::move(arg0), std::move(arg1)}});
}

namespace {

struct Token {
    enum class Kind { number, ident, plus, minus, star, slash, lparen, rparen, comma, end };
    Kind kind;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            ++i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (i < text.size() && text[i] == '.') {
                ++i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            }
            if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                    ++j;
                    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                    i = j;
                }
            }
            double value = 0.0;
            const auto result = std::from_chars(text.data() + start, text.data() + i, value);
            if (result.ec != std::errc{} || result.ptr != text.data() + i) {
                throw ParseError("number literal out of range", start);
            }
            tokens.push_back({Token::Kind::number, value, std::string(text.substr(start, i - start)), start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            ++i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            tokens.push_back({Token::Kind::ident, 0.0, std::string(text.substr(start, i - start)), start});
            continue;
        }
        Token::Kind kind;
        switch (c) {
            case '+': kind = Token::Kind::plus; break;
            case '-': kind = Token::Kind::minus; break;
            case '*': kind = Token::Kind::star; break;
            case '/': kind = Token::Kind::slash; break;
            case '(': kind = Token::Kind::lparen; break;
            case ')': kind = Token::Kind::rparen; break;
            case ',': kind = Token::Kind::comma; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        tokens.push_back({kind, 0.0, std::string(1, c), start});
        ++i;
    }
    tokens.push_back({Token::Kind::end, 0.0, "", text.size()});
    return tokens;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string variable)
        : tokens_(std::move(tokens)), var_(std::move(variable)) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        if (peek().kind != Token::Kind::end) {
            throw ParseError("unexpected trailing input", peek().offset);
        }
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        while (peek().kind == Token::Kind::plus || peek().kind == Token::Kind::minus) {
            const ExprOp op = (advance().kind == Token::Kind::plus) ? ExprOp::add : ExprOp::sub;
            lhs = make_binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (peek().kind == Token::Kind::star || peek().kind == Token::Kind::slash) {
            const ExprOp op = (advance().kind == Token::Kind::star) ? ExprOp::mul : ExprOp::div;
            lhs = make_binary(op, std::move(lhs), parse_factor());
        }
        return lhs;
    }

    ExprPtr parse_factor() {
        const Token& tok = peek();
        switch (tok.kind) {
            case Token::Kind::number:
                advance();
                return make_number(tok.number);
            case Token::Kind::lparen: {
                advance();
                ExprPtr e = parse_expr();
                expect(Token::Kind::rparen, "expected ')'");
                return e;
            }
            case Token::Kind::ident:
                return parse_ident();
            default:
                throw ParseError("expected a number, '(', the variable '" + var_ +
                                     "', or a function name",
                                 tok.offset);
        }
    }

    ExprPtr parse_ident() {
        const Token tok = advance();
        if (peek().kind != Token::Kind::lparen) {
            if (tok.text == var_) {
                return make_var();
            }
            throw ParseError("unknown variable '" + tok.text + "' (expected '" + var_ + "')",
                             tok.offset);
        }
        ExprFunc func;
        if (tok.text == "abs") {
            func = ExprFunc::abs;
        } else if (tok.text == "sqrt") {
            func = ExprFunc::sqrt;
        } else if (tok.text == "min") {
            func = ExprFunc::min;
        } else if (tok.text == "max") {
            func = ExprFunc::max;
        } else {
            throw ParseError("unknown function '" + tok.text + "'", tok.offset);
        }
        advance();  // '('
        ExprPtr a = parse_expr();
        if (func == ExprFunc::min || func == ExprFunc::max) {
            if (peek().kind != Token::Kind::comma) {
                throw ParseError("function '" + tok.text + "' takes two arguments", peek().offset);
            }
            advance();
            ExprPtr b = parse_expr();
            expect(Token::Kind::rparen, "expected ')'");
            return make_call(func, std::move(a), std::move(b));
        }
        if (peek().kind == Token::Kind::comma) {
            throw ParseError("function '" + tok.text + "' takes one argument", peek().offset);
        }
        expect(Token::Kind::rparen, "expected ')'");
        return make_call(func, std::move(a));
    }

    void expect(Token::Kind kind, const char* message) {
        if (peek().kind != kind) {
            throw ParseError(message, peek().offset);
        }
        advance();
    }

    std::vector<Token> tokens_;
    std::string var_;
    std::size_t pos_ = 0;
};

double eval_node(const ExprNode& node, double x) {
    if (const auto* num = std::get_if<ExprNode::Number>(&node.v)) {
        return num->value;
    }
    if (std::get_if<ExprNode::Var>(&node.v)) {
        return x;
    }
    if (const auto* bin = std::get_if<ExprNode::Binary>(&node.v)) {
        const double a = eval_node(*bin->lhs, x);
        const double b = eval_node(*bin->rhs, x);
        switch (bin->op) {
            case ExprOp::add: return a + b;
            case ExprOp::sub: return a - b;
            case ExprOp::mul: return a * b;
            case ExprOp::div:
                if (b == 0.0) {
                    throw EvalError("division by zero");
                }
                return a / b;
        }
    }
    const auto& call = std::get<ExprNode::Call>(node.v);
    const double a = eval_node(*call.arg0, x);
    switch (call.func) {
        case ExprFunc::abs: return std::fabs(a);
        case ExprFunc::sqrt:
            if (a < 0.0) {
                throw EvalError("square root of a negative value");
            }
            return std::sqrt(a);
        case ExprFunc::min: return std::min(a, eval_node(*call.arg1, x));
        case ExprFunc::max: return std::max(a, eval_node(*call.arg1, x));
    }
    throw EvalError("malformed expression node");
}

void print_node(const ExprNode& node, const std::string& var, std::string& out);

void print_number(double value, std::string& out) {
    char buf[40];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value);
    out.append(buf, result.ptr);
}

void print_node(const ExprNode& node, const std::string& var, std::string& out) {
    if (const auto* num = std::get_if<ExprNode::Number>(&node.v)) {
        print_number(num->value, out);
        return;
    }
    if (std::get_if<ExprNode::Var>(&node.v)) {
        out += var;
        return;
    }
    if (const auto* bin = std::get_if<ExprNode::Binary>(&node.v)) {
        static constexpr const char* ops[] = {" + ", " - ", " * ", " / "};
        out += '(';
        print_node(*bin->lhs, var, out);
        out += ops[static_cast<int>(bin->op)];
        print_node(*bin->rhs, var, out);
        out += ')';
        return;
    }
    const auto& call = std::get<ExprNode::Call>(node.v);
    static constexpr const char* names[] = {"abs", "sqrt", "min", "max"};
    out += names[static_cast<int>(call.func)];
    out += '(';
    print_node(*call.arg0, var, out);
    if (call.arg1) {
        out += ", ";
        print_node(*call.arg1, var, out);
    }
    out += ')';
}

}  // namespace

ExprAst::ExprAst(ExprPtr root, std::string variable)
    : root_(std::move(root)), var_(std::move(variable)) {
    if (!root_) {
        throw ParameterError("expression tree must not be empty");
    }
    if (var_.empty()) {
        throw ParameterError("expression variable name must not be empty");
    }
}

double ExprAst::eval(double x) const {
    const double value = eval_node(*root_, x);
    if (!std::isfinite(value)) {
        throw EvalError("expression evaluated to a non-finite value");
    }
    return value;
}

std::string ExprAst::to_string() const {
    std::string out;
    print_node(*root_, var_, out);
    return out;
}

ExprAst parse_expr(std::string_view text, std::string_view variable) {
    Parser parser(lex(text), std::string(variable));
    return ExprAst(parser.parse(), std::string(variable));
}

}  // namespace modfix
