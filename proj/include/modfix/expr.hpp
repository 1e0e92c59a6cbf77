#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "modfix/errors.hpp"

namespace modfix {

enum class ExprOp { add, sub, mul, div };
enum class ExprFunc { abs, sqrt, min, max };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree over the grammar
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := number | variable | '(' expr ')' | func '(' expr ')'
///   func   := abs | sqrt | min | max        (min/max take two arguments)
///
/// Numbers are nonnegative decimal literals with optional fraction and
/// exponent; there is no unary minus (write 0-x).
struct ExprNode {
    struct Number {
        double value;
    };
    struct Var {};
    struct Binary {
        ExprOp op;
        ExprPtr lhs;
        ExprPtr rhs;
    };
    struct Call {
        ExprFunc func;
        ExprPtr arg0;
        ExprPtr arg1;  // null unless func is min or max
    };

    std::variant<Number, Var, Binary, Call> v;
};

ExprPtr make_number(double value);  // finite and >= 0 (the grammar has no sign)
ExprPtr make_var();
ExprPtr make_binary(ExprOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_call(ExprFunc func, ExprPtr arg0, ExprPtr arg1 = nullptr);

/// A parsed one-variable expression. `variable` is the name the parser
/// accepted ('f' for mappings, 'r' for rate functions, 't' for Orlicz
/// integrands).
class ExprAst {
public:
    ExprAst(ExprPtr root, std::string variable);

    /// Evaluate at x. Throws EvalError on division by zero, sqrt of a
    /// negative value, or a non-finite result.
    double eval(double x) const;

    /// Fully parenthesized text that re-parses to an equivalent tree.
    std::string to_string() const;

    const std::string& variable() const noexcept { return var_; }
    const ExprPtr& root() const noexcept { return root_; }

private:
    ExprPtr root_;
    std::string var_;
};

/// Parse `text` with the given variable name. Errors carry a 0-based
/// character offset and an expected-token message.
ExprAst parse_expr(std::string_view text, std::string_view variable = "f");

}  // namespace modfix
