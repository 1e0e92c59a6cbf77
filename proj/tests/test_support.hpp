#pragma once

// Shared test fixtures: the frozen reference trajectory for the worked
// example Tf = (2f+1)/3 (f1 = 4, alpha = 0.5, absolute modular on the scalar
// space), an independent expression-tree interpreter used as the oracle for
// the main evaluator, and a seeded random expression generator.

#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>

#include "modfix/expr.hpp"

namespace testsupport {

struct GoldenRow {
    int n;
    const char* f;
    const char* Tf;
    const char* g;
    const char* f_next;
};

// Rows n = 1..5, 10, 15, 20, 22 of the reference table, 6 decimals.
inline constexpr GoldenRow kGoldenRows[] = {
    {1, "4.000000", "3.000000", "3.500000", "2.666667"},
    {2, "2.666667", "2.111111", "2.388889", "1.925926"},
    {3, "1.925926", "1.617284", "1.771605", "1.514403"},
    {4, "1.514403", "1.342936", "1.428669", "1.285780"},
    {5, "1.285780", "1.190520", "1.238150", "1.158766"},
    {10, "1.015124", "1.010083", "1.012603", "1.008402"},
    {15, "1.000800", "1.000534", "1.000667", "1.000445"},
    {20, "1.000042", "1.000028", "1.000035", "1.000024"},
    {22, "1.000013", "1.000009", "1.000011", "1.000007"},
};

inline std::string fixed6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// A computed cell matches a frozen cell if the 6-decimal strings agree or,
// as a fallback for last-digit formatting differences, the absolute
// difference is at most 5e-7.
inline bool matches_cell(double computed, const char* cell) {
    if (fixed6(computed) == cell) {
        return true;
    }
    return std::fabs(computed - std::strtod(cell, nullptr)) <= 5e-7;
}

// ---------------------------------------------------------------------------
// Independent expression interpreter (the oracle). Written against the node
// structure only; shares no code with ExprAst::eval.

struct OracleFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double oracle_eval(const modfix::ExprNode& node, double x) {
    using modfix::ExprFunc;
    using modfix::ExprNode;
    using modfix::ExprOp;
    if (const auto* num = std::get_if<ExprNode::Number>(&node.v)) {
        return num->value;
    }
    if (std::get_if<ExprNode::Var>(&node.v)) {
        return x;
    }
    if (const auto* bin = std::get_if<ExprNode::Binary>(&node.v)) {
        const double a = oracle_eval(*bin->lhs, x);
        const double b = oracle_eval(*bin->rhs, x);
        if (bin->op == ExprOp::add) return a + b;
        if (bin->op == ExprOp::sub) return a - b;
        if (bin->op == ExprOp::mul) return a * b;
        if (b == 0.0) throw OracleFailure("division by zero");
        return a / b;
    }
    const auto& call = std::get<ExprNode::Call>(node.v);
    const double a = oracle_eval(*call.arg0, x);
    if (call.func == ExprFunc::abs) return a < 0.0 ? -a : a;
    if (call.func == ExprFunc::sqrt) {
        if (a < 0.0) throw OracleFailure("sqrt of negative");
        return std::sqrt(a);
    }
    const double b = oracle_eval(*call.arg1, x);
    if (call.func == ExprFunc::min) return a < b ? a : b;
    return a > b ? a : b;
}

// Evaluates the tree at x and reports the outcome: a value, or nothing when
// evaluation fails (division by zero, sqrt of a negative, non-finite).
inline std::optional<double> oracle_outcome(const modfix::ExprNode& node, double x) {
    try {
        const double v = oracle_eval(node, x);
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
        return v;
    } catch (const OracleFailure&) {
        return std::nullopt;
    }
}

inline std::optional<double> impl_outcome(const modfix::ExprAst& ast, double x) {
    try {
        return ast.eval(x);
    } catch (const modfix::EvalError&) {
        return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Seeded generator of well-formed trees with depth <= max_depth. Number
// literals are nonnegative (the grammar has no unary minus).

inline modfix::ExprPtr random_expr(std::mt19937_64& rng, int max_depth) {
    using modfix::ExprFunc;
    using modfix::ExprOp;
    const auto uniform = [&rng](double lo, double hi) {
        return lo + (static_cast<double>(rng() >> 11) * 0x1.0p-53) * (hi - lo);
    };
    if (max_depth <= 0 || rng() % 3 == 0) {
        if (rng() % 2 == 0) {
            return modfix::make_var();
        }
        return modfix::make_number(uniform(0.0, 4.0));
    }
    switch (rng() % 8) {
        case 0:
            return modfix::make_binary(ExprOp::add, random_expr(rng, max_depth - 1),
                                       random_expr(rng, max_depth - 1));
        case 1:
            return modfix::make_binary(ExprOp::sub, random_expr(rng, max_depth - 1),
                                       random_expr(rng, max_depth - 1));
        case 2:
            return modfix::make_binary(ExprOp::mul, random_expr(rng, max_depth - 1),
                                       random_expr(rng, max_depth - 1));
        case 3:
            return modfix::make_binary(ExprOp::div, random_expr(rng, max_depth - 1),
                                       random_expr(rng, max_depth - 1));
        case 4:
            return modfix::make_call(ExprFunc::abs, random_expr(rng, max_depth - 1));
        case 5:
            return modfix::make_call(ExprFunc::sqrt, random_expr(rng, max_depth - 1));
        case 6:
            return modfix::make_call(ExprFunc::min, random_expr(rng, max_depth - 1),
                                     random_expr(rng, max_depth - 1));
        default:
            return modfix::make_call(ExprFunc::max, random_expr(rng, max_depth - 1),
                                     random_expr(rng, max_depth - 1));
    }
}

}  // namespace testsupport
