#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dmu/dag.hpp"

// Arithmetic expression frontend for the DAG: parse "<ident> (+|-|*|/) ..."
// with parentheses and standard precedence, compile to a DagProgram (one step
// per internal node, post-order), and differential-test the compiled program
// against direct evaluation.

namespace dmu {

struct ExprNode {
    enum class Kind { Var, Binary };
    Kind kind = Kind::Var;
    int var_slot = -1;  // Var
    char op = 0;        // Binary: one of + - * /
    std::unique_ptr<ExprNode> lhs, rhs;
};

struct Expr {
    std::unique_ptr<ExprNode> root;
    std::vector<std::string> variables;  // first-appearance order == slot order
};

// Throws std::runtime_error carrying the character position on bad syntax.
// Unary minus is not supported.
Expr parse_expression(const std::string& text);

double eval_expression(const Expr& expr, std::span<const double> values);

// "a" alone is rejected: a program needs depth >= 1.
DagProgram compile_expression(const Expr& expr);
DagProgram compile_expression(const std::string& text);

struct DifferentialResult {
    double max_rel_err = 0.0;
    long trials = 0;
};

// Compares execute(compile(expr)) against direct evaluation on random inputs
// from U[1,2). Relative error is measured against max(|reference|, 1e-12).
DifferentialResult differential_test(const std::string& text, long trials,
                                     std::uint64_t seed);

}  // namespace dmu
