#include "dmu/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "dmu/prng.hpp"

namespace dmu {

namespace {

struct Parser {
    const std::string& text;
    std::size_t pos = 0;
    std::vector<std::string> variables;

    explicit Parser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error("syntax error at position " + std::to_string(pos) +
                                 ": " + msg);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    int intern(const std::string& name) {
        for (std::size_t i = 0; i < variables.size(); ++i)
            if (variables[i] == name) return static_cast<int>(i);
        variables.push_back(name);
        return static_cast<int>(variables.size()) - 1;
    }

    std::unique_ptr<ExprNode> parse_factor() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            auto inner = parse_sum();
            if (peek() != ')') fail("expected ')'");
            ++pos;
            return inner;
        }
        if (c == '-') fail("unary minus is not supported");
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                    text[pos] == '_'))
                name += text[pos++];
            auto node = std::make_unique<ExprNode>();
            node->kind = ExprNode::Kind::Var;
            node->var_slot = intern(name);
            return node;
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            fail("numeric literals are not supported; use variables");
        fail(c == '\0' ? "unexpected end of input" : "unexpected character");
    }

    std::unique_ptr<ExprNode> parse_term() {
        auto node = parse_factor();
        for (;;) {
            const char c = peek();
            if (c != '*' && c != '/') return node;
            ++pos;
            auto bin = std::make_unique<ExprNode>();
            bin->kind = ExprNode::Kind::Binary;
            bin->op = c;
            bin->lhs = std::move(node);
            bin->rhs = parse_factor();
            node = std::move(bin);
        }
    }

    std::unique_ptr<ExprNode> parse_sum() {
        auto node = parse_term();
        for (;;) {
            const char c = peek();
            if (c != '+' && c != '-') return node;
            ++pos;
            auto bin = std::make_unique<ExprNode>();
            bin->kind = ExprNode::Kind::Binary;
            bin->op = c;
            bin->lhs = std::move(node);
            bin->rhs = parse_term();
            node = std::move(bin);
        }
    }
};

double eval_node(const ExprNode& node, std::span<const double> values) {
    if (node.kind == ExprNode::Kind::Var) return values[node.var_slot];
    const double a = eval_node(*node.lhs, values);
    const double b = eval_node(*node.rhs, values);
    switch (node.op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        case '/': return a / b;
    }
    return 0.0;
}

int count_internal(const ExprNode& node) {
    if (node.kind == ExprNode::Kind::Var) return 0;
    return 1 + count_internal(*node.lhs) + count_internal(*node.rhs);
}

// Emits steps post-order; returns the slot holding the node's value.
int emit(const ExprNode& node, DagProgram& program, int& next_step) {
    if (node.kind == ExprNode::Kind::Var) return node.var_slot;
    const int lhs_slot = emit(*node.lhs, program, next_step);
    const int rhs_slot = emit(*node.rhs, program, next_step);

    const int n = next_step++;
    DagStep& step = program.steps[n];
    step.selector[lhs_slot] += 1.0;
    step.selector[rhs_slot] += (node.op == '+' || node.op == '*') ? 1.0 : -1.0;
    step.gate = (node.op == '+' || node.op == '-') ? 1.0 : 0.0;
    return program.num_initial + n;
}

}  // namespace

Expr parse_expression(const std::string& text) {
    Parser parser(text);
    Expr expr;
    expr.root = parser.parse_sum();
    if (parser.peek() != '\0') parser.fail("trailing input");
    expr.variables = std::move(parser.variables);
    return expr;
}

double eval_expression(const Expr& expr, std::span<const double> values) {
    if (values.size() != expr.variables.size())
        throw std::invalid_argument("expected " +
                                    std::to_string(expr.variables.size()) +
                                    " values");
    return eval_node(*expr.root, values);
}

DagProgram compile_expression(const Expr& expr) {
    const int depth = count_internal(*expr.root);
    if (depth < 1)
        throw std::invalid_argument(
            "expression has no operations; program depth must be >= 1");

    DagProgram program;
    program.num_initial = static_cast<int>(expr.variables.size());
    program.steps.assign(depth, DagStep{std::vector<double>(
                                            expr.variables.size() + depth, 0.0),
                                        1.0});
    int next_step = 0;
    emit(*expr.root, program, next_step);
    program.validate();
    return program;
}

DagProgram compile_expression(const std::string& text) {
    return compile_expression(parse_expression(text));
}

DifferentialResult differential_test(const std::string& text, long trials,
                                     std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    const Expr expr = parse_expression(text);
    const DagProgram program = compile_expression(expr);

    Xoshiro256pp rng(derive_stream(seed, StreamKind::ExprTrial));
    std::vector<double> values(expr.variables.size());

    DifferentialResult res;
    res.trials = trials;
    for (long t = 0; t < trials; ++t) {
        for (auto& v : values) v = rng.uniform(1.0, 2.0);
        const double want = eval_expression(expr, values);
        const double got = dag_execute(program, values);
        const double rel =
            std::fabs(got - want) / std::max(std::fabs(want), 1e-12);
        res.max_rel_err = std::max(res.max_rel_err, rel);
    }
    return res;
}

}  // namespace dmu
