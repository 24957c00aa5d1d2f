#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace quasimet {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Small arithmetic expression language used by the JSON interfaces:
// numbers, named variables, + - * /, unary minus, ^ with a numeric literal
// exponent, and sin/cos/exp/sqrt. Parsed by recursive descent into an
// immutable AST that can be evaluated and differentiated symbolically.
class Expr {
public:
    struct Node;
    using NodePtr = std::shared_ptr<const Node>;

    Expr() = default;

    // `variables` fixes both the allowed names and their value order in eval.
    static Expr parse(std::string_view text, std::vector<std::string> variables);

    static Expr constant(double value);

    double eval(std::span<const double> values) const;
    Expr derivative(int variable) const;

    const std::vector<std::string>& variables() const { return vars_; }
    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

private:
    Expr(NodePtr root, std::vector<std::string> vars, std::string source)
        : root_(std::move(root)), vars_(std::move(vars)), source_(std::move(source)) {}

    NodePtr root_;
    std::vector<std::string> vars_;
    std::string source_;
};

}  // namespace quasimet
