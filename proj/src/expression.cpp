#include "quasimet/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace quasimet {

enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt };

struct Expr::Node {
    Op op;
    double value = 0.0;  // Number: literal; Pow: exponent
    int var = -1;
    NodePtr a;
    NodePtr b;
};

namespace {

using NodePtr = Expr::NodePtr;

NodePtr number(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Number;
    n->value = v;
    return n;
}

NodePtr variable(int idx) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Var;
    n->var = idx;
    return n;
}

NodePtr node1(Op op, NodePtr a) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    return n;
}

NodePtr node2(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Number && n->value == v; }

// Constructors with constant folding for the identities the derivative
// builder produces constantly (0 * f, f + 0, 1 * f, ...).
NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->op == Op::Number && b->op == Op::Number) return number(a->value + b->value);
    return node2(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->op == Op::Number && b->op == Op::Number) return number(a->value - b->value);
    if (is_const(a, 0.0)) return node1(Op::Neg, std::move(b));
    return node2(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return number(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->op == Op::Number && b->op == Op::Number) return number(a->value * b->value);
    return node2(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return number(0.0);
    if (is_const(b, 1.0)) return a;
    return node2(Op::Div, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
    if (a->op == Op::Number) return number(-a->value);
    return node1(Op::Neg, std::move(a));
}

NodePtr pow_node(NodePtr base, double exponent) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::Pow;
    n->a = std::move(base);
    n->value = exponent;
    return n;
}

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    NodePtr run() {
        auto e = expression();
        skip_space();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected trailing input at position " + std::to_string(pos_));
        }
        return e;
    }

private:
    // expression := term (('+'|'-') term)*
    NodePtr expression() {
        auto lhs = term();
        for (;;) {
            skip_space();
            if (consume('+')) {
                lhs = add(lhs, term());
            } else if (consume('-')) {
                lhs = sub(lhs, term());
            } else {
                return lhs;
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            skip_space();
            if (consume('*')) {
                lhs = mul(lhs, unary());
            } else if (consume('/')) {
                lhs = div(lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    // unary := '-' unary | power
    NodePtr unary() {
        skip_space();
        if (consume('-')) return neg(unary());
        return power();
    }

    // power := primary ('^' signed-number)?
    NodePtr power() {
        auto base = primary();
        skip_space();
        if (consume('^')) {
            skip_space();
            bool negative = consume('-');
            double e = number_literal();
            return pow_node(std::move(base), negative ? -e : e);
        }
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expression();
            skip_space();
            if (!consume(')')) throw ParseError("missing closing parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number(number_literal());
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name = identifier();
            skip_space();
            if (consume('(')) {
                auto arg = expression();
                skip_space();
                if (!consume(')')) throw ParseError("missing closing parenthesis");
                if (name == "sin") return node1(Op::Sin, std::move(arg));
                if (name == "cos") return node1(Op::Cos, std::move(arg));
                if (name == "exp") return node1(Op::Exp, std::move(arg));
                if (name == "sqrt") return node1(Op::Sqrt, std::move(arg));
                throw ParseError("unknown function '" + name + "'");
            }
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (vars_[i] == name) return variable(static_cast<int>(i));
            }
            throw ParseError("unknown variable '" + name + "'");
        }
        throw ParseError(std::string("unexpected character '") + c + "'");
    }

    double number_literal() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // not an exponent after all
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || pos_ == start) {
            throw ParseError("bad number literal at position " + std::to_string(start));
        }
        return value;
    }

    std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_')) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
};

double eval_node(const Expr::Node& n, std::span<const double> values) {
    switch (n.op) {
        case Op::Number: return n.value;
        case Op::Var: return values[n.var];
        case Op::Neg: return -eval_node(*n.a, values);
        case Op::Add: return eval_node(*n.a, values) + eval_node(*n.b, values);
        case Op::Sub: return eval_node(*n.a, values) - eval_node(*n.b, values);
        case Op::Mul: return eval_node(*n.a, values) * eval_node(*n.b, values);
        case Op::Div: return eval_node(*n.a, values) / eval_node(*n.b, values);
        case Op::Pow: return std::pow(eval_node(*n.a, values), n.value);
        case Op::Sin: return std::sin(eval_node(*n.a, values));
        case Op::Cos: return std::cos(eval_node(*n.a, values));
        case Op::Exp: return std::exp(eval_node(*n.a, values));
        case Op::Sqrt: return std::sqrt(eval_node(*n.a, values));
    }
    throw std::logic_error("unreachable expression op");
}

NodePtr derive(const NodePtr& n, int var) {
    switch (n->op) {
        case Op::Number: return number(0.0);
        case Op::Var: return number(n->var == var ? 1.0 : 0.0);
        case Op::Neg: return neg(derive(n->a, var));
        case Op::Add: return add(derive(n->a, var), derive(n->b, var));
        case Op::Sub: return sub(derive(n->a, var), derive(n->b, var));
        case Op::Mul:
            return add(mul(derive(n->a, var), n->b), mul(n->a, derive(n->b, var)));
        case Op::Div:
            return div(sub(mul(derive(n->a, var), n->b), mul(n->a, derive(n->b, var))),
                       pow_node(n->b, 2.0));
        case Op::Pow:
            // d(f^c) = c * f^(c-1) * f'
            return mul(mul(number(n->value), pow_node(n->a, n->value - 1.0)), derive(n->a, var));
        case Op::Sin: return mul(node1(Op::Cos, n->a), derive(n->a, var));
        case Op::Cos: return neg(mul(node1(Op::Sin, n->a), derive(n->a, var)));
        case Op::Exp: return mul(node1(Op::Exp, n->a), derive(n->a, var));
        case Op::Sqrt:
            return div(derive(n->a, var), mul(number(2.0), node1(Op::Sqrt, n->a)));
    }
    throw std::logic_error("unreachable expression op");
}

}  // namespace

Expr Expr::parse(std::string_view text, std::vector<std::string> variables) {
    Parser parser(text, variables);
    NodePtr root = parser.run();
    return Expr(std::move(root), std::move(variables), std::string(text));
}

Expr Expr::constant(double value) { return Expr(number(value), {}, std::to_string(value)); }

double Expr::eval(std::span<const double> values) const {
    if (!root_) throw std::logic_error("evaluating empty expression");
    if (values.size() < vars_.size()) throw std::invalid_argument("missing variable values");
    return eval_node(*root_, values);
}

Expr Expr::derivative(int variable) const {
    if (!root_) throw std::logic_error("differentiating empty expression");
    if (variable < 0 || variable >= static_cast<int>(vars_.size())) {
        throw std::out_of_range("derivative variable out of range");
    }
    return Expr(derive(root_, variable), vars_, "d/d" + vars_[variable] + "(" + source_ + ")");
}

}  // namespace quasimet
