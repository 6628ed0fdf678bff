#pragma once

// Expression trees for the coordinate functions of parametric curves:
// parsing, printing, symbolic differentiation and numeric evaluation.
//
// Grammar (no implicit multiplication):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)*
//   exponent:= ['-'] INTEGER | '(' ['-'] INTEGER ')'
//   primary := NUMBER | 't' | 'pi' | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "curvspec/error.hpp"

namespace curvspec {

enum class Op : std::uint8_t { Const, Var, Pi, Neg, Sin, Cos, Add, Sub, Mul, Div, Pow };

/// Immutable expression tree in the single variable t. Copies share nodes.
class Expr {
public:
    struct Node {
        Op op = Op::Const;
        double value = 0.0;  // Const only
        int exponent = 0;    // Pow only
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v) { return Expr(make(Op::Const, v, 0, nullptr, nullptr)); }
    static Expr variable() { return Expr(make(Op::Var, 0.0, 0, nullptr, nullptr)); }
    static Expr pi() { return Expr(make(Op::Pi, 0.0, 0, nullptr, nullptr)); }

    static Expr unary(Op op, const Expr& arg) { return Expr(make(op, 0.0, 0, arg.node_, nullptr)); }
    static Expr binary(Op op, const Expr& a, const Expr& b) {
        return Expr(make(op, 0.0, 0, a.node_, b.node_));
    }
    static Expr power(const Expr& base, int exponent) {
        return Expr(make(Op::Pow, 0.0, exponent, base.node_, nullptr));
    }

    Op op() const noexcept { return node_->op; }
    double value() const noexcept { return node_->value; }
    int exponent() const noexcept { return node_->exponent; }
    Expr lhs() const { return Expr(node_->lhs); }
    Expr rhs() const { return Expr(node_->rhs); }
    const Node* node() const noexcept { return node_.get(); }

    bool is_const() const noexcept { return op() == Op::Const; }
    bool is_const(double v) const noexcept { return op() == Op::Const && value() == v; }

    /// Structural equality.
    friend bool operator==(const Expr& a, const Expr& b) { return equal(a.node_.get(), b.node_.get()); }

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

private:
    static std::shared_ptr<const Node> make(Op op, double v, int e, std::shared_ptr<const Node> l,
                                            std::shared_ptr<const Node> r) {
        return std::make_shared<const Node>(Node{op, v, e, std::move(l), std::move(r)});
    }

    static bool equal(const Node* a, const Node* b) {
        if (a == b) return true;
        if (!a || !b || a->op != b->op) return false;
        switch (a->op) {
        case Op::Const: return a->value == b->value;
        case Op::Var:
        case Op::Pi: return true;
        case Op::Pow: return a->exponent == b->exponent && equal(a->lhs.get(), b->lhs.get());
        default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
        }
    }

    std::shared_ptr<const Node> node_;
};

inline bool is_unary(Op op) { return op == Op::Neg || op == Op::Sin || op == Op::Cos; }
inline bool is_binary(Op op) {
    return op == Op::Add || op == Op::Sub || op == Op::Mul || op == Op::Div;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(Op op) {
    switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline void print_to(std::string& out, const Expr::Node* n);

inline void print_child(std::string& out, const Expr::Node* child, bool parens) {
    if (parens) out += '(';
    print_to(out, child);
    if (parens) out += ')';
}

inline void print_to(std::string& out, const Expr::Node* n) {
    switch (n->op) {
    case Op::Const:
        // Negative literals only arise from folding; print them so that the
        // re-parsed tree is Neg(Const) and printing stays a fixed point.
        if (std::signbit(n->value)) {
            out += "(-" + format_number(-n->value) + ")";
        } else {
            out += format_number(n->value);
        }
        return;
    case Op::Var: out += 't'; return;
    case Op::Pi: out += "pi"; return;
    case Op::Sin:
    case Op::Cos:
        out += n->op == Op::Sin ? "sin(" : "cos(";
        print_to(out, n->lhs.get());
        out += ')';
        return;
    case Op::Neg:
        out += '-';
        print_child(out, n->lhs.get(), precedence(n->lhs->op) < precedence(Op::Neg));
        return;
    case Op::Pow:
        print_child(out, n->lhs.get(), precedence(n->lhs->op) < precedence(Op::Pow) ||
                                           (n->lhs->op == Op::Const && std::signbit(n->lhs->value)));
        out += '^';
        out += std::to_string(n->exponent);
        return;
    default: {
        const int p = precedence(n->op);
        print_child(out, n->lhs.get(), precedence(n->lhs->op) < p);
        out += n->op == Op::Add ? "+" : n->op == Op::Sub ? "-" : n->op == Op::Mul ? "*" : "/";
        print_child(out, n->rhs.get(), precedence(n->rhs->op) <= p);
        return;
    }
    }
}

} // namespace detail

/// Prints with the minimal parentheses needed to re-parse to the same tree.
inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_to(out, e.node());
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr parse() {
        skip_ws();
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < src_.size()) unexpected();
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    [[noreturn]] void unexpected() {
        if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = src_[pos_];
        if (is_ident_start(c) || is_digit(c) || c == '(' || c == '.') {
            throw ParseError(std::string("missing operator before '") + c +
                                 "' (implicit multiplication is not supported)",
                             pos_);
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    void expect_close() {
        if (accept(')')) return;
        if (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (is_ident_start(c) || is_digit(c) || c == '(' || c == '.') unexpected();
        }
        throw ParseError("expected ')'", pos_);
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = Expr::binary(Op::Add, lhs, parse_term());
            } else if (accept('-')) {
                lhs = Expr::binary(Op::Sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = Expr::binary(Op::Mul, lhs, parse_unary());
            } else if (accept('/')) {
                lhs = Expr::binary(Op::Div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::unary(Op::Neg, parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        while (accept('^')) base = Expr::power(base, parse_exponent());
        return base;
    }

    int parse_exponent() {
        const bool paren = accept('(');
        const bool negative = accept('-');
        skip_ws();
        const std::size_t start = pos_;
        if (!is_digit(peek()) && peek() != '.') {
            throw ParseError("exponent must be an integer literal", start);
        }
        const double v = parse_number_value();
        if (v != std::floor(v)) throw ParseError("non-integer exponent", start);
        if (v > 1024) throw ParseError("exponent too large", start);
        if (paren) expect_close();
        return negative ? -static_cast<int>(v) : static_cast<int>(v);
    }

    double parse_number_value() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && is_digit(src_[p])) {
                pos_ = p;
                while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
            }
        }
        double v = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
            throw ParseError("malformed number", start);
        }
        return v;
    }

    Expr parse_primary() {
        const char c = peek();
        if (is_digit(c) || c == '.') return Expr::constant(parse_number_value());
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect_close();
            return e;
        }
        if (is_ident_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (is_ident_start(src_[pos_]) || is_digit(src_[pos_])))
                ++pos_;
            const std::string_view id = src_.substr(start, pos_ - start);
            if (id == "t") return Expr::variable();
            if (id == "pi") return Expr::pi();
            if (id == "sin" || id == "cos") {
                if (!accept('(')) throw ParseError("expected '(' after " + std::string(id), pos_);
                Expr arg = parse_expr();
                expect_close();
                return Expr::unary(id == "sin" ? Op::Sin : Op::Cos, arg);
            }
            throw ParseError("unknown identifier '" + std::string(id) + "'", start);
        }
        unexpected();
    }
};

} // namespace detail

/// Parses `source`. Throws ParseError with the offending position.
inline Expr parse_expr(std::string_view source) { return detail::Parser(source).parse(); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline double ipow(double base, int n) {
    double result = 1.0;
    unsigned k = static_cast<unsigned>(n < 0 ? -n : n);
    double b = base;
    while (k) {
        if (k & 1u) result *= b;
        b *= b;
        k >>= 1u;
    }
    return result;
}

[[noreturn]] inline void throw_div_zero(const Expr::Node* n) {
    throw EvalError("division by zero", to_string(Expr(std::shared_ptr<const Expr::Node>(
                                            std::shared_ptr<const Expr::Node>{}, n))));
}

inline double eval_node(const Expr::Node* n, double t) {
    switch (n->op) {
    case Op::Const: return n->value;
    case Op::Var: return t;
    case Op::Pi: return std::numbers::pi;
    case Op::Neg: return -eval_node(n->lhs.get(), t);
    case Op::Sin: return std::sin(eval_node(n->lhs.get(), t));
    case Op::Cos: return std::cos(eval_node(n->lhs.get(), t));
    case Op::Add: return eval_node(n->lhs.get(), t) + eval_node(n->rhs.get(), t);
    case Op::Sub: return eval_node(n->lhs.get(), t) - eval_node(n->rhs.get(), t);
    case Op::Mul: return eval_node(n->lhs.get(), t) * eval_node(n->rhs.get(), t);
    case Op::Div: {
        const double a = eval_node(n->lhs.get(), t);
        const double b = eval_node(n->rhs.get(), t);
        if (b == 0.0) throw_div_zero(n);
        return a / b;
    }
    case Op::Pow: {
        const double b = eval_node(n->lhs.get(), t);
        if (n->exponent < 0) {
            if (b == 0.0) throw_div_zero(n);
            return 1.0 / ipow(b, n->exponent);
        }
        return ipow(b, n->exponent);
    }
    }
    return 0.0;
}

} // namespace detail

/// Evaluates `e` at `t`. Throws EvalError on division by zero.
inline double evaluate(const Expr& e, double t) { return detail::eval_node(e.node(), t); }

/// Flattened postfix form of an expression for repeated evaluation.
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e) : root_(e) { emit(e.node()); }

    double operator()(double t) const {
        // Stack depth is bounded by the tree height; small fixed buffer first.
        std::array<double, 64> small{};
        std::vector<double> big;
        double* stack = small.data();
        if (max_depth_ > small.size()) {
            big.resize(max_depth_);
            stack = big.data();
        }
        std::size_t sp = 0;
        for (const Instr& in : code_) {
            switch (in.op) {
            case Op::Const: stack[sp++] = in.value; break;
            case Op::Var: stack[sp++] = t; break;
            case Op::Pi: stack[sp++] = std::numbers::pi; break;
            case Op::Neg: stack[sp - 1] = -stack[sp - 1]; break;
            case Op::Sin: stack[sp - 1] = std::sin(stack[sp - 1]); break;
            case Op::Cos: stack[sp - 1] = std::cos(stack[sp - 1]); break;
            case Op::Add: --sp; stack[sp - 1] += stack[sp]; break;
            case Op::Sub: --sp; stack[sp - 1] -= stack[sp]; break;
            case Op::Mul: --sp; stack[sp - 1] *= stack[sp]; break;
            case Op::Div:
                --sp;
                if (stack[sp] == 0.0) detail::throw_div_zero(in.node);
                stack[sp - 1] /= stack[sp];
                break;
            case Op::Pow:
                if (in.exponent < 0) {
                    if (stack[sp - 1] == 0.0) detail::throw_div_zero(in.node);
                    stack[sp - 1] = 1.0 / detail::ipow(stack[sp - 1], in.exponent);
                } else {
                    stack[sp - 1] = detail::ipow(stack[sp - 1], in.exponent);
                }
                break;
            }
        }
        return stack[0];
    }

    const Expr& expr() const noexcept { return root_; }

private:
    struct Instr {
        Op op;
        int exponent;
        double value;
        const Expr::Node* node;
    };

    std::size_t emit(const Expr::Node* n) {
        std::size_t depth = 1;
        if (is_binary(n->op)) {
            const std::size_t a = emit(n->lhs.get());
            const std::size_t b = emit(n->rhs.get());
            depth = std::max(a, b + 1);
        } else if (is_unary(n->op) || n->op == Op::Pow) {
            depth = emit(n->lhs.get());
        }
        code_.push_back(Instr{n->op, n->exponent, n->value, n});
        max_depth_ = std::max(max_depth_, depth);
        return depth;
    }

    Expr root_;
    std::vector<Instr> code_;
    std::size_t max_depth_ = 1;
};

// ---------------------------------------------------------------------------
// Differentiation

namespace detail {

// Builders that fold literal subtrees and drop 0/1 identities. Negative folded
// literals are kept as Neg(Const) so every tree the library builds prints and
// re-parses to itself.
inline Expr lit(double v) {
    if (v == 0.0) return Expr::constant(0.0);
    return std::signbit(v) && v != 0.0 ? Expr::unary(Op::Neg, Expr::constant(-v)) : Expr::constant(v);
}

inline bool literal(const Expr& e, double& v) {
    if (e.op() == Op::Const) {
        v = e.value();
        return true;
    }
    if (e.op() == Op::Neg && e.lhs().op() == Op::Const) {
        v = -e.lhs().value();
        return true;
    }
    return false;
}

inline Expr neg(const Expr& a) {
    double v = 0.0;
    if (literal(a, v)) return lit(-v);
    if (a.op() == Op::Neg) return a.lhs();
    return Expr::unary(Op::Neg, a);
}

inline Expr add(const Expr& a, const Expr& b) {
    double x = 0.0, y = 0.0;
    const bool la = literal(a, x), lb = literal(b, y);
    if (la && lb) return lit(x + y);
    if (la && x == 0.0) return b;
    if (lb && y == 0.0) return a;
    return Expr::binary(Op::Add, a, b);
}

inline Expr sub(const Expr& a, const Expr& b) {
    double x = 0.0, y = 0.0;
    const bool la = literal(a, x), lb = literal(b, y);
    if (la && lb) return lit(x - y);
    if (lb && y == 0.0) return a;
    if (la && x == 0.0) return neg(b);
    return Expr::binary(Op::Sub, a, b);
}

inline Expr mul(const Expr& a, const Expr& b) {
    double x = 0.0, y = 0.0;
    const bool la = literal(a, x), lb = literal(b, y);
    if (la && lb) return lit(x * y);
    if ((la && x == 0.0) || (lb && y == 0.0)) return Expr::constant(0.0);
    if (la && x == 1.0) return b;
    if (lb && y == 1.0) return a;
    if (la && x == -1.0) return neg(b);
    if (lb && y == -1.0) return neg(a);
    return Expr::binary(Op::Mul, a, b);
}

inline Expr div(const Expr& a, const Expr& b) {
    double x = 0.0, y = 0.0;
    const bool la = literal(a, x), lb = literal(b, y);
    if (la && lb && y != 0.0) return lit(x / y);
    if (la && x == 0.0) return Expr::constant(0.0);
    if (lb && y == 1.0) return a;
    return Expr::binary(Op::Div, a, b);
}

inline Expr pow(const Expr& a, int n) {
    if (n == 0) return Expr::constant(1.0);
    if (n == 1) return a;
    double x;
    if (literal(a, x) && (n > 0 || x != 0.0)) return lit(n > 0 ? ipow(x, n) : 1.0 / ipow(x, n));
    return Expr::power(a, n);
}

inline Expr diff(const Expr& e) {
    switch (e.op()) {
    case Op::Const:
    case Op::Pi: return Expr::constant(0.0);
    case Op::Var: return Expr::constant(1.0);
    case Op::Neg: return neg(diff(e.lhs()));
    case Op::Sin: return mul(diff(e.lhs()), Expr::unary(Op::Cos, e.lhs()));
    case Op::Cos: return neg(mul(diff(e.lhs()), Expr::unary(Op::Sin, e.lhs())));
    case Op::Add: return add(diff(e.lhs()), diff(e.rhs()));
    case Op::Sub: return sub(diff(e.lhs()), diff(e.rhs()));
    case Op::Mul:
        return add(mul(diff(e.lhs()), e.rhs()), mul(e.lhs(), diff(e.rhs())));
    case Op::Div: {
        const Expr& a = e.lhs();
        const Expr& b = e.rhs();
        return div(sub(mul(diff(a), b), mul(a, diff(b))), pow(b, 2));
    }
    case Op::Pow: {
        const int n = e.exponent();
        if (n == 0) return Expr::constant(0.0);
        return mul(mul(Expr::constant(static_cast<double>(n)), pow(e.lhs(), n - 1)), diff(e.lhs()));
    }
    }
    return Expr::constant(0.0);
}

inline Expr subst(const Expr& e, const Expr& replacement) {
    switch (e.op()) {
    case Op::Var: return replacement;
    case Op::Const:
    case Op::Pi: return e;
    case Op::Pow: return Expr::power(subst(e.lhs(), replacement), e.exponent());
    default:
        if (is_unary(e.op())) return Expr::unary(e.op(), subst(e.lhs(), replacement));
        return Expr::binary(e.op(), subst(e.lhs(), replacement), subst(e.rhs(), replacement));
    }
}

} // namespace detail

/// d e / dt by structural rules, with constant folding of literal subtrees.
inline Expr differentiate(const Expr& e) { return detail::diff(e); }

/// Replaces every occurrence of t by `replacement`.
inline Expr substitute(const Expr& e, const Expr& replacement) {
    return detail::subst(e, replacement);
}

/// True when the tree does not mention t.
inline bool is_constant_expr(const Expr& e) {
    switch (e.op()) {
    case Op::Var: return false;
    case Op::Const:
    case Op::Pi: return true;
    case Op::Pow: return is_constant_expr(e.lhs());
    default:
        if (is_unary(e.op())) return is_constant_expr(e.lhs());
        return is_constant_expr(e.lhs()) && is_constant_expr(e.rhs());
    }
}

} // namespace curvspec
