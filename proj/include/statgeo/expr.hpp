#pragma once

// Expression language for scenario fields (metric components, connection
// coefficients, structure tensors, immersion maps).
//
// Grammar:
//   expr    := term (("+"|"-") term)*
//   term    := factor (("*"|"/") factor)*
//   factor  := unary ("^" factor)?          -- "^" right-associative
//   unary   := "-" unary | primary
//   primary := NUMBER | IDENT | FUNC "(" expr ")" | "(" expr ")"
//   FUNC    := exp | ln | sin | cos | sinh | cosh | sqrt
//
// Note the base of "^" is a unary production, so "-x^2" parses as (-x)^2.
//
// Trees are immutable after parsing and can be evaluated concurrently. The
// evaluator is generic over the scalar type: plain doubles, or Dual scalars
// to thread extra derivative directions through an evaluation.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "statgeo/errors.hpp"
#include "statgeo/jet.hpp"

namespace statgeo {

enum class ExprFunc { Exp, Ln, Sin, Cos, Sinh, Cosh, Sqrt };

struct ExprNode {
    enum class Kind { Constant, Coord, Neg, Add, Sub, Mul, Div, Pow, Call };
    Kind kind;
    double constant = 0.0;
    int coord = -1;
    ExprFunc func = ExprFunc::Exp;
    std::shared_ptr<const ExprNode> a, b;
    // For Pow nodes whose exponent subtree is constant and integral: decided
    // structurally at parse time so plain and jet evaluation take the same
    // branch and integer powers work for nonpositive bases.
    bool pow_const_int = false;
    long pow_exponent = 0;
};

using ExprNodePtr = std::shared_ptr<const ExprNode>;

namespace detail {

inline const char* func_name(ExprFunc f) {
    switch (f) {
        case ExprFunc::Exp: return "exp";
        case ExprFunc::Ln: return "ln";
        case ExprFunc::Sin: return "sin";
        case ExprFunc::Cos: return "cos";
        case ExprFunc::Sinh: return "sinh";
        case ExprFunc::Cosh: return "cosh";
        case ExprFunc::Sqrt: return "sqrt";
    }
    return "?";
}

// Constant-folds a coordinate-free subtree; nullopt if the tree references a
// coordinate or folding is not well defined.
inline std::optional<double> fold_const(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Constant: return n.constant;
        case ExprNode::Kind::Coord: return std::nullopt;
        case ExprNode::Kind::Neg: {
            auto a = fold_const(*n.a);
            return a ? std::optional<double>(-*a) : std::nullopt;
        }
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub:
        case ExprNode::Kind::Mul:
        case ExprNode::Kind::Div:
        case ExprNode::Kind::Pow: {
            auto a = fold_const(*n.a);
            auto b = fold_const(*n.b);
            if (!a || !b) return std::nullopt;
            double v;
            switch (n.kind) {
                case ExprNode::Kind::Add: v = *a + *b; break;
                case ExprNode::Kind::Sub: v = *a - *b; break;
                case ExprNode::Kind::Mul: v = *a * *b; break;
                case ExprNode::Kind::Div: v = *b == 0.0 ? NAN : *a / *b; break;
                default: v = std::pow(*a, *b); break;
            }
            return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
        }
        case ExprNode::Kind::Call: {
            auto a = fold_const(*n.a);
            if (!a) return std::nullopt;
            double v;
            switch (n.func) {
                case ExprFunc::Exp: v = std::exp(*a); break;
                case ExprFunc::Ln: v = std::log(*a); break;
                case ExprFunc::Sin: v = std::sin(*a); break;
                case ExprFunc::Cos: v = std::cos(*a); break;
                case ExprFunc::Sinh: v = std::sinh(*a); break;
                case ExprFunc::Cosh: v = std::cosh(*a); break;
                case ExprFunc::Sqrt: v = std::sqrt(*a); break;
                default: v = NAN; break;
            }
            return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
        }
    }
    return std::nullopt;
}

inline bool lookup_func(const std::string& name, ExprFunc& out) {
    if (name == "exp") { out = ExprFunc::Exp; return true; }
    if (name == "ln") { out = ExprFunc::Ln; return true; }
    if (name == "sin") { out = ExprFunc::Sin; return true; }
    if (name == "cos") { out = ExprFunc::Cos; return true; }
    if (name == "sinh") { out = ExprFunc::Sinh; return true; }
    if (name == "cosh") { out = ExprFunc::Cosh; return true; }
    if (name == "sqrt") { out = ExprFunc::Sqrt; return true; }
    return false;
}

// Recursive-descent parser over the raw byte string.
class Parser {
public:
    Parser(const std::string& src, const std::vector<std::string>& coords)
        : src_(src), coords_(coords) {}

    ExprNodePtr run() {
        skip_ws();
        ExprNodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& src_;
    const std::vector<std::string>& coords_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                src_[pos_] == '\r'))
            ++pos_;
    }
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    bool eat(char c) {
        if (peek() == c) { ++pos_; skip_ws(); return true; }
        return false;
    }

    static ExprNodePtr make(ExprNode n) {
        return std::make_shared<const ExprNode>(std::move(n));
    }

    ExprNodePtr expr() {
        ExprNodePtr lhs = term();
        for (;;) {
            if (eat('+')) {
                ExprNodePtr rhs = term();
                lhs = make({ExprNode::Kind::Add, 0, -1, ExprFunc::Exp, lhs, rhs});
            } else if (eat('-')) {
                ExprNodePtr rhs = term();
                lhs = make({ExprNode::Kind::Sub, 0, -1, ExprFunc::Exp, lhs, rhs});
            } else {
                return lhs;
            }
        }
    }

    ExprNodePtr term() {
        ExprNodePtr lhs = factor();
        for (;;) {
            if (eat('*')) {
                ExprNodePtr rhs = factor();
                lhs = make({ExprNode::Kind::Mul, 0, -1, ExprFunc::Exp, lhs, rhs});
            } else if (eat('/')) {
                ExprNodePtr rhs = factor();
                lhs = make({ExprNode::Kind::Div, 0, -1, ExprFunc::Exp, lhs, rhs});
            } else {
                return lhs;
            }
        }
    }

    ExprNodePtr factor() {
        ExprNodePtr base = unary();
        if (eat('^')) {
            ExprNodePtr exponent = factor();
            ExprNode n{ExprNode::Kind::Pow, 0, -1, ExprFunc::Exp, base, exponent};
            if (auto c = fold_const(*exponent)) {
                if (*c == std::nearbyint(*c) && std::abs(*c) < 1e9) {
                    n.pow_const_int = true;
                    n.pow_exponent = (long)std::llrint(*c);
                }
            }
            return make(std::move(n));
        }
        return base;
    }

    ExprNodePtr unary() {
        if (eat('-')) {
            ExprNodePtr inner = unary();
            return make({ExprNode::Kind::Neg, 0, -1, ExprFunc::Exp, inner, nullptr});
        }
        return primary();
    }

    ExprNodePtr primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_; skip_ws();
            ExprNodePtr e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return number();
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return ident();
        throw ParseError(std::string("unexpected character '") + (c ? std::string(1, c) : "<end>") + "'",
                         pos_);
    }

    ExprNodePtr number() {
        std::size_t start = pos_;
        bool digits = false;
        while (peek() >= '0' && peek() <= '9') { ++pos_; digits = true; }
        if (peek() == '.') {
            ++pos_;
            while (peek() >= '0' && peek() <= '9') { ++pos_; digits = true; }
        }
        if (!digits) throw ParseError("malformed number", start);
        if (peek() == 'e' || peek() == 'E') {
            std::size_t mark = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            if (peek() >= '0' && peek() <= '9') {
                while (peek() >= '0' && peek() <= '9') ++pos_;
            } else {
                pos_ = mark;   // "2e" with no digits: the 'e' is not an exponent
            }
        }
        std::string text = src_.substr(start, pos_ - start);
        skip_ws();
        double v = std::strtod(text.c_str(), nullptr);
        return make({ExprNode::Kind::Constant, v, -1, ExprFunc::Exp, nullptr, nullptr});
    }

    ExprNodePtr ident() {
        std::size_t start = pos_;
        while ((peek() >= 'a' && peek() <= 'z') || (peek() >= 'A' && peek() <= 'Z') ||
               (peek() >= '0' && peek() <= '9') || peek() == '_')
            ++pos_;
        std::string name = src_.substr(start, pos_ - start);
        skip_ws();
        ExprFunc f;
        if (lookup_func(name, f)) {
            if (!eat('(')) throw ParseError("function '" + name + "' requires '('", pos_);
            ExprNodePtr arg = expr();
            if (!eat(')')) throw ParseError("expected ')' after argument of '" + name + "'", pos_);
            return make({ExprNode::Kind::Call, 0, -1, f, arg, nullptr});
        }
        for (std::size_t i = 0; i < coords_.size(); ++i) {
            if (coords_[i] == name)
                return make({ExprNode::Kind::Coord, 0, (int)i, ExprFunc::Exp, nullptr, nullptr});
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Printing levels follow the grammar: 1 expr, 2 term, 3 factor, 4 unary,
// 5 primary. A node is parenthesized when its own level is below the level
// its position requires, which makes print-then-parse reproduce the tree.
inline int node_level(const ExprNode& n) {
    switch (n.kind) {
        case ExprNode::Kind::Add:
        case ExprNode::Kind::Sub: return 1;
        case ExprNode::Kind::Mul:
        case ExprNode::Kind::Div: return 2;
        case ExprNode::Kind::Pow: return 3;
        case ExprNode::Kind::Neg: return 4;
        default: return 5;
    }
}

inline void print_node(const ExprNode& n, const std::vector<std::string>& coords,
                       int min_level, std::string& out) {
    int lvl = node_level(n);
    bool parens = lvl < min_level;
    if (parens) out += '(';
    switch (n.kind) {
        case ExprNode::Kind::Constant: out += format_double(n.constant); break;
        case ExprNode::Kind::Coord: out += coords[(std::size_t)n.coord]; break;
        case ExprNode::Kind::Neg:
            out += '-';
            print_node(*n.a, coords, 4, out);
            break;
        case ExprNode::Kind::Add:
            print_node(*n.a, coords, 1, out);
            out += '+';
            print_node(*n.b, coords, 2, out);
            break;
        case ExprNode::Kind::Sub:
            print_node(*n.a, coords, 1, out);
            out += '-';
            print_node(*n.b, coords, 2, out);
            break;
        case ExprNode::Kind::Mul:
            print_node(*n.a, coords, 2, out);
            out += '*';
            print_node(*n.b, coords, 3, out);
            break;
        case ExprNode::Kind::Div:
            print_node(*n.a, coords, 2, out);
            out += '/';
            print_node(*n.b, coords, 3, out);
            break;
        case ExprNode::Kind::Pow:
            print_node(*n.a, coords, 4, out);
            out += '^';
            print_node(*n.b, coords, 3, out);
            break;
        case ExprNode::Kind::Call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.a, coords, 1, out);
            out += ')';
            break;
    }
    if (parens) out += ')';
}

inline bool node_equal(const ExprNode& x, const ExprNode& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case ExprNode::Kind::Constant: return x.constant == y.constant;
        case ExprNode::Kind::Coord: return x.coord == y.coord;
        case ExprNode::Kind::Call:
            return x.func == y.func && node_equal(*x.a, *y.a);
        case ExprNode::Kind::Neg: return node_equal(*x.a, *y.a);
        default: return node_equal(*x.a, *y.a) && node_equal(*x.b, *y.b);
    }
}

inline void collect_coords(const ExprNode& n, std::vector<bool>& used) {
    if (n.kind == ExprNode::Kind::Coord) {
        if ((std::size_t)n.coord < used.size()) used[(std::size_t)n.coord] = true;
        return;
    }
    if (n.a) collect_coords(*n.a, used);
    if (n.b) collect_coords(*n.b, used);
}

} // namespace detail

class Expr {
public:
    Expr() = default;

    static Expr parse(const std::string& src, const std::vector<std::string>& coords) {
        if (coords.empty()) throw Error("expression chart has no coordinates");
        for (std::size_t i = 0; i < coords.size(); ++i)
            for (std::size_t j = i + 1; j < coords.size(); ++j)
                if (coords[i] == coords[j])
                    throw Error("duplicate coordinate name '" + coords[i] + "'");
        detail::Parser p(src, coords);
        Expr e;
        e.root_ = p.run();
        e.coords_ = std::make_shared<const std::vector<std::string>>(coords);
        return e;
    }

    bool valid() const { return root_ != nullptr; }

    std::string print() const {
        std::string out;
        detail::print_node(*root_, *coords_, 1, out);
        return out;
    }

    bool operator==(const Expr& other) const {
        return detail::node_equal(*root_, *other.root_);
    }

    const std::vector<std::string>& coord_names() const { return *coords_; }

    // Which coordinate indices actually occur in the tree.
    std::vector<bool> coords_used() const {
        std::vector<bool> used(coords_->size(), false);
        detail::collect_coords(*root_, used);
        return used;
    }

    template <class S>
    S value(const std::vector<S>& x) const {
        check_dim(x.size());
        return eval_value<S>(*root_, x);
    }

    template <class S>
    Jet2<S> jet(const std::vector<S>& x) const {
        check_dim(x.size());
        return eval_jet<S>(*root_, x);
    }

private:
    ExprNodePtr root_;
    std::shared_ptr<const std::vector<std::string>> coords_;

    void check_dim(std::size_t n) const {
        if (n != coords_->size())
            throw Error("expression expects " + std::to_string(coords_->size()) +
                        " coordinates, got " + std::to_string(n));
    }

    template <class S>
    [[noreturn]] void domain_error(const ExprNode& n, const std::vector<S>& x,
                                   const std::string& what) const {
        std::string sub;
        detail::print_node(n, *coords_, 1, sub);
        std::string pt = "(";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) pt += ", ";
            pt += detail::format_double(scalar_value(x[i]));
        }
        pt += ")";
        throw EvalError(what + " in '" + sub + "' at point " + pt);
    }

    template <class S>
    S eval_value(const ExprNode& n, const std::vector<S>& x) const {
        using std::exp; using std::log; using std::sin; using std::cos;
        using std::sinh; using std::cosh; using std::sqrt;
        switch (n.kind) {
            case ExprNode::Kind::Constant: return S(n.constant);
            case ExprNode::Kind::Coord: return x[(std::size_t)n.coord];
            case ExprNode::Kind::Neg: return -eval_value<S>(*n.a, x);
            case ExprNode::Kind::Add: return eval_value<S>(*n.a, x) + eval_value<S>(*n.b, x);
            case ExprNode::Kind::Sub: return eval_value<S>(*n.a, x) - eval_value<S>(*n.b, x);
            case ExprNode::Kind::Mul: return eval_value<S>(*n.a, x) * eval_value<S>(*n.b, x);
            case ExprNode::Kind::Div: {
                S num = eval_value<S>(*n.a, x);
                S den = eval_value<S>(*n.b, x);
                if (scalar_value(den) == 0.0) domain_error(n, x, "division by zero");
                return num / den;
            }
            case ExprNode::Kind::Pow: {
                S base = eval_value<S>(*n.a, x);
                if (n.pow_const_int) {
                    if (n.pow_exponent < 0 && scalar_value(base) == 0.0)
                        domain_error(n, x, "zero base with negative exponent");
                    return pow_int(base, n.pow_exponent);
                }
                S ex = eval_value<S>(*n.b, x);
                if (scalar_value(base) <= 0.0)
                    domain_error(n, x, "fractional power of nonpositive base");
                return exp(ex * log(base));
            }
            case ExprNode::Kind::Call: {
                S arg = eval_value<S>(*n.a, x);
                switch (n.func) {
                    case ExprFunc::Exp: return exp(arg);
                    case ExprFunc::Ln:
                        if (scalar_value(arg) <= 0.0) domain_error(n, x, "ln of nonpositive value");
                        return log(arg);
                    case ExprFunc::Sin: return sin(arg);
                    case ExprFunc::Cos: return cos(arg);
                    case ExprFunc::Sinh: return sinh(arg);
                    case ExprFunc::Cosh: return cosh(arg);
                    case ExprFunc::Sqrt:
                        if (scalar_value(arg) <= 0.0) domain_error(n, x, "sqrt of nonpositive value");
                        return sqrt(arg);
                }
            }
        }
        throw Error("corrupt expression tree");
    }

    template <class S>
    static S pow_int(const S& base, long e) {
        if (e == 0) return S(1);
        unsigned long m = e < 0 ? (unsigned long)(-e) : (unsigned long)e;
        S result(1);
        S b = base;
        while (m > 0) {
            if (m & 1) result = result * b;
            m >>= 1;
            if (m) b = b * b;
        }
        if (e < 0) result = S(1) / result;
        return result;
    }

    template <class S>
    Jet2<S> eval_jet(const ExprNode& n, const std::vector<S>& x) const {
        std::size_t dim = x.size();
        switch (n.kind) {
            case ExprNode::Kind::Constant: return Jet2<S>::constant(dim, S(n.constant));
            case ExprNode::Kind::Coord:
                return Jet2<S>::coordinate(dim, (std::size_t)n.coord, x[(std::size_t)n.coord]);
            case ExprNode::Kind::Neg: return -eval_jet<S>(*n.a, x);
            case ExprNode::Kind::Add: return eval_jet<S>(*n.a, x) + eval_jet<S>(*n.b, x);
            case ExprNode::Kind::Sub: return eval_jet<S>(*n.a, x) - eval_jet<S>(*n.b, x);
            case ExprNode::Kind::Mul: return eval_jet<S>(*n.a, x) * eval_jet<S>(*n.b, x);
            case ExprNode::Kind::Div: {
                Jet2<S> num = eval_jet<S>(*n.a, x);
                Jet2<S> den = eval_jet<S>(*n.b, x);
                if (scalar_value(den.v) == 0.0) domain_error(n, x, "division by zero");
                return num / den;
            }
            case ExprNode::Kind::Pow: {
                Jet2<S> base = eval_jet<S>(*n.a, x);
                if (n.pow_const_int) {
                    if (n.pow_exponent < 0 && scalar_value(base.v) == 0.0)
                        domain_error(n, x, "zero base with negative exponent");
                    return ipow(base, n.pow_exponent);
                }
                Jet2<S> ex = eval_jet<S>(*n.b, x);
                if (scalar_value(base.v) <= 0.0)
                    domain_error(n, x, "fractional power of nonpositive base");
                return exp(ex * log(base));
            }
            case ExprNode::Kind::Call: {
                Jet2<S> arg = eval_jet<S>(*n.a, x);
                switch (n.func) {
                    case ExprFunc::Exp: return exp(arg);
                    case ExprFunc::Ln:
                        if (scalar_value(arg.v) <= 0.0) domain_error(n, x, "ln of nonpositive value");
                        return log(arg);
                    case ExprFunc::Sin: return sin(arg);
                    case ExprFunc::Cos: return cos(arg);
                    case ExprFunc::Sinh: return sinh(arg);
                    case ExprFunc::Cosh: return cosh(arg);
                    case ExprFunc::Sqrt:
                        if (scalar_value(arg.v) <= 0.0) domain_error(n, x, "sqrt of nonpositive value");
                        return sqrt(arg);
                }
            }
        }
        throw Error("corrupt expression tree");
    }
};

} // namespace statgeo
