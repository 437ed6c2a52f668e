#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "statgeo/expr.hpp"
#include "helpers.hpp"

using statgeo::Dual;
using statgeo::EvalError;
using statgeo::Expr;
using statgeo::ExprNode;
using statgeo::Jet2;
using statgeo::ParseError;
using sgtest::coords4;

namespace {

// Independent oracle: a separate precedence-climbing parser/evaluator for the
// same grammar, sharing no code with the library implementation.
class RefEval {
public:
    RefEval(const std::string& s, const std::vector<std::string>& names,
            const std::vector<double>& vals)
        : s_(s), names_(names), vals_(vals) {}

    double run() {
        double v = parse_binary(0);
        ws();
        if (i_ != s_.size()) throw std::runtime_error("ref: trailing input");
        return v;
    }

private:
    const std::string& s_;
    const std::vector<std::string>& names_;
    const std::vector<double>& vals_;
    std::size_t i_ = 0;

    void ws() { while (i_ < s_.size() && std::isspace((unsigned char)s_[i_])) ++i_; }
    char peek() { ws(); return i_ < s_.size() ? s_[i_] : '\0'; }

    int prec(char op) {
        if (op == '+' || op == '-') return 1;
        if (op == '*' || op == '/') return 2;
        if (op == '^') return 3;
        return 0;
    }

    double parse_binary(int min_prec) {
        double lhs = parse_unary();
        for (;;) {
            char op = peek();
            int p = prec(op);
            if (p == 0 || p < min_prec) return lhs;
            ++i_;
            // ^ is right-associative, so it recurses at its own level
            double rhs = parse_binary(op == '^' ? p : p + 1);
            switch (op) {
                case '+': lhs += rhs; break;
                case '-': lhs -= rhs; break;
                case '*': lhs *= rhs; break;
                case '/': lhs /= rhs; break;
                case '^': lhs = std::pow(lhs, rhs); break;
            }
        }
    }

    double parse_unary() {
        if (peek() == '-') { ++i_; return -parse_unary(); }
        return parse_primary();
    }

    double parse_primary() {
        char c = peek();
        if (c == '(') {
            ++i_;
            double v = parse_binary(0);
            if (peek() != ')') throw std::runtime_error("ref: expected )");
            ++i_;
            return v;
        }
        if (std::isdigit((unsigned char)c) || c == '.') {
            const char* start = s_.c_str() + i_;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            i_ += (std::size_t)(end - start);
            return v;
        }
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_')) ++i_;
        std::string name = s_.substr(start, i_ - start);
        if (peek() == '(') {
            ++i_;
            double a = parse_binary(0);
            if (peek() != ')') throw std::runtime_error("ref: expected )");
            ++i_;
            if (name == "exp") return std::exp(a);
            if (name == "ln") return std::log(a);
            if (name == "sin") return std::sin(a);
            if (name == "cos") return std::cos(a);
            if (name == "sinh") return std::sinh(a);
            if (name == "cosh") return std::cosh(a);
            if (name == "sqrt") return std::sqrt(a);
            throw std::runtime_error("ref: bad function " + name);
        }
        for (std::size_t k = 0; k < names_.size(); ++k)
            if (names_[k] == name) return vals_[k];
        throw std::runtime_error("ref: unknown name " + name);
    }
};

double ref_value(const std::string& s, const std::vector<std::string>& names,
                 const std::vector<double>& vals) {
    return RefEval(s, names, vals).run();
}

} // namespace

TEST_CASE("parser produces the expected shapes") {
    auto e = Expr::parse("1+exp(-x1+x3)", coords4());
    CHECK(e.print() == "1+exp(-x1+x3)");

    auto x1 = Expr::parse("x1", coords4());
    CHECK(x1.print() == "x1");
    std::vector<double> p{7.0, 0.0, 0.0, 0.0};
    CHECK(x1.value(p) == 7.0);
}

TEST_CASE("power is right-associative") {
    auto e = Expr::parse("x1^x2^2", coords4());
    std::vector<double> p{2.0, 3.0, 0.0, 0.0};
    // grouping x1^(x2^2) = 2^9 = 512; the other grouping would give 64
    CHECK(e.value(p) == Catch::Approx(512.0).epsilon(1e-12));
    CHECK(ref_value("x1^x2^2", coords4(), p) == Catch::Approx(512.0).epsilon(1e-12));
    CHECK(std::abs(e.value(p) - 64.0) > 1.0);
}

TEST_CASE("unary minus binds before ^ in the base position") {
    auto e = Expr::parse("-x1^2", coords4());
    std::vector<double> p{3.0, 0.0, 0.0, 0.0};
    CHECK(e.value(p) == 9.0);   // (-x1)^2
    auto f = Expr::parse("x1^-x2", coords4());
    std::vector<double> q{2.0, 2.0, 0.0, 0.0};
    CHECK(f.value(q) == 0.25);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(Expr::parse("1+", coords4()), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(x1)", coords4()), ParseError);
    CHECK_THROWS_AS(Expr::parse("x9", coords4()), ParseError);
    CHECK_THROWS_AS(Expr::parse("exp x1", coords4()), ParseError);
    try {
        Expr::parse("x1 + @", coords4());
        FAIL("expected throw");
    } catch (const ParseError& pe) {
        CHECK(pe.offset == 5);
    }
}

TEST_CASE("evaluation domain errors") {
    std::vector<double> p{-1.0, 0.0, 0.0, 0.0};
    CHECK_THROWS_AS(Expr::parse("ln(x1)", coords4()).value(p), EvalError);
    CHECK_THROWS_AS(Expr::parse("sqrt(x1)", coords4()).value(p), EvalError);
    CHECK_THROWS_AS(Expr::parse("1/(x1+1)", coords4()).value(p), EvalError);
    CHECK_THROWS_AS(Expr::parse("x1^0.5", coords4()).value(p), EvalError);
    CHECK_NOTHROW(Expr::parse("x1^3", coords4()).value(p));
}

TEST_CASE("jet of exp(-x1+x3) at the origin") {
    auto e = Expr::parse("exp(-x1+x3)", coords4());
    std::vector<double> o(4, 0.0);
    auto j = e.jet(o);
    CHECK(j.v == 1.0);
    CHECK(j.g[0] == -1.0);
    CHECK(j.g[1] == 0.0);
    CHECK(j.g[2] == 1.0);
    CHECK(j.g[3] == 0.0);
    CHECK(j.hess(0, 0) == 1.0);
    CHECK(j.hess(0, 2) == -1.0);
    CHECK(j.hess(2, 0) == -1.0);
    CHECK(j.hess(2, 2) == 1.0);
    CHECK(j.hess(1, 1) == 0.0);
    CHECK(j.hess(0, 3) == 0.0);

    auto g11 = Expr::parse("1+exp(-x1+x3)", coords4());
    CHECK(g11.jet(o).v == 2.0);
    CHECK(Expr::parse("exp(x1-x3)", coords4()).value(o) == 1.0);
    CHECK(Expr::parse("3", coords4()).value(o) == 3.0);
}

TEST_CASE("value equals jet value bit for bit") {
    statgeo::SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::string src = sgtest::random_expr(rng, coords4(), 3);
        auto e = Expr::parse(src, coords4());
        std::vector<double> p(4);
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
        CHECK(e.value(p) == e.jet(p).v);
    }
}

TEST_CASE("print/parse round trip is the identity on trees") {
    statgeo::SplitMix64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        std::string src = sgtest::random_expr(rng, coords4(), 4);
        auto e = Expr::parse(src, coords4());
        auto e2 = Expr::parse(e.print(), coords4());
        REQUIRE(e == e2);
        REQUIRE(e.print() == e2.print());
    }
}

TEST_CASE("independent interpreter agrees on random expressions") {
    statgeo::SplitMix64 rng(31337);
    for (int trial = 0; trial < 300; ++trial) {
        std::string src = sgtest::random_expr(rng, coords4(), 4);
        auto e = Expr::parse(src, coords4());
        std::vector<double> p(4);
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
        double mine = e.value(p);
        double ref = ref_value(src, coords4(), p);
        CHECK(mine == Catch::Approx(ref).margin(1e-12));
    }
}

TEST_CASE("gradient matches finite differences at 1e-7 relative on 100 pairs") {
    statgeo::SplitMix64 rng(4242);
    int done = 0;
    while (done < 100) {
        std::string src = sgtest::random_expr(rng, coords4(), 3);
        auto e = Expr::parse(src, coords4());
        std::vector<double> p(4);
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
        double v;
        try {
            v = e.value(p);
        } catch (const EvalError&) {
            continue;
        }
        if (std::abs(v) > 10.0) continue;
        auto j = e.jet(p);
        for (std::size_t k = 0; k < 4; ++k) {
            double fd = sgtest::fd_partial(e, p, k);
            CHECK(std::abs(j.g[k] - fd) <= 1e-7 * std::max(1.0, std::abs(fd)));
        }
        ++done;
    }
}

TEST_CASE("seeded 500-expression corpus: jets vs finite differences at 1e-6") {
    statgeo::SplitMix64 rng(20240801);
    int done = 0;
    double worst = 0.0;
    while (done < 500) {
        std::string src = sgtest::random_expr(rng, coords4(), 4);
        auto e = Expr::parse(src, coords4());
        std::vector<double> p(4);
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
        double v;
        try {
            v = e.value(p);
        } catch (const EvalError&) {
            continue;
        }
        auto j = e.jet(p);
        if (std::abs(v) > 10.0) continue;
        bool big = false;
        for (std::size_t k = 0; k < 4; ++k) big = big || std::abs(j.g[k]) > 50.0;
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t l = k; l < 4; ++l) big = big || std::abs(j.hess(k, l)) > 100.0;
        if (big) continue;
        for (std::size_t k = 0; k < 4; ++k) {
            double fd = sgtest::fd_partial(e, p, k);
            worst = std::max(worst, std::abs(j.g[k] - fd));
        }
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t l = k; l < 4; ++l) {
                double fd = sgtest::fd_second(e, p, k, l);
                worst = std::max(worst, std::abs(j.hess(k, l) - fd));
            }
        ++done;
    }
    INFO("worst AD-vs-FD deviation: " << worst);
    CHECK(worst <= 1e-6);
}

TEST_CASE("jets thread Dual scalars (derivatives of derivatives)") {
    // f(x1,x3) = exp(-x1+x3); seed x1 with an outer derivative direction and
    // check that the gradient entries carry d/dx1 of the gradient.
    auto e = Expr::parse("exp(-x1+x3)", coords4());
    std::vector<Dual<double>> p;
    p.push_back(Dual<double>::seeded(0.5, 1, 0));
    p.push_back(Dual<double>(0.0));
    p.push_back(Dual<double>(0.25));
    p.push_back(Dual<double>(0.0));
    auto j = e.jet(p);
    double f = std::exp(-0.5 + 0.25);
    CHECK(j.v.a == Catch::Approx(f).epsilon(1e-14));
    CHECK(j.v.deriv(0) == Catch::Approx(-f).epsilon(1e-14));       // df/dx1
    CHECK(j.g[0].a == Catch::Approx(-f).epsilon(1e-14));           // grad entry
    CHECK(j.g[0].deriv(0) == Catch::Approx(f).epsilon(1e-14));     // d/dx1 of grad
    CHECK(j.g[2].deriv(0) == Catch::Approx(-f).epsilon(1e-14));
}
