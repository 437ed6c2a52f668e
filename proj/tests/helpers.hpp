#pragma once

// Shared fixtures and oracles for the test suites: the worked 4-dimensional
// chart (metric, connection, product structure), finite-difference oracles,
// and a seeded random-expression generator.

#include <string>
#include <vector>

#include "statgeo/chart.hpp"
#include "statgeo/connection.hpp"
#include "statgeo/expr.hpp"

namespace sgtest {

using statgeo::ChartGeometry;
using statgeo::Expr;
using statgeo::ExprCube;
using statgeo::ExprMatrix;
using statgeo::Point;
using statgeo::SplitMix64;

inline std::vector<std::string> coords4() { return {"x1", "x2", "x3", "x4"}; }

inline ExprMatrix parse_matrix(const std::vector<std::vector<std::string>>& rows,
                               const std::vector<std::string>& coords) {
    ExprMatrix m;
    for (const auto& row : rows) {
        m.emplace_back();
        for (const auto& s : row) m.back().push_back(Expr::parse(s, coords));
    }
    return m;
}

// Diagonal metric diag(1+e^{-x1+x3}, e^{x1-x3}, e^{-x1+x3}, e^{x1-x3}).
inline ChartGeometry product_chart() {
    ChartGeometry c;
    c.dim = 4;
    c.coords = coords4();
    std::vector<std::vector<std::string>> g(4, std::vector<std::string>(4, "0"));
    g[0][0] = "1+exp(-x1+x3)";
    g[1][1] = "exp(x1-x3)";
    g[2][2] = "exp(-x1+x3)";
    g[3][3] = "exp(x1-x3)";
    c.metric = parse_matrix(g, c.coords);
    c.box.assign(4, {-1.0, 1.0});
    return c;
}

// The involutive structure tensor that swaps d1<->d3 and d2<->d4.
inline void add_product_structure(ChartGeometry& c) {
    std::vector<std::vector<std::string>> F(4, std::vector<std::string>(4, "0"));
    F[0][2] = "1";
    F[1][3] = "1";
    F[2][0] = "1";
    F[3][1] = "1";
    c.structureF = parse_matrix(F, c.coords);
}

// The statistical connection that makes the structure above parallel.
inline void add_statistical_connection(ChartGeometry& c) {
    const std::string E = "exp(-x1+x3)";
    const std::string Ep = "exp(x1-x3)";
    const std::string onepE = "1+exp(-x1+x3)";
    std::vector<std::vector<std::vector<std::string>>> G(
        4, std::vector<std::vector<std::string>>(4, std::vector<std::string>(4, "0")));
    auto set_pair = [&](int i, int j, int k, const std::string& s) {
        G[(std::size_t)k - 1][(std::size_t)i - 1][(std::size_t)j - 1] = s;
        G[(std::size_t)k - 1][(std::size_t)j - 1][(std::size_t)i - 1] = s;
    };
    // nabla_{d1}d1 = nabla_{d1}d3 = nabla_{d3}d3 = E (d1 + d3)
    set_pair(1, 1, 1, E);
    set_pair(1, 1, 3, E);
    set_pair(1, 3, 1, E);
    set_pair(1, 3, 3, E);
    set_pair(3, 3, 1, E);
    set_pair(3, 3, 3, E);
    // nabla_{d1}d2 = nabla_{d3}d4 = -E d2 - (1+E) d4
    set_pair(1, 2, 2, "-" + E);
    set_pair(1, 2, 4, "-(" + onepE + ")");
    set_pair(3, 4, 2, "-" + E);
    set_pair(3, 4, 4, "-(" + onepE + ")");
    // nabla_{d1}d4 = nabla_{d2}d3 = -(1+E) d2 - E d4
    set_pair(1, 4, 2, "-(" + onepE + ")");
    set_pair(1, 4, 4, "-" + E);
    set_pair(2, 3, 2, "-(" + onepE + ")");
    set_pair(2, 3, 4, "-" + E);
    // nabla_{d2}d2 = nabla_{d4}d4 = -Ep d1 + d2 - Ep d3 - d4
    set_pair(2, 2, 1, "-" + Ep);
    set_pair(2, 2, 2, "1");
    set_pair(2, 2, 3, "-" + Ep);
    set_pair(2, 2, 4, "-1");
    set_pair(4, 4, 1, "-" + Ep);
    set_pair(4, 4, 2, "1");
    set_pair(4, 4, 3, "-" + Ep);
    set_pair(4, 4, 4, "-1");
    // nabla_{d2}d4 = -Ep d1 - d2 - Ep d3 + d4
    set_pair(2, 4, 1, "-" + Ep);
    set_pair(2, 4, 2, "-1");
    set_pair(2, 4, 3, "-" + Ep);
    set_pair(2, 4, 4, "1");

    ExprCube cube;
    for (const auto& k : G) cube.push_back(parse_matrix(k, c.coords));
    c.gamma = std::move(cube);
}

inline ChartGeometry statistical_chart() {
    ChartGeometry c = product_chart();
    add_product_structure(c);
    add_statistical_connection(c);
    return c;
}

inline ChartGeometry euclidean_chart(std::size_t n) {
    ChartGeometry c;
    c.dim = n;
    for (std::size_t i = 0; i < n; ++i) c.coords.push_back("x" + std::to_string(i + 1));
    std::vector<std::vector<std::string>> g(n, std::vector<std::string>(n, "0"));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = "1";
    c.metric = parse_matrix(g, c.coords);
    c.box.assign(n, {-1.0, 1.0});
    return c;
}

inline Point origin(std::size_t n) {
    Point p;
    p.x.assign(n, 0.0);
    return p;
}

// --- finite-difference oracles -------------------------------------------

inline double fd_partial(const Expr& e, std::vector<double> x, std::size_t k,
                         double h = 1e-5) {
    x[k] += h;
    double up = e.value(x);
    x[k] -= 2 * h;
    double dn = e.value(x);
    return (up - dn) / (2 * h);
}

inline double fd_second(const Expr& e, std::vector<double> x, std::size_t i, std::size_t j,
                        double h = 1e-4) {
    if (i == j) {
        double mid = e.value(x);
        x[i] += h;
        double up = e.value(x);
        x[i] -= 2 * h;
        double dn = e.value(x);
        return (up - 2 * mid + dn) / (h * h);
    }
    std::vector<double> p = x;
    p[i] += h; p[j] += h;
    double pp = e.value(p);
    p = x; p[i] += h; p[j] -= h;
    double pm = e.value(p);
    p = x; p[i] -= h; p[j] += h;
    double mp = e.value(p);
    p = x; p[i] -= h; p[j] -= h;
    double mm = e.value(p);
    return (pp - pm - mp + mm) / (4 * h * h);
}

// --- random expression generator ------------------------------------------

// Produces expression strings whose values stay O(10) on [-1,1]^n so
// central-difference oracles keep their accuracy. Arguments of exp/sinh/cosh
// are wrapped in bounded combinations; denominators and log/sqrt/power bases
// are kept safely away from their domain edges.
inline std::string random_expr(SplitMix64& rng, const std::vector<std::string>& coords,
                               int depth) {
    auto coord = [&]() { return coords[rng.next() % coords.size()]; };
    if (depth <= 0) {
        if (rng.next() % 2 == 0) return coord();
        double c = std::floor(rng.uniform(-1500.0, 1500.0)) / 1000.0;
        return "(" + statgeo::detail::format_double(c) + ")";
    }
    std::string a = random_expr(rng, coords, depth - 1);
    std::string b = random_expr(rng, coords, depth - 1);
    switch (rng.next() % 12) {
        case 0: return "(" + a + "+" + b + ")";
        case 1: return "(" + a + "-" + b + ")";
        case 2: return "(" + a + "*" + b + ")";
        case 3: return "(-" + a + ")";
        case 4: return "sin(" + a + ")";
        case 5: return "cos(" + a + ")";
        case 6: return "sinh(0.5*sin(" + a + "))";
        case 7: return "exp(0.7*cos(" + a + "))";
        case 8: return "ln(2.2+sin(" + a + "))";
        case 9: return "sqrt(2.2+cos(" + a + "))";
        case 10: return "(" + a + "/(2.5+0.5*sin(" + b + ")))";
        default: return "((1.7+0.3*sin(" + a + "))^(1.2+0.4*cos(" + b + ")))";
    }
}

} // namespace sgtest
