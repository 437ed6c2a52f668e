#pragma once

// Product-structure machinery: the (1,1) structure tensor F, its metric
// conjugate F* defined by g(FX,Y) = g(X,F*Y), projectors, parallelism
// residuals, and the model curvature tensor built from (g, F, c).

#include <string>
#include <vector>

#include "statgeo/connection.hpp"

namespace statgeo {

template <class S>
Mat<S> structure_F_at(const ChartGeometry& chart, const std::vector<S>& x) {
    if (!chart.structureF) throw Error("chart declares no structure tensor");
    std::size_t n = chart.dim;
    Mat<S> F(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) F(i, j) = (*chart.structureF)[i][j].value(x);
    return F;
}

// F* = g^{-1} F^T g, the unique solution of g(F e_i, e_j) = g(e_i, F* e_j).
template <class S>
Mat<S> derive_f_star(const Mat<S>& g, const Mat<S>& ginv, const Mat<S>& F) {
    return ginv * transpose(F) * g;
}

template <class S>
Mat<S> f_star_at(const ChartGeometry& chart, const std::vector<S>& x) {
    MetricJets<S> m = metric_at(chart, x);
    Mat<S> ginv = metric_inverse(m.g);
    return derive_f_star(m.g, ginv, structure_F_at(chart, x));
}

// Values and coordinate derivatives of a matrix field obtained by running
// `field` on Dual-seeded coordinates.
template <class Field>
void matrix_field_with_derivs(const Field& field, const Point& p, Mat<double>& out,
                              Ten3<double>& dout) {
    Mat<Dual<double>> m = field(seed_coords(p.x));
    std::size_t n = p.dim();
    out = Mat<double>(m.rows, m.cols);
    dout = Ten3<double>(n, m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) {
            out(i, j) = m(i, j).a;
            for (std::size_t k = 0; k < n; ++k) dout(k, i, j) = m(i, j).deriv(k);
        }
}

struct Projectors {
    Mat<double> P, Q;
};

// P = (I+F)/2, Q = (I-F)/2; requires F to be involutive.
inline Projectors projectors_at(const Mat<double>& F, double tol = 1e-8) {
    std::size_t n = F.rows;
    Mat<double> sq = F * F;
    for (std::size_t i = 0; i < n; ++i) sq(i, i) -= 1.0;
    if (max_abs(sq) > tol)
        throw Error("structure tensor is not involutive (|F^2 - I| = " +
                    std::to_string(max_abs(sq)) + ")");
    Projectors pr{Mat<double>(n, n), Mat<double>(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double id = i == j ? 1.0 : 0.0;
            pr.P(i, j) = 0.5 * (id + F(i, j));
            pr.Q(i, j) = 0.5 * (id - F(i, j));
        }
    return pr;
}

// Pointwise residuals of the structure axioms.
struct StructureResiduals {
    double involution = 0;        // |F^2 - I|
    double star_involution = 0;   // |(F*)^2 - I|
    double conjugacy = 0;         // |g(F.,.) - g(.,F*.)|
    double compatibility = 0;     // |g(F., F*.) - g(.,.)|
    double distance_to_plus_i = 0;
    double distance_to_minus_i = 0;
};

inline StructureResiduals structure_residuals(const Mat<double>& g, const Mat<double>& F,
                                              const Mat<double>& Fs) {
    std::size_t n = F.rows;
    StructureResiduals r;
    Mat<double> f2 = F * F;
    Mat<double> fs2 = Fs * Fs;
    Mat<double> ftg = transpose(F) * g;
    Mat<double> gfs = g * Fs;
    Mat<double> ftgfs = transpose(F) * gfs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double id = i == j ? 1.0 : 0.0;
            r.involution = std::max(r.involution, std::abs(f2(i, j) - id));
            r.star_involution = std::max(r.star_involution, std::abs(fs2(i, j) - id));
            r.conjugacy = std::max(r.conjugacy, std::abs(ftg(i, j) - gfs(i, j)));
            r.compatibility = std::max(r.compatibility, std::abs(ftgfs(i, j) - g(i, j)));
            r.distance_to_plus_i = std::max(r.distance_to_plus_i, std::abs(F(i, j) - id));
            r.distance_to_minus_i = std::max(r.distance_to_minus_i, std::abs(F(i, j) + id));
        }
    return r;
}

// Model curvature tensor
//   R(X,Y)Z = c [ g(Y,Z)X - g(X,Z)Y + g(Y,FZ)FX - g(X,FZ)FY
//                 + (g(FX,Y) - g(X,FY)) FZ ]
// returned as components M^l_{ijk} over the coordinate frame.
template <class S>
Ten4<S> model_curvature(const Mat<S>& g, const Mat<S>& F, const S& c) {
    std::size_t n = g.rows;
    Mat<S> gf = g * F;   // gf(i,j) = g(e_i, F e_j)
    Ten4<S> mdl(n, n, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    S s(0);
                    if (l == i) s += g(j, k);
                    if (l == j) s -= g(i, k);
                    s += gf(j, k) * F(l, i) - gf(i, k) * F(l, j);
                    s += (gf(j, i) - gf(i, j)) * F(l, k);
                    mdl(l, i, j, k) = c * s;
                }
    return mdl;
}

// The model applied to one basis triple, as a component vector (matches the
// display R(e_i,e_j)e_k).
template <class S>
std::vector<S> model_curvature_vector(const Mat<S>& g, const Mat<S>& F, const S& c,
                                      std::size_t i, std::size_t j, std::size_t k) {
    Ten4<S> mdl = model_curvature(g, F, c);
    std::vector<S> v(g.rows);
    for (std::size_t l = 0; l < g.rows; ++l) v[l] = mdl(l, i, j, k);
    return v;
}

// Least-squares fit of an actual curvature tensor against the model over
// sampled points (both families share the scalar c in the displays, so the
// fit runs on the primal family).
inline CurvatureFit model_curvature_fit(const ChartGeometry& chart,
                                        const std::vector<Point>& pts) {
    double num = 0, den = 0;
    for (const Point& p : pts) {
        std::vector<double> x(p.x);
        auto m = metric_at(chart, x);
        auto F = structure_F_at(chart, x);
        auto r = riemann_at(chart, p, ConnFamily::Primal);
        auto unit = model_curvature(m.g, F, 1.0);
        for (std::size_t q = 0; q < r.a.size(); ++q) {
            num += r.a[q] * unit.a[q];
            den += unit.a[q] * unit.a[q];
        }
    }
    CurvatureFit fit;
    if (den < 1e-300) {
        fit.indeterminate = true;
        return fit;
    }
    fit.c = num / den;
    for (const Point& p : pts) {
        std::vector<double> x(p.x);
        auto m = metric_at(chart, x);
        auto F = structure_F_at(chart, x);
        auto r = riemann_at(chart, p, ConnFamily::Primal);
        auto mdl = model_curvature(m.g, F, fit.c);
        for (std::size_t q = 0; q < r.a.size(); ++q)
            fit.residual = std::max(fit.residual, std::abs(r.a[q] - mdl.a[q]));
    }
    return fit;
}

// max residual of R(primal) against the model with F, and R(dual) against
// the starred model with F*, at one point.
inline std::pair<double, double> eq_o_residual_at(const ChartGeometry& chart, const Point& p,
                                                  double c) {
    std::vector<double> x(p.x);
    auto m = metric_at(chart, x);
    auto ginv = metric_inverse(m.g);
    auto F = structure_F_at(chart, x);
    auto Fs = derive_f_star(m.g, ginv, F);
    auto r = riemann_at(chart, p, ConnFamily::Primal);
    auto rs = riemann_at(chart, p, ConnFamily::Dual);
    auto mdl = model_curvature(m.g, F, c);
    auto mdls = model_curvature(m.g, Fs, c);
    double primal = 0, dual = 0;
    for (std::size_t q = 0; q < r.a.size(); ++q) {
        primal = std::max(primal, std::abs(r.a[q] - mdl.a[q]));
        dual = std::max(dual, std::abs(rs.a[q] - mdls.a[q]));
    }
    return {primal, dual};
}

// Parallelism residuals of the structure: |(nabla F)| for the primal
// connection, |(nabla* F*)| for the dual, and the pairing
// g((nabla_X F)Y, Z) - g(Y, (nabla*_X F*)Z).
struct ParallelismResiduals {
    double nabla_f = 0;
    double nabla_star_f_star = 0;
    double pairing = 0;
};

inline ParallelismResiduals nabla_f_residuals_at(const ChartGeometry& chart, const Point& p) {
    std::size_t n = chart.dim;
    std::vector<double> x(p.x);
    auto m = metric_at(chart, x);

    Mat<double> F(n, n);
    Ten3<double> dF(n, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto jet = (*chart.structureF)[i][j].jet(x);
            F(i, j) = jet.v;
            for (std::size_t k = 0; k < n; ++k) dF(k, i, j) = jet.g[k];
        }
    auto gamma = connection_at(chart, x, ConnFamily::Primal);
    auto nf = cov_deriv_11(F, dF, gamma);

    Mat<double> Fs;
    Ten3<double> dFs;
    matrix_field_with_derivs(
        [&](const std::vector<Dual<double>>& xs) { return f_star_at(chart, xs); }, p, Fs, dFs);
    auto gammaStar = connection_at(chart, x, ConnFamily::Dual);
    auto nfs = cov_deriv_11(Fs, dFs, gammaStar);

    ParallelismResiduals r;
    r.nabla_f = max_abs(nf);
    r.nabla_star_f_star = max_abs(nfs);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) {
                double lhs = 0, rhs = 0;
                for (std::size_t mm = 0; mm < n; ++mm) {
                    lhs += nf(k, mm, j) * m.g(mm, l);
                    rhs += m.g(j, mm) * nfs(k, mm, l);
                }
                r.pairing = std::max(r.pairing, std::abs(lhs - rhs));
            }
    return r;
}

} // namespace statgeo
