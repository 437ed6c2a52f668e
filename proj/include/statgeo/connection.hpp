#pragma once

// Metric jets, affine connections and curvature on a chart.
//
// Conventions (coordinate frames throughout):
//   Gamma(k,i,j)  = Gamma^k_{ij},   nabla_{e_i} e_j = Gamma^k_{ij} e_k
//   duality       d_k g_ij = Gamma^l_{ki} g_lj + Gamma*^l_{kj} g_il
//   curvature     R(l,i,j,k) = R^l_{ijk},  R(e_i,e_j)e_k = R^l_{ijk} e_l
//
// Everything is generic over the scalar S; evaluating with Dual scalars
// differentiates whole derivations (e.g. the dual connection) exactly.

#include <string>
#include <vector>

#include "statgeo/chart.hpp"
#include "statgeo/linalg.hpp"

namespace statgeo {

enum class ConnFamily { Primal, Dual, LeviCivita, Mean };

inline const char* family_name(ConnFamily f) {
    switch (f) {
        case ConnFamily::Primal: return "primal";
        case ConnFamily::Dual: return "dual";
        case ConnFamily::LeviCivita: return "levi-civita";
        case ConnFamily::Mean: return "mean";
    }
    return "?";
}

template <class S>
struct MetricJets {
    Mat<S> g;        // g_ij
    Ten3<S> dg;      // dg(k,i,j) = d_k g_ij
    Ten4<S> d2g;     // d2g(l,k,i,j) = d_l d_k g_ij
};

template <class S>
MetricJets<S> metric_at(const ChartGeometry& chart, const std::vector<S>& x) {
    std::size_t n = chart.dim;
    MetricJets<S> m;
    m.g = Mat<S>(n, n);
    m.dg = Ten3<S>(n, n, n);
    m.d2g = Ten4<S>(n, n, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Jet2<S> jet = chart.metric[i][j].jet(x);
            m.g(i, j) = jet.v;
            for (std::size_t k = 0; k < n; ++k) m.dg(k, i, j) = jet.g[k];
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) m.d2g(l, k, i, j) = jet.hess(l, k);
        }
    return m;
}

// Inverse with a hard condition-number gate: near-singular metrics are an
// error, never silently regularized.
template <class S>
Mat<S> metric_inverse(const Mat<S>& g, const std::string& where = "metric") {
    Mat<S> inv = inverse(g, where);
    double cond = norm1(g) * norm1(inv);
    if (!(cond <= 1e12))
        throw SingularMetricError(where + " is numerically singular (condition estimate " +
                                  std::to_string(cond) + ")");
    return inv;
}

template <class S>
Ten3<S> levi_civita(const MetricJets<S>& m, const Mat<S>& ginv) {
    std::size_t n = m.g.rows;
    Ten3<S> c(n, n, n);
    S half = S(1) / S(2);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) {
                S s(0);
                for (std::size_t l = 0; l < n; ++l)
                    s += ginv(k, l) * (m.dg(i, l, j) + m.dg(j, i, l) - m.dg(l, i, j));
                c(k, i, j) = half * s;
                c(k, j, i) = c(k, i, j);
            }
    return c;
}

template <class S>
Ten3<S> gamma_from_exprs(const ChartGeometry& chart, const std::vector<S>& x) {
    const ExprCube& G = *chart.gamma;
    std::size_t n = chart.dim;
    Ten3<S> c(n, n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) c(k, i, j) = G[k][i][j].value(x);
    return c;
}

// Gamma*^m_{kj} = g^{im} (d_k g_ij - Gamma^l_{ki} g_lj)
template <class S>
Ten3<S> dual_connection(const MetricJets<S>& m, const Mat<S>& ginv, const Ten3<S>& gamma) {
    std::size_t n = m.g.rows;
    Ten3<S> d(n, n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t mm = 0; mm < n; ++mm) {
                S s(0);
                for (std::size_t i = 0; i < n; ++i) {
                    S t = m.dg(k, i, j);
                    for (std::size_t l = 0; l < n; ++l) t -= gamma(l, k, i) * m.g(l, j);
                    s += ginv(i, mm) * t;
                }
                d(mm, k, j) = s;
            }
    return d;
}

template <class S>
Ten3<S> connection_at(const ChartGeometry& chart, const std::vector<S>& x, ConnFamily fam) {
    MetricJets<S> m = metric_at(chart, x);
    Mat<S> ginv = metric_inverse(m.g);
    switch (fam) {
        case ConnFamily::LeviCivita:
            return levi_civita(m, ginv);
        case ConnFamily::Primal:
            return chart.gamma ? gamma_from_exprs(chart, x) : levi_civita(m, ginv);
        case ConnFamily::Dual: {
            Ten3<S> primal = chart.gamma ? gamma_from_exprs(chart, x) : levi_civita(m, ginv);
            return dual_connection(m, ginv, primal);
        }
        case ConnFamily::Mean: {
            Ten3<S> primal = chart.gamma ? gamma_from_exprs(chart, x) : levi_civita(m, ginv);
            Ten3<S> dual = dual_connection(m, ginv, primal);
            Ten3<S> mean(chart.dim, chart.dim, chart.dim);
            S half = S(1) / S(2);
            for (std::size_t p = 0; p < mean.a.size(); ++p)
                mean.a[p] = half * (primal.a[p] + dual.a[p]);
            return mean;
        }
    }
    throw Error("unknown connection family");
}

// C_kij = d_k g_ij - Gamma^l_{ki} g_lj - Gamma^l_{kj} g_il
// (the covariant derivative of the metric, totally symmetric on statistical
// structures, identically zero for metric connections)
template <class S>
Ten3<S> nabla_g(const MetricJets<S>& m, const Ten3<S>& gamma) {
    std::size_t n = m.g.rows;
    Ten3<S> c(n, n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                S s = m.dg(k, i, j);
                for (std::size_t l = 0; l < n; ++l)
                    s -= gamma(l, k, i) * m.g(l, j) + gamma(l, k, j) * m.g(i, l);
                c(k, i, j) = s;
            }
    return c;
}

// R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^m_{jk} Gamma^l_{im} - Gamma^m_{ik} Gamma^l_{jm}
// Connection coefficients and their coordinate derivatives are obtained by
// evaluating the connection derivation on seeded Dual coordinates, so no
// finite differencing is involved. Antisymmetry in (i,j) holds exactly: only
// i<j is computed and mirrored.
inline Ten4<double> riemann_at(const ChartGeometry& chart, const Point& p, ConnFamily fam) {
    std::size_t n = chart.dim;
    Ten3<Dual<double>> gd = connection_at(chart, seed_coords(p.x), fam);
    Ten4<double> r(n, n, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    double s = gd(l, j, k).deriv(i) - gd(l, i, k).deriv(j);
                    for (std::size_t m = 0; m < n; ++m)
                        s += gd(m, j, k).a * gd(l, i, m).a - gd(m, i, k).a * gd(l, j, m).a;
                    r(l, i, j, k) = s;
                    r(l, j, i, k) = -s;
                }
    return r;
}

// (nabla_k T)^i_j = d_k T^i_j + Gamma^i_{km} T^m_j - Gamma^m_{kj} T^i_m
// for a (1,1) tensor given by its values and coordinate derivatives.
template <class S>
Ten3<S> cov_deriv_11(const Mat<S>& T, const Ten3<S>& dT, const Ten3<S>& gamma) {
    std::size_t n = T.rows;
    Ten3<S> out(n, n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                S s = dT(k, i, j);
                for (std::size_t m = 0; m < n; ++m)
                    s += gamma(i, k, m) * T(m, j) - gamma(m, k, j) * T(i, m);
                out(k, i, j) = s;
            }
    return out;
}

// Least-squares fit of R^l_{ijk} against c (delta^l_i g_jk - delta^l_j g_ik)
// across a set of sampled points.
struct CurvatureFit {
    double c = 0.0;
    double residual = 0.0;
    bool indeterminate = false;   // model identically zero (e.g. dim < 2)
};

inline CurvatureFit constant_curvature_fit(const ChartGeometry& chart,
                                           const std::vector<Point>& pts, ConnFamily fam) {
    std::size_t n = chart.dim;
    double num = 0.0, den = 0.0;
    std::vector<Ten4<double>> rs;
    std::vector<Mat<double>> gs;
    rs.reserve(pts.size());
    gs.reserve(pts.size());
    for (const Point& p : pts) {
        Ten4<double> r = riemann_at(chart, p, fam);
        MetricJets<double> m = metric_at(chart, std::vector<double>(p.x));
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        double model = (l == i ? m.g(j, k) : 0.0) - (l == j ? m.g(i, k) : 0.0);
                        num += r(l, i, j, k) * model;
                        den += model * model;
                    }
        rs.push_back(std::move(r));
        gs.push_back(std::move(m.g));
    }
    CurvatureFit fit;
    if (den < 1e-300) {
        fit.indeterminate = true;
        return fit;
    }
    fit.c = num / den;
    for (std::size_t pi = 0; pi < pts.size(); ++pi) {
        const Ten4<double>& r = rs[pi];
        const Mat<double>& g = gs[pi];
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        double model = (l == i ? g(j, k) : 0.0) - (l == j ? g(i, k) : 0.0);
                        fit.residual = std::max(fit.residual,
                                                std::abs(r(l, i, j, k) - fit.c * model));
                    }
    }
    return fit;
}

} // namespace statgeo
