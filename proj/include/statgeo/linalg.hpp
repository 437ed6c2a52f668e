#pragma once

// Small dense matrix helpers over a generic scalar. Dimensions here are the
// chart dimensions (2..4 in practice), so simplicity beats asymptotics:
// Gauss-Jordan with partial pivoting, Jacobi eigenvalues, metric
// Gram-Schmidt.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "statgeo/dual.hpp"
#include "statgeo/errors.hpp"

namespace statgeo {

template <class S>
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<S> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, S(0)) {}

    S& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
        return m;
    }
};

template <class S>
Mat<S> operator*(const Mat<S>& x, const Mat<S>& y) {
    Mat<S> r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            const S& xik = x(i, k);
            for (std::size_t j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

template <class S>
Mat<S> operator+(const Mat<S>& x, const Mat<S>& y) {
    Mat<S> r(x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

template <class S>
Mat<S> operator-(const Mat<S>& x, const Mat<S>& y) {
    Mat<S> r(x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

template <class S>
Mat<S> operator*(const S& c, const Mat<S>& x) {
    Mat<S> r(x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = c * x.a[i];
    return r;
}

template <class S>
Mat<S> transpose(const Mat<S>& x) {
    Mat<S> r(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
    return r;
}

template <class S>
std::vector<S> matvec(const Mat<S>& m, const std::vector<S>& v) {
    std::vector<S> r(m.rows, S(0));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

template <class S>
double max_abs(const Mat<S>& m) {
    double r = 0.0;
    for (const S& x : m.a) r = std::max(r, std::abs(scalar_value(x)));
    return r;
}

template <class S>
double max_abs(const std::vector<S>& v) {
    double r = 0.0;
    for (const S& x : v) r = std::max(r, std::abs(scalar_value(x)));
    return r;
}

// Gauss-Jordan inverse with partial pivoting (pivot choice on scalar values,
// arithmetic in S so derivative payloads propagate).
template <class S>
Mat<S> inverse(const Mat<S>& m, const std::string& context = "matrix") {
    std::size_t n = m.rows;
    Mat<S> a = m;
    Mat<S> inv = Mat<S>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(scalar_value(a(col, col)));
        for (std::size_t r = col + 1; r < n; ++r) {
            double cand = std::abs(scalar_value(a(r, col)));
            if (cand > best) { best = cand; piv = r; }
        }
        if (best == 0.0)
            throw SingularMetricError(context + " is singular (zero pivot)");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(piv, j), a(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        }
        S d = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) = a(col, j) / d;
            inv(col, j) = inv(col, j) / d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            S f = a(r, col);
            if (scalar_value(f) == 0.0 && derivative_free(f)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) = a(r, j) - f * a(col, j);
                inv(r, j) = inv(r, j) - f * inv(col, j);
            }
        }
    }
    return inv;
}

template <class S>
double norm1(const Mat<S>& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m.rows; ++i) s += std::abs(scalar_value(m(i, j)));
        best = std::max(best, s);
    }
    return best;
}

// Solve m x = b for several right-hand sides given as columns of b.
template <class S>
Mat<S> solve(const Mat<S>& m, const Mat<S>& b, const std::string& context = "system") {
    return inverse(m, context) * b;
}

// Eigenvalues of a small symmetric matrix via cyclic Jacobi (values only).
inline std::vector<double> symmetric_eigenvalues(Mat<double> m) {
    std::size_t n = m.rows;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(m(p, q)) < 1e-300) continue;
                double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    return ev;
}

// Smallest singular value of a (possibly rectangular) matrix of values.
inline double smallest_singular_value(const Mat<double>& j) {
    Mat<double> jtj(j.cols, j.cols);
    for (std::size_t a = 0; a < j.cols; ++a)
        for (std::size_t b = 0; b < j.cols; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < j.rows; ++i) s += j(i, a) * j(i, b);
            jtj(a, b) = s;
        }
    double lo = 0.0;
    bool first = true;
    for (double ev : symmetric_eigenvalues(jtj)) {
        if (first || ev < lo) { lo = ev; first = false; }
    }
    return lo > 0.0 ? std::sqrt(lo) : 0.0;
}

template <class S>
struct Ten3 {
    std::size_t n1 = 0, n2 = 0, n3 = 0;
    std::vector<S> a;
    Ten3() = default;
    Ten3(std::size_t d1, std::size_t d2, std::size_t d3)
        : n1(d1), n2(d2), n3(d3), a(d1 * d2 * d3, S(0)) {}
    S& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return a[(i * n2 + j) * n3 + k];
    }
    const S& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return a[(i * n2 + j) * n3 + k];
    }
};

template <class S>
struct Ten4 {
    std::size_t n1 = 0, n2 = 0, n3 = 0, n4 = 0;
    std::vector<S> a;
    Ten4() = default;
    Ten4(std::size_t d1, std::size_t d2, std::size_t d3, std::size_t d4)
        : n1(d1), n2(d2), n3(d3), n4(d4), a(d1 * d2 * d3 * d4, S(0)) {}
    S& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        return a[((i * n2 + j) * n3 + k) * n4 + l];
    }
    const S& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
        return a[((i * n2 + j) * n3 + k) * n4 + l];
    }
};

template <class S>
double max_abs(const Ten3<S>& t) {
    double r = 0.0;
    for (const S& x : t.a) r = std::max(r, std::abs(scalar_value(x)));
    return r;
}

template <class S>
double max_abs(const Ten4<S>& t) {
    double r = 0.0;
    for (const S& x : t.a) r = std::max(r, std::abs(scalar_value(x)));
    return r;
}

// Gram-Schmidt with respect to the inner product <x,y> = x^T G y. Vectors are
// processed in order; each is projected against the already-accepted set and
// normalized. Returns the orthonormalized vectors.
template <class S>
std::vector<std::vector<S>> gram_schmidt(const std::vector<std::vector<S>>& vecs,
                                         const Mat<S>& G,
                                         const std::string& context = "frame") {
    using std::sqrt;
    std::vector<std::vector<S>> out;
    auto inner = [&](const std::vector<S>& x, const std::vector<S>& y) {
        S s(0);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) s += x[i] * G(i, j) * y[j];
        return s;
    };
    for (const auto& v0 : vecs) {
        std::vector<S> v = v0;
        for (const auto& u : out) {
            S c = inner(v, u);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] - c * u[i];
        }
        S nn = inner(v, v);
        if (scalar_value(nn) <= 1e-16)
            throw FrameError(context + ": vector is (numerically) dependent, cannot orthonormalize");
        S n = sqrt(nn);
        for (auto& x : v) x = x / n;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace statgeo
