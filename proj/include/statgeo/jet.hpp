#pragma once

// Second-order jets: value, gradient and Hessian of a scalar field with
// respect to n chart coordinates, propagated exactly through arithmetic.
// The Hessian is stored packed (upper triangle only), so symmetry holds by
// construction rather than by numerical accident.
//
// The scalar type S is generic: evaluating with S = Dual<double> threads an
// extra layer of first derivatives (e.g. along submanifold coordinates)
// through every jet entry.

#include <cstddef>
#include <vector>

#include "statgeo/dual.hpp"

namespace statgeo {

template <class S = double>
struct Jet2 {
    std::size_t n = 0;
    S v{};
    std::vector<S> g;   // size n
    std::vector<S> h;   // packed upper triangle, size n(n+1)/2

    Jet2() = default;
    explicit Jet2(std::size_t dim) : n(dim), g(dim, S(0)), h(dim * (dim + 1) / 2, S(0)) {}

    static Jet2 constant(std::size_t dim, S value) {
        Jet2 j(dim);
        j.v = std::move(value);
        return j;
    }
    static Jet2 coordinate(std::size_t dim, std::size_t k, S value) {
        Jet2 j(dim);
        j.v = std::move(value);
        j.g[k] = S(1);
        return j;
    }

    static std::size_t pack(std::size_t i, std::size_t j, std::size_t n) {
        if (i > j) std::swap(i, j);
        return i * n - i * (i + 1) / 2 + j;
    }
    S& hess(std::size_t i, std::size_t j) { return h[pack(i, j, n)]; }
    const S& hess(std::size_t i, std::size_t j) const { return h[pack(i, j, n)]; }
};

template <class S>
Jet2<S> operator+(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.n);
    r.v = a.v + b.v;
    for (std::size_t i = 0; i < a.n; ++i) r.g[i] = a.g[i] + b.g[i];
    for (std::size_t p = 0; p < a.h.size(); ++p) r.h[p] = a.h[p] + b.h[p];
    return r;
}

template <class S>
Jet2<S> operator-(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.n);
    r.v = a.v - b.v;
    for (std::size_t i = 0; i < a.n; ++i) r.g[i] = a.g[i] - b.g[i];
    for (std::size_t p = 0; p < a.h.size(); ++p) r.h[p] = a.h[p] - b.h[p];
    return r;
}

template <class S>
Jet2<S> operator-(const Jet2<S>& a) {
    Jet2<S> r(a.n);
    r.v = -a.v;
    for (std::size_t i = 0; i < a.n; ++i) r.g[i] = -a.g[i];
    for (std::size_t p = 0; p < a.h.size(); ++p) r.h[p] = -a.h[p];
    return r;
}

template <class S>
Jet2<S> operator*(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.n);
    r.v = a.v * b.v;
    for (std::size_t i = 0; i < a.n; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = i; j < a.n; ++j)
            r.hess(i, j) = a.hess(i, j) * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] +
                           a.v * b.hess(i, j);
    return r;
}

template <class S>
Jet2<S> operator/(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.n);
    r.v = a.v / b.v;
    for (std::size_t i = 0; i < a.n; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) / b.v;
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = i; j < a.n; ++j)
            r.hess(i, j) =
                (a.hess(i, j) - r.v * b.hess(i, j) - r.g[i] * b.g[j] - r.g[j] * b.g[i]) / b.v;
    return r;
}

// Composition with a univariate function given by its value and first two
// derivatives at a.v.
template <class S>
Jet2<S> jet_chain(const Jet2<S>& a, S f0, S f1, S f2) {
    Jet2<S> r(a.n);
    r.v = std::move(f0);
    for (std::size_t i = 0; i < a.n; ++i) r.g[i] = f1 * a.g[i];
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = i; j < a.n; ++j)
            r.hess(i, j) = f2 * a.g[i] * a.g[j] + f1 * a.hess(i, j);
    return r;
}

template <class S> Jet2<S> exp(const Jet2<S>& a) {
    using std::exp;
    S e = exp(a.v);
    return jet_chain(a, e, e, e);
}
template <class S> Jet2<S> log(const Jet2<S>& a) {
    using std::log;
    S inv = S(1) / a.v;
    return jet_chain(a, log(a.v), inv, -inv * inv);
}
template <class S> Jet2<S> sin(const Jet2<S>& a) {
    using std::sin; using std::cos;
    S s = sin(a.v), c = cos(a.v);
    return jet_chain(a, s, c, -s);
}
template <class S> Jet2<S> cos(const Jet2<S>& a) {
    using std::sin; using std::cos;
    S s = sin(a.v), c = cos(a.v);
    return jet_chain(a, c, -s, -c);
}
template <class S> Jet2<S> sinh(const Jet2<S>& a) {
    using std::sinh; using std::cosh;
    S s = sinh(a.v), c = cosh(a.v);
    return jet_chain(a, s, c, s);
}
template <class S> Jet2<S> cosh(const Jet2<S>& a) {
    using std::sinh; using std::cosh;
    S s = sinh(a.v), c = cosh(a.v);
    return jet_chain(a, c, s, c);
}
template <class S> Jet2<S> sqrt(const Jet2<S>& a) {
    using std::sqrt;
    S s = sqrt(a.v);
    S f1 = S(1) / (S(2) * s);
    S f2 = -f1 / (S(2) * a.v);
    return jet_chain(a, s, f1, f2);
}

// Integer power by repeated multiplication; valid for any base sign.
template <class S>
Jet2<S> ipow(const Jet2<S>& a, long e) {
    if (e == 0) return Jet2<S>::constant(a.n, S(1));
    unsigned long m = e < 0 ? (unsigned long)(-e) : (unsigned long)e;
    Jet2<S> result = Jet2<S>::constant(a.n, S(1));
    Jet2<S> base = a;
    while (m > 0) {
        if (m & 1) result = result * base;
        m >>= 1;
        if (m) base = base * base;
    }
    if (e < 0) result = Jet2<S>::constant(a.n, S(1)) / result;
    return result;
}

} // namespace statgeo
