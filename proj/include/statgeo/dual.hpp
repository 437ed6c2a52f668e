#pragma once

// First-order forward-mode dual numbers carrying a vector of partial
// derivatives. Seeding a point's coordinates with unit partials and running
// any computation on Dual scalars yields the computation's exact Jacobian
// with respect to those coordinates.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace statgeo {

template <class T = double>
struct Dual {
    T a{};              // value
    std::vector<T> d;   // partials; empty means "constant" (all zero)

    Dual() = default;
    Dual(T value) : a(value) {}
    Dual(T value, std::vector<T> partials) : a(value), d(std::move(partials)) {}

    static Dual seeded(T value, std::size_t n, std::size_t k) {
        Dual x(value);
        x.d.assign(n, T(0));
        x.d[k] = T(1);
        return x;
    }

    T deriv(std::size_t k) const { return k < d.size() ? d[k] : T(0); }

    Dual& operator+=(const Dual& o) {
        a += o.a;
        if (d.size() < o.d.size()) d.resize(o.d.size(), T(0));
        for (std::size_t k = 0; k < o.d.size(); ++k) d[k] += o.d[k];
        return *this;
    }
    Dual& operator-=(const Dual& o) {
        a -= o.a;
        if (d.size() < o.d.size()) d.resize(o.d.size(), T(0));
        for (std::size_t k = 0; k < o.d.size(); ++k) d[k] -= o.d[k];
        return *this;
    }
};

template <class T> Dual<T> operator+(Dual<T> x, const Dual<T>& y) { x += y; return x; }
template <class T> Dual<T> operator-(Dual<T> x, const Dual<T>& y) { x -= y; return x; }

template <class T> Dual<T> operator-(const Dual<T>& x) {
    Dual<T> r(-x.a);
    r.d.reserve(x.d.size());
    for (const T& p : x.d) r.d.push_back(-p);
    return r;
}

template <class T> Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
    Dual<T> r(x.a * y.a);
    std::size_t n = std::max(x.d.size(), y.d.size());
    r.d.resize(n, T(0));
    for (std::size_t k = 0; k < n; ++k)
        r.d[k] = x.deriv(k) * y.a + x.a * y.deriv(k);
    return r;
}

template <class T> Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
    Dual<T> r(x.a / y.a);
    std::size_t n = std::max(x.d.size(), y.d.size());
    r.d.resize(n, T(0));
    for (std::size_t k = 0; k < n; ++k)
        r.d[k] = (x.deriv(k) - r.a * y.deriv(k)) / y.a;
    return r;
}

template <class T> Dual<T> operator+(Dual<T> x, T c) { x.a += c; return x; }
template <class T> Dual<T> operator+(T c, Dual<T> x) { x.a += c; return x; }
template <class T> Dual<T> operator-(Dual<T> x, T c) { x.a -= c; return x; }
template <class T> Dual<T> operator-(T c, const Dual<T>& x) { return Dual<T>(c) - x; }
template <class T> Dual<T> operator*(const Dual<T>& x, T c) { return x * Dual<T>(c); }
template <class T> Dual<T> operator*(T c, const Dual<T>& x) { return Dual<T>(c) * x; }
template <class T> Dual<T> operator/(const Dual<T>& x, T c) { return x / Dual<T>(c); }
template <class T> Dual<T> operator/(T c, const Dual<T>& x) { return Dual<T>(c) / x; }

// Chain rule for a unary function with value f0 and slope f1 at x.a.
template <class T> Dual<T> dual_chain(const Dual<T>& x, T f0, T f1) {
    Dual<T> r(f0);
    r.d.reserve(x.d.size());
    for (const T& p : x.d) r.d.push_back(f1 * p);
    return r;
}

template <class T> Dual<T> exp(const Dual<T>& x) {
    using std::exp;
    T e = exp(x.a);
    return dual_chain(x, e, e);
}
template <class T> Dual<T> log(const Dual<T>& x) {
    using std::log;
    return dual_chain(x, log(x.a), T(1) / x.a);
}
template <class T> Dual<T> sin(const Dual<T>& x) {
    using std::sin; using std::cos;
    return dual_chain(x, sin(x.a), cos(x.a));
}
template <class T> Dual<T> cos(const Dual<T>& x) {
    using std::sin; using std::cos;
    return dual_chain(x, cos(x.a), -sin(x.a));
}
template <class T> Dual<T> sinh(const Dual<T>& x) {
    using std::sinh; using std::cosh;
    return dual_chain(x, sinh(x.a), cosh(x.a));
}
template <class T> Dual<T> cosh(const Dual<T>& x) {
    using std::sinh; using std::cosh;
    return dual_chain(x, cosh(x.a), sinh(x.a));
}
template <class T> Dual<T> sqrt(const Dual<T>& x) {
    using std::sqrt;
    T s = sqrt(x.a);
    return dual_chain(x, s, T(1) / (T(2) * s));
}

// Strip derivative payloads down to the underlying double value.
inline double scalar_value(double x) { return x; }
template <class T> double scalar_value(const Dual<T>& x) { return scalar_value(x.a); }

// True when the scalar carries no derivative information at all.
inline bool derivative_free(double) { return true; }
template <class T> bool derivative_free(const Dual<T>& x) {
    for (const T& p : x.d)
        if (scalar_value(p) != 0.0 || !derivative_free(p)) return false;
    return true;
}

} // namespace statgeo
