#ifndef ELAX_SCALARS_HPP
#define ELAX_SCALARS_HPP

#include <cmath>
#include <complex>

namespace elax {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx iunit{0.0, 1.0};

/// First-order dual number over the complex field. Carries an exact
/// holomorphic directional derivative through every arithmetic operation.
struct Dual {
    cplx v{};  // value
    cplx t{};  // tangent

    Dual() = default;
    Dual(double x) : v(x) {}
    Dual(const cplx& x) : v(x) {}
    Dual(const cplx& x, const cplx& dx) : v(x), t(dx) {}
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.t + b.t}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.t - b.t}; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.t}; }
inline Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.t + a.t * b.v}; }
inline Dual operator/(const Dual& a, const Dual& b) {
    const cplx q = a.v / b.v;
    return {q, (a.t - q * b.t) / b.v};
}
inline Dual& operator+=(Dual& a, const Dual& b) { a = a + b; return a; }
inline Dual& operator-=(Dual& a, const Dual& b) { a = a - b; return a; }
inline Dual& operator*=(Dual& a, const Dual& b) { a = a * b; return a; }
inline Dual& operator/=(Dual& a, const Dual& b) { a = a / b; return a; }

inline Dual exp(const Dual& a) {
    const cplx e = std::exp(a.v);
    return {e, e * a.t};
}
inline Dual log(const Dual& a) { return {std::log(a.v), a.t / a.v}; }
inline Dual sqrt(const Dual& a) {
    const cplx r = std::sqrt(a.v);
    return {r, a.t / (2.0 * r)};
}
inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.t}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.t}; }

inline cplx value_of(const cplx& z) { return z; }
inline cplx value_of(const Dual& d) { return d.v; }

// std names participate in ADL-based generic code below.
using std::exp;
using std::log;
using std::sqrt;

template <class S>
S ipow(S base, int n) {
    S r{1.0};
    for (int i = 0; i < n; ++i) r = r * base;
    return r;
}

}  // namespace elax

#endif
