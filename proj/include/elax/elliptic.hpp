#ifndef ELAX_ELLIPTIC_HPP
#define ELAX_ELLIPTIC_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "elax/errors.hpp"
#include "elax/scalars.hpp"

namespace elax {

/// Elliptic modulus tau with Im(tau) > 0.
struct Modulus {
    cplx tau;

    explicit Modulus(cplx t) : tau(t) {
        if (!(tau.imag() > 0.0))
            throw invalid_modulus_error("elliptic modulus requires Im(tau) > 0");
    }
};

/// Rejection radius around lattice points, measured in fundamental-domain
/// coordinates (the (s,t) of w = s + t*tau, wrapped to [-1/2,1/2)).
struct LatticeGuard {
    double min_distance = 1e-3;
};

/// Coordinates (s,t) of w = s + t*tau.
inline std::array<double, 2> lattice_coords(cplx w, cplx tau) {
    const double t = w.imag() / tau.imag();
    const double s = w.real() - t * tau.real();
    return {s, t};
}

/// Distance of w from the lattice Z + tau*Z in fundamental-domain units.
inline double lattice_distance(cplx w, cplx tau) {
    auto [s, t] = lattice_coords(w, tau);
    const double ds = s - std::nearbyint(s);
    const double dt = t - std::nearbyint(t);
    return std::hypot(ds, dt);
}

template <class S>
void require_off_lattice(const S& w, const Modulus& m, const LatticeGuard& g, const char* where) {
    if (lattice_distance(value_of(w), m.tau) < g.min_distance)
        throw pole_proximity_error(std::string(where) + ": argument too close to the lattice", value_of(w));
}

namespace detail {

constexpr int theta_max_terms = 200;
constexpr double theta_rel_tol = 1e-18;

/// theta_1 series values and z-derivatives up to `kmax` at a reduced
/// argument (|s|,|t| <= 1/2 after reduction). The series is
///   theta(z) = 2 sum_{n>=0} (-1)^n q^{(n+1/2)^2} sin((2n+1) pi z),
/// differentiated term by term; truncation when the next term falls below
/// theta_rel_tol * (|partial sum| + 1).
template <class S>
std::array<S, 4> theta_series(const S& z, cplx tau, int kmax) {
    std::array<S, 4> acc{S{0.0}, S{0.0}, S{0.0}, S{0.0}};
    const cplx ipitau = iunit * pi * tau;
    for (int n = 0; n < theta_max_terms; ++n) {
        const double a = (2 * n + 1) * pi;
        const cplx qpow = std::exp(ipitau * ((n + 0.5) * (n + 0.5)));
        const cplx coef = 2.0 * ((n % 2 == 0) ? 1.0 : -1.0) * qpow;
        const S az = S{a} * z;
        const S s = sin(az);
        const S c = cos(az);
        double maxrel = 0.0;
        for (int k = 0; k <= kmax; ++k) {
            // d^k/dz^k sin(a z) = a^k * {sin, cos, -sin, -cos}[k mod 4](a z)
            S trig = (k % 2 == 0) ? s : c;
            if (k % 4 == 2 || k % 4 == 3) trig = -trig;
            const S term = S{coef * std::pow(a, k)} * trig;
            acc[k] += term;
            const double rel = std::abs(value_of(term)) / (std::abs(value_of(acc[k])) + 1.0);
            maxrel = std::max(maxrel, rel);
        }
        if (maxrel < theta_rel_tol && n >= 1) return acc;
    }
    throw std::runtime_error("theta series failed to converge");
}

/// Splits z into z0 + mshift + lshift*tau with z0 in the fundamental cell.
template <class S>
void reduce_argument(const S& z, cplx tau, S& z0, long& mshift, long& lshift) {
    auto [s, t] = lattice_coords(value_of(z), tau);
    lshift = std::lround(std::floor(t + 0.5));
    mshift = std::lround(std::floor(s + 0.5));
    z0 = z - S{cplx(double(mshift), 0.0) + double(lshift) * tau};
}

inline double binom3(int k, int j) {
    static const int b[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    return double(b[k][j]);
}

}  // namespace detail

/// theta(z) and its z-derivatives up to order kmax (<= 3). The argument is
/// reduced to the fundamental cell with the theta_1 quasi-periodicity laws
///   theta(z+1) = -theta(z),  theta(z+tau) = -exp(-i pi tau - 2 pi i z) theta(z)
/// before summation, and derivatives are reassembled through the product rule.
template <class S>
std::array<S, 4> theta_all(const S& z, const Modulus& m, int kmax) {
    if (kmax < 0 || kmax > 3) throw unsupported_order_error("theta derivatives supported up to order 3");
    S z0;
    long mm = 0, ll = 0;
    detail::reduce_argument(z, m.tau, z0, mm, ll);
    const auto sv = detail::theta_series(z0, m.tau, kmax);
    if (mm == 0 && ll == 0) return sv;
    const double sign = ((mm + ll) % 2 == 0) ? 1.0 : -1.0;
    const cplx lfac = -2.0 * pi * iunit * double(ll);
    const S mu = S{sign} * exp(S{-iunit * pi * double(ll) * double(ll) * m.tau} + S{lfac} * z0);
    std::array<S, 4> out{S{0.0}, S{0.0}, S{0.0}, S{0.0}};
    for (int k = 0; k <= kmax; ++k) {
        S acc{0.0};
        for (int j = 0; j <= k; ++j)
            acc += S{detail::binom3(k, j)} * ipow(S{lfac}, k - j) * sv[j];
        out[k] = mu * acc;
    }
    return out;
}

/// The odd Jacobi theta function theta_1(z | tau).
template <class S>
S theta(const S& z, const Modulus& m) {
    return theta_all(z, m, 0)[0];
}

/// order-th z-derivative of theta, order in 0..3.
template <class S>
S theta_d(const S& z, const Modulus& m, int order) {
    return theta_all(z, m, order)[order];
}

/// eta0 = -(1/6) theta'''(0) / theta'(0).
inline cplx eta0(const Modulus& m) {
    const auto th = theta_all(cplx{0.0}, m, 3);
    return -th[3] / (6.0 * th[1]);
}

/// Kronecker function phi(z,u) = theta'(0) theta(z+u) / (theta(z) theta(u)).
/// Simple pole of residue 1 at z = 0 (and at u = 0 by symmetry).
template <class S>
S kronecker_phi(const S& z, const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    require_off_lattice(z, m, g, "kronecker_phi");
    require_off_lattice(u, m, g, "kronecker_phi");
    const S tp0 = theta_all(S{cplx{0.0}}, m, 1)[1];
    return tp0 * theta(z + u, m) / (theta(z, m) * theta(u, m));
}

/// First Eisenstein function E1(u) = theta'(u)/theta(u).
template <class S>
S e1(const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    require_off_lattice(u, m, g, "e1");
    const auto th = theta_all(u, m, 1);
    return th[1] / th[0];
}

/// Second Eisenstein function E2(u) = -E1'(u).
template <class S>
S e2(const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    require_off_lattice(u, m, g, "e2");
    const auto th = theta_all(u, m, 2);
    const S l1 = th[1] / th[0];
    return l1 * l1 - th[2] / th[0];
}

/// Weierstrass P-function, wp(u) = E2(u) + (1/3) theta'''(0)/theta'(0).
template <class S>
S wp(const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    const auto th0 = theta_all(S{cplx{0.0}}, m, 3);
    return e2(u, m, g) + th0[3] / (3.0 * th0[1]);
}

/// wp'(u) = -E1''(u).
template <class S>
S wp_d(const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    require_off_lattice(u, m, g, "wp_d");
    const auto th = theta_all(u, m, 3);
    const S l1 = th[1] / th[0];
    const S e1dd = th[3] / th[0] - 3.0 * (th[2] / th[0]) * l1 + 2.0 * l1 * l1 * l1;
    return -e1dd;
}

/// Weierstrass zeta, zeta(u) = E1(u) + 2 eta0 u.
template <class S>
S zeta_w(const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    return e1(u, m, g) + S{2.0 * eta0(m)} * u;
}

/// Weierstrass sigma, sigma(u) = theta(u)/theta'(0) * exp(eta0 u^2).
template <class S>
S sigma_w(const S& u, const Modulus& m) {
    const auto th0 = theta_all(S{cplx{0.0}}, m, 1);
    return theta(u, m) / th0[1] * exp(S{eta0(m)} * u * u);
}

/// d/dz phi(z,u) = (E1(z+u) - E1(z)) phi(z,u).
template <class S>
S phi_dz(const S& z, const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    require_off_lattice(z + u, m, g, "phi_dz");
    return (e1(z + u, m, g) - e1(z, m, g)) * kronecker_phi(z, u, m, g);
}

/// d/du phi(z,u) = (E1(z+u) - E1(u)) phi(z,u). Also the f(z,u) entering the
/// field V-matrix.
template <class S>
S phi_du(const S& z, const S& u, const Modulus& m, const LatticeGuard& g = {}) {
    require_off_lattice(z + u, m, g, "phi_du");
    return (e1(z + u, m, g) - e1(u, m, g)) * kronecker_phi(z, u, m, g);
}

/// Max relative residuals of the addition-formula suite at guarded random
/// points: Fay, its two degenerations, the wp-difference product, parities,
/// quasi-periodicity and the closed-form derivatives.
struct IdentityReport {
    struct Entry {
        std::string name;
        double max_residual;
    };
    std::vector<Entry> entries;
    double worst() const {
        double w = 0.0;
        for (const auto& e : entries) w = std::max(w, e.max_residual);
        return w;
    }
};

IdentityReport identity_suite(std::uint64_t seed, int trials, const Modulus& m, const LatticeGuard& g = {});

}  // namespace elax

#endif
