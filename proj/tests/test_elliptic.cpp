#include <doctest.h>

#include <complex>

#include "elax/elliptic.hpp"
#include "elax/states.hpp"

using namespace elax;

namespace {

// Brute-force oracle: 200 terms of the defining series in long double,
// no argument reduction.
std::complex<long double> theta_oracle(std::complex<long double> z, std::complex<long double> tau) {
    const long double lpi = 3.14159265358979323846264338327950288L;
    const std::complex<long double> i{0.0L, 1.0L};
    std::complex<long double> s{0.0L};
    for (int n = 0; n < 200; ++n) {
        const std::complex<long double> qpow = std::exp(i * lpi * tau * ((n + 0.5L) * (n + 0.5L)));
        s += 2.0L * (n % 2 == 0 ? 1.0L : -1.0L) * qpow * std::sin((2 * n + 1) * lpi * z);
    }
    return s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

const Modulus tau_i{cplx{0.0, 1.0}};
const Modulus tau_b{cplx{0.3, 0.8}};

}  // namespace

TEST_CASE("theta basic values and parity") {
    CHECK(std::abs(theta(cplx{0.0}, tau_i)) < 1e-15);
    const cplx z{0.3, 0.1};
    CHECK(std::abs(theta(-z, tau_i) + theta(z, tau_i)) < 1e-15);

    // Frozen brute-force series values (long double oracle below reproduces them).
    CHECK(rel(theta(cplx{0.25, 0.0}, tau_i), cplx{0.64358976403858588409, 0.0}) < 1e-14);
    CHECK(rel(theta(z, tau_i), cplx{0.77365122177117316312, 0.17293153659159264492}) < 1e-14);
    CHECK(rel(theta(cplx{0.2, -0.35}, tau_b), cplx{1.3582571336160686538, -0.93791010248551707309}) < 1e-14);
    CHECK(rel(theta_d(cplx{0.0}, tau_i, 1), cplx{2.8486946039877873161, 0.0}) < 1e-14);

    const auto ov = theta_oracle({0.25L, 0.0L}, {0.0L, 1.0L});
    CHECK(rel(theta(cplx{0.25, 0.0}, tau_i), cplx{double(ov.real()), double(ov.imag())}) < 1e-14);
}

TEST_CASE("theta derivative orders") {
    CHECK(std::abs(theta_d(cplx{0.0}, tau_i, 0)) < 1e-15);
    CHECK(std::abs(theta_d(cplx{0.0}, tau_i, 2)) < 1e-15);
    CHECK(std::abs(theta_d(cplx{0.0}, tau_i, 1)) > 1.0);

    const cplx z{0.37, -0.21};
    const double h = 1e-5;
    const cplx fd1 = (theta(z + h, tau_i) - theta(z - h, tau_i)) / (2.0 * h);
    CHECK(std::abs(theta_d(z, tau_i, 1) - fd1) < 1e-8);
    const cplx fd2 = (theta(z + h, tau_i) - 2.0 * theta(z, tau_i) + theta(z - h, tau_i)) / (h * h);
    CHECK(std::abs(theta_d(z, tau_i, 2) - fd2) < 1e-5);
    const cplx fd3 = (theta_d(z + h, tau_i, 2) - theta_d(z - h, tau_i, 2)) / (2.0 * h);
    CHECK(std::abs(theta_d(z, tau_i, 3) - fd3) < 1e-4);

    CHECK_THROWS_AS((void)theta_d(z, tau_i, 4), unsupported_order_error);
    CHECK_THROWS_AS((void)Modulus(cplx(0.5, -0.2)), invalid_modulus_error);
}

TEST_CASE("theta quasi-periodicity against the unreduced series") {
    // Both laws asserted against a direct (reduction-free) summation.
    for (const auto& m : {tau_i, tau_b}) {
        Rng rng(7);
        for (int t = 0; t < 20; ++t) {
            const cplx z = rng.in_cell(m.tau);
            const auto raw = [&](cplx w) { return detail::theta_series(w, m.tau, 0)[0]; };
            const cplx t0 = theta(z, m);
            CHECK(rel(raw(z + 1.0), -t0) < 1e-12);
            const cplx law = -std::exp(-iunit * pi * m.tau - 2.0 * pi * iunit * z) * t0;
            CHECK(rel(raw(z + m.tau), law) < 1e-12);
        }
    }
}

TEST_CASE("kronecker function: parity, periodicity, pole residue") {
    const cplx z{0.31, 0.17}, u{0.12, -0.27};
    CHECK(std::abs(kronecker_phi(z, u, tau_i) + kronecker_phi(-z, -u, tau_i)) < 1e-12);
    CHECK(rel(kronecker_phi(z + 1.0, u, tau_i), kronecker_phi(z, u, tau_i)) < 1e-12);
    const cplx qshift = std::exp(-2.0 * pi * iunit * u);
    CHECK(rel(kronecker_phi(z + tau_i.tau, u, tau_i), qshift * kronecker_phi(z, u, tau_i)) < 1e-10);

    // (1/2 pi i) contour integral over |z| = 0.1, 16-point trapezoid.
    cplx acc{0.0};
    const int K = 16;
    for (int k = 0; k < K; ++k) {
        const double th = 2.0 * pi * k / K;
        const cplx zk = 0.1 * std::exp(iunit * th);
        acc += kronecker_phi(zk, u, tau_i) * zk;
    }
    acc /= double(K);
    CHECK(std::abs(acc - 1.0) < 1e-8);

    CHECK_THROWS_AS((void)kronecker_phi(cplx{1e-6, 0.0}, u, tau_i), pole_proximity_error);
}

TEST_CASE("eisenstein and weierstrass functions") {
    const cplx u{0.23, 0.11};
    CHECK(std::abs(e1(u, tau_i) + e1(-u, tau_i)) < 1e-12);
    CHECK(std::abs(e2(u, tau_i) - e2(-u, tau_i)) < 1e-12);
    CHECK(rel(wp(u, tau_i), wp(u + 1.0, tau_i)) < 1e-10);
    CHECK(rel(wp(u, tau_i), wp(u + tau_i.tau, tau_i)) < 1e-10);

    // zeta = (log sigma)' via central differences.
    const double h = 1e-5;
    const cplx sd = (sigma_w(u + h, tau_i) - sigma_w(u - h, tau_i)) / (2.0 * h);
    CHECK(rel(zeta_w(u, tau_i), sd / sigma_w(u, tau_i)) < 1e-8);

    // wp' against central differences of wp.
    const cplx wd = (wp(u + h, tau_i) - wp(u - h, tau_i)) / (2.0 * h);
    CHECK(rel(wp_d(u, tau_i), wd) < 1e-7);

    // E2 = E1^2 - theta''/theta consistency with -E1'.
    const cplx e1d = (e1(u + h, tau_i) - e1(u - h, tau_i)) / (2.0 * h);
    CHECK(rel(e2(u, tau_i), -e1d) < 1e-8);
}

TEST_CASE("kronecker derivatives") {
    const cplx z{0.29, -0.13}, u{0.41, 0.22};
    const double h = 1e-5;
    const cplx fdz = (kronecker_phi(z + h, u, tau_i) - kronecker_phi(z - h, u, tau_i)) / (2.0 * h);
    CHECK(std::abs(phi_dz(z, u, tau_i) - fdz) < 1e-8);
    const cplx rhs = kronecker_phi(z, u, tau_i) * (e1(z + u, tau_i) - e1(u, tau_i));
    CHECK(rel(phi_du(z, u, tau_i), rhs) < 1e-13);
    CHECK(rel(phi_dz(z, u, tau_i), phi_dz(z + 1.0, u, tau_i)) < 1e-12);
}

TEST_CASE("kronecker expansion near the pole") {
    const cplx u{0.27, 0.31};
    for (const double eps : {1e-2, 1e-3}) {
        const cplx f = kronecker_phi(cplx{eps, 0.0}, u, tau_i, LatticeGuard{1e-5});
        CHECK(std::abs(eps * f - 1.0) < 10.0 * eps);
        CHECK(std::abs(f - 1.0 / eps - e1(u, tau_i)) < 10.0 * eps);
    }
}

TEST_CASE("identity suite passes at both moduli") {
    for (const auto& m : {tau_i, tau_b}) {
        const auto rep = identity_suite(42, 100, m);
        for (const auto& e : rep.entries) {
            INFO(e.name);
            CHECK(e.max_residual <= 1e-10);
        }
    }
    CHECK_THROWS_AS((void)identity_suite(1, 0, tau_i), std::invalid_argument);
}

TEST_CASE("degenerate limit of the sum degeneration recovers the wp identity") {
    const cplx z{0.33, 0.21}, u1{0.17, -0.29};
    const double d = 1e-4;
    const cplx u2 = -u1 + d;
    const cplx lhs = kronecker_phi(z, u1, tau_i) * kronecker_phi(z, u2, tau_i);
    const cplx target = wp(z, tau_i) - wp(u1, tau_i);
    CHECK(std::abs(lhs - target) < 1e3 * d);
}

TEST_CASE("dual numbers flow through the elliptic kernels") {
    const cplx z{0.17, 0.23};
    const Dual dz{z, 1.0};
    CHECK(rel(theta(dz, tau_i).t, theta_d(z, tau_i, 1)) < 1e-13);
    CHECK(rel(e1(dz, tau_i).t, -e2(z, tau_i)) < 1e-13);
    const cplx u{0.37, -0.11};
    CHECK(rel(kronecker_phi(dz, Dual{u}, tau_i).t, phi_dz(z, u, tau_i)) < 1e-13);
}
