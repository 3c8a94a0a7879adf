#include "elax/elliptic.hpp"
#include "elax/states.hpp"

namespace elax {

namespace {

double rel_residual(cplx lhs, cplx rhs) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) / scale;
}

/// Draws one point in the cell whose distance from the lattice (and that of
/// every derived combination handed in by the caller) exceeds the guard.
struct GuardedSampler {
    Rng& rng;
    const Modulus& m;
    double guard;

    cplx draw(const std::vector<cplx>& offsets = {}) {
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const cplx z = rng.in_cell(m.tau);
            bool ok = lattice_distance(z, m.tau) >= guard;
            for (const auto& off : offsets)
                if (lattice_distance(z + off, m.tau) < guard) ok = false;
            if (ok) return z;
        }
        throw sampler_exhausted_error("identity_suite: guard rejection limit reached");
    }
};

}  // namespace

IdentityReport identity_suite(std::uint64_t seed, int trials, const Modulus& m, const LatticeGuard& g) {
    if (trials < 1) throw std::invalid_argument("identity_suite: trials must be >= 1");
    Rng rng(seed);
    GuardedSampler smp{rng, m, g.min_distance};
    const LatticeGuard tight{g.min_distance * 0.5};

    double fay = 0.0, deg_sum = 0.0, three_term = 0.0, wp_diff = 0.0;
    double parity = 0.0, quasi = 0.0, deriv = 0.0;

    for (int t = 0; t < trials; ++t) {
        // Fay: phi(z1,u1) phi(z2,u2) = phi(z1,u1+u2) phi(z2-z1,u2) + phi(z2,u1+u2) phi(z1-z2,u1)
        {
            const cplx z1 = smp.draw();
            const cplx z2 = smp.draw({-z1});
            const cplx u1 = smp.draw();
            const cplx u2 = smp.draw({u1});
            const cplx lhs = kronecker_phi(z1, u1, m, tight) * kronecker_phi(z2, u2, m, tight);
            const cplx rhs = kronecker_phi(z1, u1 + u2, m, tight) * kronecker_phi(z2 - z1, u2, m, tight) +
                             kronecker_phi(z2, u1 + u2, m, tight) * kronecker_phi(z1 - z2, u1, m, tight);
            fay = std::max(fay, rel_residual(lhs, rhs));
        }
        // Coinciding-z degeneration with the E1 sum.
        {
            const cplx z = smp.draw();
            const cplx u1 = smp.draw({z});
            const cplx u2 = smp.draw({u1, z + u1});
            const cplx lhs = kronecker_phi(z, u1, m, tight) * kronecker_phi(z, u2, m, tight);
            const cplx rhs = kronecker_phi(z, u1 + u2, m, tight) *
                             (e1(z, m, tight) + e1(u1, m, tight) + e1(u2, m, tight) - e1(z + u1 + u2, m, tight));
            deg_sum = std::max(deg_sum, rel_residual(lhs, rhs));
        }
        // Three-term degeneration.
        {
            const cplx z = smp.draw();
            const cplx w = smp.draw({-z});
            const cplx u1 = smp.draw();
            const cplx u2 = smp.draw({-u1});
            const cplx v = smp.draw({-u1, u2, -(u1 - u2)});
            const cplx lhs = kronecker_phi(z, u1 - v, m, tight) * kronecker_phi(w, u2 + v, m, tight) *
                                 kronecker_phi(z - w, v, m, tight) -
                             kronecker_phi(z, u2 + v, m, tight) * kronecker_phi(w, u1 - v, m, tight) *
                                 kronecker_phi(z - w, u1 - u2 - v, m, tight);
            const cplx rhs = kronecker_phi(z, u1, m, tight) * kronecker_phi(w, u2, m, tight) *
                             (e1(v, m, tight) - e1(u1 - u2 - v, m, tight) + e1(u1 - v, m, tight) -
                              e1(u2 + v, m, tight));
            three_term = std::max(three_term, rel_residual(lhs, rhs));
        }
        // phi(z,u) phi(z,-u) = wp(z) - wp(u).
        {
            const cplx z = smp.draw();
            const cplx u = smp.draw({z, -z});
            const cplx lhs = kronecker_phi(z, u, m, tight) * kronecker_phi(z, -u, m, tight);
            const cplx rhs = wp(z, m, tight) - wp(u, m, tight);
            wp_diff = std::max(wp_diff, rel_residual(lhs, rhs));
        }
        // Parities of phi, E1, E2.
        {
            const cplx z = smp.draw();
            const cplx u = smp.draw({z});
            parity = std::max(parity, rel_residual(kronecker_phi(z, u, m, tight),
                                                   -kronecker_phi(-z, -u, m, tight)));
            parity = std::max(parity, rel_residual(e1(u, m, tight), -e1(-u, m, tight)));
            parity = std::max(parity, rel_residual(e2(u, m, tight), e2(-u, m, tight)));
        }
        // Quasi-periodicity of phi in z.
        {
            const cplx z = smp.draw();
            const cplx u = smp.draw({z, z + m.tau});
            const cplx f = kronecker_phi(z, u, m, tight);
            quasi = std::max(quasi, rel_residual(kronecker_phi(z + 1.0, u, m, tight), f));
            quasi = std::max(quasi, rel_residual(kronecker_phi(z + m.tau, u, m, tight),
                                                 std::exp(-2.0 * pi * iunit * u) * f));
        }
        // Closed-form derivatives against a Cauchy-integral derivative of
        // the function itself (32-point circle well inside the pole-free
        // disk; spectrally accurate and roundoff-benign).
        {
            GuardedSampler wide{rng, m, std::max(g.min_distance, 0.02)};
            const cplx z = wide.draw();
            const cplx u = wide.draw({z});
            auto cauchy_d = [&](auto&& f, double dist) {
                const double r = 0.3 * dist;
                const int K = 32;
                cplx acc{0.0};
                for (int k = 0; k < K; ++k) {
                    const cplx ph = std::exp(iunit * (2.0 * pi * k / K));
                    acc += f(r * ph) / ph;
                }
                return acc / (double(K) * r);
            };
            const cplx dz = cauchy_d([&](cplx s) { return kronecker_phi(z + s, u, m, tight); },
                                     lattice_distance(z, m.tau));
            const cplx du = cauchy_d([&](cplx s) { return kronecker_phi(z, u + s, m, tight); },
                                     lattice_distance(u, m.tau));
            deriv = std::max(deriv, rel_residual(phi_dz(z, u, m, tight), dz));
            deriv = std::max(deriv, rel_residual(phi_du(z, u, m, tight), du));
        }
    }

    IdentityReport rep;
    rep.entries = {{"fay-addition", fay},
                   {"fay-degeneration-sum", deg_sum},
                   {"fay-degeneration-three-term", three_term},
                   {"wp-difference-product", wp_diff},
                   {"parity", parity},
                   {"quasi-periodicity", quasi},
                   {"derivative-relation", deriv}};
    return rep;
}

}  // namespace elax
