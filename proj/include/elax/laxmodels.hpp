#ifndef ELAX_LAXMODELS_HPP
#define ELAX_LAXMODELS_HPP

#include <span>
#include <utility>
#include <vector>

#include "elax/diffkit.hpp"
#include "elax/elliptic.hpp"
#include "elax/linalg.hpp"
#include "elax/states.hpp"

namespace elax {

// ---------------------------------------------------------------- RS model

/// Lax weights b_j. The standard variant is
///   b_j = prod_{k != j} theta(q_j - q_k - eta)/theta(q_j - q_k) exp(p_j/c);
/// plus_eta flips the sign of eta in the numerator, square_root evaluates the
/// momentum-shift midpoint through (wp(eta) - wp(q_j - q_k))^{1/2} with a
/// principal root per factor.
template <class S>
std::vector<S> rs_b(std::span<const S> p, std::span<const S> q, const ModelParams& par,
                    WeightVariant variant = WeightVariant::standard, const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    std::vector<S> b(N);
    const cplx sign = (variant == WeightVariant::plus_eta) ? cplx{1.0} : cplx{-1.0};
    for (int j = 0; j < N; ++j) {
        S acc = exp(p[j] / S{par.c});
        if (variant == WeightVariant::square_root) {
            const cplx pref = theta(par.eta, m) / theta_d(cplx{0.0}, m, 1);
            for (int k = 0; k < N; ++k) {
                if (k == j) continue;
                acc = acc * S{pref} * sqrt(wp(S{par.eta}, m, g) - wp(q[j] - q[k], m, g));
            }
        } else {
            for (int k = 0; k < N; ++k) {
                if (k == j) continue;
                const S d = q[j] - q[k];
                require_off_lattice(d, m, g, "rs_b");
                require_off_lattice(d + S{sign * par.eta}, m, g, "rs_b");
                acc = acc * theta(d + S{sign * par.eta}, m) / theta(d, m);
            }
        }
        b[j] = acc;
    }
    return b;
}

/// L_ij(z) = phi(z, q_i - q_j + eta) b_j.
template <class S>
Mat<S> rs_lax(std::span<const S> p, std::span<const S> q, cplx z, const ModelParams& par,
              WeightVariant variant = WeightVariant::standard, const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    const auto b = rs_b(p, q, par, variant, g);
    Mat<S> L(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            L(i, j) = kronecker_phi(S{z}, q[i] - q[j] + S{par.eta}, m, g) * b[j];
    return L;
}

/// Companion M-matrix of the standard-variant flow.
template <class S>
Mat<S> rs_M(std::span<const S> p, std::span<const S> q, cplx z, const ModelParams& par,
            const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    const auto qdot = rs_b(p, q, par, WeightVariant::standard, g);
    Mat<S> M(N);
    const S e1z = e1(S{z}, m, g);
    const S e1eta = e1(S{par.eta}, m, g);
    for (int i = 0; i < N; ++i) {
        S diag = qdot[i] * (e1z + e1eta);
        for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            const S qik = q[i] - q[k];
            diag += qdot[k] * (e1(qik + S{par.eta}, m, g) - e1(qik, m, g));
            M(i, k) = -kronecker_phi(S{z}, qik, m, g) * qdot[k];
        }
        M(i, i) = -diag;
    }
    return M;
}

/// H = c sum_j b_j.
template <class S>
S rs_hamiltonian(std::span<const S> p, std::span<const S> q, const ModelParams& par,
                 WeightVariant variant = WeightVariant::standard, const LatticeGuard& g = {}) {
    const auto b = rs_b(p, q, par, variant, g);
    S h{0.0};
    for (const auto& x : b) h += x;
    return h * S{par.c};
}

/// Standard-variant flow: qdot_j = b_j and the E1-sum form of pdot.
template <class S>
std::pair<std::vector<S>, std::vector<S>> rs_eom(std::span<const S> p, std::span<const S> q,
                                                 const ModelParams& par, const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    const auto qdot = rs_b(p, q, par, WeightVariant::standard, g);
    std::vector<S> pdot(N, S{0.0});
    for (int i = 0; i < N; ++i) {
        S acc{0.0};
        for (int l = 0; l < N; ++l) {
            if (l == i) continue;
            const S qil = q[i] - q[l];
            acc += (qdot[i] + qdot[l]) * e1(qil, m, g) - qdot[i] * e1(qil - S{par.eta}, m, g) -
                   qdot[l] * e1(qil + S{par.eta}, m, g);
        }
        pdot[i] = S{par.c} * acc;
    }
    return {qdot, pdot};
}

/// Max deviation of qddot_i (chain rule through the flow) from the Newtonian
/// form sum_{k != i} qdot_i qdot_k (2 E1(q_ik) - E1(q_ik+eta) - E1(q_ik-eta)).
double rs_newton_residual(const RSState& s, const ModelParams& par);

// ---------------------------------------------------------------- CM model

/// CM Lax from pre-shifted momenta: delta_ij (pt_i + nu E1(z)) + (1-delta) nu phi(z, q_ij).
template <class S>
Mat<S> cm_lax_from_ptilde(std::span<const S> pt, std::span<const S> q, cplx z, const ModelParams& par,
                          const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(pt.size());
    Mat<S> L(N);
    const S e1z = e1(S{z}, m, g);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            L(i, j) = (i == j) ? pt[i] + S{par.nu} * e1z
                               : S{par.nu} * kronecker_phi(S{z}, q[i] - q[j], m, g);
    return L;
}

template <class S>
Mat<S> cm_lax(std::span<const S> p, std::span<const S> q, cplx z, const ModelParams& par,
              const LatticeGuard& g = {}) {
    const auto pt = tilde_p(std::vector<S>(p.begin(), p.end()), std::vector<S>(q.begin(), q.end()), par.nu,
                            par.modulus(), g);
    return cm_lax_from_ptilde(std::span<const S>(pt), q, z, par, g);
}

/// H = sum p_i^2/2 - nu^2 sum_{i > j} wp(q_i - q_j), over unshifted momenta.
template <class S>
S cm_hamiltonian(std::span<const S> p, std::span<const S> q, const ModelParams& par,
                 const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    S h{0.0};
    for (int i = 0; i < N; ++i) h += p[i] * p[i] * S{0.5};
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < i; ++j) h -= S{par.nu * par.nu} * wp(q[i] - q[j], m, g);
    return h;
}

template <class S>
std::pair<std::vector<S>, std::vector<S>> cm_eom(std::span<const S> p, std::span<const S> q,
                                                 const ModelParams& par, const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    std::vector<S> qdot(p.begin(), p.end());
    std::vector<S> pdot(N, S{0.0});
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            pdot[i] += S{par.nu * par.nu} * wp_d(q[i] - q[j], m, g);
        }
    return {qdot, pdot};
}

// ------------------------------------------------------------------- chain

/// Site weights b^a_j of the lattice Lax matrix; site indices are 0-based
/// and cyclic, the previous site of a is (a-1+n) mod n.
template <class S>
std::vector<S> chain_b(int a, std::span<const S> p, std::span<const S> q, const ModelParams& par,
                       const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = par.N, n = par.n;
    const int ap = (a - 1 + n) % n;
    std::vector<S> b(N);
    const S th_meta = theta(S{-par.eta}, m);
    for (int j = 0; j < N; ++j) {
        S num = exp(p[std::size_t(a) * N + j] / S{par.c});
        for (int l = 0; l < N; ++l) {
            const S d = q[std::size_t(a) * N + j] - q[std::size_t(ap) * N + l];
            require_off_lattice(d - S{par.eta}, m, g, "chain_b");
            num = num * theta(d - S{par.eta}, m);
        }
        S den = th_meta;
        for (int l = 0; l < N; ++l) {
            if (l == j) continue;
            const S d = q[std::size_t(a) * N + j] - q[std::size_t(a) * N + l];
            require_off_lattice(d, m, g, "chain_b");
            den = den * theta(d, m);
        }
        b[j] = num / den;
    }
    return b;
}

/// h_{a-1,a} = sum_j b^a_j.
template <class S>
S chain_h(int a, std::span<const S> p, std::span<const S> q, const ModelParams& par,
          const LatticeGuard& g = {}) {
    const auto b = chain_b(a, p, q, par, g);
    S h{0.0};
    for (const auto& x : b) h += x;
    if (std::abs(value_of(h)) < 1e-12)
        throw degenerate_weight_error("chain_h: vanishing site weight sum");
    return h;
}

/// L^a_ij(z) = phi(z, q^{a-1}_i - q^a_j + eta) b^a_j.
template <class S>
Mat<S> chain_lax(int a, std::span<const S> p, std::span<const S> q, cplx z, const ModelParams& par,
                 const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = par.N, n = par.n;
    const int ap = (a - 1 + n) % n;
    const auto b = chain_b(a, p, q, par, g);
    Mat<S> L(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            L(i, j) = kronecker_phi(S{z}, q[std::size_t(ap) * N + i] - q[std::size_t(a) * N + j] + S{par.eta},
                                    m, g) *
                      b[j];
    return L;
}

/// T(z) = L^0 L^1 ... L^{n-1}.
template <class S>
Mat<S> chain_monodromy(std::span<const S> p, std::span<const S> q, cplx z, const ModelParams& par,
                       const LatticeGuard& g = {}) {
    Mat<S> t = Mat<S>::identity(par.N);
    for (int a = 0; a < par.n; ++a) t = t * chain_lax(a, p, q, z, par, g);
    return t;
}

/// H = c sum_a log h_{a-1,a}.
template <class S>
S chain_hamiltonian(std::span<const S> p, std::span<const S> q, const ModelParams& par,
                    const LatticeGuard& g = {}) {
    S h{0.0};
    for (int a = 0; a < par.n; ++a) h += log(chain_h(a, p, q, par, g));
    return h * S{par.c};
}

/// Flow of the chain Hamiltonian, produced by dual-number differentiation of
/// the closed-form H (qdot first, pdot second, both flattened (a,i)).
std::pair<std::vector<cplx>, std::vector<cplx>> chain_eom(const ChainState& s, const ModelParams& par);

/// Max deviation of qddot^a_i / qdot^a_i from the displayed lattice
/// Newtonian form.
double chain_newton_residual(const ChainState& s, const ModelParams& par);

// --------------------------------------------------------- state adapters

std::vector<cplx> rs_b(const RSState& s, const ModelParams& par, WeightVariant variant = WeightVariant::standard);
CMat rs_lax(const RSState& s, cplx z, const ModelParams& par, WeightVariant variant = WeightVariant::standard);
CMat rs_M(const RSState& s, cplx z, const ModelParams& par);
cplx rs_hamiltonian(const RSState& s, const ModelParams& par, WeightVariant variant = WeightVariant::standard);
std::pair<std::vector<cplx>, std::vector<cplx>> rs_eom(const RSState& s, const ModelParams& par);
CMat cm_lax(const RSState& s, cplx z, const ModelParams& par);
cplx cm_hamiltonian(const RSState& s, const ModelParams& par);
std::pair<std::vector<cplx>, std::vector<cplx>> cm_eom(const RSState& s, const ModelParams& par);
CMat chain_lax(const ChainState& s, int a, cplx z, const ModelParams& par);
CMat chain_monodromy(const ChainState& s, cplx z, const ModelParams& par);
cplx chain_hamiltonian(const ChainState& s, const ModelParams& par);

}  // namespace elax

#endif
