#include "elax/laxmodels.hpp"

namespace elax {

namespace {

std::span<const cplx> sp(const std::vector<cplx>& v) { return {v.data(), v.size()}; }

}  // namespace

std::vector<cplx> rs_b(const RSState& s, const ModelParams& par, WeightVariant variant) {
    return rs_b<cplx>(sp(s.p), sp(s.q), par, variant);
}

CMat rs_lax(const RSState& s, cplx z, const ModelParams& par, WeightVariant variant) {
    return rs_lax<cplx>(sp(s.p), sp(s.q), z, par, variant);
}

CMat rs_M(const RSState& s, cplx z, const ModelParams& par) { return rs_M<cplx>(sp(s.p), sp(s.q), z, par); }

cplx rs_hamiltonian(const RSState& s, const ModelParams& par, WeightVariant variant) {
    return rs_hamiltonian<cplx>(sp(s.p), sp(s.q), par, variant);
}

std::pair<std::vector<cplx>, std::vector<cplx>> rs_eom(const RSState& s, const ModelParams& par) {
    return rs_eom<cplx>(sp(s.p), sp(s.q), par);
}

CMat cm_lax(const RSState& s, cplx z, const ModelParams& par) { return cm_lax<cplx>(sp(s.p), sp(s.q), z, par); }

cplx cm_hamiltonian(const RSState& s, const ModelParams& par) {
    return cm_hamiltonian<cplx>(sp(s.p), sp(s.q), par);
}

std::pair<std::vector<cplx>, std::vector<cplx>> cm_eom(const RSState& s, const ModelParams& par) {
    return cm_eom<cplx>(sp(s.p), sp(s.q), par);
}

CMat chain_lax(const ChainState& s, int a, cplx z, const ModelParams& par) {
    return chain_lax<cplx>(a, sp(s.p), sp(s.q), z, par);
}

CMat chain_monodromy(const ChainState& s, cplx z, const ModelParams& par) {
    return chain_monodromy<cplx>(sp(s.p), sp(s.q), z, par);
}

cplx chain_hamiltonian(const ChainState& s, const ModelParams& par) {
    return chain_hamiltonian<cplx>(sp(s.p), sp(s.q), par);
}

double rs_newton_residual(const RSState& s, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles();
    const auto [qdot, pdot] = rs_eom(s, par);
    const auto coords = pack_coords(s.p, s.q);

    double worst = 0.0;
    for (int i = 0; i < N; ++i) {
        // qddot_i by the chain rule through b_i(p, q).
        const auto grad = partials(
            [&](std::span<const Dual> c) {
                auto [p, q] = unpack_coords(c);
                return rs_b<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), par)[i];
            },
            std::span<const cplx>(coords));
        cplx qddot{0.0};
        for (int mth = 0; mth < N; ++mth) qddot += grad[mth] * pdot[mth] + grad[N + mth] * qdot[mth];

        cplx rhs{0.0};
        for (int k = 0; k < N; ++k) {
            if (k == i) continue;
            const cplx qik = s.q[i] - s.q[k];
            rhs += qdot[i] * qdot[k] *
                   (2.0 * e1(qik, m) - e1(qik + par.eta, m) - e1(qik - par.eta, m));
        }
        worst = std::max(worst, std::abs(qddot - rhs));
    }
    return worst;
}

std::pair<std::vector<cplx>, std::vector<cplx>> chain_eom(const ChainState& s, const ModelParams& par) {
    const auto coords = pack_coords(s.p, s.q);
    const auto grad = partials(
        [&](std::span<const Dual> c) {
            auto [p, q] = unpack_coords(c);
            return chain_hamiltonian<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), par);
        },
        std::span<const cplx>(coords));
    const std::size_t D = s.p.size();
    std::vector<cplx> qdot(grad.begin(), grad.begin() + D);          // dH/dp
    std::vector<cplx> pdot(D);
    for (std::size_t i = 0; i < D; ++i) pdot[i] = -grad[D + i];      // -dH/dq
    return {qdot, pdot};
}

double chain_newton_residual(const ChainState& s, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int n = s.sites, N = s.particles_per_site;
    const auto [qdot, pdot] = chain_eom(s, par);
    const auto coords = pack_coords(s.p, s.q);
    const std::size_t D = s.p.size();

    auto qd = [&](int a, int i) { return qdot[std::size_t((a + n) % n) * N + i]; };
    auto qv = [&](int a, int i) { return s.qa((a + n) % n, i); };

    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < N; ++i) {
            // qddot^a_i through the closed-form flow component b^a_i / h_a.
            const auto grad = partials(
                [&](std::span<const Dual> c) {
                    auto [p, q] = unpack_coords(c);
                    const std::span<const Dual> ps(p), qs(q);
                    return chain_b<Dual>(a, ps, qs, par)[i] / chain_h<Dual>(a, ps, qs, par);
                },
                std::span<const cplx>(coords));
            cplx qddot{0.0};
            for (std::size_t mth = 0; mth < D; ++mth)
                qddot += grad[mth] * pdot[mth] + grad[D + mth] * qdot[mth];

            cplx rhs{0.0};
            for (int l = 0; l < N; ++l) {
                rhs -= qd(a + 1, l) * e1(qv(a, i) - qv(a + 1, l) + par.eta, m);
                rhs -= qd(a - 1, l) * e1(qv(a, i) - qv(a - 1, l) - par.eta, m);
                if (l != i) rhs += 2.0 * qd(a, l) * e1(qv(a, i) - qv(a, l), m);
            }
            for (int mm = 0; mm < N; ++mm)
                for (int l = 0; l < N; ++l) {
                    rhs += qd(a, mm) * qd(a + 1, l) * e1(qv(a, mm) - qv(a + 1, l) + par.eta, m);
                    rhs -= qd(a, l) * qd(a - 1, mm) * e1(qv(a - 1, mm) - qv(a, l) + par.eta, m);
                }
            worst = std::max(worst, std::abs(qddot / qd(a, i) - rhs));
        }
    return worst;
}

}  // namespace elax
