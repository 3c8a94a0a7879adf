#include <doctest.h>

#include "elax/rmatrices.hpp"

using namespace elax;

namespace {

ModelParams params_n(int N, int n = 1) {
    ModelParams p;
    p.N = N;
    p.n = n;
    return p;
}

struct Pts {
    cplx z, w;
};

Pts pts(const std::vector<cplx>& q, const ModelParams& par, std::uint64_t seed) {
    Rng rng(seed);
    const cplx z = sample_spectral(rng, q, par, 0.02);
    for (;;) {
        const cplx w = sample_spectral(rng, q, par, 0.02);
        if (lattice_distance(z - w, par.tau) >= 0.02) return {z, w};
    }
}

}  // namespace

TEST_CASE("rs r-matrix: skew symmetry, scalar case, eta independence") {
    const auto par = params_n(3);
    const auto s = sample_rs(7, par);
    const auto [z, w] = pts(s.q, par, 1);

    const Tensor r = rs_r12(s.q, z, w, par);
    const Tensor rback = rs_r12(s.q, w, z, par).swap_factors();
    CHECK((r + rback).max_abs() < 1e-12 * std::max(1.0, r.max_abs()));

    ModelParams other = par;
    other.eta = cplx{0.4, -0.05};
    CHECK((r - rs_r12(s.q, z, w, other)).max_abs() == 0.0);

    const auto p1 = params_n(1);
    const auto s1 = sample_rs(3, p1);
    const Tensor r1 = rs_r12(s1.q, z, w, p1);
    CHECK(std::abs(r1.ent(0, 0, 0, 0) - e1(z - w, par.modulus())) < 1e-13);

    CHECK_THROWS_AS((void)rs_r12(s.q, z, z, par), coinciding_spectral_parameters_error);
}

TEST_CASE("u tensors") {
    const auto par = params_n(3);
    const auto s = sample_rs(11, par);
    const Modulus m = par.modulus();

    const auto [up, um] = rs_u_pm(s.q, par);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(up.ent(i, i, j, j) - e1(s.q[j] - s.q[i] + par.eta, m)) < 1e-13);
            CHECK(std::abs(um.ent(i, i, j, j) - e1(s.q[j] - s.q[i] - par.eta, m)) < 1e-13);
        }

    ModelParams flipped = par;
    flipped.eta = -par.eta;
    const auto [upf, umf] = rs_u_pm(s.q, flipped);
    CHECK((up - umf).max_abs() < 1e-14);
    CHECK((um - upf).max_abs() < 1e-14);

    const auto p1 = params_n(1);
    const auto s1 = sample_rs(3, p1);
    const auto [u1p, u1m] = rs_u_pm(s1.q, p1);
    CHECK(std::abs(u1p.ent(0, 0, 0, 0) - e1(p1.eta, m)) < 1e-13);
    CHECK(std::abs(u1m.ent(0, 0, 0, 0) + e1(p1.eta, m)) < 1e-13);
}

TEST_CASE("s products and the inverse-assembled s") {
    const auto p1 = params_n(1);
    const auto s1 = sample_rs(5, p1);
    const cplx z{0.41, 0.17};
    const Modulus m = p1.modulus();
    const Tensor l1s = rs_L1s12(s1, z, p1);
    const cplx expect = kronecker_phi(z, p1.eta, m) * std::exp(s1.p[0] / p1.c) *
                        (e1(z + p1.eta, m) - e1(p1.eta, m));
    CHECK(std::abs(l1s.ent(0, 0, 0, 0) - expect) < 1e-12);

    const auto par = params_n(3);
    const auto s = sample_rs(13, par);
    const auto [z2, w2] = pts(s.q, par, 2);
    const Tensor viaL = tensor_first(rs_lax(s, z2, par)) * rs_s12(s, z2, par);
    const Tensor closed = rs_L1s12(s, z2, par);
    CHECK((viaL - closed).max_abs() < 1e-10 * std::max(1.0, closed.max_abs()));

    const Tensor viaL2 = tensor_second(rs_lax(s, w2, par)) * rs_s12(s, w2, par).swap_factors();
    const Tensor closed2 = rs_L2s21(s, w2, par);
    CHECK((viaL2 - closed2).max_abs() < 1e-10 * std::max(1.0, closed2.max_abs()));
}

TEST_CASE("assembled rs tensors") {
    const auto par = params_n(3);
    const auto s = sample_rs(17, par);
    const auto [z, w] = pts(s.q, par, 3);
    const auto t = rs_assembled(s, z, w, par);

    CHECK((t.r_plus - t.s_plus - t.r_minus + t.s_minus).max_abs() <
          1e-12 * std::max(1.0, t.r_plus.max_abs()));

    // s^+_21(w,z) = s^-_12(z,w).
    const auto t2 = rs_assembled(s, w, z, par);
    CHECK((t2.s_plus.swap_factors() - t.s_minus).max_abs() < 1e-12 * std::max(1.0, t.s_minus.max_abs()));

    // r^{+-}_21(w,z) = -r^{+-}_12(z,w).
    CHECK((t2.r_plus.swap_factors() + t.r_plus).max_abs() < 1e-12 * std::max(1.0, t.r_plus.max_abs()));
    CHECK((t2.r_minus.swap_factors() + t.r_minus).max_abs() < 1e-12 * std::max(1.0, t.r_minus.max_abs()));
}

TEST_CASE("cm r-matrix") {
    const auto p1 = params_n(1);
    const auto s1 = sample_rs(19, p1);
    const auto [z1, w1] = pts(s1.q, p1, 4);
    const Modulus m = p1.modulus();
    const Tensor r1 = cm_r12(s1.q, z1, w1, p1);
    CHECK(std::abs(r1.ent(0, 0, 0, 0) - (e1(z1 - w1, m) + e1(w1, m))) < 1e-13);

    // Lower-triangle rewriting of the exchange part:
    // (1/nu) sum_{i!=j} L^CM_ij(w) E_jj (x) E_ij = - sum phi(-w, q_ij) E_ii (x) E_ji.
    const auto par = params_n(3);
    const auto s = sample_rs(23, par);
    const auto [z, w] = pts(s.q, par, 5);
    const CMat L = cm_lax(s, w, par);
    Tensor lhs(3), rhs(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            lhs.ent(j, j, i, j) += L(i, j) / par.nu;
            rhs.ent(i, i, j, i) -= kronecker_phi(-w, s.q[i] - s.q[j], m);
        }
    CHECK((lhs - rhs).max_abs() < 1e-12 * std::max(1.0, lhs.max_abs()));
}

TEST_CASE("chain tensors reduce to rs tensors at one site") {
    ModelParams par = params_n(3, 1);
    const auto s = sample_rs(29, par);
    ChainState c;
    c.sites = 1;
    c.particles_per_site = 3;
    c.p = s.p;
    c.q = s.q;
    const auto [z, w] = pts(s.q, par, 6);

    const auto ct = chain_tensors(c, 0, z, w, par);
    const auto [up, um] = rs_u_pm(s.q, par);
    CHECK((ct.r - rs_r12(s.q, z, w, par)).max_abs() < 1e-12);
    CHECK((ct.u_plus - up).max_abs() < 1e-12 * std::max(1.0, up.max_abs()));
    CHECK((ct.u_minus - um).max_abs() < 1e-12 * std::max(1.0, um.max_abs()));
    CHECK((ct.L1s12 - rs_L1s12(s, z, par)).max_abs() < 1e-12 * std::max(1.0, ct.L1s12.max_abs()));
    CHECK((ct.L2s21 - rs_L2s21(s, w, par)).max_abs() < 1e-12 * std::max(1.0, ct.L2s21.max_abs()));
}

TEST_CASE("site r-matrix depends only on its own site") {
    ModelParams par = params_n(2, 3);
    auto s = sample_chain(31, par);
    const auto [z, w] = pts(s.q, par, 7);
    const Tensor before = chain_tensors(s, 1, z, w, par).r;
    s.qa(0, 0) += 0.01;
    s.qa(2, 1) -= 0.013;
    const Tensor after = chain_tensors(s, 1, z, w, par).r;
    CHECK((before - after).max_abs() == 0.0);
}

TEST_CASE("monodromy breve tensors") {
    ModelParams par = params_n(2, 2);
    const auto s = sample_chain(37, par);
    const auto [z, w] = pts(s.q, par, 8);
    const auto breve = monodromy_breve(s, z, w, par);

    // Conjugation identity: L^1_1(z) s^{+,1}_12(z) (L^1_1(z))^{-1} = breve s^+.
    const CMat L1z = chain_lax(s, 0, z, par);
    const Tensor s12 = chain_s12(s, 0, z, par);
    const auto ct = chain_tensors(s, 0, z, w, par);
    const Tensor splus = s12 + ct.u_plus;
    const Tensor conj = tensor_first(L1z) * splus * tensor_first(inverse(L1z));
    CHECK((conj - breve.s_plus).max_abs() < 1e-10 * std::max(1.0, conj.max_abs()));

    const CMat L1w = chain_lax(s, 0, w, par);
    const Tensor s21 = chain_s12(s, 0, w, par).swap_factors();
    const Tensor sminus = s21 - ct.u_minus;
    const Tensor conj2 = tensor_second(L1w) * sminus * tensor_second(inverse(L1w));
    CHECK((conj2 - breve.s_minus).max_abs() < 1e-10 * std::max(1.0, conj2.max_abs()));

    // Scalars commute: conjugation is trivial at N = 1.
    ModelParams p1 = params_n(1, 2);
    const auto s1 = sample_chain(38, p1);
    const auto b1 = monodromy_breve(s1, z, w, p1);
    const Tensor s12p = chain_s12(s1, 0, z, p1);
    CHECK((b1.s12 - s12p).max_abs() < 1e-12 * std::max(1.0, s12p.max_abs()));
}

TEST_CASE("row-weighted gauge") {
    const auto par = params_n(3);
    const auto s = sample_rs(41, par);
    const auto [z, w] = pts(s.q, par, 9);

    // tl = D L D^{-1} with D = diag(b).
    const auto b = rs_b(s, par);
    const CMat L = rs_lax(s, z, par);
    const CMat tl = rowgauge_lax(s, z, par);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(tl(i, j) - b[i] * L(i, j) / b[j]) <
                  1e-11 * std::max(1.0, std::abs(tl(i, j))));

    const auto p1 = params_n(1);
    const auto s1 = sample_rs(43, p1);
    CHECK(std::abs(rowgauge_lax(s1, z, p1)(0, 0) - rs_lax(s1, z, p1)(0, 0)) < 1e-13);

    // Placement of the closed products.
    const auto tg = rowgauge_tensors(s, z, w, par);
    Tensor s12std(3), s21std(3);
    {
        const CMat tlz = rowgauge_lax(s, z, par);
        const CMat tlw = rowgauge_lax(s, w, par);
        const Tensor viaL = tensor_first(tlz) * (tg.s_plus - rs_u_pm(s.q, par).first);
        CHECK((viaL - tg.L1s12).max_abs() < 1e-10 * std::max(1.0, tg.L1s12.max_abs()));
        const Tensor viaL2 = tensor_second(tlw) * (tg.s_minus + rs_u_pm(s.q, par).second);
        CHECK((viaL2 - tg.L2s21).max_abs() < 1e-10 * std::max(1.0, tg.L2s21.max_abs()));
    }

    // d_12(z,w) = -d_21(w,z) for d = -r^-.
    const auto tg2 = rowgauge_tensors(s, w, z, par);
    CHECK((tg.r_minus + tg2.r_minus.swap_factors()).max_abs() <
          1e-11 * std::max(1.0, tg.r_minus.max_abs()));
}

TEST_CASE("field u-minus diagonal develops the shift singularity") {
    ModelParams par = params_n(2);
    const auto s = sample_rs(47, par);
    // constant fields: q_i(x - eps) = q_i(x), so the diagonal argument is
    // exactly -nu eps and the entry behaves as -1/(nu eps) + O(eps).
    for (const double eps : {1e-2, 1e-3}) {
        FieldSnapshot snap{s.q, s.q, CMat::identity(2), CMat::identity(2), cplx{eps}};
        const auto ft = field_tensors(snap, cplx{0.3, 0.2}, cplx{0.1, 0.4}, par);
        for (int i = 0; i < 2; ++i) {
            const cplx diag = ft.u_minus.ent(i, i, i, i);
            CHECK(std::abs(diag + 1.0 / (par.nu * eps)) < 10.0 * eps * std::abs(diag));
        }
        // bold-r of the frozen configuration is the mechanics r-matrix
        CHECK((ft.r - rs_r12(s.q, cplx{0.3, 0.2}, cplx{0.1, 0.4}, par)).max_abs() == 0.0);
    }
}
