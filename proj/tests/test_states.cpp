#include <doctest.h>

#include <set>

#include "elax/diffkit.hpp"
#include "elax/laxmodels.hpp"
#include "elax/states.hpp"

using namespace elax;

TEST_CASE("samplers are deterministic and guarded") {
    ModelParams par;
    par.N = 3;
    const auto a = sample_rs(123, par);
    const auto b = sample_rs(123, par);
    CHECK(a.p == b.p);
    CHECK(a.q == b.q);

    std::set<std::pair<double, double>> seen;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto st = sample_rs(s, par);
        seen.insert({st.q[0].real(), st.q[0].imag()});
    }
    CHECK(seen.size() == 100);

    const auto st = sample_rs(7, par, 0.05);
    for (int i = 0; i < par.N; ++i)
        for (int j = 0; j < par.N; ++j) {
            if (i == j) continue;
            const cplx d = st.q[i] - st.q[j];
            CHECK(lattice_distance(d, par.tau) >= 0.05);
            CHECK(lattice_distance(d + par.eta, par.tau) >= 0.05);
            CHECK(lattice_distance(d - par.eta, par.tau) >= 0.05);
        }

    ModelParams chainpar;
    chainpar.N = 2;
    chainpar.n = 3;
    const auto c1 = sample_chain(9, chainpar);
    const auto c2 = sample_chain(9, chainpar);
    CHECK(c1.q == c2.q);
    CHECK(chain_state_ok(c1, chainpar, default_state_guard));
    const auto c3 = sample_chain(10, chainpar);
    CHECK(c1.q != c3.q);
}

TEST_CASE("canonical shift") {
    ModelParams par;
    par.N = 3;
    const auto s = sample_rs(17, par);

    const auto id = canonical_shift(s, cplx{0.0}, par);
    for (int i = 0; i < par.N; ++i) {
        CHECK(id.p[i] == s.p[i]);
        CHECK(id.q[i] == s.q[i]);
    }

    // c1 = c turns the standard weights into the plus-eta weights.
    const auto shifted = canonical_shift(s, par.c, par);
    const auto lhs = rs_b(shifted, par, WeightVariant::standard);
    const auto rhs = rs_b(s, par, WeightVariant::plus_eta);
    for (int i = 0; i < par.N; ++i)
        CHECK(std::abs(lhs[i] - rhs[i]) < 1e-12 * std::max(1.0, std::abs(rhs[i])));

    // The shift preserves the canonical brackets.
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);
    for (int i = 0; i < par.N; ++i)
        for (int j = 0; j < par.N; ++j) {
            auto pshift = [&](std::span<const Dual> c) {
                auto [p, q] = unpack_coords(c);
                Dual acc = p[i];
                for (int k = 0; k < par.N; ++k) {
                    if (k == i) continue;
                    acc += Dual{par.c} * log(theta(q[i] - q[k] + Dual{par.eta}, par.modulus()) /
                                             theta(q[i] - q[k] - Dual{par.eta}, par.modulus()));
                }
                return acc;
            };
            auto qj = [&](std::span<const Dual> c) { return c[par.N + j]; };
            const cplx br = poisson_bracket(pshift, qj, cs);
            CHECK(std::abs(br - (i == j ? 1.0 : 0.0)) < 1e-10);
        }
}

TEST_CASE("tilde momenta") {
    ModelParams par;
    par.N = 1;
    const auto s1 = sample_rs(3, par);
    CHECK(tilde_p(s1, par)[0] == s1.p[0]);

    par.N = 3;
    ModelParams nu0 = par;
    nu0.nu = cplx{0.0};
    const auto s = sample_rs(5, par);
    const auto ident = tilde_p(s, nu0);
    for (int i = 0; i < 3; ++i) CHECK(ident[i] == s.p[i]);

    // {pt_i, pt_j} = 0.
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            auto pt = [&](int idx) {
                return [&, idx](std::span<const Dual> c) {
                    auto [p, q] = unpack_coords(c);
                    return tilde_p<Dual>(p, q, par.nu, par.modulus())[idx];
                };
            };
            CHECK(std::abs(poisson_bracket(pt(i), pt(j), cs)) < 1e-11);
        }
}

TEST_CASE("state JSON round trip") {
    ModelParams par;
    par.N = 2;
    const auto s = sample_rs(77, par);
    const auto text = rs_state_to_json(s, par, 77);
    const auto back = rs_state_from_json(text);
    CHECK(back.p == s.p);
    CHECK(back.q == s.q);

    par.n = 2;
    const auto c = sample_chain(78, par);
    const auto ctext = chain_state_to_json(c, par, 78);
    const auto cback = chain_state_from_json(ctext);
    CHECK(cback.p == c.p);
    CHECK(cback.q == c.q);
    CHECK(cback.sites == c.sites);
}

#include "elax/report.hpp"

TEST_CASE("matrix and tensor serialization") {
    ModelParams par;
    par.N = 2;
    const auto s = sample_rs(83, par);
    const cplx z{0.4, 0.2};
    const auto mj = matrix_to_json(rs_lax(s, z, par), "lax", z);
    CHECK(mj.find("\"label\":\"lax\"") != std::string::npos);
    CHECK(mj.find("\"entries\"") != std::string::npos);

    const auto tj = tensor_to_json(rs_r12(s.q, z, cplx{0.1, 0.5}, par));
    CHECK(tj.find("\"ij\"") != std::string::npos);
    CHECK(tj.find("\"kl\"") != std::string::npos);
}
