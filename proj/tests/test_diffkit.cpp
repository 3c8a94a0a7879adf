#include <doctest.h>

#include "elax/diffkit.hpp"
#include "elax/laxmodels.hpp"
#include "elax/states.hpp"

using namespace elax;

namespace {

const ModelParams par3 = [] {
    ModelParams p;
    p.N = 3;
    return p;
}();

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

TEST_CASE("partials of simple observables") {
    const auto s = sample_rs(11, par3);
    const auto coords = pack_coords(s.p, s.q);

    const auto g1 = partials([](std::span<const Dual> c) { return c[0] * c[0]; },
                             std::span<const cplx>(coords));
    CHECK(rel(g1[0], 2.0 * s.p[0]) < 1e-15);
    for (std::size_t m = 1; m < g1.size(); ++m) CHECK(std::abs(g1[m]) < 1e-15);

    const Modulus m{par3.tau};
    const auto g2 = partials([&](std::span<const Dual> c) { return theta(c[3], m); },
                             std::span<const cplx>(coords));
    CHECK(rel(g2[3], theta_d(s.q[0], m, 1)) < 1e-13);

    // b_1 of the RS model against central finite differences.
    auto b1 = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_b<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), par3)[0];
    };
    auto b1c = [&](std::span<const cplx> c) {
        auto [p, q] = unpack_coords(c);
        return rs_b<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), par3)[0];
    };
    const auto ad = partials(b1, std::span<const cplx>(coords));
    const auto fd = partials_fd(b1c, std::span<const cplx>(coords));
    for (std::size_t i = 0; i < ad.size(); ++i) CHECK(std::abs(ad[i] - fd[i]) < 1e-7);
}

TEST_CASE("canonical brackets") {
    const auto s = sample_rs(5, par3);
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);

    auto coord = [](std::size_t idx) {
        return [idx](std::span<const Dual> c) { return c[idx]; };
    };
    const int N = par3.N;
    CHECK(rel(poisson_bracket(coord(0), coord(N + 0), cs), 1.0) < 1e-15);   // {p1, q1}
    CHECK(std::abs(poisson_bracket(coord(N + 0), coord(N + 1), cs)) < 1e-15);  // {q1, q2}
    CHECK(std::abs(poisson_bracket(coord(0), coord(N + 1), cs)) < 1e-15);

    // {H^RS, q_j} = b_j.
    auto H = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_hamiltonian<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), par3);
    };
    const auto b = rs_b(s, par3);
    for (int j = 0; j < N; ++j)
        CHECK(rel(poisson_bracket(H, coord(N + j), cs), b[j]) < 1e-11);
}

TEST_CASE("bracket algebra: Leibniz, antisymmetry, finite-difference agreement") {
    const auto s = sample_rs(23, par3);
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);
    const Modulus m{par3.tau};

    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int a = int(rng.uniform() * 6), b = int(rng.uniform() * 6), c = int(rng.uniform() * 6);
        auto f = [&](std::span<const Dual> x) { return exp(x[a % 6] * 0.3) + x[b % 6]; };
        auto g = [&](std::span<const Dual> x) { return theta(x[3 + (a % 3)], m) * x[c % 6]; };
        auto h = [&](std::span<const Dual> x) { return x[b % 6] * x[c % 6] + 1.0; };
        auto gh = [&](std::span<const Dual> x) { return g(x) * h(x); };

        const cplx lhs = poisson_bracket(f, gh, cs);
        const auto lifted = lift(cs, 0);
        const std::span<const Dual> ls(lifted);
        const cplx gv = g(ls).v;
        const cplx hv = h(ls).v;
        const cplx rule = gv * poisson_bracket(f, h, cs) + poisson_bracket(f, g, cs) * hv;
        CHECK(std::abs(lhs - rule) / std::max(1.0, std::abs(lhs)) < 1e-12);

        CHECK(std::abs(poisson_bracket(f, g, cs) + poisson_bracket(g, f, cs)) < 1e-13);

        auto fc = [&](std::span<const cplx> x) {
            std::vector<Dual> lifted(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) lifted[i] = Dual{x[i]};
            return f(std::span<const Dual>(lifted)).v;
        };
        auto gc = [&](std::span<const cplx> x) {
            std::vector<Dual> lifted(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) lifted[i] = Dual{x[i]};
            return g(std::span<const Dual>(lifted)).v;
        };
        const cplx fdv = poisson_bracket_fd(fc, gc, cs);
        const cplx adv = poisson_bracket(f, g, cs);
        CHECK(std::abs(adv - fdv) / std::max(1.0, std::abs(adv)) < 1e-6);
    }
}

TEST_CASE("matrix bracket tensor") {
    const auto s = sample_rs(31, par3);
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);

    // Constant matrices bracket to the zero tensor.
    auto constm = [&](std::span<const Dual>) {
        DMat m(2);
        m(0, 0) = Dual{cplx{1.0, 2.0}};
        m(1, 0) = Dual{cplx{0.5, 0.0}};
        return m;
    };
    CHECK(matrix_poisson_bracket(constm, constm, cs).max_abs() < 1e-15);

    // Antisymmetry under simultaneous swap of observables and factors.
    const cplx z{0.41, 0.13}, w{0.22, 0.35};
    auto A = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par3);
    };
    auto B = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, par3);
    };
    const Tensor t = matrix_poisson_bracket(A, B, cs);
    const Tensor u = matrix_poisson_bracket(B, A, cs);
    CHECK((t + u.swap_factors()).max_abs() < 1e-13 * std::max(1.0, t.max_abs()));

    // N=1: the Lax matrix depends on p only, so the bracket vanishes.
    ModelParams p1 = par3;
    p1.N = 1;
    const auto s1 = sample_rs(3, p1);
    const auto c1 = pack_coords(s1.p, s1.q);
    auto A1 = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, p1);
    };
    CHECK(matrix_poisson_bracket(A1, A1, std::span<const cplx>(c1)).max_abs() < 1e-14);
}

TEST_CASE("bracket bilinearity") {
    const auto s = sample_rs(41, par3);
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);
    auto f = [](std::span<const Dual> x) { return x[0] * x[3] + x[1]; };
    auto g = [](std::span<const Dual> x) { return x[4] * x[4]; };
    auto h = [](std::span<const Dual> x) { return exp(x[2] * 0.2) * x[5]; };
    const cplx a{0.7, -0.3}, b{1.1, 0.4};
    auto lin = [&](std::span<const Dual> x) { return Dual{a} * f(x) + Dual{b} * g(x); };
    const cplx lhs = poisson_bracket(lin, h, cs);
    const cplx rhs = a * poisson_bracket(f, h, cs) + b * poisson_bracket(g, h, cs);
    CHECK(std::abs(lhs - rhs) < 1e-14 * std::max(1.0, std::abs(rhs)));
}
