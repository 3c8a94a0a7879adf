#include <doctest.h>

#include "elax/verify.hpp"

using namespace elax;

namespace {

ModelParams params_n(int N, int n = 1) {
    ModelParams p;
    p.N = N;
    p.n = n;
    return p;
}

}  // namespace

TEST_CASE("rs quadratic structure: scalar case vanishes termwise") {
    const auto par = params_n(1);
    const auto s = sample_rs(2, par);
    const auto grid = spectral_grid(1, s.q, par, 1, 1);
    const auto rep = verify_rs_quadratic(s, grid[0].first, grid[0].second, par);
    CHECK(rep.residual_max < 1e-12);
    CHECK(rep.pass);
}

TEST_CASE("rs quadratic structure at N = 2, all weight variants") {
    const auto par = params_n(2);
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto s = sample_rs(seed, par);
        const auto grid = spectral_grid(seed + 100, s.q, par, 2, 2);
        for (const auto variant :
             {WeightVariant::standard, WeightVariant::plus_eta, WeightVariant::square_root}) {
            for (const auto& [z, w] : grid) {
                const auto rep = verify_rs_quadratic(s, z, w, par, variant, 1e-8, true);
                INFO("seed ", seed, " variant ", int(variant));
                CHECK(rep.pass);
            }
        }
    }
}

TEST_CASE("rs quadratic structure holds for canonically shifted states") {
    const auto par = params_n(3);
    const auto s = sample_rs(21, par);
    const auto shifted = canonical_shift(s, 0.7 * par.c, par);
    const auto grid = spectral_grid(5, shifted.q, par, 2, 1);
    for (const auto& [z, w] : grid) {
        const auto rep = verify_rs_quadratic(shifted, z, w, par, WeightVariant::standard, 1e-8);
        CHECK(rep.pass);
    }
}

TEST_CASE("trace involution") {
    const auto par = params_n(2);
    const auto s = sample_rs(31, par);
    const auto grid = spectral_grid(7, s.q, par, 1, 1);
    const auto [z, w] = grid[0];

    const auto rep = verify_trace_involution(TraceModel::rs, &s, nullptr, z, w, 1, 1, par, 1e-10);
    CHECK(rep.pass);
    const auto rep2 = verify_trace_involution(TraceModel::rs, &s, nullptr, z, w, 3, 2, par, 1e-9);
    CHECK(rep2.pass);

    // Bracket of a trace with itself is exactly zero.
    const auto self = verify_trace_involution(TraceModel::rs, &s, nullptr, z, z, 2, 2, par, 1e-15);
    CHECK(self.residual_max == 0.0);

    const auto cpar = params_n(2, 2);
    const auto c = sample_chain(32, cpar);
    const auto cgrid = spectral_grid(8, c.q, cpar, 1, 1);
    const auto repc = verify_trace_involution(TraceModel::chain, nullptr, &c, cgrid[0].first,
                                              cgrid[0].second, 2, 3, cpar, 1e-8);
    CHECK(repc.pass);

    CHECK_THROWS_AS((void)verify_trace_involution(TraceModel::rs, &s, nullptr, z, w, 5, 1, par),
                    unsupported_order_error);
}

TEST_CASE("cm linear structure") {
    {
        ModelParams par = params_n(2);
        par.nu = cplx{0.0};
        const auto s = sample_rs(41, par);
        const auto grid = spectral_grid(9, s.q, par, 1, 1);
        const auto rep = verify_cm_linear(s, grid[0].first, grid[0].second, par, 1e-9);
        CHECK(rep.residual_max < 1e-14);
    }
    for (int N : {2, 3}) {
        const auto par = params_n(N);
        const auto s = sample_rs(42 + N, par);
        const auto grid = spectral_grid(10 + N, s.q, par, 2, 2);
        for (const auto& [z, w] : grid) {
            const auto rep = verify_cm_linear(s, z, w, par, 1e-9, true);
            INFO("N ", N);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("chain quadratic structure over all site pairs") {
    for (const auto& [N, n] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const auto par = params_n(N, n);
        const auto s = sample_chain(50 + N * 10 + n, par);
        const auto grid = spectral_grid(60 + n, s.q, par, 2, 1);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (const auto& [z, w] : grid) {
                    const auto rep = verify_chain_quadratic(s, a, b, z, w, par, 1e-8, a == b);
                    INFO("N ", N, " n ", n, " a ", a, " b ", b);
                    CHECK(rep.pass);
                }
    }
}

TEST_CASE("distant site pairs vanish identically") {
    const auto par = params_n(2, 4);
    const auto s = sample_chain(71, par);
    const auto grid = spectral_grid(72, s.q, par, 1, 1);
    const auto [z, w] = grid[0];
    const auto rep = verify_chain_quadratic(s, 0, 2, z, w, par, 1e-12);
    CHECK(rep.residual_max == 0.0);
    CHECK(rep.residual_scale == 0.0);
}

TEST_CASE("monodromy structure") {
    {
        const auto par = params_n(2, 1);
        const auto s = sample_chain(81, par);
        const auto grid = spectral_grid(82, s.q, par, 1, 1);
        const auto rep = verify_monodromy_quadratic(s, grid[0].first, grid[0].second, par, 1e-9);
        CHECK(rep.pass);
    }
    for (const auto& [N, n] : {std::pair{2, 2}, std::pair{2, 3}}) {
        const auto par = params_n(N, n);
        const auto s = sample_chain(90 + n, par);
        const auto grid = spectral_grid(91 + n, s.q, par, 2, 1);
        for (const auto& [z, w] : grid) {
            const auto rep = verify_monodromy_quadratic(s, z, w, par, 1e-8);
            INFO("N ", N, " n ", n);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("row-weighted gauge structure") {
    {
        const auto par = params_n(1);
        const auto s = sample_rs(95, par);
        const auto grid = spectral_grid(96, s.q, par, 1, 1);
        const auto rep = verify_rowgauge_quadratic(s, grid[0].first, grid[0].second, par);
        CHECK(rep.residual_max < 1e-12);
    }
    for (int N : {2, 3}) {
        const auto par = params_n(N);
        const auto s = sample_rs(97 + N, par);
        const auto grid = spectral_grid(98 + N, s.q, par, 2, 2);
        for (const auto& [z, w] : grid) {
            const auto rep = verify_rowgauge_quadratic(s, z, w, par, 1e-8, true);
            INFO("N ", N);
            CHECK(rep.pass);
        }
    }
}
