// Acceptance suite: every criterion of the laboratory runs at its pinned
// tolerance and prints one verdict line.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "elax/fieldkit.hpp"
#include "elax/flows.hpp"
#include "elax/limits.hpp"
#include "elax/rmatrices.hpp"
#include "elax/ultralocal.hpp"
#include "elax/verify.hpp"

using namespace elax;

namespace {

int failures = 0;

void verdict(int idx, const char* what, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", idx, what, detail.c_str());
    if (!pass) ++failures;
}

ModelParams params_n(int N, int n = 1) {
    ModelParams p;
    p.N = N;
    p.n = n;
    return p;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (const cplx tau : {cplx{0.0, 1.0}, cplx{0.3, 0.8}}) {
        const auto rep = identity_suite(2026, 100, Modulus{tau});
        worst = std::max(worst, rep.worst());
    }
    const double secs = seconds_since(t0);
    verdict(1, "addition-formula suite at both moduli", worst <= 1e-10 && secs < 5.0,
            "max residual " + fmt(worst) + ", " + fmt(secs) + " s");
}

void criterion_2() {
    const Modulus m{cplx{0.0, 1.0}};
    const cplx u{0.31, -0.22};
    cplx acc{0.0};
    for (int k = 0; k < 16; ++k) {
        const double th = 2.0 * pi * k / 16;
        const cplx zk = 0.1 * std::exp(iunit * th);
        acc += kronecker_phi(zk, u, m) * zk;
    }
    acc /= 16.0;
    const double dev = std::abs(acc - 1.0);
    verdict(2, "kronecker pole residue by contour", dev <= 1e-8, "deviation " + fmt(dev));
}

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool ok = true;
    for (const int N : {2, 3}) {
        const auto par = params_n(N);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto s = sample_rs(seed, par);
            const auto grid = spectral_grid(seed + 500, s.q, par, 3, 3);
            for (const auto variant :
                 {WeightVariant::standard, WeightVariant::plus_eta, WeightVariant::square_root}) {
                // the finite-difference corroboration runs on the first grid
                // point of three seeds per variant
                bool fd = seed <= 3;
                for (const auto& [z, w] : grid) {
                    const auto rep = verify_rs_quadratic(s, z, w, par, variant, 1e-8, fd, 1e-6);
                    fd = false;
                    ok = ok && rep.pass;
                    worst = std::max(worst, rep.residual_max / std::max(1.0, rep.residual_scale));
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    verdict(3, "quadratic structure, 20 seeds x 3x3 grid x 3 weight variants", ok && secs < 60.0,
            "worst scaled residual " + fmt(worst) + ", " + fmt(secs) + " s");
}

void criterion_4() {
    double worst = 0.0;
    bool ok = true;
    for (const auto& [N, n] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
        const auto par = params_n(N, n);
        const auto s = sample_chain(40 + n + 10 * N, par);
        const auto grid = spectral_grid(90 + n, s.q, par, 2, 2);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (const auto& [z, w] : grid) {
                    const auto rep = verify_chain_quadratic(s, a, b, z, w, par, 1e-8);
                    ok = ok && rep.pass;
                    worst = std::max(worst, rep.residual_max / std::max(1.0, rep.residual_scale));
                }
    }
    // distant sites vanish identically
    const auto par = params_n(2, 4);
    const auto s = sample_chain(77, par);
    const auto grid = spectral_grid(78, s.q, par, 1, 1);
    const auto far = verify_chain_quadratic(s, 0, 2, grid[0].first, grid[0].second, par, 1e-12);
    ok = ok && far.residual_max == 0.0 && far.residual_scale == 0.0;
    verdict(4, "lattice structure over all site pairs incl. wrap-around", ok,
            "worst scaled residual " + fmt(worst) + ", distant pair " + fmt(far.residual_max));
}

void criterion_5() {
    double worst = 0.0;
    bool ok = true;
    for (const auto& [N, n] : {std::pair{2, 2}, std::pair{2, 3}}) {
        const auto par = params_n(N, n);
        const auto s = sample_chain(50 + n, par);
        const auto grid = spectral_grid(60 + n, s.q, par, 2, 1);
        for (const auto& [z, w] : grid) {
            const auto rep = verify_monodromy_quadratic(s, z, w, par, 1e-8);
            ok = ok && rep.pass;
            worst = std::max(worst, rep.residual_max / std::max(1.0, rep.residual_scale));
        }
        for (int k = 1; k <= 3; ++k)
            for (int m = 1; m <= 3; ++m) {
                const auto inv = verify_trace_involution(TraceModel::chain, nullptr, &s, grid[0].first,
                                                         grid[0].second, k, m, par, 1e-8);
                ok = ok && inv.pass;
                worst = std::max(worst, inv.residual_max / std::max(1.0, inv.residual_scale));
            }
    }
    verdict(5, "monodromy structure and trace involution", ok, "worst scaled residual " + fmt(worst));
}

void criterion_6() {
    double worst = 0.0;
    bool ok = true;
    for (const int N : {2, 3}) {
        const auto par = params_n(N);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto s = sample_rs(seed, par);
            const auto grid = spectral_grid(seed + 300, s.q, par, 2, 2);
            for (const auto& [z, w] : grid) {
                const auto rep = verify_cm_linear(s, z, w, par, 1e-9);
                ok = ok && rep.pass;
                worst = std::max(worst, rep.residual_max / std::max(1.0, rep.residual_scale));
            }
        }
    }
    verdict(6, "linear structure", ok, "worst scaled residual " + fmt(worst));
}

void criterion_7() {
    double worst = 0.0, gauge = 0.0;
    bool ok = true;
    for (const int N : {2, 3}) {
        const auto par = params_n(N);
        const auto s = sample_rs(7 + N, par);
        const auto grid = spectral_grid(200 + N, s.q, par, 2, 2);
        for (const auto& [z, w] : grid) {
            const auto rep = verify_rowgauge_quadratic(s, z, w, par, 1e-8);
            ok = ok && rep.pass;
            worst = std::max(worst, rep.residual_max / std::max(1.0, rep.residual_scale));
        }
        // gauge relation tl = diag(b) L diag(b)^{-1}
        const auto b = rs_b(s, par);
        const cplx z = grid[0].first;
        const CMat L = rs_lax(s, z, par);
        const CMat tl = rowgauge_lax(s, z, par);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                gauge = std::max(gauge, std::abs(tl(i, j) - b[i] * L(i, j) / b[j]) /
                                            std::max(1.0, std::abs(tl(i, j))));
    }
    verdict(7, "row-weighted gauge structure and gauge relation", ok && gauge <= 1e-11,
            "worst scaled residual " + fmt(worst) + ", gauge deviation " + fmt(gauge));
}

void criterion_8() {
    bool ok = true;
    double worst = 0.0, lower = 0.0;
    for (const int N : {2, 3}) {
        const auto par = params_n(N);
        const auto s = sample_rs(11 + N, par);
        const auto grid = spectral_grid(400 + N, s.q, par, 1, 1, 0.03);
        const auto [z, w] = grid[0];

        const auto lax = verify_rs_to_cm_lax(s, z, par);
        ok = ok && lax.pass;
        const auto res = verify_residue_s_terms(s, z, w, par);
        ok = ok && res.pass;
        const auto br = verify_rs_to_cm_bracket(s, z, w, par);
        ok = ok && br.pass;
        for (const auto& c : br.checks) {
            if (c.label.find("order-minus") != std::string::npos)
                lower = std::max(lower, c.max_deviation / std::max(1.0, c.scale));
            else
                worst = std::max(worst, c.max_deviation / std::max(1.0, c.scale));
        }
        for (const auto& c : res.checks)
            if (c.label.find("order-minus-2") != std::string::npos)
                lower = std::max(lower, c.max_deviation / std::max(1.0, c.scale));
    }
    ok = ok && lower <= 1e-9;
    verdict(8, "nonrelativistic limit extractions", ok,
            "worst coefficient deviation " + fmt(worst) + ", sub-pole orders " + fmt(lower));
}

void criterion_9() {
    // order-4 convergence
    const auto par = params_n(3);
    const auto s = sample_rs(11, par);
    const cplx h0 = rs_hamiltonian(s, par);
    auto drift = [&](double dt) {
        const auto traj = integrate(FlowModel::rs, s, 0.5, dt, par, Scheme::rk4, 0.02);
        return std::abs(rs_hamiltonian(traj.rs_at(traj.states.size() - 1), par) - h0);
    };
    const double ratio = drift(2e-2) / drift(1e-2);
    bool ok = ratio > 12.0 && ratio < 20.0;

    // invariant drift over unit time
    const auto s17 = sample_rs(17, par);
    const auto traj = integrate(FlowModel::rs, s17, 1.0, 1e-3, par, Scheme::rk4, 0.02);
    Rng rng(6);
    const cplx z0 = sample_spectral(rng, s17.q, par, 0.03);
    const auto rep = conservation_report(traj, par, {z0}, {1, 2, 3});
    double worst_drift = rep.worst();

    for (const int n : {2, 3}) {
        const auto cpar = params_n(2, n);
        const auto cs = sample_chain(18 + n, cpar);
        const auto ctraj = integrate(FlowModel::chain, cs, 1.0, 1e-3, cpar, Scheme::rk4, 0.02);
        Rng crng(7);
        const cplx cz = sample_spectral(crng, cs.q, cpar, 0.03);
        const auto crep = conservation_report(ctraj, cpar, {cz}, {1, 2});
        worst_drift = std::max(worst_drift, crep.worst());
    }
    ok = ok && worst_drift <= 1e-7;

    // Lax-equation residual
    double lax = 0.0;
    for (int t = 0; t < 3; ++t) {
        const cplx z = sample_spectral(rng, s17.q, par, 0.02);
        const CMat rhs = commutator(rs_lax(s17, z, par), rs_M(s17, z, par));
        lax = std::max(lax, lax_residual_rs(s17, z, par) / std::max(1.0, rhs.max_abs()));
    }
    ok = ok && lax <= 1e-9;
    verdict(9, "flows: order-4 ratio, invariant drift, lax residual", ok,
            "ratio " + fmt(ratio) + ", drift " + fmt(worst_drift) + ", lax " + fmt(lax));
}

void criterion_10() {
    ModelParams par = params_n(2);
    const auto cm_cfg = sample_field(43, 2, 2, 0.02, par, true);
    const auto rs_cfg = sample_field(53, 2, 2, 0.02, par);
    Rng rng(99);
    double worst_cm = 0.0, worst_rs = 0.0;
    for (int t = 0; t < 5; ++t) {
        const double x = 2.0 * pi * rng.uniform();
        const cplx z = sample_spectral(rng, field_vals(cm_cfg, cplx{x}).q, par, 0.03);
        const CMat U = cm_field_U(cm_cfg, x, z, par);
        const CMat V = cm_field_V(cm_cfg, x, z, par);
        worst_cm = std::max(worst_cm, cm_zs_residual(cm_cfg, x, z, par) /
                                          std::max(1.0, U.max_abs() * V.max_abs()));
        const cplx eps{0.13, 0.0};
        const cplx z2 = sample_spectral(rng, field_vals(rs_cfg, cplx{x}).q, par, 0.03);
        const CMat Ur = rs_field_U(rs_cfg, x, z2, eps, par);
        const CMat Vr = rs_field_V(rs_cfg, x, z2, eps, par);
        worst_rs = std::max(worst_rs, rs_zs_residual(rs_cfg, x, z2, eps, par) /
                                          std::max(1.0, Ur.max_abs() * Vr.max_abs()));
    }
    bool ok = worst_cm <= 1e-7 && worst_rs <= 1e-7;

    double dens = 0.0;
    for (int node = 0; node < 16; ++node) {
        const double x = 2.0 * pi * node / 16;
        const cplx a = cm_field_density(cm_cfg, x, par);
        const cplx b = cm_field_density_alt(cm_cfg, x, par);
        dens = std::max(dens, std::abs(a - b) / std::max(1.0, std::abs(a)));
    }
    ok = ok && dens <= 1e-10;

    // k -> 0 reduction to the mechanics Lax
    ModelParams k0 = par;
    k0.k = cplx{0.0};
    const auto cfg0 = sample_field(61, 2, 2, 0.02, k0);
    const double x = 1.1;
    const cplx z{0.41, 0.23};
    const auto v = field_vals(cfg0, cplx{x});
    const CMat U0 = cm_field_U(cfg0, x, z, k0);
    const std::span<const cplx> p(v.p.data(), 2), q(v.q.data(), 2);
    const CMat L0 = cm_lax_from_ptilde<cplx>(p, q, z, k0);
    const double red = (U0 - L0).max_abs();
    ok = ok && red <= 1e-12;
    verdict(10, "field theories: zs residuals, density forms, k->0 reduction", ok,
            "zs-cm " + fmt(worst_cm) + ", zs-rs " + fmt(worst_rs) + ", density " + fmt(dens) +
                ", reduction " + fmt(red));
}

void criterion_11() {
    ModelParams par = params_n(2);
    par.k = cplx{1.0};
    const auto cfg = sample_field(11, 2, 2, 0.02, par, true);
    Rng rng(12);
    const double x = 2.0 * pi * rng.uniform();
    const auto grid = spectral_grid(13, field_vals(cfg, cplx{x}).q, par, 1, 1, 0.03);
    const auto [z, w] = grid[0];

    const auto rep = verify_field_ultralocal(cfg, x, z, w, par);
    bool ok = rep.residual_total <= 1e-8 * std::max(1.0, rep.residual_scale);
    double blocks = 0.0;
    for (const auto& b : rep.blocks) {
        const bool strict = b.label == "block-1" || b.label == "block-3" || b.label == "block-5" ||
                            b.label == "blocks-2-6-exchange";
        if (strict) {
            ok = ok && b.max_deviation <= 1e-6 * std::max(1.0, b.scale);
            blocks = std::max(blocks, b.max_deviation / std::max(1.0, b.scale));
        }
    }
    const auto coeff = verify_nonultralocal_coefficient(cfg, x, z, w, par, 1e-10);
    ok = ok && coeff.pass;
    verdict(11, "ultralocal limit identity and delta-prime coefficient", ok,
            "total " + fmt(rep.residual_total / std::max(1.0, rep.residual_scale)) + ", blocks " +
                fmt(blocks) + ", coefficient " + fmt(coeff.residual_max));
}

void criterion_12() {
#ifndef ELAX_CLI_PATH
    verdict(12, "deterministic CLI reports", false, "CLI path not configured");
#else
    auto run = [&](const std::string& out) {
        const std::string cmd = std::string(ELAX_CLI_PATH) +
                                " verify --which rs --N 2 --trials 2 --seed 9 --emit both --out " + out;
        return std::system(cmd.c_str());
    };
    const int rc1 = run("/tmp/elax_det_a");
    const int rc2 = run("/tmp/elax_det_b");
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const bool same_json = slurp("/tmp/elax_det_a") == slurp("/tmp/elax_det_b");
    const bool same_csv = slurp("/tmp/elax_det_a.csv") == slurp("/tmp/elax_det_b.csv");
    const bool nonempty = !slurp("/tmp/elax_det_a").empty();
    verdict(12, "deterministic CLI reports", rc1 == 0 && rc2 == 0 && same_json && same_csv && nonempty,
            same_json && same_csv ? "byte-identical json+csv" : "outputs differ");
#endif
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                failures);
    return failures == 0 ? 0 : 1;
}
