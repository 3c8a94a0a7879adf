#include "elax/verify.hpp"

#include "elax/diffkit.hpp"

namespace elax {

namespace {

double tensor_scale(std::initializer_list<const Tensor*> terms) {
    double s = 0.0;
    for (const auto* t : terms) s = std::max(s, t->max_abs());
    return s;
}

/// c {L1(z), L2(w)} for a pair of templated matrix builders.
template <class FA, class FB>
Tensor bracket_tensor(FA&& a, FB&& b, const std::vector<cplx>& coords, cplx c) {
    Tensor t = matrix_poisson_bracket(a, b, std::span<const cplx>(coords));
    return t * c;
}

}  // namespace

std::vector<std::pair<cplx, cplx>> spectral_grid(std::uint64_t seed, const std::vector<cplx>& q,
                                                 const ModelParams& par, int nz, int nw, double guard) {
    Rng rng(seed);
    std::vector<cplx> zs, ws;
    for (int i = 0; i < nz; ++i) zs.push_back(sample_spectral(rng, q, par, guard));
    for (int j = 0; j < nw; ++j) {
        for (int attempt = 0;; ++attempt) {
            const cplx w = sample_spectral(rng, q, par, guard);
            bool ok = true;
            for (const auto& z : zs)
                if (lattice_distance(z - w, par.tau) < guard) ok = false;
            if (ok) {
                ws.push_back(w);
                break;
            }
            if (attempt > sampler_max_rejections)
                throw sampler_exhausted_error("spectral_grid: rejection limit reached");
        }
    }
    std::vector<std::pair<cplx, cplx>> grid;
    for (const auto& z : zs)
        for (const auto& w : ws) grid.push_back({z, w});
    return grid;
}

ResidualReport verify_rs_quadratic(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                   WeightVariant variant, double tol, bool fd_check, double fd_tol) {
    const auto coords = pack_coords(s.p, s.q);
    auto Az = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par, variant);
    };
    auto Bw = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, par, variant);
    };
    const Tensor lhs = bracket_tensor(Az, Bw, coords, par.c);

    const Tensor r = rs_r12(s.q, z, w, par);
    const auto assembled = rs_assembled(s, z, w, par, variant);
    const Tensor L1 = tensor_first(rs_lax(s, z, par, variant));
    const Tensor L2 = tensor_second(rs_lax(s, w, par, variant));
    const Tensor L1L2 = L1 * L2;
    const Tensor L1splus = rs_L1s12(s, z, par, variant) + L1 * rs_u_pm(s.q, par).first;
    const Tensor L2sminus = rs_L2s21(s, w, par, variant) - L2 * rs_u_pm(s.q, par).second;

    // Four-term arrangement.
    const Tensor t1 = L1L2 * assembled.r_minus;
    const Tensor t2 = r * L1L2;
    const Tensor t3 = L1splus * L2;
    const Tensor t4 = L2sminus * L1;
    const Tensor rhs4 = t1 - t2 + t3 - t4;

    // Commutator arrangement.
    const Tensor rhsc = commutator(L1L2, r) + commutator(L1, L2sminus) - commutator(L2, L1splus);

    ResidualReport rep;
    rep.check_id = "rs-quadratic";
    rep.anchor = "quadratic-r-matrix-structure";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_scale = tensor_scale({&t1, &t2, &t3, &t4});
    rep.residual_max = std::max((lhs - rhs4).max_abs(), (lhs - rhsc).max_abs());

    const double forms = (rhs4 - rhsc).max_abs();
    if (forms > 1e-10 * std::max(1.0, rep.residual_scale))
        rep.residual_max = std::max(rep.residual_max, forms);

    if (fd_check) {
        auto Azc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return rs_lax<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), z, par, variant);
        };
        auto Bwc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return rs_lax<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), w, par, variant);
        };
        const Tensor fd = matrix_poisson_bracket_fd(Azc, Bwc, std::span<const cplx>(coords)) * par.c;
        const double dev = (fd - lhs).max_abs() / std::max(1.0, lhs.max_abs());
        if (dev > fd_tol) rep.residual_max = std::max(rep.residual_max, dev * rep.residual_scale + 1.0);
    }

    rep.finish(tol);
    return rep;
}

ResidualReport verify_trace_involution(TraceModel model, const RSState* rs, const ChainState* chain,
                                       cplx z, cplx w, int k, int m, const ModelParams& par, double tol) {
    if (k > 4 || m > 4) throw unsupported_order_error("verify_trace_involution: powers supported up to 4");
    std::vector<cplx> coords;
    if (model == TraceModel::rs)
        coords = pack_coords(rs->p, rs->q);
    else
        coords = pack_coords(chain->p, chain->q);

    auto trace_power = [&](cplx spec, int pw) {
        return [&, spec, pw](std::span<const Dual> c) {
            auto [p, q] = unpack_coords(c);
            const std::span<const Dual> ps(p), qs(q);
            const DMat L = (model == TraceModel::rs) ? rs_lax<Dual>(ps, qs, spec, par)
                                                     : chain_monodromy<Dual>(ps, qs, spec, par);
            DMat acc = L;
            for (int t = 1; t < pw; ++t) acc = acc * L;
            return acc.trace();
        };
    };

    const cplx bracket = poisson_bracket(trace_power(z, k), trace_power(w, m), std::span<const cplx>(coords));

    auto trace_value = [&](cplx spec, int pw) {
        const CMat L = (model == TraceModel::rs) ? rs_lax(*rs, spec, par) : chain_monodromy(*chain, spec, par);
        CMat acc = L;
        for (int t = 1; t < pw; ++t) acc = acc * L;
        return acc.trace();
    };

    ResidualReport rep;
    rep.check_id = (model == TraceModel::rs) ? "trace-involution-rs" : "trace-involution-chain";
    rep.anchor = "poisson-commuting-trace-powers";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_max = std::abs(bracket);
    rep.residual_scale = std::abs(trace_value(z, k)) * std::abs(trace_value(w, m));
    rep.finish(tol);
    return rep;
}

ResidualReport verify_cm_linear(const RSState& s, cplx z, cplx w, const ModelParams& par, double tol,
                                bool fd_check, double fd_tol) {
    const auto coords = pack_coords(s.p, s.q);
    auto Az = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return cm_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par);
    };
    auto Bw = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return cm_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, par);
    };
    const Tensor lhs = matrix_poisson_bracket(Az, Bw, std::span<const cplx>(coords));

    const Tensor L1 = tensor_first(cm_lax(s, z, par));
    const Tensor L2 = tensor_second(cm_lax(s, w, par));
    const Tensor r12 = cm_r12(s.q, z, w, par);
    const Tensor r21 = cm_r12(s.q, w, z, par).swap_factors();
    const Tensor t1 = commutator(L1, r12);
    const Tensor t2 = commutator(L2, r21);
    const Tensor rhs = t1 - t2;

    ResidualReport rep;
    rep.check_id = "cm-linear";
    rep.anchor = "linear-r-matrix-structure";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_scale = tensor_scale({&t1, &t2});
    rep.residual_max = (lhs - rhs).max_abs();

    if (fd_check) {
        auto Azc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return cm_lax<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), z, par);
        };
        auto Bwc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return cm_lax<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), w, par);
        };
        const Tensor fd = matrix_poisson_bracket_fd(Azc, Bwc, std::span<const cplx>(coords));
        const double dev = (fd - lhs).max_abs() / std::max(1.0, lhs.max_abs());
        if (dev > fd_tol) rep.residual_max = std::max(rep.residual_max, dev * rep.residual_scale + 1.0);
    }

    rep.finish(tol);
    return rep;
}

ResidualReport verify_chain_quadratic(const ChainState& s, int a, int b, cplx z, cplx w,
                                      const ModelParams& par, double tol, bool fd_check, double fd_tol) {
    const int n = s.sites, N = s.particles_per_site;
    const auto coords = pack_coords(s.p, s.q);
    auto site_lax = [&](int site, cplx spec) {
        return [&, site, spec](std::span<const Dual> c) {
            auto [p, q] = unpack_coords(c);
            return chain_lax<Dual>(site, std::span<const Dual>(p), std::span<const Dual>(q), spec, par);
        };
    };
    const Tensor lhs =
        bracket_tensor(site_lax(a, z), site_lax(b, w), coords, par.c);

    Tensor rhs(N);
    double scale = 0.0;
    if (a == b) {
        const auto tb = chain_tensors(s, b, z, w, par);
        std::vector<cplx> qprev(N);
        for (int i = 0; i < N; ++i) qprev[i] = s.qa((b - 1 + n) % n, i);
        const Tensor rprev = rs_r12(qprev, z, w, par);
        const Tensor L1 = tensor_first(chain_lax(s, b, z, par));
        const Tensor L2 = tensor_second(chain_lax(s, b, w, par));
        const Tensor L1L2 = L1 * L2;
        const Tensor t1 = L1L2 * tb.r;
        const Tensor t2 = rprev * L1L2;
        const Tensor t3 = tb.L1splus * L2;
        const Tensor t4 = tb.L2sminus * L1;
        rhs = rhs + t1 - t2 + t3 - t4;
        scale = std::max(scale, tensor_scale({&t1, &t2, &t3, &t4}));
    }
    if (a == (b - 1 + n) % n) {
        const auto tb = chain_tensors(s, b, z, w, par);
        const Tensor term = tensor_first(chain_lax(s, a, z, par)) * tb.L2sminus;
        rhs = rhs + term;
        scale = std::max(scale, term.max_abs());
    }
    if (a == (b + 1) % n) {
        const auto ta = chain_tensors(s, a, z, w, par);
        const Tensor term = tensor_second(chain_lax(s, b, w, par)) * ta.L1splus;
        rhs = rhs - term;
        scale = std::max(scale, term.max_abs());
    }

    ResidualReport rep;
    rep.check_id = "chain-quadratic";
    rep.anchor = "lattice-quadratic-r-matrix-structure";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_scale = scale;
    rep.residual_max = (lhs - rhs).max_abs();

    if (fd_check) {
        auto ac = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return chain_lax<cplx>(a, std::span<const cplx>(p), std::span<const cplx>(q), z, par);
        };
        auto bc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return chain_lax<cplx>(b, std::span<const cplx>(p), std::span<const cplx>(q), w, par);
        };
        const Tensor fd = matrix_poisson_bracket_fd(ac, bc, std::span<const cplx>(coords)) * par.c;
        const double dev = (fd - lhs).max_abs() / std::max(1.0, lhs.max_abs());
        if (dev > fd_tol) rep.residual_max = std::max(rep.residual_max, dev * rep.residual_scale + 1.0);
    }

    rep.finish(tol);
    return rep;
}

ResidualReport verify_monodromy_quadratic(const ChainState& s, cplx z, cplx w, const ModelParams& par,
                                          double tol, bool leibniz_check) {
    const int n = s.sites, N = s.particles_per_site;
    const auto coords = pack_coords(s.p, s.q);

    auto Tz = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return chain_monodromy<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par);
    };
    auto Tw = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return chain_monodromy<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, par);
    };
    const Tensor lhs = bracket_tensor(Tz, Tw, coords, par.c);

    std::vector<cplx> qlast(N);
    for (int i = 0; i < N; ++i) qlast[i] = s.qa(n - 1, i);
    const Tensor rn = rs_r12(qlast, z, w, par);
    const auto breve = monodromy_breve(s, z, w, par);
    const Tensor T1 = tensor_first(chain_monodromy(s, z, par));
    const Tensor T2 = tensor_second(chain_monodromy(s, w, par));
    const Tensor T1T2 = T1 * T2;

    const Tensor t1 = T1T2 * rn;
    const Tensor t2 = (rn - breve.s_plus + breve.s_minus) * T1T2;
    const Tensor t3 = T1 * breve.s_minus * T2;
    const Tensor t4 = T2 * breve.s_plus * T1;
    const Tensor rhs = t1 - t2 + t3 - t4;

    ResidualReport rep;
    rep.check_id = "monodromy-quadratic";
    rep.anchor = "monodromy-r-matrix-structure";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_scale = tensor_scale({&t1, &t2, &t3, &t4});
    rep.residual_max = (lhs - rhs).max_abs();

    if (leibniz_check) {
        // {T1, T2} by the product rule over site pairs.
        auto site_lax = [&](int site, cplx spec) {
            return [&, site, spec](std::span<const Dual> c) {
                auto [p, q] = unpack_coords(c);
                return chain_lax<Dual>(site, std::span<const Dual>(p), std::span<const Dual>(q), spec, par);
            };
        };
        auto partial_product = [&](cplx spec, int from, int to) {  // [from, to)
            CMat acc = CMat::identity(N);
            for (int a = from; a < to; ++a) acc = acc * chain_lax(s, a, spec, par);
            return acc;
        };
        Tensor leib(N);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const Tensor inner =
                    matrix_poisson_bracket(site_lax(a, z), site_lax(b, w), std::span<const cplx>(coords));
                const Tensor left = tensor_first(partial_product(z, 0, a)) * tensor_second(partial_product(w, 0, b));
                const Tensor right =
                    tensor_first(partial_product(z, a + 1, n)) * tensor_second(partial_product(w, b + 1, n));
                leib = leib + left * inner * right;
            }
        const double dev = (leib * par.c - lhs).max_abs();
        rep.residual_max = std::max(rep.residual_max, dev);
    }

    rep.finish(tol);
    return rep;
}

ResidualReport verify_rowgauge_quadratic(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                         double tol, bool fd_check, double fd_tol) {
    const auto coords = pack_coords(s.p, s.q);
    auto Az = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rowgauge_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par);
    };
    auto Bw = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rowgauge_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, par);
    };
    const Tensor lhs = bracket_tensor(Az, Bw, coords, par.c);

    const auto tg = rowgauge_tensors(s, z, w, par);
    const Tensor L1 = tensor_first(rowgauge_lax(s, z, par));
    const Tensor L2 = tensor_second(rowgauge_lax(s, w, par));
    const Tensor L1L2 = L1 * L2;

    const Tensor t1 = tg.r_plus * L1L2;                    // -a_12 L1 L2 with a = -r+
    const Tensor t2 = L1 * tg.s_plus * L2;                 // L1 b_12 L2
    const Tensor t3 = L2 * tg.s_minus * L1;                // L2 c_12 L1
    const Tensor t4 = L1L2 * tg.r_minus;                   // -L1 L2 d_12 with d = -r-
    const Tensor rhs = t4 - t1 + t2 - t3;

    ResidualReport rep;
    rep.check_id = "rowgauge-quadratic";
    rep.anchor = "row-weighted-gauge-r-matrix-structure";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_scale = tensor_scale({&t1, &t2, &t3, &t4});
    rep.residual_max = (lhs - rhs).max_abs();

    if (fd_check) {
        auto Azc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return rowgauge_lax<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), z, par);
        };
        auto Bwc = [&](std::span<const cplx> c) {
            auto [p, q] = unpack_coords(c);
            return rowgauge_lax<cplx>(std::span<const cplx>(p), std::span<const cplx>(q), w, par);
        };
        const Tensor fd = matrix_poisson_bracket_fd(Azc, Bwc, std::span<const cplx>(coords)) * par.c;
        const double dev = (fd - lhs).max_abs() / std::max(1.0, lhs.max_abs());
        if (dev > fd_tol) rep.residual_max = std::max(rep.residual_max, dev * rep.residual_scale + 1.0);
    }

    rep.finish(tol);
    return rep;
}

}  // namespace elax
