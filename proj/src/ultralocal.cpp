#include "elax/ultralocal.hpp"

#include "elax/limits.hpp"

namespace elax {

namespace {

const LatticeGuard tight{1e-9};

struct Frame {
    int N;
    std::vector<cplx> q;       // q_i(x)
    std::vector<cplx> alpha2;  // q_{i,x} + nu
    CMat Uz, Uw;               // zero-order limit U at z and w
    Tensor r;                  // r_12(z-w | x)
    Tensor rcm;                // r^2dCM_12(z,w | x)
    Tensor rcm21;              // r^2dCM_21(w,z | x), factors swapped
};

Frame make_frame(const FieldConfig& cfg, double x, cplx z, cplx w, const ModelParams& par) {
    Frame f;
    const auto v = field_vals(cfg, cplx{x});
    f.N = cfg.N;
    f.q = v.q;
    f.alpha2.resize(cfg.N);
    for (int i = 0; i < cfg.N; ++i) f.alpha2[i] = v.qx[i] + par.nu;
    f.Uz = ulimit_U(cfg, x, z, par);
    f.Uw = ulimit_U(cfg, x, w, par);
    f.r = rs_r12(f.q, z, w, par);
    f.rcm = cm_r12(f.q, z, w, par);
    f.rcm21 = cm_r12(f.q, w, z, par).swap_factors();
    return f;
}

/// -d_x(r^2dCM_12 - r_12) in closed form.
Tensor term_dx(const Frame& f, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    Tensor t(f.N);
    for (int i = 0; i < f.N; ++i)
        for (int j = 0; j < f.N; ++j) {
            if (j == i) continue;
            const cplx da = f.alpha2[j] - f.alpha2[i];
            t.ent(i, i, j, i) -= da * phi_du(w, f.q[j] - f.q[i], m, tight);
            t.ent(i, i, j, j) -= da * e2(f.q[j] - f.q[i], m, tight);
        }
    return t;
}

/// + sum (alpha_j^2 - alpha_i^2) f(w, q_ji) E_ii (x) E_ji.
Tensor term_alpha_f(const Frame& f, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    Tensor t(f.N);
    for (int i = 0; i < f.N; ++i)
        for (int j = 0; j < f.N; ++j) {
            if (j == i) continue;
            t.ent(i, i, j, i) += (f.alpha2[j] - f.alpha2[i]) * phi_du(w, f.q[j] - f.q[i], m, tight);
        }
    return t;
}

// ---------------------------------------------------------------- blocks

/// Pre-limit shift-bracket pieces, functions of eps; the zero-order contour
/// coefficient of each reproduces its closed form below.
struct BlockEval {
    const FieldConfig& cfg;
    double x;
    cplx z, w;
    const ModelParams& par;

    struct Shifted {
        CMat Uz, Uw;
        std::vector<cplx> qx, qm, qp;  // q(x), q(x - eps), q(x + eps)
    };

    Shifted at(cplx eps) const {
        Shifted s;
        const auto atv = field_vals(cfg, cplx{x});
        const auto mn = field_vals(cfg, cplx{x} - eps);
        const auto pl = field_vals(cfg, cplx{x} + eps);
        s.qx = atv.q;
        s.qm = mn.q;
        s.qp = pl.q;
        s.Uz = rs_field_U_from(atv.q, mn.q, atv.p, z, eps, par);
        s.Uw = rs_field_U_from(atv.q, mn.q, atv.p, w, eps, par);
        return s;
    }

    cplx A(const Shifted& s, int a, int b, cplx eps) const {  // q_a(x-eps) - q_b(x) - nu eps
        return s.qm[a] - s.qx[b] - par.nu * eps;
    }

    Tensor block(int which, cplx eps) const {
        const Modulus m = par.modulus();
        const int N = cfg.N;
        const Shifted s = at(eps);
        const cplx pref = eps * par.nu * par.nu;
        Tensor t(N);
        switch (which) {
            case 1:
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j)
                        for (int l = 0; l < N; ++l)
                            t.ent(i, j, i, l) += pref * s.Uz(i, j) * s.Uw(i, l) *
                                                 (e1(z + A(s, i, j, eps), m, tight) -
                                                  e1(w + A(s, i, l, eps), m, tight));
                break;
            case 2:
                for (int i = 0; i < N; ++i)
                    for (int k = 0; k < N; ++k) {
                        if (k == i) continue;
                        for (int j = 0; j < N; ++j)
                            for (int l = 0; l < N; ++l)
                                t.ent(i, j, k, l) += pref * s.Uz(i, j) * s.Uw(k, l) *
                                                     (e1(A(s, k, j, eps), m, tight) -
                                                      e1(A(s, i, l, eps), m, tight));
                    }
                break;
            case 3:
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j)
                        for (int k = 0; k < N; ++k)
                            t.ent(i, j, k, i) -= pref * s.Uz(i, j) * s.Uw(k, i) *
                                                 e1(z + s.qx[i] - s.qp[j] - par.nu * eps, m, tight);
                break;
            case 4:
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j)
                        for (int mm = 0; mm < N; ++mm)
                            for (int n = 0; n < N; ++n) {
                                if (n == i) continue;
                                t.ent(i, j, mm, n) -= pref * s.Uz(i, j) * s.Uw(mm, n) *
                                                      e1(s.qx[n] - s.qp[j] - par.nu * eps, m, tight);
                            }
                break;
            case 5:
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j)
                        for (int l = 0; l < N; ++l)
                            t.ent(i, j, j, l) += pref * s.Uz(i, j) * s.Uw(j, l) *
                                                 e1(w + A(s, j, l, eps), m, tight);
                break;
            case 6:
                for (int i = 0; i < N; ++i)
                    for (int j = 0; j < N; ++j)
                        for (int k = 0; k < N; ++k) {
                            if (k == j) continue;
                            for (int l = 0; l < N; ++l)
                                t.ent(i, j, k, l) += pref * s.Uz(i, j) * s.Uw(k, l) *
                                                     e1(A(s, j, l, eps), m, tight);
                        }
                break;
        }
        return t;
    }
};

Tensor block_closed(int which, const Frame& f, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = f.N;
    Tensor t(N);
    const cplx e1z = e1(z, m, tight), e1w = e1(w, m, tight);
    const cplx e2z = e2(z, m, tight), e2w = e2(w, m, tight);
    auto qij = [&](int i, int j) { return f.q[i] - f.q[j]; };
    switch (which) {
        case 1:
            for (int i = 0; i < N; ++i) {
                t.ent(i, i, i, i) -= f.alpha2[i] * (e2w - e2z);
                for (int j = 0; j < N; ++j) {
                    t.ent(i, i, i, j) -= f.Uw(i, j) * (e1z - e1(w + qij(i, j), m, tight));
                    t.ent(i, j, i, i) -= f.Uz(i, j) * (e1(z + qij(i, j), m, tight) - e1w);
                }
            }
            break;
        case 2:
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    for (int k = 0; k < N; ++k) {
                        if (k == i) continue;
                        t.ent(k, i, i, j) -= f.Uw(i, j) * kronecker_phi(z, qij(k, i), m, tight);
                        t.ent(i, j, k, i) += f.Uz(i, j) * kronecker_phi(w, qij(k, i), m, tight);
                        if (k != j) {
                            t.ent(i, j, k, k) -= f.Uz(i, j) * e1(qij(k, j), m, tight);
                            t.ent(k, k, i, j) += f.Uw(i, j) * e1(qij(k, j), m, tight);
                        }
                        t.ent(k, k, i, j) -= f.Uw(i, j) * e1(qij(i, k), m, tight);
                        t.ent(i, j, k, k) += f.Uz(i, j) * e1(qij(i, k), m, tight);
                    }
                    if (j != i)
                        t.ent(i, i, j, j) -= e2(qij(j, i), m, tight) * (f.alpha2[i] - f.alpha2[j]);
                }
            break;
        case 3:
            for (int i = 0; i < N; ++i) {
                t.ent(i, i, i, i) -= f.alpha2[i] * e2z;
                for (int j = 0; j < N; ++j) {
                    t.ent(j, j, i, j) += e1z * f.Uw(i, j);
                    t.ent(i, j, i, i) += e1(z + qij(i, j), m, tight) * f.Uz(i, j);
                }
            }
            break;
        case 4:
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    for (int k = 0; k < N; ++k) {
                        if (k != j) {
                            t.ent(k, j, i, j) += kronecker_phi(z, qij(k, j), m, tight) * f.Uw(i, j);
                            t.ent(k, k, i, j) += f.Uw(i, j) * e1(qij(j, k), m, tight);
                        }
                        if (k != i && k != j) t.ent(i, j, k, k) += f.Uz(i, j) * e1(qij(k, j), m, tight);
                    }
                    if (j != i)
                        t.ent(i, i, j, j) -= f.alpha2[i] * e2(qij(j, i), m, tight);
                }
            break;
        case 5:
            for (int i = 0; i < N; ++i) {
                t.ent(i, i, i, i) += e2w * f.alpha2[i];
                for (int j = 0; j < N; ++j) {
                    t.ent(i, j, j, j) -= f.Uz(i, j) * e1w;
                    t.ent(i, i, i, j) -= f.Uw(i, j) * e1(w + qij(i, j), m, tight);
                }
            }
            break;
        case 6:
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    for (int k = 0; k < N; ++k) {
                        if (k != j) {
                            t.ent(i, j, k, j) -= f.Uz(i, j) * kronecker_phi(w, qij(k, j), m, tight);
                            t.ent(i, j, k, k) += f.Uz(i, j) * e1(qij(k, j), m, tight);
                            if (k != i) t.ent(k, k, i, j) -= f.Uw(i, j) * e1(qij(k, j), m, tight);
                        }
                    }
                    if (j != i) t.ent(i, i, j, j) += f.alpha2[i] * e2(qij(i, j), m, tight);
                }
            break;
    }
    return t;
}

}  // namespace

Tensor ultralocal_block_prelimit(const FieldConfig& cfg, double x, cplx z, cplx w,
                                 const ModelParams& par, int which, cplx eps) {
    const BlockEval ev{cfg, x, z, w, par};
    return ev.block(which, eps);
}

Tensor ultralocal_block_closed(const FieldConfig& cfg, double x, cplx z, cplx w,
                               const ModelParams& par, int which) {
    const Frame f = make_frame(cfg, x, z, w, par);
    return block_closed(which, f, z, w, par);
}

UltralocalReport verify_field_ultralocal(const FieldConfig& cfg, double x, cplx z, cplx w,
                                         const ModelParams& par, const LaurentWindow& win, double tol) {
    UltralocalReport rep;
    const Frame f = make_frame(cfg, x, z, w, par);
    const int N = f.N;

    const Tensor d = f.rcm - f.r;
    const Tensor t1 = term_dx(f, w, par);
    const Tensor t2 = commutator(tensor_first(f.Uz), d);
    const Tensor t3 = commutator(tensor_second(f.Uw), f.rcm21 + f.r) * cplx{-1.0};
    const Tensor t4 = term_alpha_f(f, w, par);

    Tensor total = t1 + t2 + t3 + t4;
    double scale = std::max({t1.max_abs(), t2.max_abs(), t3.max_abs(), t4.max_abs()});

    // Per-block contour oracles. Blocks 1, 3, 5 match their pre-limits
    // individually; the source split of blocks 2, 4, 6 moves singular-
    // diagonal pieces across blocks (only their sum has an eps-limit), so
    // those three are certified through the exchange compensation of their
    // deviations plus the exact total.
    const BlockEval ev{cfg, x, z, w, par};
    std::vector<Tensor> dev;
    double blockscale = 1.0;
    for (int which = 1; which <= 6; ++which) {
        const Tensor closed = block_closed(which, f, z, w, par);
        const auto coeffs = laurent_coeffs([&](cplx eps) { return ev.block(which, eps); }, win);
        dev.push_back(coeffs.at(0) - closed);
        rep.blocks.push_back({"block-" + std::to_string(which), dev.back().max_abs(), closed.max_abs()});
        total = total + closed;
        scale = std::max(scale, closed.max_abs());
        blockscale = std::max(blockscale, closed.max_abs());
    }
    // Exchange compensation of the singular-diagonal redistribution: on the
    // E_ii (x) E_ki components blocks 2 and 6 carry opposite pieces.
    {
        double exch = 0.0;
        const Tensor s26 = dev[1] + dev[5];
        for (int i = 0; i < N; ++i)
            for (int k = 0; k < N; ++k) {
                if (k == i) continue;
                exch = std::max(exch, std::abs(s26.ent(i, i, k, i)));
            }
        rep.blocks.push_back({"blocks-2-6-exchange", exch, blockscale});
    }

    rep.residual_total = total.max_abs();
    rep.residual_scale = scale;
    rep.tolerance = tol;
    rep.pass = rep.residual_total <= tol * std::max(1.0, scale);
    for (const auto& b : rep.blocks) {
        const bool strict = b.label == "block-1" || b.label == "block-3" || b.label == "block-5" ||
                            b.label == "blocks-2-6-exchange";
        if (strict && !(b.max_deviation <= 1e-6 * std::max(1.0, b.scale))) rep.pass = false;
    }

    // Cross-route: the bracket terms extracted from the assembled tensors,
    // run for both sign conventions of the bold s^- assembly.
    auto bracket_total = [&](bool printed_sign) {
        auto fn = [&](cplx eps) {
            const auto atv = field_vals(cfg, cplx{x});
            const auto mn = field_vals(cfg, cplx{x} - eps);
            FieldSnapshot snap{atv.q, mn.q, rs_field_U_from(atv.q, mn.q, atv.p, z, eps, par),
                               rs_field_U_from(atv.q, mn.q, atv.p, w, eps, par), eps};
            const auto ft = field_tensors(snap, z, w, par);
            const Tensor U1 = tensor_first(snap.Uz);
            const Tensor U2 = tensor_second(snap.Uw);
            const Tensor& sminus = printed_sign ? ft.U2sminus : ft.U2sminus_alt;
            const Tensor expr = commutator(ft.U1splus, U2) - commutator(sminus, U1);
            return expr * (eps * par.nu * par.nu);
        };
        const auto coeffs = laurent_coeffs(fn, win);
        return (t1 + t2 + t3 + t4 + coeffs.at(0)).max_abs();
    };
    rep.bracket_route_printed = bracket_total(true);
    rep.bracket_route_flipped = bracket_total(false);
    return rep;
}

ResidualReport verify_nonultralocal_coefficient(const FieldConfig& cfg, double x, cplx z, cplx w,
                                                const ModelParams& par, double tol) {
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, cplx{x});
    const int N = cfg.N;

    const cplx inv_nu2 = 1.0 / (par.nu * par.nu);
    Tensor three(N);
    const cplx diag = e1(z, m, tight) + e1(w, m, tight);
    for (int i = 0; i < N; ++i) {
        three.ent(i, i, i, i) += diag;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            three.ent(i, i, j, i) += kronecker_phi(w, v.q[j] - v.q[i], m, tight);
            three.ent(i, j, j, j) += kronecker_phi(z, v.q[i] - v.q[j], m, tight);
        }
    }
    three = three * inv_nu2;

    const Tensor sum = (cm_r12(v.q, z, w, par) + cm_r12(v.q, w, z, par).swap_factors()) * inv_nu2;

    ResidualReport rep;
    rep.check_id = "field-coefficient";
    rep.anchor = "maillet-delta-prime-coefficient";
    rep.params = par;
    rep.spectral_points = {{z, w}};
    rep.residual_max = (three - sum).max_abs();
    rep.residual_scale = sum.max_abs();

    // Symmetry under the simultaneous factor and argument swap.
    const Tensor swapped = (cm_r12(v.q, w, z, par) + cm_r12(v.q, z, w, par).swap_factors()) * inv_nu2;
    rep.residual_max = std::max(rep.residual_max, (swapped.swap_factors() - sum).max_abs());

    rep.finish(tol);
    return rep;
}

}  // namespace elax
