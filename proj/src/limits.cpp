#include "elax/limits.hpp"

#include "elax/diffkit.hpp"
#include "elax/rmatrices.hpp"

namespace elax {

namespace {

// Contour samples sit at |eta| ~ rho |nu|, far inside the default guard;
// only an absolute floor is kept.
const LatticeGuard contour_guard{1e-9};

std::span<const cplx> sp(const std::vector<cplx>& v) { return {v.data(), v.size()}; }

double mat_dev(const CMat& a, const CMat& b) { return (a - b).max_abs(); }

}  // namespace

LimitReport verify_rs_to_cm_lax(const RSState& s, cplx z, const ModelParams& par, const LaurentWindow& w) {
    LimitReport rep;
    rep.check_id = "rs2cm-lax";

    auto fn = [&](cplx eps) {
        const ModelParams pe = nonrel_family(par, eps);
        return rs_lax<cplx>(sp(s.p), sp(s.q), z, pe, WeightVariant::standard, contour_guard);
    };
    const auto coeffs = laurent_coeffs(fn, w);

    const int N = s.particles();
    const CMat Lcm = cm_lax(s, z, par);
    CMat target_m1 = CMat::identity(N) * (1.0 / par.nu);
    const CMat target_0 = Lcm * (1.0 / par.nu);

    rep.checks.push_back({"order-minus-1", mat_dev(coeffs.at(-1), target_m1), target_m1.max_abs()});
    rep.checks.push_back({"order-zero", mat_dev(coeffs.at(0), target_0), target_0.max_abs()});
    if (coeffs.count(-2))
        rep.checks.push_back({"order-minus-2-vanishes", coeffs.at(-2).max_abs(), target_0.max_abs()});

    // The phi factor alone: c_{-1} = delta_ij / nu, c_0 = delta_ij E1(z) + (1-delta) phi(z, q_ij).
    auto phis = [&](cplx eps) {
        const Modulus m = par.modulus();
        CMat out(N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                out(i, j) = kronecker_phi(z, s.q[i] - s.q[j] + eps * par.nu, m, contour_guard);
        return out;
    };
    const auto pc = laurent_coeffs(phis, w);
    const Modulus m = par.modulus();
    CMat phi_m1(N), phi_0(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            phi_m1(i, j) = (i == j) ? 1.0 / par.nu : cplx{0.0};
            phi_0(i, j) = (i == j) ? e1(z, m) : kronecker_phi(z, s.q[i] - s.q[j], m);
        }
    rep.checks.push_back({"phi-factor-minus-1", mat_dev(pc.at(-1), phi_m1), phi_m1.max_abs()});
    rep.checks.push_back({"phi-factor-zero", mat_dev(pc.at(0), phi_0), phi_0.max_abs()});

    rep.finish(1e-6);
    return rep;
}

namespace {

/// Closed forms of the eta-residues of L2(w) s12^- and L1(z) s12^+.
Tensor residue_sminus_closed(const RSState& s, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles();
    const CMat Lcm = cm_lax(s, w, par);
    Tensor t(N);
    const cplx e1w = e1(w, m);
    for (int i = 0; i < N; ++i) {
        t.ent(i, i, i, i) += e1w;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            t.ent(i, i, j, j) += e1(s.q[i] - s.q[j], m);
            t.ent(j, j, i, j) += Lcm(i, j) / par.nu;
        }
    }
    return t;
}

Tensor residue_splus_closed(const RSState& s, cplx z, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles();
    const CMat Lcm = cm_lax(s, z, par);
    Tensor t(N);
    const cplx e1z = e1(z, m);
    for (int i = 0; i < N; ++i) {
        t.ent(i, i, i, i) += e1z;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            t.ent(j, j, i, i) += e1(s.q[i] - s.q[j], m);
            t.ent(i, j, j, j) += Lcm(i, j) / par.nu;
        }
    }
    return t;
}

}  // namespace

LimitReport verify_residue_s_terms(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                   const LaurentWindow& win) {
    LimitReport rep;
    rep.check_id = "residues";

    auto sminus = [&](cplx eps) {
        const ModelParams pe = nonrel_family(par, eps);
        const auto [up, um] = rs_u_pm(s.q, pe, contour_guard);
        const Tensor L2 = tensor_second(rs_lax<cplx>(sp(s.p), sp(s.q), w, pe, WeightVariant::standard,
                                                     contour_guard));
        return rs_L2s21(s, w, pe, WeightVariant::standard, contour_guard) - L2 * um;
    };
    auto splus = [&](cplx eps) {
        const ModelParams pe = nonrel_family(par, eps);
        const auto [up, um] = rs_u_pm(s.q, pe, contour_guard);
        const Tensor L1 = tensor_first(rs_lax<cplx>(sp(s.p), sp(s.q), z, pe, WeightVariant::standard,
                                                    contour_guard));
        return rs_L1s12(s, z, pe, WeightVariant::standard, contour_guard) + L1 * up;
    };

    const auto cm = laurent_coeffs(sminus, win);
    const auto cp = laurent_coeffs(splus, win);

    // Res_{eta=0} = nu * (coefficient of eps^{-1}).
    const Tensor res_minus = cm.at(-1) * par.nu;
    const Tensor res_plus = cp.at(-1) * par.nu;
    const Tensor closed_minus = residue_sminus_closed(s, w, par);
    const Tensor closed_plus = residue_splus_closed(s, z, par);

    rep.checks.push_back(
        {"sminus-residue", (res_minus - closed_minus).max_abs(), closed_minus.max_abs()});
    rep.checks.push_back({"splus-residue", (res_plus - closed_plus).max_abs(), closed_plus.max_abs()});
    if (cm.count(-2)) {
        rep.checks.push_back({"sminus-order-minus-2", cm.at(-2).max_abs(), closed_minus.max_abs()});
        rep.checks.push_back({"splus-order-minus-2", cp.at(-2).max_abs(), closed_plus.max_abs()});
    }

    rep.finish(1e-7);
    return rep;
}

LimitReport verify_rs_to_cm_bracket(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                    const LaurentWindow& win) {
    LimitReport rep;
    rep.check_id = "rs2cm-bracket";
    LaurentWindow deep = win;
    deep.m_lo = std::min(win.m_lo, -3);

    const auto coords = pack_coords(s.p, s.q);

    auto lhs_fn = [&](cplx eps) {
        const ModelParams pe = nonrel_family(par, eps);
        auto Az = [&](std::span<const Dual> c) {
            auto [p, q] = unpack_coords(c);
            return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, pe,
                                WeightVariant::standard, contour_guard);
        };
        auto Bw = [&](std::span<const Dual> c) {
            auto [p, q] = unpack_coords(c);
            return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, pe,
                                WeightVariant::standard, contour_guard);
        };
        return matrix_poisson_bracket(Az, Bw, std::span<const cplx>(coords)) * pe.c;
    };

    auto rhs_fn = [&](cplx eps) {
        const ModelParams pe = nonrel_family(par, eps);
        const Tensor r = rs_r12(s.q, z, w, pe);
        const auto [up, um] = rs_u_pm(s.q, pe, contour_guard);
        const Tensor L1 = tensor_first(rs_lax<cplx>(sp(s.p), sp(s.q), z, pe, WeightVariant::standard,
                                                    contour_guard));
        const Tensor L2 = tensor_second(rs_lax<cplx>(sp(s.p), sp(s.q), w, pe, WeightVariant::standard,
                                                     contour_guard));
        const Tensor L1splus = rs_L1s12(s, z, pe, WeightVariant::standard, contour_guard) + L1 * up;
        const Tensor L2sminus = rs_L2s21(s, w, pe, WeightVariant::standard, contour_guard) - L2 * um;
        return commutator(L1 * L2, r) + commutator(L1, L2sminus) - commutator(L2, L1splus);
    };

    const auto cl = laurent_coeffs(lhs_fn, deep);
    const auto cr = laurent_coeffs(rhs_fn, deep);

    // CM linear structure, both as the AD bracket and as the r-matrix form.
    auto cmAz = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return cm_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par);
    };
    auto cmBw = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return cm_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), w, par);
    };
    const Tensor cm_bracket = matrix_poisson_bracket(cmAz, cmBw, std::span<const cplx>(coords));
    const Tensor L1cm = tensor_first(cm_lax(s, z, par));
    const Tensor L2cm = tensor_second(cm_lax(s, w, par));
    const Tensor rcm12 = cm_r12(s.q, z, w, par);
    const Tensor rcm21 = cm_r12(s.q, w, z, par).swap_factors();
    const Tensor cm_rhs = commutator(L1cm, rcm12) - commutator(L2cm, rcm21);

    const cplx inv_nu2 = 1.0 / (par.nu * par.nu);
    const Tensor target = cm_bracket * inv_nu2;
    const double scale = std::max(1.0, target.max_abs());

    rep.checks.push_back({"lhs-residue", (cl.at(-1) - target).max_abs(), scale});
    rep.checks.push_back({"rhs-residue", (cr.at(-1) - target).max_abs(), scale});
    rep.checks.push_back({"cm-linear-agreement", (cm_bracket - cm_rhs).max_abs(), cm_rhs.max_abs()});
    rep.checks.push_back({"lhs-order-minus-2", cl.at(-2).max_abs(), scale});
    rep.checks.push_back({"lhs-order-minus-3", cl.at(-3).max_abs(), scale});
    rep.checks.push_back({"rhs-order-minus-2", cr.at(-2).max_abs(), scale});
    rep.checks.push_back({"rhs-order-minus-3", cr.at(-3).max_abs(), scale});

    // The r-commutator piece alone matches its skew-symmetry rewriting.
    auto rpart = [&](cplx eps) {
        const ModelParams pe = nonrel_family(par, eps);
        const Tensor r = rs_r12(s.q, z, w, pe);
        const Tensor L1 = tensor_first(rs_lax<cplx>(sp(s.p), sp(s.q), z, pe, WeightVariant::standard,
                                                    contour_guard));
        const Tensor L2 = tensor_second(rs_lax<cplx>(sp(s.p), sp(s.q), w, pe, WeightVariant::standard,
                                                     contour_guard));
        return commutator(L1 * L2, r);
    };
    const auto crr = laurent_coeffs(rpart, win);
    const Tensor r_base = rs_r12(s.q, z, w, par);
    const Tensor r_base_21 = rs_r12(s.q, w, z, par).swap_factors();
    const Tensor rsplit = (commutator(L1cm, r_base) - commutator(L2cm, r_base_21)) * inv_nu2;
    rep.checks.push_back({"r-commutator-split", (crr.at(-1) - rsplit).max_abs(), rsplit.max_abs()});

    rep.finish(1e-6);
    return rep;
}

}  // namespace elax
