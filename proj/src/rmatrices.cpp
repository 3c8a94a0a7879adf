#include "elax/rmatrices.hpp"

namespace elax {

namespace {

constexpr double inversion_cond_limit = 1e8;

// Field tensors evaluate theta arguments at distance O(eps) from the lattice
// on the diagonal; that is intended, so only an absolute floor is guarded.
const LatticeGuard field_guard{1e-9};

std::span<const cplx> sp(const std::vector<cplx>& v) { return {v.data(), v.size()}; }

}  // namespace

Tensor rs_r12(const std::vector<cplx>& q, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    if (lattice_distance(z - w, par.tau) < 1e-12)
        throw coinciding_spectral_parameters_error("rs_r12: z - w on the lattice");
    const int N = int(q.size());
    Tensor t(N);
    const cplx e1zw = e1(z - w, m);
    for (int i = 0; i < N; ++i) {
        t.ent(i, i, i, i) += e1zw;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            t.ent(i, j, j, i) += kronecker_phi(z - w, q[i] - q[j], m);
            t.ent(i, i, j, j) -= e1(q[i] - q[j], m);
        }
    }
    return t;
}

std::pair<Tensor, Tensor> rs_u_pm(const std::vector<cplx>& q, const ModelParams& par,
                                  const LatticeGuard& g) {
    const Modulus m = par.modulus();
    const int N = int(q.size());
    Tensor up(N), um(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx qji = q[j] - q[i];
            up.ent(i, i, j, j) = e1(qji + par.eta, m, g);
            um.ent(i, i, j, j) = e1(qji - par.eta, m, g);
        }
    return {up, um};
}

CMat rs_deta_lax(const RSState& s, cplx z, const ModelParams& par, WeightVariant variant,
                 const LatticeGuard& g) {
    const Modulus m = par.modulus();
    const int N = s.particles();
    const CMat L = rs_lax<cplx>(sp(s.p), sp(s.q), z, par, variant, g);
    CMat out(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx qij = s.q[i] - s.q[j];
            out(i, j) = L(i, j) * (e1(z + qij + par.eta, m, g) - e1(qij + par.eta, m, g));
        }
    return out;
}

Tensor rs_L1s12(const RSState& s, cplx z, const ModelParams& par, WeightVariant variant,
                const LatticeGuard& g) {
    const int N = s.particles();
    const CMat d = rs_deta_lax(s, z, par, variant, g);
    Tensor t(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) t.ent(i, j, i, i) = d(i, j);
    return t;
}

Tensor rs_L2s21(const RSState& s, cplx w, const ModelParams& par, WeightVariant variant,
                const LatticeGuard& g) {
    const int N = s.particles();
    const CMat d = rs_deta_lax(s, w, par, variant, g);
    Tensor t(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) t.ent(i, i, i, j) = d(i, j);
    return t;
}

Tensor rs_s12(const RSState& s, cplx z, const ModelParams& par, WeightVariant variant) {
    const int N = s.particles();
    const CMat L = rs_lax(s, z, par, variant);
    const CMat Linv = inverse(L, inversion_cond_limit);
    const CMat d = rs_deta_lax(s, z, par, variant);
    Tensor t(N);
    for (int mth = 0; mth < N; ++mth)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) t.ent(mth, j, i, i) += Linv(mth, i) * d(i, j);
    return t;
}

RsAssembled rs_assembled(const RSState& s, cplx z, cplx w, const ModelParams& par, WeightVariant variant) {
    const Tensor r = rs_r12(s.q, z, w, par);
    const auto [up, um] = rs_u_pm(s.q, par);
    const Tensor s12 = rs_s12(s, z, par, variant);
    const Tensor s21 = rs_s12(s, w, par, variant).swap_factors();

    RsAssembled out{
        .r_plus = r,
        .r_minus = Tensor(),
        .s_plus = s12 + up,
        .s_minus = s21 - um,
    };
    out.r_minus = r - out.s_plus + out.s_minus;

    const double suff = (out.r_plus - out.s_plus - out.r_minus + out.s_minus).max_abs();
    if (suff > 1e-12 * std::max(1.0, r.max_abs()))
        throw std::logic_error("rs_assembled: sufficiency relation violated");
    return out;
}

Tensor cm_r12(const std::vector<cplx>& q, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = int(q.size());
    Tensor t(N);
    const cplx diag = e1(z - w, m) + e1(w, m);
    for (int i = 0; i < N; ++i) {
        t.ent(i, i, i, i) += diag;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const cplx qij = q[i] - q[j];
            t.ent(i, j, j, i) += kronecker_phi(z - w, qij, m);
            t.ent(i, i, j, i) -= kronecker_phi(-w, qij, m);
        }
    }
    return t;
}

ChainSiteTensors chain_tensors(const ChainState& s, int a, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles_per_site, n = s.sites;
    const int ap = (a - 1 + n) % n;

    std::vector<cplx> qa(N), qprev(N);
    for (int i = 0; i < N; ++i) {
        qa[i] = s.qa(a, i);
        qprev[i] = s.qa(ap, i);
    }

    ChainSiteTensors out;
    out.r = rs_r12(qa, z, w, par);

    out.u_plus = Tensor(N);
    out.u_minus = Tensor(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            out.u_plus.ent(i, i, j, j) = e1(qprev[j] - qa[i] + par.eta, m);
            out.u_minus.ent(i, i, j, j) = -e1(qprev[i] - qa[j] + par.eta, m);
        }

    const CMat Lz = chain_lax(s, a, z, par);
    const CMat Lw = chain_lax(s, a, w, par);
    out.L1s12 = Tensor(N);
    out.L2s21 = Tensor(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx arg = qprev[i] - qa[j] + par.eta;
            out.L1s12.ent(i, j, i, i) = Lz(i, j) * (e1(z + arg, m) - e1(arg, m));
            out.L2s21.ent(i, i, i, j) = Lw(i, j) * (e1(w + arg, m) - e1(arg, m));
        }

    out.L1splus = out.L1s12 + tensor_first(Lz) * out.u_plus;
    out.L2sminus = out.L2s21 - tensor_second(Lw) * out.u_minus;
    return out;
}

Tensor chain_s12(const ChainState& s, int a, cplx z, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles_per_site, n = s.sites;
    const int ap = (a - 1 + n) % n;
    const CMat L = chain_lax(s, a, z, par);
    const CMat Linv = inverse(L, inversion_cond_limit);
    CMat d(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx arg = s.qa(ap, i) - s.qa(a, j) + par.eta;
            d(i, j) = L(i, j) * (e1(z + arg, m) - e1(arg, m));
        }
    Tensor t(N);
    for (int mth = 0; mth < N; ++mth)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) t.ent(mth, j, i, i) += Linv(mth, i) * d(i, j);
    return t;
}

MonodromyBreve monodromy_breve(const ChainState& s, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles_per_site, n = s.sites;
    const int a = 0;            // site 1
    const int ap = (n - 1) % n; // its predecessor, site n

    auto deta = [&](const CMat& L, cplx spec) {
        CMat d(N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                const cplx arg = s.qa(ap, i) - s.qa(a, j) + par.eta;
                d(i, j) = L(i, j) * (e1(spec + arg, m) - e1(arg, m));
            }
        return d;
    };

    const CMat Lz = chain_lax(s, a, z, par);
    const CMat Lw = chain_lax(s, a, w, par);
    const CMat Lzi = inverse(Lz, inversion_cond_limit);
    const CMat Lwi = inverse(Lw, inversion_cond_limit);
    const CMat Gz = deta(Lz, z) * Lzi;
    const CMat Gw = deta(Lw, w) * Lwi;

    MonodromyBreve out;
    out.s12 = Tensor(N);
    out.s21 = Tensor(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            out.s12.ent(i, j, i, i) = Gz(i, j);
            out.s21.ent(i, i, i, j) = Gw(i, j);
        }

    Tensor up(N), um(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            up.ent(i, i, j, j) = e1(s.qa(ap, j) - s.qa(a, i) + par.eta, m);
            um.ent(i, i, j, j) = -e1(s.qa(ap, i) - s.qa(a, j) + par.eta, m);
        }
    out.u_plus = tensor_first(Lz) * up * tensor_first(Lzi);
    out.u_minus = tensor_second(Lw) * um * tensor_second(Lwi);

    out.s_plus = out.s12 + out.u_plus;
    out.s_minus = out.s21 - out.u_minus;
    return out;
}

CMat rowgauge_lax(const RSState& s, cplx z, const ModelParams& par) {
    return rowgauge_lax<cplx>(sp(s.p), sp(s.q), z, par);
}

RowGaugeTensors rowgauge_tensors(const RSState& s, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = s.particles();

    RowGaugeTensors out;
    out.r = Tensor(N);
    const cplx e1zw = e1(z - w, m);
    for (int i = 0; i < N; ++i) {
        out.r.ent(i, i, i, i) += e1zw;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            out.r.ent(i, j, j, i) += kronecker_phi(z - w, s.q[i] - s.q[j], m);
            out.r.ent(i, i, j, j) += e1(s.q[i] - s.q[j], m);
        }
    }

    auto deta = [&](cplx spec) {
        const CMat L = rowgauge_lax(s, spec, par);
        CMat d(N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                const cplx qij = s.q[i] - s.q[j];
                d(i, j) = L(i, j) * (e1(spec + qij + par.eta, m) - e1(qij + par.eta, m));
            }
        return d;
    };

    const CMat dz = deta(z);
    const CMat dw = deta(w);
    const CMat sz = inverse(rowgauge_lax(s, z, par), inversion_cond_limit) * dz;
    const CMat sw = inverse(rowgauge_lax(s, w, par), inversion_cond_limit) * dw;

    Tensor s12(N), s21(N);
    out.L1s12 = Tensor(N);
    out.L2s21 = Tensor(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            s12.ent(i, j, j, j) = sz(i, j);
            s21.ent(j, j, i, j) = sw(i, j);
            out.L1s12.ent(i, j, j, j) = dz(i, j);
            out.L2s21.ent(j, j, i, j) = dw(i, j);
        }

    const auto [up, um] = rs_u_pm(s.q, par);
    out.r_plus = out.r + up + um;
    out.r_minus = out.r - s12 + s21;
    out.s_plus = s12 + up;
    out.s_minus = s21 - um;
    return out;
}

FieldTensors field_tensors(const FieldSnapshot& f, cplx z, cplx w, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = int(f.qx.size());
    const cplx nueps = par.nu * f.eps;

    FieldTensors out;
    out.r = rs_r12(f.qx, z, w, par);

    out.u_plus = Tensor(N);
    out.u_minus = Tensor(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            out.u_plus.ent(i, i, j, j) = e1(f.qxm[j] - f.qx[i] - nueps, m, field_guard);
            out.u_minus.ent(i, i, j, j) = e1(f.qxm[i] - f.qx[j] - nueps, m, field_guard);
        }

    out.U1s12 = Tensor(N);
    out.U2s21 = Tensor(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            const cplx arg = f.qxm[i] - f.qx[j] - nueps;
            const cplx dz = e1(z + arg, m, field_guard) - e1(arg, m, field_guard);
            const cplx dw = e1(w + arg, m, field_guard) - e1(arg, m, field_guard);
            out.U1s12.ent(i, j, i, i) = f.Uz(i, j) * dz;
            out.U2s21.ent(i, i, i, j) = f.Uw(i, j) * dw;
        }

    out.U1splus = out.U1s12 + tensor_first(f.Uz) * out.u_plus;
    out.U2sminus = out.U2s21 + tensor_second(f.Uw) * out.u_minus;
    out.U2sminus_alt = out.U2s21 - tensor_second(f.Uw) * out.u_minus;
    return out;
}

}  // namespace elax
