#ifndef ELAX_FIELDKIT_HPP
#define ELAX_FIELDKIT_HPP

#include <vector>

#include "elax/elliptic.hpp"
#include "elax/limits.hpp"
#include "elax/linalg.hpp"
#include "elax/states.hpp"

namespace elax {

/// Truncated Fourier representation of N periodic particle-fields on the
/// circle: q_i(x) = Q_i + sum_{|m| <= M} c_{i,m} e^{imx},
/// p_i(x) = sum_{|m| <= M} d_{i,m} e^{imx}. Coefficient index m + M.
struct FieldConfig {
    int N = 0;
    int M = 0;
    std::vector<cplx> Q;
    std::vector<std::vector<cplx>> c;
    std::vector<std::vector<cplx>> d;

    cplx coef_c(int i, int m) const { return c[i][std::size_t(m + M)]; }
    cplx coef_d(int i, int m) const { return d[i][std::size_t(m + M)]; }
};

/// Values and exact x-derivatives of all fields at one point. Shifted
/// evaluations live in separate FieldVals at x -+ eps.
template <class S>
struct FieldVals {
    std::vector<S> q, qx, qxx, qxxx;
    std::vector<S> p, px, pxx;
};

template <class S>
FieldVals<S> field_vals(const FieldConfig& cfg, const S& x) {
    FieldVals<S> v;
    const int N = cfg.N;
    v.q.assign(N, S{0.0});
    v.qx.assign(N, S{0.0});
    v.qxx.assign(N, S{0.0});
    v.qxxx.assign(N, S{0.0});
    v.p.assign(N, S{0.0});
    v.px.assign(N, S{0.0});
    v.pxx.assign(N, S{0.0});
    for (int i = 0; i < N; ++i) {
        v.q[i] = S{cfg.Q[i]};
        for (int m = -cfg.M; m <= cfg.M; ++m) {
            const cplx im = iunit * double(m);
            const S ph = exp(S{im} * x);
            v.q[i] += S{cfg.coef_c(i, m)} * ph;
            v.qx[i] += S{cfg.coef_c(i, m) * im} * ph;
            v.qxx[i] += S{cfg.coef_c(i, m) * im * im} * ph;
            v.qxxx[i] += S{cfg.coef_c(i, m) * im * im * im} * ph;
            v.p[i] += S{cfg.coef_d(i, m)} * ph;
            v.px[i] += S{cfg.coef_d(i, m) * im} * ph;
            v.pxx[i] += S{cfg.coef_d(i, m) * im * im} * ph;
        }
    }
    return v;
}

/// Field values at x together with the exact shifts x -+ eps.
template <class S>
struct FieldPoint {
    S x;
    cplx eps;
    FieldVals<S> at, minus, plus;
};

template <class S>
FieldPoint<S> eval_fieldpoint(const FieldConfig& cfg, const S& x, cplx eps) {
    return {x, eps, field_vals(cfg, x), field_vals(cfg, x - S{eps}), field_vals(cfg, x + S{eps})};
}

bool field_config_ok(const FieldConfig& cfg, const ModelParams& par, int nodes = 64,
                     double guard = 0.04);

/// Projects the position fields onto the balanced slice sum_i q_i(x) =
/// const. The CM field theory lives there: its U-V pair satisfies the
/// Zakharov-Shabat equation only when sum_i q_{i,x} vanishes identically.
void balance_field(FieldConfig& cfg);

/// Random small-amplitude configuration honoring the separation and
/// alpha^2 bounds; deterministic in the seed. With balanced set, the
/// configuration is projected onto the balanced slice before the checks.
FieldConfig sample_field(std::uint64_t seed, int N, int M, double amplitude, const ModelParams& par,
                         bool balanced = false);

std::string field_config_to_json(const FieldConfig& cfg, const ModelParams& par);
FieldConfig field_config_from_json(const std::string& text);

// ------------------------------------------------------- CM field theory

/// alpha_i^2 = k q_{i,x} + nu (exact) and kappa = -(1/(N nu)) sum p_j alpha_j^2.
/// alpha_i is the principal root; every downstream formula consumes only
/// alpha^2 and the branch-free combinations.
template <class S>
struct AlphaKappa {
    std::vector<S> alpha2;
    std::vector<S> alpha;
    S kappa;
};

template <class S>
AlphaKappa<S> alpha_kappa(const FieldVals<S>& v, const ModelParams& par) {
    const int N = int(v.q.size());
    AlphaKappa<S> out;
    out.alpha2.resize(N);
    out.alpha.resize(N);
    out.kappa = S{0.0};
    for (int i = 0; i < N; ++i) {
        out.alpha2[i] = S{par.k} * v.qx[i] + S{par.nu};
        if (std::abs(value_of(out.alpha2[i])) < 0.1 * std::abs(par.nu))
            throw degenerate_weight_error("alpha_kappa: alpha^2 too close to zero");
        out.alpha[i] = sqrt(out.alpha2[i]);
        out.kappa -= v.p[i] * out.alpha2[i];
    }
    out.kappa = out.kappa / S{double(N) * par.nu};
    return out;
}

/// Flow of the CM field Hamiltonian at one point, with the x-derivatives of
/// qdot needed by the time derivative of the U-matrix.
template <class S>
struct CmFieldFlow {
    std::vector<S> qdot, pdot;
    std::vector<S> qdot_x, qdot_xx;
};

CmFieldFlow<cplx> cm_field_eom(const FieldConfig& cfg, double x, const ModelParams& par);

/// U entries from explicit field data (lifted to duals for time
/// derivatives): U_ii = p_i + alpha_i^2 E1(z) - k^2 q_ixx / (2 alpha_i^2),
/// U_ij = phi(z, q_ij) alpha_j^2.
template <class S>
Mat<S> cm_field_U_from(const std::vector<S>& q, const std::vector<S>& p, const std::vector<S>& qx,
                       const std::vector<S>& qxx, cplx z, const ModelParams& par,
                       const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(q.size());
    Mat<S> U(N);
    const S e1z = e1(S{z}, m, g);
    for (int i = 0; i < N; ++i) {
        const S a2 = S{par.k} * qx[i] + S{par.nu};
        U(i, i) = p[i] + a2 * e1z - S{par.k * par.k} * qxx[i] / (S{2.0} * a2);
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const S a2j = S{par.k} * qx[j] + S{par.nu};
            U(i, j) = kronecker_phi(S{z}, q[i] - q[j], m, g) * a2j;
        }
    }
    return U;
}

CMat cm_field_U(const FieldConfig& cfg, double x, cplx z, const ModelParams& par);
CMat cm_field_V(const FieldConfig& cfg, double x, cplx z, const ModelParams& par);

/// Hamiltonian density in the compact alpha-form and in the derivative form;
/// the two agree pointwise.
cplx cm_field_density(const FieldConfig& cfg, double x, const ModelParams& par);
cplx cm_field_density_alt(const FieldConfig& cfg, double x, const ModelParams& par);
cplx cm_field_hamiltonian(const FieldConfig& cfg, const ModelParams& par, int quadrature_nodes = 64);

/// Max entry of dU/dt - k dV/dx + [U, V] at (x, z).
double cm_zs_residual(const FieldConfig& cfg, double x, cplx z, const ModelParams& par);

/// Independent time-derivative oracle: central difference of U between two
/// flow-consistent configurations advanced by Euler steps of the Fourier
/// coefficients.
CMat cm_dtU_euler_oracle(const FieldConfig& cfg, double x, cplx z, const ModelParams& par,
                         double delta = 1e-6);

// ------------------------------------------------------- RS field theory

template <class S>
S rs_field_h(const FieldConfig& cfg, const S& x, cplx eps, const ModelParams& par);

template <class S>
std::vector<S> rs_field_qdot(const FieldConfig& cfg, const S& x, cplx eps, const ModelParams& par);

std::vector<cplx> rs_field_pdot(const FieldConfig& cfg, double x, cplx eps, const ModelParams& par);

/// U entries from explicit data: qx_i = q_i(x), qm_i = q_i(x - eps).
template <class S>
Mat<S> rs_field_U_from(const std::vector<S>& qx, const std::vector<S>& qm, const std::vector<S>& p,
                       cplx z, cplx eps, const ModelParams& par) {
    const Modulus m = par.modulus();
    const LatticeGuard g{1e-9};
    const int N = int(qx.size());
    const cplx nueps = par.nu * eps;
    const S th_ne = theta(S{nueps}, m);
    Mat<S> U(N);
    for (int j = 0; j < N; ++j) {
        S weight = exp(S{-eps} * p[j]);
        for (int a = 0; a < N; ++a) weight = weight * theta(qx[j] - qm[a] + S{nueps}, m);
        S den = th_ne;
        for (int a = 0; a < N; ++a) {
            if (a == j) continue;
            den = den * theta(qx[j] - qx[a], m);
        }
        weight = weight / den;
        for (int i = 0; i < N; ++i)
            U(i, j) = kronecker_phi(S{z}, qm[i] - qx[j] - S{nueps}, m, g) * weight;
    }
    return U;
}

CMat rs_field_U(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par);
CMat rs_field_V(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par);

/// Max entry of dU/dt - (U(z,x) V(z,x) - V(z,x-eps) U(z,x)).
double rs_zs_residual(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par);

CMat rs_dtU_euler_oracle(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par,
                         double delta = 1e-6);

/// Expansion of the field U-matrix: c_{-1} = -(1/nu) 1 and nu c_0 is the
/// shifted-momentum form of the 2d CM U-matrix (with alpha^2 = q_x + nu).
LimitReport verify_field_U_limit(const FieldConfig& cfg, double x, cplx z, const ModelParams& par,
                                 const LaurentWindow& win = {});

/// The zero-order U-matrix of the continuous limit (alpha^2 = q_x + nu,
/// momenta shifted by the E1 sum). Enters every closed-form limit block.
CMat ulimit_U(const FieldConfig& cfg, double x, cplx z, const ModelParams& par);

}  // namespace elax

#endif
