#include "elax/fieldkit.hpp"

#include <json.hpp>

namespace elax {

namespace {

const LatticeGuard tight{1e-9};

/// kappa and its first two x-derivatives from explicit field values.
template <class S>
std::array<S, 3> kappa_derivs(const FieldVals<S>& v, const ModelParams& par) {
    const int N = int(v.q.size());
    S k0{0.0}, k1{0.0}, k2{0.0};
    for (int j = 0; j < N; ++j) {
        const S a2 = S{par.k} * v.qx[j] + S{par.nu};
        const S a2x = S{par.k} * v.qxx[j];
        const S a2xx = S{par.k} * v.qxxx[j];
        k0 += v.p[j] * a2;
        k1 += v.px[j] * a2 + v.p[j] * a2x;
        k2 += v.pxx[j] * a2 + S{2.0} * v.px[j] * a2x + v.p[j] * a2xx;
    }
    const S f = S{-1.0 / (double(N))} / S{par.nu};
    return {f * k0, f * k1, f * k2};
}

template <class S>
std::vector<S> qdot_vals(const FieldVals<S>& v, const ModelParams& par) {
    const int N = int(v.q.size());
    const auto kd = kappa_derivs(v, par);
    std::vector<S> out(N);
    for (int i = 0; i < N; ++i) {
        const S a2 = S{par.k} * v.qx[i] + S{par.nu};
        out[i] = S{-2.0} * a2 * (v.p[i] + kd[0]);
    }
    return out;
}

template <class S>
std::vector<S> qdot_x_vals(const FieldVals<S>& v, const ModelParams& par) {
    const int N = int(v.q.size());
    const auto kd = kappa_derivs(v, par);
    std::vector<S> out(N);
    for (int i = 0; i < N; ++i) {
        const S a2 = S{par.k} * v.qx[i] + S{par.nu};
        out[i] = S{-2.0} * (S{par.k} * v.qxx[i] * (v.p[i] + kd[0]) + a2 * (v.px[i] + kd[1]));
    }
    return out;
}

template <class S>
std::vector<S> qdot_xx_vals(const FieldVals<S>& v, const ModelParams& par) {
    const int N = int(v.q.size());
    const auto kd = kappa_derivs(v, par);
    std::vector<S> out(N);
    for (int i = 0; i < N; ++i) {
        const S a2 = S{par.k} * v.qx[i] + S{par.nu};
        out[i] = S{-2.0} * (S{par.k} * v.qxxx[i] * (v.p[i] + kd[0]) +
                            S{2.0 * par.k} * v.qxx[i] * (v.px[i] + kd[1]) + a2 * (v.pxx[i] + kd[2]));
    }
    return out;
}

/// alpha_{i,xx}/alpha_i reduced to alpha^2: k q_xxx/(2 a2) - k^2 q_xx^2/(4 a2^2).
template <class S>
S axx_over_a(const FieldVals<S>& v, int i, const ModelParams& par) {
    const S a2 = S{par.k} * v.qx[i] + S{par.nu};
    return S{par.k} * v.qxxx[i] / (S{2.0} * a2) -
           S{par.k * par.k} * v.qxx[i] * v.qxx[i] / (S{4.0} * a2 * a2);
}

template <class S>
Mat<S> cm_field_V_impl(const FieldConfig& cfg, const S& x, cplx z, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = cfg.N;
    const auto v = field_vals(cfg, x);
    const auto ak = alpha_kappa(v, par);
    const auto kd = kappa_derivs(v, par);
    const auto qd = qdot_vals(v, par);
    const auto qdx = qdot_x_vals(v, par);

    const S e1z = e1(S{z}, m, tight);
    const S wpz = wp(S{z}, m, tight);

    Mat<S> V(N);
    for (int i = 0; i < N; ++i) {
        // m^0_i
        S m0 = v.p[i] * v.p[i] + S{2.0} * kd[0] * v.p[i] + S{par.k * par.k} * axx_over_a(v, i, par);
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const S qij = v.q[i] - v.q[j];
            const S a2j = ak.alpha2[j];
            m0 -= (S{2.0} * a2j * a2j + ak.alpha2[i] * a2j) * wp(qij, m, tight) +
                  S{2.0 * par.k * par.k} * v.qxx[j] * zeta_w(qij, m, tight);
        }
        const S at_over_a = S{par.k} * qdx[i] / (S{2.0} * ak.alpha2[i]);
        V(i, i) = qd[i] * e1z - S{double(N) * par.nu} * ak.alpha2[i] * wpz - m0 - at_over_a;

        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const S qij = v.q[i] - v.q[j];
            S mij = v.p[i] + v.p[j] + S{2.0} * kd[0] -
                    S{par.k * par.k} * v.qxx[i] / (S{2.0} * ak.alpha2[i]) +
                    S{par.k * par.k} * v.qxx[j] / (S{2.0} * ak.alpha2[j]);
            // eta(q_i, q_l, q_j): the pair sum enters with the last two
            // arguments in this order (antisymmetric under their swap).
            for (int l = 0; l < N; ++l) {
                if (l == i || l == j) continue;
                mij -= ak.alpha2[l] * (e1(v.q[i] - v.q[j], m, tight) + e1(v.q[j] - v.q[l], m, tight) +
                                       e1(v.q[l] - v.q[i], m, tight));
            }
            const S phi = kronecker_phi(S{z}, qij, m, tight);
            V(i, j) = (S{double(N) * par.nu} * phi_du(S{z}, qij, m, tight) -
                       S{double(N) * par.nu} * e1z * phi - mij * phi) *
                      ak.alpha2[j];
        }
    }
    return V;
}

int euler_modes(const FieldConfig& cfg) { return std::min(24, cfg.M + 20); }

/// One Euler step of the Fourier data along a pointwise flow.
template <class QF, class PF>
FieldConfig euler_advance(const FieldConfig& cfg, double delta, QF&& qdot_at, PF&& pdot_at) {
    const int K = 64;
    const int Mbig = euler_modes(cfg);
    FieldConfig out;
    out.N = cfg.N;
    out.M = Mbig;
    out.Q = cfg.Q;
    out.c.assign(cfg.N, std::vector<cplx>(2 * Mbig + 1, cplx{0.0}));
    out.d.assign(cfg.N, std::vector<cplx>(2 * Mbig + 1, cplx{0.0}));
    for (int i = 0; i < cfg.N; ++i)
        for (int m = -cfg.M; m <= cfg.M; ++m) {
            out.c[i][std::size_t(m + Mbig)] = cfg.coef_c(i, m);
            out.d[i][std::size_t(m + Mbig)] = cfg.coef_d(i, m);
        }

    std::vector<std::vector<cplx>> qd(cfg.N, std::vector<cplx>(K)), pd(cfg.N, std::vector<cplx>(K));
    for (int j = 0; j < K; ++j) {
        const double xj = 2.0 * pi * j / K;
        const auto qv = qdot_at(xj);
        const auto pv = pdot_at(xj);
        for (int i = 0; i < cfg.N; ++i) {
            qd[i][j] = qv[i];
            pd[i][j] = pv[i];
        }
    }
    for (int i = 0; i < cfg.N; ++i)
        for (int m = -Mbig; m <= Mbig; ++m) {
            cplx qm{0.0}, pm{0.0};
            for (int j = 0; j < K; ++j) {
                const double xj = 2.0 * pi * j / K;
                const cplx ph = std::exp(-iunit * double(m) * xj);
                qm += qd[i][j] * ph;
                pm += pd[i][j] * ph;
            }
            qm /= double(K);
            pm /= double(K);
            if (m == 0)
                out.Q[i] += delta * qm;
            else
                out.c[i][std::size_t(m + Mbig)] += delta * qm;
            out.d[i][std::size_t(m + Mbig)] += delta * pm;
        }
    return out;
}

}  // namespace

bool field_config_ok(const FieldConfig& cfg, const ModelParams& par, int nodes, double guard) {
    for (int j = 0; j < nodes; ++j) {
        const double x = 2.0 * pi * j / nodes;
        const auto v = field_vals(cfg, cplx{x});
        for (int a = 0; a < cfg.N; ++a) {
            const cplx a2 = par.k * v.qx[a] + par.nu;
            if (std::abs(a2) < 0.1 * std::abs(par.nu)) return false;
            for (int b = 0; b < cfg.N; ++b)
                if (a != b && lattice_distance(v.q[a] - v.q[b], par.tau) < guard) return false;
        }
    }
    return true;
}

void balance_field(FieldConfig& cfg) {
    for (int m = -cfg.M; m <= cfg.M; ++m) {
        if (m == 0) continue;
        cplx s{0.0};
        for (int i = 0; i < cfg.N; ++i) s += cfg.c[i][std::size_t(m + cfg.M)];
        for (int i = 0; i < cfg.N; ++i) cfg.c[i][std::size_t(m + cfg.M)] -= s / double(cfg.N);
    }
}

FieldConfig sample_field(std::uint64_t seed, int N, int M, double amplitude, const ModelParams& par,
                         bool balanced) {
    Rng rng(seed);
    for (int attempt = 0; attempt < sampler_max_rejections; ++attempt) {
        FieldConfig cfg;
        cfg.N = N;
        cfg.M = M;
        cfg.Q.resize(N);
        cfg.c.assign(N, std::vector<cplx>(2 * M + 1, cplx{0.0}));
        cfg.d.assign(N, std::vector<cplx>(2 * M + 1, cplx{0.0}));
        for (int i = 0; i < N; ++i) {
            cfg.Q[i] = rng.in_cell(par.tau);
            for (int m = -M; m <= M; ++m) {
                const double damp = amplitude / (1.0 + double(m) * double(m));
                if (m != 0) cfg.c[i][std::size_t(m + M)] = damp * rng.in_unit_disk();
                cfg.d[i][std::size_t(m + M)] = (m == 0 ? 0.5 : damp) * rng.in_unit_disk();
            }
        }
        if (balanced) balance_field(cfg);
        if (field_config_ok(cfg, par)) return cfg;
    }
    throw sampler_exhausted_error("sample_field: rejection limit reached");
}

std::string field_config_to_json(const FieldConfig& cfg, const ModelParams& par) {
    nlohmann::ordered_json j;
    j["N"] = cfg.N;
    j["M"] = cfg.M;
    auto carr = nlohmann::ordered_json::array();
    for (const auto& z : cfg.Q) carr.push_back({z.real(), z.imag()});
    j["Q"] = std::move(carr);
    auto pack = [&](const std::vector<std::vector<cplx>>& rows) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            auto r = nlohmann::ordered_json::array();
            for (const auto& z : row) r.push_back({z.real(), z.imag()});
            arr.push_back(std::move(r));
        }
        return arr;
    };
    j["c"] = pack(cfg.c);
    j["d"] = pack(cfg.d);
    nlohmann::ordered_json pj;
    pj["tau"] = {par.tau.real(), par.tau.imag()};
    pj["nu"] = {par.nu.real(), par.nu.imag()};
    pj["k"] = {par.k.real(), par.k.imag()};
    j["params"] = std::move(pj);
    return j.dump();
}

FieldConfig field_config_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    FieldConfig cfg;
    cfg.N = j.at("N").get<int>();
    cfg.M = j.at("M").get<int>();
    for (const auto& z : j.at("Q")) cfg.Q.push_back({z.at(0).get<double>(), z.at(1).get<double>()});
    auto unpack = [&](const nlohmann::json& arr) {
        std::vector<std::vector<cplx>> rows;
        for (const auto& row : arr) {
            std::vector<cplx> r;
            for (const auto& z : row) r.push_back({z.at(0).get<double>(), z.at(1).get<double>()});
            rows.push_back(std::move(r));
        }
        return rows;
    };
    cfg.c = unpack(j.at("c"));
    cfg.d = unpack(j.at("d"));
    return cfg;
}

namespace {

/// Variational pieces of the density F(q, q_x, q_xx): the momentum flow is
/// pdot_i = -dF/dq_i + d_x(dF/dq_ix) - d^2_x(dF/dq_ixx), with the last two
/// derivatives taken exactly through a dual-lifted x.
template <class S>
S density_dqx(const FieldConfig& cfg, const S& x, int i, const ModelParams& par) {
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, x);
    const int N = cfg.N;
    const auto kd = kappa_derivs(v, par);
    const S Ai = S{par.k} * v.qx[i] + S{par.nu};
    S w = S{-par.k} * v.p[i] * v.p[i] - S{2.0 * par.k} * kd[0] * v.p[i] -
          S{0.25} * ipow(S{par.k}, 5) * v.qxx[i] * v.qxx[i] / (Ai * Ai);
    for (int b = 0; b < N; ++b) {
        if (b == i) continue;
        const S Ab = S{par.k} * v.qx[b] + S{par.nu};
        const S qib = v.q[i] - v.q[b];
        w += S{par.k} * (S{2.0} * Ai * Ab + Ab * Ab - S{2.0 * par.nu} * (Ai - Ab)) * wp(qib, m, tight);
        w += ipow(S{par.k}, 3) * v.qxx[b] * zeta_w(qib, m, tight);
    }
    return w;
}

/// d/dx of dF/dq_ixx in closed form (consumes derivatives up to third order;
/// its own x-derivative then reaches the fourth exactly via duals).
template <class S>
S density_dqxx_dx(const FieldConfig& cfg, const S& x, int i, const ModelParams& par) {
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, x);
    const int N = cfg.N;
    const S Ai = S{par.k} * v.qx[i] + S{par.nu};
    S g = S{0.5} * ipow(S{par.k}, 4) *
          (v.qxxx[i] / Ai - S{par.k} * v.qxx[i] * v.qxx[i] / (Ai * Ai));
    for (int b = 0; b < N; ++b) {
        if (b == i) continue;
        const S qib = v.q[i] - v.q[b];
        g -= ipow(S{par.k}, 3) *
             (v.qxx[b] * zeta_w(qib, m, tight) - v.qx[b] * wp(qib, m, tight) * (v.qx[i] - v.qx[b]));
    }
    return g;
}

}  // namespace

CmFieldFlow<cplx> cm_field_eom(const FieldConfig& cfg, double x, const ModelParams& par) {
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, cplx{x});
    const int N = cfg.N;

    CmFieldFlow<cplx> flow;
    flow.qdot = qdot_vals(v, par);
    flow.qdot_x = qdot_x_vals(v, par);
    flow.qdot_xx = qdot_xx_vals(v, par);
    flow.pdot.assign(N, cplx{0.0});

    for (int i = 0; i < N; ++i) {
        // -dF/dq_i: the wp' and Z wp pair terms of the density.
        cplx pd{0.0};
        for (int b = 0; b < N; ++b) {
            if (b == i) continue;
            const cplx Ai = par.k * v.qx[i] + par.nu;
            const cplx Ab = par.k * v.qx[b] + par.nu;
            const cplx qib = v.q[i] - v.q[b];
            const cplx P = Ai * Ai * Ab + Ai * Ab * Ab - par.nu * (Ai - Ab) * (Ai - Ab);
            const cplx Z = v.qx[i] * v.qxx[b] - v.qxx[i] * v.qx[b];
            pd -= P * wp_d(qib, m, tight);
            pd += par.k * par.k * par.k * Z * wp(qib, m, tight);
        }
        pd += density_dqx(cfg, Dual{cplx{x}, 1.0}, i, par).t;
        pd -= density_dqxx_dx(cfg, Dual{cplx{x}, 1.0}, i, par).t;
        flow.pdot[i] = pd;
    }
    return flow;
}

CMat cm_field_U(const FieldConfig& cfg, double x, cplx z, const ModelParams& par) {
    const auto v = field_vals(cfg, cplx{x});
    return cm_field_U_from(v.q, v.p, v.qx, v.qxx, z, par, tight);
}

CMat cm_field_V(const FieldConfig& cfg, double x, cplx z, const ModelParams& par) {
    return cm_field_V_impl(cfg, cplx{x}, z, par);
}

cplx cm_field_density(const FieldConfig& cfg, double x, const ModelParams& par) {
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, cplx{x});
    const auto ak = alpha_kappa(v, par);
    const int N = cfg.N;

    cplx d{0.0};
    for (int i = 0; i < N; ++i) {
        d -= v.p[i] * v.p[i] * ak.alpha2[i];
        // k^2 alpha_x^2 through alpha alpha_x = k q_xx / 2.
        d += par.k * par.k * par.k * par.k * v.qxx[i] * v.qxx[i] / (4.0 * ak.alpha2[i]);
    }
    d += double(N) * par.nu * ak.kappa * ak.kappa;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const cplx qij = v.q[i] - v.q[j];
            const cplx a2i = ak.alpha2[i], a2j = ak.alpha2[j];
            const cplx a2ix = par.k * v.qxx[i], a2jx = par.k * v.qxx[j];
            d += 0.5 * par.k * (a2i * a2jx - a2j * a2ix + par.nu * (a2ix - a2jx)) * zeta_w(qij, m, tight);
            d += 0.5 * (a2i * a2i * a2j + a2i * a2j * a2j - par.nu * (a2i - a2j) * (a2i - a2j)) *
                 wp(qij, m, tight);
        }
    return d;
}

cplx cm_field_density_alt(const FieldConfig& cfg, double x, const ModelParams& par) {
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, cplx{x});
    const int N = cfg.N;

    cplx d{0.0};
    cplx mom{0.0};
    for (int j = 0; j < N; ++j) {
        const cplx a2 = par.k * v.qx[j] + par.nu;
        d -= v.p[j] * v.p[j] * a2;
        mom += v.p[j] * a2;
        d += 0.25 * par.k * par.k * par.k * par.k * v.qxx[j] * v.qxx[j] / a2;
    }
    d += mom * mom / (double(N) * par.nu);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            const cplx qij = v.q[i] - v.q[j];
            const cplx a2i = par.k * v.qx[i] + par.nu, a2j = par.k * v.qx[j] + par.nu;
            d += 0.5 *
                 (a2i * a2i * a2j + a2i * a2j * a2j -
                  par.nu * par.k * par.k * (v.qx[i] - v.qx[j]) * (v.qx[i] - v.qx[j])) *
                 wp(qij, m, tight);
            d += 0.5 * par.k * par.k * par.k * (v.qx[i] * v.qxx[j] - v.qxx[i] * v.qx[j]) *
                 zeta_w(qij, m, tight);
        }
    return d;
}

cplx cm_field_hamiltonian(const FieldConfig& cfg, const ModelParams& par, int quadrature_nodes) {
    cplx acc{0.0};
    for (int j = 0; j < quadrature_nodes; ++j) {
        const double x = 2.0 * pi * j / quadrature_nodes;
        acc += cm_field_density(cfg, x, par);
    }
    return acc * (2.0 * pi / quadrature_nodes);
}

double cm_zs_residual(const FieldConfig& cfg, double x, cplx z, const ModelParams& par) {
    const auto v = field_vals(cfg, cplx{x});
    const auto flow = cm_field_eom(cfg, x, par);
    const int N = cfg.N;

    std::vector<Dual> q(N), p(N), qx(N), qxx(N);
    for (int i = 0; i < N; ++i) {
        q[i] = Dual{v.q[i], flow.qdot[i]};
        p[i] = Dual{v.p[i], flow.pdot[i]};
        qx[i] = Dual{v.qx[i], flow.qdot_x[i]};
        qxx[i] = Dual{v.qxx[i], flow.qdot_xx[i]};
    }
    const DMat Ud = cm_field_U_from(q, p, qx, qxx, z, par, tight);
    const CMat dtU = tangent_of(Ud);
    const CMat U = value_of(Ud);

    const auto Vd = cm_field_V_impl(cfg, Dual{cplx{x}, 1.0}, z, par);
    const CMat dxV = tangent_of(Vd);
    const CMat V = value_of(Vd);

    CMat res = dtU - (dxV * par.k) + commutator(U, V);
    return res.max_abs();
}

CMat cm_dtU_euler_oracle(const FieldConfig& cfg, double x, cplx z, const ModelParams& par, double delta) {
    auto qdot_at = [&](double xx) { return cm_field_eom(cfg, xx, par).qdot; };
    auto pdot_at = [&](double xx) { return cm_field_eom(cfg, xx, par).pdot; };
    const FieldConfig up = euler_advance(cfg, delta, qdot_at, pdot_at);
    const FieldConfig dn = euler_advance(cfg, -delta, qdot_at, pdot_at);
    const CMat a = cm_field_U(up, x, z, par);
    const CMat b = cm_field_U(dn, x, z, par);
    return (a - b) * (1.0 / (2.0 * delta));
}

// ------------------------------------------------------- RS field theory

template <class S>
S rs_field_h(const FieldConfig& cfg, const S& x, cplx eps, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = cfg.N;
    const auto at = field_vals(cfg, x);
    const auto shifted = field_vals(cfg, x - S{eps});
    const cplx nueps = par.nu * eps;
    const S th_ne = theta(S{nueps}, m);

    S h{0.0};
    for (int j = 0; j < N; ++j) {
        S term = exp(S{-eps} * at.p[j]);
        for (int l = 0; l < N; ++l) term = term * theta(at.q[j] - shifted.q[l] + S{nueps}, m);
        S den = th_ne;
        for (int l = 0; l < N; ++l) {
            if (l == j) continue;
            den = den * theta(at.q[j] - at.q[l], m);
        }
        h += term / den;
    }
    if (std::abs(value_of(h)) < 1e-12) throw degenerate_weight_error("rs_field_h: vanishing weight sum");
    return h;
}

template <class S>
std::vector<S> rs_field_qdot(const FieldConfig& cfg, const S& x, cplx eps, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = cfg.N;
    const auto at = field_vals(cfg, x);
    const auto shifted = field_vals(cfg, x - S{eps});
    const cplx nueps = par.nu * eps;
    const S h = rs_field_h(cfg, x, eps, par);

    std::vector<S> out(N);
    for (int i = 0; i < N; ++i) {
        S num = exp(S{-eps} * at.p[i]);
        for (int j = 0; j < N; ++j) num = num * theta(at.q[i] - shifted.q[j] + S{nueps}, m);
        S den{1.0};
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            den = den * theta(at.q[i] - at.q[j], m);
        }
        out[i] = S{-eps} * num / (den * h);
    }
    return out;
}

template cplx rs_field_h<cplx>(const FieldConfig&, const cplx&, cplx, const ModelParams&);
template Dual rs_field_h<Dual>(const FieldConfig&, const Dual&, cplx, const ModelParams&);
template std::vector<cplx> rs_field_qdot<cplx>(const FieldConfig&, const cplx&, cplx, const ModelParams&);
template std::vector<Dual> rs_field_qdot<Dual>(const FieldConfig&, const Dual&, cplx, const ModelParams&);

std::vector<cplx> rs_field_pdot(const FieldConfig& cfg, double x, cplx eps, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = cfg.N;
    const auto at = field_vals(cfg, cplx{x});
    const auto minus = field_vals(cfg, cplx{x} - eps);
    const auto plus = field_vals(cfg, cplx{x} + eps);
    const cplx nueps = par.nu * eps;
    const auto qd = rs_field_qdot(cfg, cplx{x}, eps, par);
    const auto qdp = rs_field_qdot(cfg, cplx{x} + eps, eps, par);

    std::vector<cplx> out(N);
    for (int i = 0; i < N; ++i) {
        cplx acc{0.0};
        for (int l = 0; l < N; ++l) {
            acc += qd[i] * e1(at.q[i] - minus.q[l] + nueps, m, tight);
            acc += qdp[l] * e1(at.q[i] - plus.q[l] - nueps, m, tight);
            if (l != i) acc -= (qd[i] + qd[l]) * e1(at.q[i] - at.q[l], m, tight);
        }
        out[i] = acc / eps;
    }
    return out;
}

namespace {

template <class S>
Mat<S> rs_field_V_impl(const FieldConfig& cfg, const S& x, cplx z, cplx eps, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = cfg.N;
    const auto at = field_vals(cfg, x);
    const auto plus = field_vals(cfg, x + S{eps});
    const cplx nueps = par.nu * eps;
    const auto qd = rs_field_qdot(cfg, x, eps, par);
    const auto qdp = rs_field_qdot(cfg, x + S{eps}, eps, par);
    const S e1z = e1(S{z}, m, tight);

    Mat<S> V(N);
    for (int i = 0; i < N; ++i) {
        S diag = -e1z * qd[i];
        for (int mm = 0; mm < N; ++mm) {
            if (mm != i) diag += qd[mm] * e1(at.q[i] - at.q[mm], m, tight);
            diag -= qdp[mm] * e1(at.q[i] - plus.q[mm] - S{nueps}, m, tight);
        }
        V(i, i) = diag;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            V(i, j) = -kronecker_phi(S{z}, at.q[i] - at.q[j], m, tight) * qd[j];
        }
    }
    return V;
}

}  // namespace

CMat rs_field_U(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par) {
    const auto at = field_vals(cfg, cplx{x});
    const auto minus = field_vals(cfg, cplx{x} - eps);
    return rs_field_U_from(at.q, minus.q, at.p, z, eps, par);
}

CMat rs_field_V(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par) {
    return rs_field_V_impl(cfg, cplx{x}, z, eps, par);
}

double rs_zs_residual(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par) {
    const int N = cfg.N;
    const auto at = field_vals(cfg, cplx{x});
    const auto minus = field_vals(cfg, cplx{x} - eps);
    const auto qd = rs_field_qdot(cfg, cplx{x}, eps, par);
    const auto qdm = rs_field_qdot(cfg, cplx{x} - eps, eps, par);
    const auto pd = rs_field_pdot(cfg, x, eps, par);

    std::vector<Dual> qx(N), qm(N), p(N);
    for (int i = 0; i < N; ++i) {
        qx[i] = Dual{at.q[i], qd[i]};
        qm[i] = Dual{minus.q[i], qdm[i]};
        p[i] = Dual{at.p[i], pd[i]};
    }
    const DMat Ud = rs_field_U_from(qx, qm, p, z, eps, par);
    const CMat dtU = tangent_of(Ud);
    const CMat U = value_of(Ud);

    const CMat Vx = rs_field_V(cfg, x, z, eps, par);
    const CMat Vshift = rs_field_V_impl(cfg, cplx{x} - eps, z, eps, par);
    const CMat rhs = U * Vx - Vshift * U;
    return (dtU - rhs).max_abs();
}

CMat rs_dtU_euler_oracle(const FieldConfig& cfg, double x, cplx z, cplx eps, const ModelParams& par,
                         double delta) {
    auto qdot_at = [&](double xx) { return rs_field_qdot(cfg, cplx{xx}, eps, par); };
    auto pdot_at = [&](double xx) { return rs_field_pdot(cfg, xx, eps, par); };
    const FieldConfig up = euler_advance(cfg, delta, qdot_at, pdot_at);
    const FieldConfig dn = euler_advance(cfg, -delta, qdot_at, pdot_at);
    const CMat a = rs_field_U(up, x, z, eps, par);
    const CMat b = rs_field_U(dn, x, z, eps, par);
    return (a - b) * (1.0 / (2.0 * delta));
}

CMat ulimit_U(const FieldConfig& cfg, double x, cplx z, const ModelParams& par) {
    const Modulus m = par.modulus();
    const int N = cfg.N;
    const auto v = field_vals(cfg, cplx{x});
    CMat U(N);
    for (int i = 0; i < N; ++i) {
        cplx pt = v.p[i];
        const cplx a2i = v.qx[i] + par.nu;
        for (int mm = 0; mm < N; ++mm) {
            if (mm == i) continue;
            pt -= (v.qx[mm] + par.nu) * e1(v.q[i] - v.q[mm], m, tight);
        }
        U(i, i) = pt + e1(z, m, tight) * a2i;
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            U(i, j) = (v.qx[j] + par.nu) * kronecker_phi(z, v.q[i] - v.q[j], m, tight);
        }
    }
    return U;
}

LimitReport verify_field_U_limit(const FieldConfig& cfg, double x, cplx z, const ModelParams& par,
                                 const LaurentWindow& win) {
    LimitReport rep;
    rep.check_id = "field-U";

    auto fn = [&](cplx eps) { return rs_field_U(cfg, x, z, eps, par); };
    const auto coeffs = laurent_coeffs(fn, win);

    const int N = cfg.N;
    const CMat target_m1 = CMat::identity(N) * (-1.0 / par.nu);
    const CMat target_0 = ulimit_U(cfg, x, z, par) * (1.0 / par.nu);
    rep.checks.push_back(
        {"order-minus-1", (coeffs.at(-1) - target_m1).max_abs(), target_m1.max_abs()});
    rep.checks.push_back({"order-zero", (coeffs.at(0) - target_0).max_abs(), target_0.max_abs()});
    if (coeffs.count(-2))
        rep.checks.push_back({"order-minus-2-vanishes", coeffs.at(-2).max_abs(), target_0.max_abs()});

    // Weight factor alone: c_0 = alpha_j^2/nu and the first-order coefficient
    // with the second-order shift of the diagonal theta argument included.
    const Modulus m = par.modulus();
    const auto v = field_vals(cfg, cplx{x});
    auto weights = [&](cplx eps) {
        const auto minus = field_vals(cfg, cplx{x} - eps);
        const cplx nueps = par.nu * eps;
        CMat out(N);
        for (int j = 0; j < N; ++j) {
            cplx w{1.0};
            for (int a = 0; a < N; ++a) w *= theta(v.q[j] - minus.q[a] + nueps, m);
            cplx den = theta(nueps, m);
            for (int a = 0; a < N; ++a) {
                if (a == j) continue;
                den *= theta(v.q[j] - v.q[a], m);
            }
            out(j, j) = w / den;
        }
        return out;
    };
    const auto wc = laurent_coeffs(weights, win);
    CMat w0(N), w1(N);
    for (int j = 0; j < N; ++j) {
        const cplx a2j = v.qx[j] + par.nu;
        w0(j, j) = a2j / par.nu;
        cplx corr = -v.qxx[j] / (2.0 * a2j);
        for (int a = 0; a < N; ++a) {
            if (a == j) continue;
            corr += (v.qx[a] + par.nu) * e1(v.q[j] - v.q[a], m, tight);
        }
        w1(j, j) = a2j / par.nu * corr;
    }
    rep.checks.push_back({"weight-zero", (wc.at(0) - w0).max_abs(), w0.max_abs()});
    rep.checks.push_back({"weight-first", (wc.at(1) - w1).max_abs(), w1.max_abs()});

    rep.finish(1e-7);
    return rep;
}

}  // namespace elax
