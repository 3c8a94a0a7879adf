#include "elax/flows.hpp"

#include <algorithm>
#include <sstream>

#include "elax/diffkit.hpp"

namespace elax {

namespace {

using Deriv = std::vector<cplx> (*)(const std::vector<cplx>&, const ModelParams&);

std::vector<cplx> pack_eom(const std::pair<std::vector<cplx>, std::vector<cplx>>& eom) {
    // coordinate layout [p, q]  ->  derivative layout [pdot, qdot]
    std::vector<cplx> dy(eom.second);
    dy.insert(dy.end(), eom.first.begin(), eom.first.end());
    return dy;
}

std::vector<cplx> deriv_rs(const std::vector<cplx>& y, const ModelParams& par) {
    const std::size_t D = y.size() / 2;
    const std::span<const cplx> p(y.data(), D), q(y.data() + D, D);
    return pack_eom(rs_eom<cplx>(p, q, par));
}

std::vector<cplx> deriv_cm(const std::vector<cplx>& y, const ModelParams& par) {
    const std::size_t D = y.size() / 2;
    const std::span<const cplx> p(y.data(), D), q(y.data() + D, D);
    return pack_eom(cm_eom<cplx>(p, q, par));
}

std::vector<cplx> deriv_chain(const std::vector<cplx>& y, const ModelParams& par) {
    const std::size_t D = y.size() / 2;
    ChainState s;
    s.sites = par.n;
    s.particles_per_site = par.N;
    s.p.assign(y.begin(), y.begin() + D);
    s.q.assign(y.begin() + D, y.end());
    return pack_eom(chain_eom(s, par));
}

std::vector<cplx> rk4_step(Deriv f, const std::vector<cplx>& y, double h, const ModelParams& par) {
    const std::size_t D = y.size();
    auto axpy = [&](const std::vector<cplx>& base, const std::vector<cplx>& k, double a) {
        std::vector<cplx> out(D);
        for (std::size_t i = 0; i < D; ++i) out[i] = base[i] + a * k[i];
        return out;
    };
    const auto k1 = f(y, par);
    const auto k2 = f(axpy(y, k1, h / 2.0), par);
    const auto k3 = f(axpy(y, k2, h / 2.0), par);
    const auto k4 = f(axpy(y, k3, h), par);
    std::vector<cplx> out(D);
    for (std::size_t i = 0; i < D; ++i)
        out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

bool state_ok(FlowModel model, const std::vector<cplx>& y, const ModelParams& par, double guard) {
    const std::size_t D = y.size() / 2;
    if (model == FlowModel::chain) {
        ChainState s;
        s.sites = par.n;
        s.particles_per_site = par.N;
        s.p.assign(y.begin(), y.begin() + D);
        s.q.assign(y.begin() + D, y.end());
        return chain_state_ok(s, par, guard);
    }
    RSState s;
    s.p.assign(y.begin(), y.begin() + D);
    s.q.assign(y.begin() + D, y.end());
    if (model == FlowModel::rs) return rs_state_ok(s, par, guard);
    // CM flow needs only the pairwise separations.
    for (std::size_t i = 0; i < D; ++i)
        for (std::size_t j = 0; j < D; ++j)
            if (i != j && lattice_distance(s.q[i] - s.q[j], par.tau) < guard) return false;
    return true;
}

Trajectory run(FlowModel model, std::vector<cplx> y0, int sites, int particles, double t_end, double dt,
               const ModelParams& par, Scheme scheme, double guard) {
    Deriv f = model == FlowModel::rs ? deriv_rs : (model == FlowModel::cm ? deriv_cm : deriv_chain);
    Trajectory traj;
    traj.model = model;
    traj.scheme = scheme;
    traj.dt = dt;
    traj.sites = sites;
    traj.particles = particles;
    traj.times.push_back(0.0);
    traj.states.push_back(y0);

    double t = 0.0;
    double h = dt;
    std::vector<cplx> y = std::move(y0);
    const double adapt_tol = 1e-10;
    while (t < t_end - 1e-15) {
        h = std::min(h, t_end - t);
        if (h < 1e-12) throw step_underflow_error("integrate: step size underflow");
        std::vector<cplx> next;
        if (scheme == Scheme::rk4) {
            next = rk4_step(f, y, h, par);
        } else {
            const auto full = rk4_step(f, y, h, par);
            const auto half = rk4_step(f, rk4_step(f, y, h / 2.0, par), h / 2.0, par);
            double err = 0.0, scale = 1.0;
            for (std::size_t i = 0; i < y.size(); ++i) {
                err = std::max(err, std::abs(full[i] - half[i]));
                scale = std::max(scale, std::abs(half[i]));
            }
            if (err > adapt_tol * scale) {
                h *= 0.5;
                continue;
            }
            next = half;
            if (err < adapt_tol * scale / 64.0) h = std::min(h * 2.0, dt * 8.0);
        }
        if (!state_ok(model, next, par, guard))
            throw guard_violation_error("integrate: trajectory entered the guard region", t + h);
        t += h;
        y = std::move(next);
        traj.times.push_back(t);
        traj.states.push_back(y);
    }
    return traj;
}

}  // namespace

RSState Trajectory::rs_at(std::size_t idx) const {
    const auto& y = states[idx];
    const std::size_t D = y.size() / 2;
    RSState s;
    s.p.assign(y.begin(), y.begin() + D);
    s.q.assign(y.begin() + D, y.end());
    return s;
}

ChainState Trajectory::chain_at(std::size_t idx) const {
    const auto& y = states[idx];
    const std::size_t D = y.size() / 2;
    ChainState s;
    s.sites = sites;
    s.particles_per_site = particles;
    s.p.assign(y.begin(), y.begin() + D);
    s.q.assign(y.begin() + D, y.end());
    return s;
}

Trajectory integrate(FlowModel model, const RSState& s0, double t_end, double dt, const ModelParams& par,
                     Scheme scheme, double guard) {
    if (model == FlowModel::chain) throw std::invalid_argument("integrate: chain flow needs a ChainState");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    return run(model, pack_coords(s0.p, s0.q), 1, s0.particles(), t_end, dt, par, scheme, guard);
}

Trajectory integrate(FlowModel model, const ChainState& s0, double t_end, double dt, const ModelParams& par,
                     Scheme scheme, double guard) {
    if (model != FlowModel::chain) throw std::invalid_argument("integrate: state kind mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    return run(model, pack_coords(s0.p, s0.q), s0.sites, s0.particles_per_site, t_end, dt, par, scheme,
               guard);
}

double lax_residual_rs(const RSState& s, cplx z, const ModelParams& par) {
    const auto coords = pack_coords(s.p, s.q);
    const std::span<const cplx> cs(coords);
    const std::size_t D = s.p.size();

    auto H = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_hamiltonian<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), par);
    };
    auto L = [&](std::span<const Dual> c) {
        auto [p, q] = unpack_coords(c);
        return rs_lax<Dual>(std::span<const Dual>(p), std::span<const Dual>(q), z, par);
    };
    const auto gh = partials(H, cs);
    const auto dl = matrix_partials(L, cs);
    const int N = s.particles();
    CMat bracket(N);
    for (std::size_t m = 0; m < D; ++m)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                bracket(i, j) += gh[m] * dl[D + m](i, j) - gh[D + m] * dl[m](i, j);

    const CMat rhs = commutator(rs_lax(s, z, par), rs_M(s, z, par));
    return (bracket - rhs).max_abs();
}

ConservationReport conservation_report(const Trajectory& traj, const ModelParams& par,
                                       const std::vector<cplx>& z_samples, const std::vector<int>& k_list) {
    ConservationReport rep;
    auto push = [&](double t, const std::string& id, cplx v, cplx v0) {
        const double drift = std::abs(v - v0) / std::max(1.0, std::abs(v0));
        rep.rows.push_back({t, id, v, drift});
        auto [it, inserted] = rep.max_drift.try_emplace(id, drift);
        if (!inserted) it->second = std::max(it->second, drift);
    };

    // The CM flow is generated by the plain-momentum Hamiltonian, so its
    // spectral invariants are those of the Lax with plain momenta on the
    // diagonal (the shifted-momentum form belongs to the mapped flow).
    auto matrix_at = [&](std::size_t idx, cplx z) {
        if (traj.model == FlowModel::chain) return chain_monodromy(traj.chain_at(idx), z, par);
        const RSState s = traj.rs_at(idx);
        if (traj.model == FlowModel::rs) return rs_lax(s, z, par);
        const std::span<const cplx> p(s.p.data(), s.p.size()), q(s.q.data(), s.q.size());
        return cm_lax_from_ptilde<cplx>(p, q, z, par);
    };
    // For the chain the branch-free invariant exp(H/c) is tracked; the
    // principal value of c sum log h can hop by 2 pi i c along a flow.
    auto hamiltonian_at = [&](std::size_t idx) {
        if (traj.model == FlowModel::chain)
            return std::exp(chain_hamiltonian(traj.chain_at(idx), par) / par.c);
        const RSState s = traj.rs_at(idx);
        return traj.model == FlowModel::rs ? rs_hamiltonian(s, par) : cm_hamiltonian(s, par);
    };

    std::vector<std::size_t> samples;
    const std::size_t stride = std::max<std::size_t>(1, traj.times.size() / 32);
    for (std::size_t i = 0; i < traj.times.size(); i += stride) samples.push_back(i);
    if (samples.back() != traj.times.size() - 1) samples.push_back(traj.times.size() - 1);

    const cplx h0 = hamiltonian_at(0);
    for (const auto idx : samples) push(traj.times[idx], "hamiltonian", hamiltonian_at(idx), h0);

    for (std::size_t zi = 0; zi < z_samples.size(); ++zi) {
        const cplx z = z_samples[zi];
        const std::string ztag = "z" + std::to_string(zi);

        std::map<int, cplx> tr0;
        for (const auto idx : samples) {
            const CMat L = matrix_at(idx, z);
            CMat pw = L;
            int taken = 1;
            for (const int k : k_list) {
                while (taken < k) {
                    pw = pw * L;
                    ++taken;
                }
                const cplx v = pw.trace();
                auto [it, inserted] = tr0.try_emplace(k, v);
                push(traj.times[idx], "tr_pow" + std::to_string(k) + "@" + ztag, v, it->second);
                (void)inserted;
            }
        }

        // Characteristic-polynomial coefficients (all spectral invariants).
        std::vector<cplx> c0;
        std::vector<std::vector<cplx>> eig_prev;
        for (const auto idx : samples) {
            const CMat L = matrix_at(idx, z);
            const auto c = charpoly(L);
            if (c0.empty()) c0 = c;
            for (std::size_t ci = 0; ci + 1 < c.size(); ++ci)
                push(traj.times[idx], "charpoly" + std::to_string(ci) + "@" + ztag, c[ci], c0[ci]);

            // Eigenvalues with continuity matching along the trajectory.
            auto roots = polyroots(c);
            if (!eig_prev.empty()) {
                const auto& prev = eig_prev.back();
                std::vector<cplx> matched;
                std::vector<bool> used(roots.size(), false);
                for (const auto& pv : prev) {
                    int best = -1;
                    double bd = 1e300;
                    for (std::size_t r = 0; r < roots.size(); ++r) {
                        if (used[r]) continue;
                        const double d = std::abs(roots[r] - pv);
                        if (d < bd) {
                            bd = d;
                            best = int(r);
                        }
                    }
                    used[best] = true;
                    matched.push_back(roots[best]);
                }
                roots = matched;
            }
            eig_prev.push_back(roots);
            for (std::size_t r = 0; r < roots.size(); ++r)
                push(traj.times[idx], "eig" + std::to_string(r) + "@" + ztag, roots[r],
                     eig_prev.front()[r]);
        }
    }
    return rep;
}

std::string conservation_to_csv(const ConservationReport& rep) {
    std::ostringstream os;
    os.precision(17);
    os << "time,invariant_id,value_re,value_im,drift\n";
    for (const auto& r : rep.rows)
        os << r.time << "," << r.invariant_id << "," << r.value.real() << "," << r.value.imag() << ","
           << r.drift << "\n";
    return os.str();
}

}  // namespace elax
