#ifndef ELAX_LIMITS_HPP
#define ELAX_LIMITS_HPP

#include <functional>
#include <map>
#include <vector>

#include "elax/laxmodels.hpp"
#include "elax/linalg.hpp"
#include "elax/scalars.hpp"
#include "elax/states.hpp"

namespace elax {

/// Contour window for Laurent-coefficient extraction around eps = 0.
struct LaurentWindow {
    double rho = 1e-3;
    int K = 16;
    int m_lo = -2;
    int m_hi = 1;

    bool valid() const { return rho > 0.0 && K >= 2 * (m_hi - m_lo + 1) && K >= 8; }
};

/// Discrete-Fourier contour coefficients
///   c_m = (1/K) sum_k f(rho e^{i th_k}) rho^{-m} e^{-i m th_k},
/// returned keyed by order m. Works for any value type closed under
/// addition and multiplication by cplx (scalars, matrices, tensors).
template <class F>
auto laurent_coeffs(F&& fn, const LaurentWindow& w) {
    using V = decltype(fn(cplx{}));
    if (!w.valid()) throw std::invalid_argument("laurent_coeffs: malformed window");
    std::vector<V> samples;
    samples.reserve(w.K);
    for (int k = 0; k < w.K; ++k) {
        const double th = 2.0 * pi * k / w.K;
        samples.push_back(fn(w.rho * std::exp(iunit * th)));
    }
    std::map<int, V> out;
    for (int m = w.m_lo; m <= w.m_hi; ++m) {
        V acc = samples[0] * (std::pow(w.rho, -m) / double(w.K));
        for (int k = 1; k < w.K; ++k) {
            const double th = 2.0 * pi * k / w.K;
            acc = acc + samples[k] * (std::pow(w.rho, -m) * std::exp(-iunit * double(m) * th) / double(w.K));
        }
        out.emplace(m, std::move(acc));
    }
    return out;
}

/// eps-parameterized RS family of the non-relativistic limit: c = 1/eps and
/// eta = eps * nu at fixed (p, q, tau, nu).
inline ModelParams nonrel_family(const ModelParams& par, cplx eps) {
    ModelParams out = par;
    out.c = 1.0 / eps;
    out.eta = eps * par.nu;
    return out;
}

struct CoeffCheck {
    std::string label;
    double max_deviation;
    double scale;
};

struct LimitReport {
    std::string check_id;
    std::vector<CoeffCheck> checks;
    double tolerance = 0.0;
    bool pass = false;

    void finish(double tol) {
        tolerance = tol;
        pass = true;
        for (const auto& c : checks)
            if (!(c.max_deviation <= tol * std::max(1.0, c.scale))) pass = false;
    }
};

/// L^RS(z) = 1/(eps nu) 1 + (1/nu) L^CM(z) + O(eps): checks the c_{-1} and
/// c_0 contour coefficients entrywise, plus vanishing of lower orders.
LimitReport verify_rs_to_cm_lax(const RSState& s, cplx z, const ModelParams& par, const LaurentWindow& w = {});

/// Contour residues (in eta) of L2(w) s12^- and L1(z) s12^+ against their
/// closed-form displays; lower orders must cancel.
LimitReport verify_residue_s_terms(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                   const LaurentWindow& win = {});

/// c {L1, L2} = (1/(eps nu^2)) {L1^CM, L2^CM} + O(1): the residue of the RS
/// bracket (LHS and assembled RHS separately) against the CM linear
/// structure sides.
LimitReport verify_rs_to_cm_bracket(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                    const LaurentWindow& win = {});

/// Field U-matrix expansion: c_{-1} = -1/nu and nu c_0 = the shifted-momentum
/// form of the 2d CM U-matrix (defined in fieldkit; declared there).

}  // namespace elax

#endif
