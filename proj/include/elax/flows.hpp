#ifndef ELAX_FLOWS_HPP
#define ELAX_FLOWS_HPP

#include <map>
#include <string>
#include <vector>

#include "elax/laxmodels.hpp"
#include "elax/states.hpp"

namespace elax {

enum class FlowModel { rs, cm, chain };
enum class Scheme { rk4, rk4_adaptive };

/// Time history of one holomorphic flow, stored as flat [p, q] coordinate
/// vectors. Integration aborts with guard_violation_error when a state
/// leaves the guarded region.
struct Trajectory {
    FlowModel model = FlowModel::rs;
    Scheme scheme = Scheme::rk4;
    double dt = 0.0;
    int sites = 1;
    int particles = 0;
    std::vector<double> times;
    std::vector<std::vector<cplx>> states;

    RSState rs_at(std::size_t idx) const;
    ChainState chain_at(std::size_t idx) const;
};

Trajectory integrate(FlowModel model, const RSState& s0, double t_end, double dt,
                     const ModelParams& par, Scheme scheme = Scheme::rk4,
                     double guard = default_state_guard);
Trajectory integrate(FlowModel model, const ChainState& s0, double t_end, double dt,
                     const ModelParams& par, Scheme scheme = Scheme::rk4,
                     double guard = default_state_guard);

/// Max entry of {H, L(z)} - [L(z), M(z)], the bracket through the dual engine.
double lax_residual_rs(const RSState& s, cplx z, const ModelParams& par);

struct ConservationRow {
    double time;
    std::string invariant_id;
    cplx value;
    double drift;  // |value - value(0)| / max(1, |value(0)|)
};

struct ConservationReport {
    std::vector<ConservationRow> rows;
    std::map<std::string, double> max_drift;

    double worst() const {
        double w = 0.0;
        for (const auto& [id, d] : max_drift) w = std::max(w, d);
        return w;
    }
};

/// Relative drift along the trajectory of tr L^k(z) (or tr T^k(z)), of the
/// Hamiltonian, of the characteristic-polynomial coefficients of T(z) for
/// the chain, and of the Lax eigenvalues for RS.
ConservationReport conservation_report(const Trajectory& traj, const ModelParams& par,
                                       const std::vector<cplx>& z_samples, const std::vector<int>& k_list);

std::string conservation_to_csv(const ConservationReport& rep);

}  // namespace elax

#endif
