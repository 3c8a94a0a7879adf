#ifndef ELAX_VERIFY_HPP
#define ELAX_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "elax/rmatrices.hpp"
#include "elax/states.hpp"

namespace elax {

struct ResidualReport {
    std::string check_id;
    std::string anchor;
    ModelParams params;
    std::uint64_t seed = 0;
    std::vector<std::pair<cplx, cplx>> spectral_points;
    double residual_max = 0.0;
    double residual_scale = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    void finish(double tol) {
        tolerance = tol;
        pass = residual_max <= tol * std::max(1.0, residual_scale);
    }
};

constexpr double default_tolerance = 1e-8;

/// Guarded (z, w) pairs for identity evaluation: both points, their
/// difference, and every shifted pole locus clear the guard.
std::vector<std::pair<cplx, cplx>> spectral_grid(std::uint64_t seed, const std::vector<cplx>& q,
                                                 const ModelParams& par, int nz, int nw,
                                                 double guard = 0.02);

/// Residual of c {L1(z), L2(w)} against the quadratic structure, in both the
/// four-term and the commutator arrangement (the two must also agree).
/// With fd_check, the bracket tensor is recomputed by central differences and
/// must match the dual-number evaluation within fd_tol relative.
ResidualReport verify_rs_quadratic(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                   WeightVariant variant = WeightVariant::standard,
                                   double tol = default_tolerance, bool fd_check = false,
                                   double fd_tol = 1e-6);

enum class TraceModel { rs, chain };

/// {tr L^k(z), tr L^m(w)} (or the monodromy analogue) relative to the
/// product of trace magnitudes.
ResidualReport verify_trace_involution(TraceModel model, const RSState* rs, const ChainState* chain,
                                       cplx z, cplx w, int k, int m, const ModelParams& par,
                                       double tol = default_tolerance);

/// {L1^CM(z), L2^CM(w)} = [L1^CM(z), r12(z,w)] - [L2^CM(w), r21(w,z)].
ResidualReport verify_cm_linear(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                double tol = 1e-9, bool fd_check = false, double fd_tol = 1e-6);

/// Site pair (a, b) of the lattice quadratic structure, deltas mod n.
ResidualReport verify_chain_quadratic(const ChainState& s, int a, int b, cplx z, cplx w,
                                      const ModelParams& par, double tol = default_tolerance,
                                      bool fd_check = false, double fd_tol = 1e-6);

/// Monodromy structure with the conjugated tensors; the bracket is also
/// re-derived by the site-by-site product rule as an internal cross-check.
ResidualReport verify_monodromy_quadratic(const ChainState& s, cplx z, cplx w, const ModelParams& par,
                                          double tol = default_tolerance, bool leibniz_check = true);

/// Row-weighted gauge variant of the quadratic structure.
ResidualReport verify_rowgauge_quadratic(const RSState& s, cplx z, cplx w, const ModelParams& par,
                                         double tol = default_tolerance, bool fd_check = false,
                                         double fd_tol = 1e-6);

}  // namespace elax

#endif
