#ifndef ELAX_ULTRALOCAL_HPP
#define ELAX_ULTRALOCAL_HPP

#include "elax/fieldkit.hpp"
#include "elax/rmatrices.hpp"
#include "elax/verify.hpp"

namespace elax {

/// The ultralocal coefficient identity of the continuous non-relativistic
/// limit: the x-derivative term, both commutator terms, the alpha-weighted
/// f-term and the six closed-form limit blocks of the shift-bracket
/// expansion must sum to zero. These checks fix the derivative coupling to
/// one (alpha^2 = q_x + nu).
struct UltralocalReport {
    std::string check_id = "field-ultralocal";
    std::string anchor = "maillet-ultralocal-coefficient";
    double residual_total = 0.0;
    double residual_scale = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    /// Each block's closed form against the contour zero-order coefficient
    /// of its shift-bracket pre-limit.
    std::vector<CoeffCheck> blocks;

    /// Total of the identity when the bracket terms are extracted from the
    /// assembled tensors directly, for the two sign conventions of the
    /// bold s^- assembly (printed: s_21 + u^-; flipped: s_21 - u^-).
    double bracket_route_printed = 0.0;
    double bracket_route_flipped = 0.0;
};

UltralocalReport verify_field_ultralocal(const FieldConfig& cfg, double x, cplx z, cplx w,
                                         const ModelParams& par, const LaurentWindow& win = {},
                                         double tol = default_tolerance);

/// Pre-limit shift-bracket block (1..6) at finite eps, and its closed-form
/// limit. Blocks 2/6 and 3/4 exchange compensating singular-diagonal pieces
/// under the x -> x +- eps rewriting, so the contour oracle matches the
/// closed forms for blocks 1, 3, 5 individually and for the sums 2+6 and
/// 3+4 (hence also for the full sum).
Tensor ultralocal_block_prelimit(const FieldConfig& cfg, double x, cplx z, cplx w,
                                 const ModelParams& par, int which, cplx eps);
Tensor ultralocal_block_closed(const FieldConfig& cfg, double x, cplx z, cplx w,
                               const ModelParams& par, int which);

/// The delta-prime coefficient of the Maillet structure: the three-sum form
/// against r^2dCM_12(z,w|x) + r^2dCM_21(w,z|x).
ResidualReport verify_nonultralocal_coefficient(const FieldConfig& cfg, double x, cplx z, cplx w,
                                                const ModelParams& par, double tol = 1e-10);

}  // namespace elax

#endif
