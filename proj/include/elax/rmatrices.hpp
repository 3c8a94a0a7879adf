#ifndef ELAX_RMATRICES_HPP
#define ELAX_RMATRICES_HPP

#include <vector>

#include "elax/laxmodels.hpp"
#include "elax/linalg.hpp"
#include "elax/states.hpp"

namespace elax {

// --------------------------------------------------------------- RS tensors

/// r_12(z,w) = sum_{i!=j} phi(z-w, q_ij) E_ij (x) E_ji
///           + E1(z-w) sum_i E_ii (x) E_ii
///           - sum_{i!=j} E1(q_ij) E_ii (x) E_jj.
/// Independent of eta. Throws on coinciding spectral parameters.
Tensor rs_r12(const std::vector<cplx>& q, cplx z, cplx w, const ModelParams& par);

/// u^{+-}_12 = sum_{i,j} E1(q_ji +- eta) E_ii (x) E_jj.
std::pair<Tensor, Tensor> rs_u_pm(const std::vector<cplx>& q, const ModelParams& par,
                                  const LatticeGuard& g = {});

/// Closed-form products L_1(z) s_12(z) and L_2(w) s_21(w).
Tensor rs_L1s12(const RSState& s, cplx z, const ModelParams& par,
                WeightVariant variant = WeightVariant::standard, const LatticeGuard& g = {});
Tensor rs_L2s21(const RSState& s, cplx w, const ModelParams& par,
                WeightVariant variant = WeightVariant::standard, const LatticeGuard& g = {});

/// The quoted eta-derivative of the Lax matrix: entries
/// L_ij(z) (E1(z + q_ij + eta) - E1(q_ij + eta)).
CMat rs_deta_lax(const RSState& s, cplx z, const ModelParams& par,
                 WeightVariant variant = WeightVariant::standard, const LatticeGuard& g = {});

/// Standalone s_12(z) assembled through the Lax inverse (cross-check path;
/// refuses on an ill-conditioned Lax matrix).
Tensor rs_s12(const RSState& s, cplx z, const ModelParams& par,
              WeightVariant variant = WeightVariant::standard);

struct RsAssembled {
    Tensor r_plus, r_minus, s_plus, s_minus;
};

/// The four tensors of the quadratic structure; also asserts the sufficiency
/// relation r+ - s+ = r- - s- at construction.
RsAssembled rs_assembled(const RSState& s, cplx z, cplx w, const ModelParams& par,
                         WeightVariant variant = WeightVariant::standard);

/// Calogero-Moser r-matrix
///   (E1(z-w) + E1(w)) sum E_ii (x) E_ii + sum_{i!=j} phi(z-w,q_ij) E_ij (x) E_ji
///   - sum_{i!=j} phi(-w, q_ij) E_ii (x) E_ji.
Tensor cm_r12(const std::vector<cplx>& q, cplx z, cplx w, const ModelParams& par);

// ------------------------------------------------------------ chain tensors

/// Site tensors of the lattice quadratic structure (0-based site index).
struct ChainSiteTensors {
    Tensor r;        // r^a_12(z,w), site-a positions
    Tensor u_plus;   // u^{+,a}
    Tensor u_minus;  // u^{-,a} (carries its overall sign)
    Tensor L1s12;    // L^a_1(z) s^a_12(z)
    Tensor L2s21;    // L^a_2(w) s^a_21(w)
    Tensor L1splus;  // L^a_1(z) s^{+,a}_12(z)
    Tensor L2sminus; // L^a_2(w) s^{-,a}_12(w)
};

ChainSiteTensors chain_tensors(const ChainState& s, int a, cplx z, cplx w, const ModelParams& par);

/// Standalone s^a_12(z) through the site Lax inverse (cross-check path).
Tensor chain_s12(const ChainState& s, int a, cplx z, const ModelParams& par);

// -------------------------------------------------- monodromy breve tensors

struct MonodromyBreve {
    Tensor s_plus;   // breve s^{+,1}_12(z)
    Tensor s_minus;  // breve s^{-,1}_12(w)
    Tensor s12;      // breve s^1_12(z)
    Tensor s21;      // breve s^1_21(w)
    Tensor u_plus;   // breve u^{+,1}(z)
    Tensor u_minus;  // breve u^{-,1}(w)
};

MonodromyBreve monodromy_breve(const ChainState& s, cplx z, cplx w, const ModelParams& par);

// -------------------------------------------- row-weighted gauge variant

/// Lax matrix with the weight on the row index, tl_ij = b_i phi(z, q_ij + eta),
/// related to the column-weighted one by conjugation with diag(b).
template <class S>
Mat<S> rowgauge_lax(std::span<const S> p, std::span<const S> q, cplx z, const ModelParams& par,
                    const LatticeGuard& g = {}) {
    const Modulus m = par.modulus();
    const int N = int(p.size());
    const auto b = rs_b(p, q, par, WeightVariant::standard, g);
    Mat<S> L(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            L(i, j) = b[i] * kronecker_phi(S{z}, q[i] - q[j] + S{par.eta}, m, g);
    return L;
}

CMat rowgauge_lax(const RSState& s, cplx z, const ModelParams& par);

struct RowGaugeTensors {
    Tensor r;         // exchange + diagonal + plus-signed E1(q_ij) part
    Tensor r_plus;    // r + u+ + u-
    Tensor r_minus;   // r - s12(z) + s21(w)
    Tensor s_plus;    // s12(z) + u+
    Tensor s_minus;   // s21(w) - u-
    Tensor L1s12;     // closed product, E_ij (x) E_jj placement
    Tensor L2s21;     // closed product, E_jj (x) E_ij placement
};

RowGaugeTensors rowgauge_tensors(const RSState& s, cplx z, cplx w, const ModelParams& par);

// ------------------------------------------------------------ field tensors

/// Inputs of the field-theory tensors at one position: the fields at x, the
/// shifted fields at x - eps, and the two U-matrix evaluations.
struct FieldSnapshot {
    std::vector<cplx> qx;   // q_i(x)
    std::vector<cplx> qxm;  // q_i(x - eps)
    CMat Uz;                // U(z, x)
    CMat Uw;                // U(w, x)
    cplx eps;
};

struct FieldTensors {
    Tensor r;        // bold r_12(z-w | x)
    Tensor u_plus;   // bold u^+_12(x)
    Tensor u_minus;  // bold u^-_12(x)
    Tensor U1s12;    // U_1(z,x) bold s_12(z,x)
    Tensor U2s21;    // U_2(w,x) bold s_21(w,x)
    Tensor U1splus;  // U_1 bold s^+_12
    Tensor U2sminus; // U_2 bold s^-_12, printed sign (s_21 + u^-)
    Tensor U2sminus_alt;  // alternative sign (s_21 - u^-)
};

FieldTensors field_tensors(const FieldSnapshot& f, cplx z, cplx w, const ModelParams& par);

}  // namespace elax

#endif
