#ifndef ELAX_DIFFKIT_HPP
#define ELAX_DIFFKIT_HPP

#include <span>
#include <vector>

#include "elax/linalg.hpp"
#include "elax/scalars.hpp"

namespace elax {

/// A canonical state is a flat coordinate vector [p_0..p_{D-1}, q_0..q_{D-1}];
/// observables are callables evaluable over cplx or Dual spans.

inline std::vector<Dual> lift(std::span<const cplx> coords, int direction) {
    std::vector<Dual> d(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) d[i] = Dual{coords[i], i == std::size_t(direction) ? 1.0 : 0.0};
    return d;
}

/// Exact holomorphic gradient: one dual-lifted evaluation per coordinate.
template <class F>
std::vector<cplx> partials(F&& f, std::span<const cplx> coords) {
    std::vector<cplx> grad(coords.size());
    for (std::size_t m = 0; m < coords.size(); ++m) {
        const auto lifted = lift(coords, int(m));
        grad[m] = f(std::span<const Dual>(lifted)).t;
    }
    return grad;
}

/// Canonical bracket with the {p_i, q_j} = delta_ij convention:
/// {f,g} = sum_i (df/dp_i dg/dq_i - df/dq_i dg/dp_i).
template <class F, class G>
cplx poisson_bracket(F&& f, G&& g, std::span<const cplx> coords) {
    const std::size_t D = coords.size() / 2;
    const auto gf = partials(f, coords);
    const auto gg = partials(g, coords);
    cplx acc{0.0};
    for (std::size_t i = 0; i < D; ++i) acc += gf[i] * gg[D + i] - gf[D + i] * gg[i];
    return acc;
}

/// Per-coordinate partial derivatives of a matrix observable.
template <class F>
std::vector<CMat> matrix_partials(F&& f, std::span<const cplx> coords) {
    std::vector<CMat> out;
    out.reserve(coords.size());
    for (std::size_t m = 0; m < coords.size(); ++m) {
        const auto lifted = lift(coords, int(m));
        out.push_back(tangent_of(f(std::span<const Dual>(lifted))));
    }
    return out;
}

/// Tensor of componentwise brackets: ent(i,j,k,l) = {A_ij, B_kl}.
template <class FA, class FB>
Tensor matrix_poisson_bracket(FA&& a, FB&& b, std::span<const cplx> coords) {
    const std::size_t D = coords.size() / 2;
    const auto da = matrix_partials(a, coords);
    const auto db = matrix_partials(b, coords);
    const int N = da.empty() ? 0 : da.front().size();
    Tensor t(N);
    for (std::size_t m = 0; m < D; ++m) {
        const CMat &ap = da[m], &aq = da[D + m];
        const CMat &bp = db[m], &bq = db[D + m];
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k)
                    for (int l = 0; l < N; ++l)
                        t.ent(i, j, k, l) += ap(i, j) * bq(k, l) - aq(i, j) * bp(k, l);
    }
    return t;
}

/// Centered finite-difference gradient, the anti-transcription oracle for
/// the dual-number path.
template <class F>
std::vector<cplx> partials_fd(F&& f, std::span<const cplx> coords, double step = 1e-6) {
    std::vector<cplx> grad(coords.size());
    std::vector<cplx> work(coords.begin(), coords.end());
    for (std::size_t m = 0; m < coords.size(); ++m) {
        const cplx keep = work[m];
        work[m] = keep + step;
        const cplx up = f(std::span<const cplx>(work));
        work[m] = keep - step;
        const cplx dn = f(std::span<const cplx>(work));
        work[m] = keep;
        grad[m] = (up - dn) / (2.0 * step);
    }
    return grad;
}

template <class F, class G>
cplx poisson_bracket_fd(F&& f, G&& g, std::span<const cplx> coords, double step = 1e-6) {
    const std::size_t D = coords.size() / 2;
    const auto gf = partials_fd(f, coords, step);
    const auto gg = partials_fd(g, coords, step);
    cplx acc{0.0};
    for (std::size_t i = 0; i < D; ++i) acc += gf[i] * gg[D + i] - gf[D + i] * gg[i];
    return acc;
}

template <class FA, class FB>
Tensor matrix_poisson_bracket_fd(FA&& a, FB&& b, std::span<const cplx> coords, double step = 1e-6) {
    const std::size_t D = coords.size() / 2;
    std::vector<CMat> da, db;
    std::vector<cplx> work(coords.begin(), coords.end());
    auto fd = [&](auto&& f, std::size_t m) {
        const cplx keep = work[m];
        work[m] = keep + step;
        const CMat up = f(std::span<const cplx>(work));
        work[m] = keep - step;
        const CMat dn = f(std::span<const cplx>(work));
        work[m] = keep;
        CMat r(up.size());
        for (int i = 0; i < up.size(); ++i)
            for (int j = 0; j < up.size(); ++j) r(i, j) = (up(i, j) - dn(i, j)) / (2.0 * step);
        return r;
    };
    for (std::size_t m = 0; m < coords.size(); ++m) {
        da.push_back(fd(a, m));
        db.push_back(fd(b, m));
    }
    const int N = da.front().size();
    Tensor t(N);
    for (std::size_t m = 0; m < D; ++m)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                for (int k = 0; k < N; ++k)
                    for (int l = 0; l < N; ++l)
                        t.ent(i, j, k, l) += da[m](i, j) * db[D + m](k, l) - da[D + m](i, j) * db[m](k, l);
    return t;
}

/// Packs (p, q) vectors into the flat layout used by the bracket engine.
inline std::vector<cplx> pack_coords(const std::vector<cplx>& p, const std::vector<cplx>& q) {
    std::vector<cplx> c(p);
    c.insert(c.end(), q.begin(), q.end());
    return c;
}

template <class S>
std::pair<std::vector<S>, std::vector<S>> unpack_coords(std::span<const S> coords) {
    const std::size_t D = coords.size() / 2;
    return {std::vector<S>(coords.begin(), coords.begin() + D), std::vector<S>(coords.begin() + D, coords.end())};
}

}  // namespace elax

#endif
