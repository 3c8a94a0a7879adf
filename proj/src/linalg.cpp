#include "elax/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace elax {

double norm1(const CMat& a) {
    double best = 0.0;
    for (int j = 0; j < a.size(); ++j) {
        double col = 0.0;
        for (int i = 0; i < a.size(); ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

CMat inverse(const CMat& a, double cond_limit) {
    const int n = a.size();
    CMat w = a;
    CMat inv = CMat::identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(w(col, col));
        for (int r = col + 1; r < n; ++r)
            if (std::abs(w(r, col)) > best) {
                best = std::abs(w(r, col));
                piv = r;
            }
        if (best == 0.0) throw inversion_refused_error("matrix is singular");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(w(piv, j), w(col, j));
                std::swap(inv(piv, j), inv(col, j));
            }
        const cplx d = w(col, col);
        for (int j = 0; j < n; ++j) {
            w(col, j) /= d;
            inv(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const cplx f = w(r, col);
            if (f == cplx{0.0}) continue;
            for (int j = 0; j < n; ++j) {
                w(r, j) -= f * w(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    if (norm1(a) * norm1(inv) > cond_limit)
        throw inversion_refused_error("matrix condition estimate exceeds limit");
    return inv;
}

std::vector<cplx> charpoly(const CMat& a) {
    const int n = a.size();
    std::vector<cplx> c(std::size_t(n) + 1, cplx{0.0});
    c[n] = 1.0;
    CMat m = CMat(n);  // M_0 = 0
    for (int k = 1; k <= n; ++k) {
        // M_k = A M_{k-1} + c_{n-k+1} I
        CMat am = a * m;
        for (int i = 0; i < n; ++i) am(i, i) += c[n - k + 1];
        m = am;
        c[n - k] = -(a * m).trace() / double(k);
    }
    return c;
}

std::vector<cplx> polyroots(const std::vector<cplx>& coeffs) {
    const int deg = int(coeffs.size()) - 1;
    const cplx lead = coeffs[deg];
    std::vector<cplx> c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i] / lead;
    std::vector<cplx> r(deg);
    // Durand-Kerner from a non-real spiral of start values.
    const cplx seed{0.4, 0.9};
    cplx p{1.0};
    for (int i = 0; i < deg; ++i) {
        p *= seed;
        r[i] = p;
    }
    auto eval = [&](cplx x) {
        cplx acc = c[deg];
        for (int k = deg - 1; k >= 0; --k) acc = acc * x + c[k];
        return acc;
    };
    for (int iter = 0; iter < 300; ++iter) {
        double moved = 0.0;
        for (int i = 0; i < deg; ++i) {
            cplx denom{1.0};
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            const cplx delta = eval(r[i]) / denom;
            r[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-14) break;
    }
    return r;
}

Tensor tensor_first(const CMat& a) {
    const int n = a.size();
    Tensor t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) t.ent(i, j, k, k) = a(i, j);
    return t;
}

Tensor tensor_second(const CMat& a) {
    const int n = a.size();
    Tensor t(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) t.ent(i, i, k, l) = a(k, l);
    return t;
}

Tensor tensor_identity(int n) {
    return Tensor::from_matrix(n, CMat::identity(n * n));
}

}  // namespace elax
