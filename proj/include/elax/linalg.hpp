#ifndef ELAX_LINALG_HPP
#define ELAX_LINALG_HPP

#include <cmath>
#include <vector>

#include "elax/errors.hpp"
#include "elax/scalars.hpp"

namespace elax {

/// Dense square matrix over a scalar that may be cplx or Dual.
template <class S>
class Mat {
  public:
    Mat() = default;
    explicit Mat(int n) : n_(n), a_(std::size_t(n) * n, S{0.0}) {}

    static Mat identity(int n) {
        Mat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = S{1.0};
        return m;
    }

    int size() const { return n_; }
    S& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }
    const S& operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }

    Mat operator+(const Mat& o) const {
        Mat r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
        return r;
    }
    Mat operator*(const Mat& o) const {
        Mat r(n_);
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k) {
                const S aik = (*this)(i, k);
                for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }
    Mat operator*(const S& c) const {
        Mat r(n_);
        for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * c;
        return r;
    }
    S trace() const {
        S t{0.0};
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, std::abs(value_of(x)));
        return m;
    }

  private:
    int n_ = 0;
    std::vector<S> a_;
};

using CMat = Mat<cplx>;
using DMat = Mat<Dual>;

inline CMat value_of(const DMat& m) {
    CMat r(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r(i, j) = m(i, j).v;
    return r;
}

inline CMat tangent_of(const DMat& m) {
    CMat r(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) r(i, j) = m(i, j).t;
    return r;
}

template <class S>
Mat<S> commutator(const Mat<S>& a, const Mat<S>& b) {
    return a * b - b * a;
}

/// Gauss-Jordan inverse with partial pivoting. Refuses when the 1-norm
/// condition estimate exceeds `cond_limit`.
CMat inverse(const CMat& a, double cond_limit = 1e8);

double norm1(const CMat& a);

/// Characteristic polynomial coefficients c_0..c_n of det(x I - A)
/// = sum c_k x^k (Faddeev-LeVerrier), c_n = 1.
std::vector<cplx> charpoly(const CMat& a);

/// All roots of a monic polynomial given by charpoly-style coefficients
/// (Durand-Kerner iteration).
std::vector<cplx> polyroots(const std::vector<cplx>& coeffs);

/// Operator on C^N (x) C^N stored as an N^2 x N^2 matrix; ent(i,j,k,l) is the
/// coefficient of E_ij (x) E_kl, living at row (i,k), column (j,l).
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(int n) : n_(n), m_(n * n) {}

    int dim() const { return n_; }
    cplx& ent(int i, int j, int k, int l) { return m_(i * n_ + k, j * n_ + l); }
    const cplx& ent(int i, int j, int k, int l) const { return m_(i * n_ + k, j * n_ + l); }
    CMat& matrix() { return m_; }
    const CMat& matrix() const { return m_; }

    Tensor operator+(const Tensor& o) const { return from_matrix(n_, m_ + o.m_); }
    Tensor operator-(const Tensor& o) const { return from_matrix(n_, m_ - o.m_); }
    Tensor operator*(const Tensor& o) const { return from_matrix(n_, m_ * o.m_); }
    Tensor operator*(const cplx& c) const { return from_matrix(n_, m_ * c); }
    double max_abs() const { return m_.max_abs(); }

    /// Interchange of the two tensor factors: ent'(i,j,k,l) = ent(k,l,i,j).
    Tensor swap_factors() const {
        Tensor r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                for (int k = 0; k < n_; ++k)
                    for (int l = 0; l < n_; ++l) r.ent(i, j, k, l) = ent(k, l, i, j);
        return r;
    }

    static Tensor from_matrix(int n, CMat m) {
        Tensor t(n);
        t.m_ = std::move(m);
        return t;
    }

  private:
    int n_ = 0;
    CMat m_;
};

/// A (x) 1 as a Tensor.
Tensor tensor_first(const CMat& a);
/// 1 (x) A as a Tensor.
Tensor tensor_second(const CMat& a);
/// Identity on the tensor square.
Tensor tensor_identity(int n);

inline Tensor commutator(const Tensor& a, const Tensor& b) { return a * b - b * a; }

}  // namespace elax

#endif
