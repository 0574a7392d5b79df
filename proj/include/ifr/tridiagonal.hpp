#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <type_traits>

#include "ifr/error.hpp"
#include "ifr/mesh.hpp"

namespace ifr {

/// Three-band storage: sub[i] = A(i+1, i), diag[i] = A(i, i), sup[i] = A(i, i+1).
template <typename Scalar>
struct TridiagonalMatrix {
    Vector<Scalar> sub;
    Vector<Scalar> diag;
    Vector<Scalar> sup;

    TridiagonalMatrix() = default;
    explicit TridiagonalMatrix(Eigen::Index n)
        : sub(Vector<Scalar>::Zero(n > 0 ? n - 1 : 0)),
          diag(Vector<Scalar>::Zero(n)),
          sup(Vector<Scalar>::Zero(n > 0 ? n - 1 : 0)) {}

    Eigen::Index size() const noexcept { return diag.size(); }

    bool consistent() const noexcept {
        return diag.size() >= 1 && sub.size() == diag.size() - 1 && sup.size() == diag.size() - 1;
    }

    bool symmetric() const { return sub == sup; }

    Vector<Scalar> operator*(const Vector<Scalar>& x) const {
        const Eigen::Index n = size();
        Vector<Scalar> y = diag.cwiseProduct(x);
        if (n > 1) {
            y.head(n - 1) += sup.cwiseProduct(x.tail(n - 1));
            y.tail(n - 1) += sub.cwiseProduct(x.head(n - 1));
        }
        return y;
    }

    /// Infinity norm (max absolute row sum).
    Scalar norm_inf() const {
        Vector<Scalar> rows = diag.cwiseAbs();
        const Eigen::Index n = size();
        if (n > 1) {
            rows.head(n - 1) += sup.cwiseAbs();
            rows.tail(n - 1) += sub.cwiseAbs();
        }
        return rows.maxCoeff();
    }

    TridiagonalMatrix& operator+=(const TridiagonalMatrix& other) {
        sub += other.sub;
        diag += other.diag;
        sup += other.sup;
        return *this;
    }

    TridiagonalMatrix& operator*=(Scalar factor) {
        sub *= factor;
        diag *= factor;
        sup *= factor;
        return *this;
    }

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
        const Eigen::Index n = size();
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
        a.diagonal() = diag;
        if (n > 1) {
            a.diagonal(1) = sup;
            a.diagonal(-1) = sub;
        }
        return a;
    }
};

template <typename Scalar>
TridiagonalMatrix<Scalar> operator+(TridiagonalMatrix<Scalar> a, const TridiagonalMatrix<Scalar>& b) {
    return a += b;
}

template <typename Scalar>
TridiagonalMatrix<Scalar> operator*(Scalar factor, TridiagonalMatrix<Scalar> a) {
    return a *= factor;
}

/// Thomas elimination without pivoting. Relies on diagonal dominance.
template <typename Scalar>
Vector<Scalar> solve_tridiagonal(const TridiagonalMatrix<Scalar>& a, const std::type_identity_t<Vector<Scalar>>& rhs) {
    if (!a.consistent() || rhs.size() != a.size()) throw Error("tridiagonal solve: dimension mismatch");
    const Eigen::Index n = a.size();
    Vector<Scalar> c(n);  // modified super-diagonal
    Vector<Scalar> x(n);

    Scalar pivot = a.diag[0];
    if (pivot == Scalar(0)) throw SingularMatrixError(0);
    c[0] = n > 1 ? a.sup[0] / pivot : Scalar(0);
    x[0] = rhs[0] / pivot;
    for (Eigen::Index i = 1; i < n; ++i) {
        pivot = a.diag[i] - a.sub[i - 1] * c[i - 1];
        if (pivot == Scalar(0)) throw SingularMatrixError(static_cast<std::size_t>(i));
        c[i] = i + 1 < n ? a.sup[i] / pivot : Scalar(0);
        x[i] = (rhs[i] - a.sub[i - 1] * x[i - 1]) / pivot;
    }
    for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
}

/// Precomputed elimination of a fixed matrix, reused across time steps.
template <typename Scalar>
class TridiagonalFactorization {
public:
    explicit TridiagonalFactorization(const TridiagonalMatrix<Scalar>& a) : sub_(a.sub) {
        if (!a.consistent()) throw Error("tridiagonal factorization: inconsistent bands");
        const Eigen::Index n = a.size();
        c_.resize(n);
        inv_pivot_.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Scalar pivot = i == 0 ? a.diag[0] : a.diag[i] - a.sub[i - 1] * c_[i - 1];
            if (pivot == Scalar(0)) throw SingularMatrixError(static_cast<std::size_t>(i));
            inv_pivot_[i] = Scalar(1) / pivot;
            c_[i] = i + 1 < n ? a.sup[i] * inv_pivot_[i] : Scalar(0);
        }
    }

    Eigen::Index size() const noexcept { return c_.size(); }

    Vector<Scalar> solve(const Vector<Scalar>& rhs) const {
        if (rhs.size() != size()) throw Error("tridiagonal solve: dimension mismatch");
        const Eigen::Index n = size();
        Vector<Scalar> x(n);
        x[0] = rhs[0] * inv_pivot_[0];
        for (Eigen::Index i = 1; i < n; ++i) x[i] = (rhs[i] - sub_[i - 1] * x[i - 1]) * inv_pivot_[i];
        for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c_[i] * x[i + 1];
        return x;
    }

private:
    Vector<Scalar> sub_;
    Vector<Scalar> c_;
    Vector<Scalar> inv_pivot_;
};

}  // namespace ifr
