#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <sstream>
#include <utility>

#include "ifr/error.hpp"
#include "ifr/mesh.hpp"
#include "ifr/tridiagonal.hpp"

namespace ifr {

/// Piecewise-constant diffusion coefficient: beta_minus left of the
/// interface, beta_plus right of it.
template <typename Scalar>
struct CoefficientPair {
    Scalar beta_minus;
    Scalar beta_plus;

    CoefficientPair(Scalar minus, Scalar plus) : beta_minus(minus), beta_plus(plus) {
        if (!(minus > Scalar(0)) || !(plus > Scalar(0)))
            throw Error("diffusion coefficients must be strictly positive");
    }

    Scalar on_side(bool minus_side) const noexcept { return minus_side ? beta_minus : beta_plus; }
};

template <typename Scalar>
using MeshPtr = std::shared_ptr<const Mesh1D<Scalar>>;

/// Piecewise-linear nodal field with two values at the interface node.
///
/// Storage holds num_nodes + 1 entries: nodes left of the interface keep
/// their index, the interface node contributes (minus, plus) at
/// [k, k + 1], and nodes right of it are shifted by one.
template <typename Scalar>
class BrokenField {
public:
    BrokenField(MeshPtr<Scalar> mesh, Vector<Scalar> values) : mesh_(std::move(mesh)), values_(std::move(values)) {
        if (!mesh_) throw MeshMismatchError("broken field without mesh");
        if (values_.size() != mesh_->num_nodes() + 1)
            throw MeshMismatchError("broken field needs num_nodes + 1 values");
    }

    /// Lifts a single-valued nodal field (value_minus = value_plus at the interface).
    static BrokenField continuous(MeshPtr<Scalar> mesh, const Vector<Scalar>& nodal) {
        if (!mesh || nodal.size() != mesh->num_nodes()) throw MeshMismatchError("nodal field size mismatch");
        const Eigen::Index k = mesh->interface_index();
        const Eigen::Index n = nodal.size();
        Vector<Scalar> v(n + 1);
        v.head(k + 1) = nodal.head(k + 1);
        v.tail(n - k) = nodal.tail(n - k);
        return BrokenField(std::move(mesh), std::move(v));
    }

    /// Samples a two-sided function `sample(x, minus_side)` at the nodes.
    template <typename Sampler>
    static BrokenField sample(MeshPtr<Scalar> mesh, Sampler&& sampler) {
        const Eigen::Index n = mesh->num_nodes();
        const Eigen::Index k = mesh->interface_index();
        const auto& x = mesh->nodes();
        Vector<Scalar> v(n + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i < k) v[i] = sampler(x[i], true);
            else if (i > k) v[i + 1] = sampler(x[i], false);
        }
        v[k] = sampler(x[k], true);
        v[k + 1] = sampler(x[k], false);
        return BrokenField(std::move(mesh), std::move(v));
    }

    const Mesh1D<Scalar>& mesh() const noexcept { return *mesh_; }
    const MeshPtr<Scalar>& mesh_ptr() const noexcept { return mesh_; }
    const Vector<Scalar>& values() const noexcept { return values_; }
    Vector<Scalar>& values() noexcept { return values_; }

    Scalar value_minus() const { return values_[mesh_->interface_index()]; }
    Scalar value_plus() const { return values_[mesh_->interface_index() + 1]; }
    Scalar jump() const { return value_plus() - value_minus(); }

    /// Storage slots of the two endpoint values seen by element e.
    std::pair<Eigen::Index, Eigen::Index> element_slots(Eigen::Index e) const noexcept {
        return e < mesh_->interface_index() ? std::pair{e, e + 1} : std::pair{e + 1, e + 2};
    }

    /// Single-valued nodal array, taking the interface value from one side.
    Vector<Scalar> nodal(bool minus_side = true) const {
        const Eigen::Index n = mesh_->num_nodes();
        const Eigen::Index k = mesh_->interface_index();
        Vector<Scalar> out(n);
        out.head(k) = values_.head(k);
        out[k] = minus_side ? values_[k] : values_[k + 1];
        out.tail(n - k - 1) = values_.tail(n - k - 1);
        return out;
    }

    /// Value at node i as seen from one side (only matters at the interface).
    Scalar at_node(Eigen::Index i, bool minus_side) const noexcept {
        const Eigen::Index k = mesh_->interface_index();
        if (i < k) return values_[i];
        if (i > k) return values_[i + 1];
        return minus_side ? values_[k] : values_[k + 1];
    }

    /// Evaluates the linear interpolant inside element e at x.
    Scalar on_element(Eigen::Index e, Scalar x) const noexcept {
        const auto [a, b] = element_slots(e);
        const auto& nodes = mesh_->nodes();
        const Scalar theta = (x - nodes[e]) / (nodes[e + 1] - nodes[e]);
        return (Scalar(1) - theta) * values_[a] + theta * values_[b];
    }

    bool same_mesh(const BrokenField& other) const {
        return mesh_ == other.mesh_ || *mesh_ == *other.mesh_;
    }

    BrokenField& operator+=(const BrokenField& other) {
        if (!same_mesh(other)) throw MeshMismatchError("broken fields live on different meshes");
        values_ += other.values_;
        return *this;
    }

    BrokenField& operator-=(const BrokenField& other) {
        if (!same_mesh(other)) throw MeshMismatchError("broken fields live on different meshes");
        values_ -= other.values_;
        return *this;
    }

    BrokenField& operator*=(Scalar factor) {
        values_ *= factor;
        return *this;
    }

private:
    MeshPtr<Scalar> mesh_;
    Vector<Scalar> values_;
};

template <typename Scalar>
BrokenField<Scalar> operator+(BrokenField<Scalar> a, const BrokenField<Scalar>& b) { return a += b; }
template <typename Scalar>
BrokenField<Scalar> operator-(BrokenField<Scalar> a, const BrokenField<Scalar>& b) { return a -= b; }
template <typename Scalar>
BrokenField<Scalar> operator*(Scalar factor, BrokenField<Scalar> a) { return a *= factor; }

/// P1 stiffness: element e contributes beta_e / h_e * [[1, -1], [-1, 1]].
template <typename Scalar>
TridiagonalMatrix<Scalar> assemble_stiffness(const Mesh1D<Scalar>& mesh, const CoefficientPair<Scalar>& beta) {
    TridiagonalMatrix<Scalar> a(mesh.num_nodes());
    const auto& x = mesh.nodes();
    for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
        const Scalar k = beta.on_side(mesh.on_minus_side(e)) / (x[e + 1] - x[e]);
        a.diag[e] += k;
        a.diag[e + 1] += k;
        a.sub[e] -= k;
        a.sup[e] -= k;
    }
    return a;
}

/// Consistent P1 mass: element e contributes h_e / 6 * [[2, 1], [1, 2]].
template <typename Scalar>
TridiagonalMatrix<Scalar> assemble_mass(const Mesh1D<Scalar>& mesh) {
    TridiagonalMatrix<Scalar> m(mesh.num_nodes());
    const auto& x = mesh.nodes();
    for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
        const Scalar h6 = (x[e + 1] - x[e]) / Scalar(6);
        m.diag[e] += Scalar(2) * h6;
        m.diag[e + 1] += Scalar(2) * h6;
        m.sub[e] += h6;
        m.sup[e] += h6;
    }
    return m;
}

/// Load vector (f, phi_i) by 2-point Gauss-Legendre quadrature per element.
template <typename Scalar, typename Source>
Vector<Scalar> assemble_load(const Mesh1D<Scalar>& mesh, Source&& f) {
    using std::isfinite;
    using std::sqrt;
    const auto& x = mesh.nodes();
    Vector<Scalar> b = Vector<Scalar>::Zero(mesh.num_nodes());
    const Scalar offset = Scalar(1) / sqrt(Scalar(3));
    const Scalar gauss[2] = {(Scalar(1) - offset) / Scalar(2), (Scalar(1) + offset) / Scalar(2)};
    for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
        const Scalar h = x[e + 1] - x[e];
        for (const Scalar theta : gauss) {
            const Scalar xq = x[e] + theta * h;
            const Scalar fq = f(xq);
            if (!isfinite(fq)) {
                std::ostringstream msg;
                msg << "non-finite source value at x = " << xq;
                throw EvaluationError(msg.str());
            }
            const Scalar w = h / Scalar(2) * fq;
            b[e] += w * (Scalar(1) - theta);
            b[e + 1] += w * theta;
        }
    }
    return b;
}

/// Time-dependent source f(x, t) evaluated at a fixed time.
template <typename Scalar, typename Source>
Vector<Scalar> assemble_load(const Mesh1D<Scalar>& mesh, Source&& f, Scalar t) {
    return assemble_load(mesh, [&](Scalar x) { return f(x, t); });
}

/// Entries (w, phi_i) for a broken field w against the continuous hats.
template <typename Scalar>
Vector<Scalar> mass_apply_broken(const Mesh1D<Scalar>& mesh, const BrokenField<Scalar>& w) {
    if (!(w.mesh() == mesh)) throw MeshMismatchError("mass_apply_broken: field lives on another mesh");
    const auto& x = mesh.nodes();
    const auto& v = w.values();
    Vector<Scalar> out = Vector<Scalar>::Zero(mesh.num_nodes());
    for (Eigen::Index e = 0; e < mesh.num_elements(); ++e) {
        const auto [a, b] = w.element_slots(e);
        const Scalar h6 = (x[e + 1] - x[e]) / Scalar(6);
        out[e] += h6 * (Scalar(2) * v[a] + v[b]);
        out[e + 1] += h6 * (v[a] + Scalar(2) * v[b]);
    }
    return out;
}

template <typename Scalar>
struct LinearSystem {
    TridiagonalMatrix<Scalar> matrix;
    Vector<Scalar> rhs;
};

/// Replaces the boundary rows by identity rows and folds the boundary
/// columns into the right-hand side; the interior block stays symmetric.
template <typename Scalar>
void apply_dirichlet(LinearSystem<Scalar>& system, Scalar left_value, Scalar right_value) {
    auto& a = system.matrix;
    auto& rhs = system.rhs;
    const Eigen::Index n = a.size();
    if (n < 3 || rhs.size() != n) throw Error("apply_dirichlet: system too small or mismatched");

    rhs[1] -= a.sub[0] * left_value;
    rhs[n - 2] -= a.sup[n - 2] * right_value;
    a.diag[0] = Scalar(1);
    a.sup[0] = Scalar(0);
    a.sub[0] = Scalar(0);
    rhs[0] = left_value;
    a.diag[n - 1] = Scalar(1);
    a.sub[n - 2] = Scalar(0);
    a.sup[n - 2] = Scalar(0);
    rhs[n - 1] = right_value;
}

/// Matrix-only variant for operators that are factored once and reused.
template <typename Scalar>
void apply_dirichlet_rows(TridiagonalMatrix<Scalar>& a) {
    const Eigen::Index n = a.size();
    a.diag[0] = Scalar(1);
    a.sup[0] = Scalar(0);
    a.sub[0] = Scalar(0);
    a.diag[n - 1] = Scalar(1);
    a.sub[n - 2] = Scalar(0);
    a.sup[n - 2] = Scalar(0);
}

/// Right-hand side counterpart of apply_dirichlet_rows; `a` is the
/// operator before boundary rows were replaced.
template <typename Scalar>
void apply_dirichlet_rhs(const TridiagonalMatrix<Scalar>& a, Vector<Scalar>& rhs, Scalar left_value,
                         Scalar right_value) {
    const Eigen::Index n = a.size();
    rhs[1] -= a.sub[0] * left_value;
    rhs[n - 2] -= a.sup[n - 2] * right_value;
    rhs[0] = left_value;
    rhs[n - 1] = right_value;
}

}  // namespace ifr
