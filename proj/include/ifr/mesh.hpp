#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "ifr/error.hpp"

namespace ifr {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Partition of [x_left, x_right] that carries the interface point as a node.
///
/// Immutable once built. The interface node splits the elements into a
/// minus side (indices < interface_index) and a plus side.
template <typename Scalar>
class Mesh1D {
public:
    Mesh1D(Vector<Scalar> nodes, Eigen::Index interface_index)
        : nodes_(std::move(nodes)), interface_(interface_index) {
        if (nodes_.size() < 3) throw InvalidResolutionError("mesh needs at least two elements");
        if (interface_ <= 0 || interface_ >= nodes_.size() - 1)
            throw InvalidInterfaceError("interface node must be strictly interior");
        h_max_ = Scalar(0);
        for (Eigen::Index i = 0; i + 1 < nodes_.size(); ++i) {
            const Scalar h = nodes_[i + 1] - nodes_[i];
            if (!(h > Scalar(0))) throw InvalidResolutionError("mesh nodes must be strictly increasing");
            if (h > h_max_) h_max_ = h;
        }
    }

    const Vector<Scalar>& nodes() const noexcept { return nodes_; }
    Eigen::Index num_nodes() const noexcept { return nodes_.size(); }
    Eigen::Index num_elements() const noexcept { return nodes_.size() - 1; }
    Eigen::Index interface_index() const noexcept { return interface_; }
    Scalar alpha() const noexcept { return nodes_[interface_]; }
    Scalar x_left() const noexcept { return nodes_[0]; }
    Scalar x_right() const noexcept { return nodes_[nodes_.size() - 1]; }
    Scalar h_max() const noexcept { return h_max_; }

    /// True when element e lies left of the interface.
    bool on_minus_side(Eigen::Index element) const noexcept { return element < interface_; }

    bool operator==(const Mesh1D& other) const {
        return interface_ == other.interface_ && nodes_.size() == other.nodes_.size() &&
               nodes_ == other.nodes_;
    }

private:
    Vector<Scalar> nodes_;
    Eigen::Index interface_;
    Scalar h_max_;
};

/// Uniform mesh of `mr` elements on [x_left, x_right] fitted to `alpha`.
///
/// When alpha is not already a grid node, the nearest interior node is moved
/// onto it (ties go to the lower index), so the element count stays `mr`.
template <typename Scalar>
Mesh1D<Scalar> build_fitted(Scalar x_left, Scalar x_right, Scalar alpha, Eigen::Index mr) {
    if (!(x_left < alpha && alpha < x_right))
        throw InvalidInterfaceError("interface must lie strictly inside (x_left, x_right)");
    if (mr < 2) throw InvalidResolutionError("mesh resolution must be at least 2, got " + std::to_string(mr));

    const Scalar length = x_right - x_left;
    Vector<Scalar> nodes(mr + 1);
    for (Eigen::Index i = 0; i < mr; ++i) nodes[i] = x_left + length * Scalar(i) / Scalar(mr);
    nodes[mr] = x_right;

    using std::ceil;
    const Scalar position = (alpha - x_left) * Scalar(mr) / length;
    Eigen::Index k = static_cast<Eigen::Index>(ceil(position - Scalar(0.5)));
    if (k < 1) k = 1;
    if (k > mr - 1) k = mr - 1;
    nodes[k] = alpha;
    return Mesh1D<Scalar>(std::move(nodes), k);
}

template <typename Scalar>
Vector<Scalar> element_lengths(const Mesh1D<Scalar>& mesh) {
    const auto& x = mesh.nodes();
    return x.tail(x.size() - 1) - x.head(x.size() - 1);
}

}  // namespace ifr
