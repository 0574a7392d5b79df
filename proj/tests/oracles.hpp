#pragma once

// Test-only reference computations. Nothing here calls into the reduction
// path it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <utility>

#include "ifr/ifr.hpp"

namespace ifr::oracle {

using Dense = Eigen::MatrixXd;

/// Composite trapezoid rule with `n` panels.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) sum += f(a + i * h);
    return sum * h;
}

/// Continuous hat function of node i.
inline double hat(const Mesh1D<double>& mesh, Eigen::Index i, double x) {
    const auto& n = mesh.nodes();
    if (i > 0 && x >= n[i - 1] && x <= n[i]) return (x - n[i - 1]) / (n[i] - n[i - 1]);
    if (i + 1 < n.size() && x >= n[i] && x <= n[i + 1]) return (n[i + 1] - x) / (n[i + 1] - n[i]);
    return 0.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double step) {
    return (f(x + step) - f(x - step)) / (2 * step);
}

/// Fourth-order five-point second derivative.
inline double second_difference(const std::function<double(double)>& f, double x, double step) {
    return (-f(x + 2 * step) + 16 * f(x + step) - 30 * f(x) + 16 * f(x - step) - f(x - 2 * step)) /
           (12 * step * step);
}

struct MonolithicResult {
    BrokenField<double> u;
    double s;
};

/// Full nonlinear system on the broken P1 space: one equation per interior
/// hat, the jump law at the interface, and Dirichlet rows. Unknowns are the
/// n + 1 broken nodal values; solved by damped Newton with dense LU.
class MonolithicSystem {
public:
    MonolithicSystem(MeshPtr<double> mesh, CoefficientPair<double> beta, JumpLaw<double> law, double inv_dt)
        : mesh_(std::move(mesh)), law_(std::move(law)), inv_dt_(inv_dt) {
        const Eigen::Index n = mesh_->num_nodes();
        const Eigen::Index k = mesh_->interface_index();
        const auto& x = mesh_->nodes();
        linear_ = Dense::Zero(n + 1, n + 1);
        mass_ = Dense::Zero(n + 1, n + 1);
        // hat rows are indexed by node; row k is the interface hat, row n holds the jump law
        for (Eigen::Index e = 0; e + 1 < n; ++e) {
            const Eigen::Index a = e < k ? e : e + 1;
            const Eigen::Index b = a + 1;
            const double h = x[e + 1] - x[e];
            const double c = (e < k ? beta.beta_minus : beta.beta_plus) / h;
            linear_(e, a) += c;
            linear_(e, b) -= c;
            linear_(e + 1, a) -= c;
            linear_(e + 1, b) += c;
            mass_(e, a) += h / 3;
            mass_(e, b) += h / 6;
            mass_(e + 1, a) += h / 6;
            mass_(e + 1, b) += h / 3;
        }
        // u1 contribution removed from the time difference: s = w[k+1] - w[k]
        const auto u1 = unit_jump_response(beta, mesh_->alpha(), mesh_->x_left(), mesh_->x_right());
        Eigen::VectorXd u1_vals(n + 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i < k) u1_vals[i] = u1(x[i], true);
            if (i > k) u1_vals[i + 1] = u1(x[i], false);
        }
        u1_vals[k] = u1(x[k], true);
        u1_vals[k + 1] = u1(x[k], false);
        mass_u1_ = mass_ * u1_vals;
    }

    /// One implicit solve. `load` holds (f, phi_i) per node; `previous` is the
    /// broken state of the last step (ignored when inv_dt = 0).
    MonolithicResult solve(const Eigen::VectorXd& load, double xi, double eta, const Eigen::VectorXd& previous,
                           Eigen::VectorXd guess) const {
        const Eigen::Index n = mesh_->num_nodes();
        const Eigen::Index k = mesh_->interface_index();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
        rhs.head(n) = load;
        if (inv_dt_ != 0) {
            const double s_prev = previous[k + 1] - previous[k];
            rhs.head(n) += inv_dt_ * (mass_ * previous - s_prev * mass_u1_).head(n);
        }
        Dense system = linear_ + inv_dt_ * mass_;
        if (inv_dt_ != 0) {
            system.col(k + 1) -= inv_dt_ * mass_u1_;
            system.col(k) += inv_dt_ * mass_u1_;
        }

        auto residual = [&](const Eigen::VectorXd& w) {
            Eigen::VectorXd r = system * w - rhs;
            r[0] = w[0] - xi;
            r[n - 1] = w[n] - eta;  // last hat row is the right boundary
            r[n] = (w[k + 1] - w[k]) - evaluate(law_, w[k + 1], w[k]);
            return r;
        };
        auto jacobian = [&](const Eigen::VectorXd& w) {
            Dense j = system;
            j.row(0).setZero();
            j(0, 0) = 1;
            j.row(n - 1).setZero();
            j(n - 1, n) = 1;
            j.row(n).setZero();
            const auto d = partials(law_, w[k + 1], w[k]);
            j(n, k + 1) = 1 - d.d_plus;
            j(n, k) = -1 - d.d_minus;
            return j;
        };

        Eigen::VectorXd w = std::move(guess);
        Eigen::VectorXd r = residual(w);
        for (int it = 0; it < 100 && r.lpNorm<Eigen::Infinity>() > 1e-14 * (1 + w.lpNorm<Eigen::Infinity>()); ++it) {
            const Eigen::VectorXd step = jacobian(w).partialPivLu().solve(-r);
            double damping = 1;
            Eigen::VectorXd trial = w + step;
            Eigen::VectorXd rt = residual(trial);
            while (rt.norm() > r.norm() && damping > 1e-8) {
                damping /= 2;
                trial = w + damping * step;
                rt = residual(trial);
            }
            w = std::move(trial);
            r = std::move(rt);
        }
        const double s = w[k + 1] - w[k];
        return {BrokenField<double>(mesh_, std::move(w)), s};
    }

private:
    MeshPtr<double> mesh_;
    JumpLaw<double> law_;
    double inv_dt_;
    Dense linear_;
    Dense mass_;
    Eigen::VectorXd mass_u1_;
};

inline MonolithicResult monolithic_elliptic(const EllipticProblem& p, const MeshPtr<double>& mesh) {
    MonolithicSystem sys(mesh, p.beta, p.law, 0.0);
    const Eigen::VectorXd load = assemble_load(*mesh, p.f);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(mesh->num_nodes() + 1);
    return sys.solve(load, p.xi, p.eta, zero, zero);
}

inline MonolithicResult monolithic_parabolic(const ParabolicProblem& p, const MeshPtr<double>& mesh) {
    MonolithicSystem sys(mesh, p.beta, p.law, 1.0 / p.dt);
    auto state = BrokenField<double>::sample(mesh, p.initial);
    MonolithicResult out{state, state.jump()};
    const int steps = p.num_steps();
    for (int n = 1; n <= steps; ++n) {
        const double t = n * p.dt;
        const Eigen::VectorXd load = assemble_load(*mesh, p.f, t);
        out = sys.solve(load, p.xi(t), p.eta(t), out.u.values(), out.u.values());
    }
    return out;
}

}  // namespace ifr::oracle
