#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ifr/assembly.hpp"
#include "ifr/jump_law.hpp"
#include "ifr/mesh.hpp"
#include "ifr/reduction.hpp"
#include "ifr/tridiagonal.hpp"

namespace ifr {

using Real = double;

/// -(beta u')' = f on (x_left, alpha) and (alpha, x_right), [beta u'] = 0,
/// [u] = g(u+, u-), u(x_left) = xi, u(x_right) = eta.
struct EllipticProblem {
    Real x_left = -1;
    Real x_right = 1;
    Real alpha = 0;
    CoefficientPair<Real> beta{1, 1};
    std::function<Real(Real)> f;
    Real xi = 0;
    Real eta = 0;
    JumpLaw<Real> law = JumpLaw<Real>::constant(0);
};

/// u_t - (beta u_x)_x = f(x, t) with the same interface conditions and
/// time-dependent Dirichlet data; advanced by backward Euler.
struct ParabolicProblem {
    Real x_left = -1;
    Real x_right = 1;
    Real alpha = 0;
    CoefficientPair<Real> beta{1, 1};
    std::function<Real(Real, Real)> f;
    std::function<Real(Real)> xi;
    std::function<Real(Real)> eta;
    /// Initial state u(x, 0); the flag selects the side at x = alpha.
    std::function<Real(Real, bool)> initial;
    JumpLaw<Real> law = JumpLaw<Real>::constant(0);
    Real T = 1;
    Real dt = 0.01;

    /// round(T / dt); throws when T / dt is not an integer.
    int num_steps() const;
};

struct SolverOptions {
    ScalarSolveOptions scalar{};
};

struct TimeSample {
    Real t;
    Real s;
};

struct SolveResult {
    Vector<Real> u0_part;
    Real s = 0;
    BrokenField<Real> u_h;
    InterfaceReport<Real> interface;
    UnitJumpResponse<Real> u1;
    std::vector<TimeSample> history;
};

/// Scalar-solve failure inside the time loop; carries the (t, s) history
/// accepted before the failing step.
class RunAbortedError : public Error {
public:
    RunAbortedError(const std::string& what, int step, std::vector<TimeSample> history)
        : Error(what), step_(step), history_(std::move(history)) {}

    int step() const noexcept { return step_; }
    const std::vector<TimeSample>& history() const noexcept { return history_; }

private:
    int step_;
    std::vector<TimeSample> history_;
};

/// Bulk solve, interface response, scalar equation, reconstruction.
SolveResult solve_elliptic(const EllipticProblem& problem, const MeshPtr<Real>& mesh, const SolverOptions& opts = {});

/// Operators that stay fixed across a run with constant dt.
struct ParabolicOperators {
    TridiagonalMatrix<Real> stiffness;
    TridiagonalMatrix<Real> mass;
    TridiagonalMatrix<Real> step_operator;  // M / dt + A before boundary rows
    TridiagonalFactorization<Real> factorization;
    UnitJumpResponse<Real> u1;
    BrokenField<Real> u1_field;
    Vector<Real> mass_u1;  // (u1, phi_i)
    Real dt;

    static ParabolicOperators build(const ParabolicProblem& problem, const MeshPtr<Real>& mesh);
};

struct ParabolicState {
    BrokenField<Real> u;
    Real s;
};

struct StepResult {
    ParabolicState state;
    Vector<Real> u0_part;
    InterfaceReport<Real> interface;
};

/// One backward Euler step followed by the scalar interface solve.
///
/// The bulk system is (M/dt + A) u0^{n+1} = F^{n+1} + M u0^n / dt with
/// u0^n = u^n - s^n u1, warm-starting the scalar solve at s^n.
StepResult step_parabolic(const ParabolicState& state, const ParabolicProblem& problem, const MeshPtr<Real>& mesh,
                          Real t_next, const ParabolicOperators& ops, const SolverOptions& opts = {});

SolveResult run_parabolic(const ParabolicProblem& problem, const MeshPtr<Real>& mesh, const SolverOptions& opts = {});

}  // namespace ifr
