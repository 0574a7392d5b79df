#include "ifr/drivers.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace ifr {

int ParabolicProblem::num_steps() const {
    if (!(dt > 0)) throw Error("time step must be positive");
    if (!(T >= dt)) throw Error("final time must be at least one time step");
    const Real q = T / dt;
    const Real n = std::round(q);
    const Real ulp = std::nextafter(q, q + 1) - q;
    if (std::abs(q - n) > 0.5 * ulp) {
        std::ostringstream msg;
        msg << "T / dt = " << q << " is not an integer step count";
        throw Error(msg.str());
    }
    return static_cast<int>(n);
}

namespace {

InterfaceTraces<Real> interface_of_continuous(const Mesh1D<Real>& mesh, const Vector<Real>& u0) {
    const Real v = u0[mesh.interface_index()];
    return {v, v};
}

InterfaceTraces<Real> interface_of(const UnitJumpResponse<Real>& u1) { return {u1.trace_plus, u1.trace_minus}; }

void check_geometry(const MeshPtr<Real>& mesh, Real x_left, Real x_right, Real alpha) {
    if (!mesh) throw MeshMismatchError("no mesh");
    if (mesh->x_left() != x_left || mesh->x_right() != x_right)
        throw MeshMismatchError("mesh does not cover the problem domain");
    if (mesh->alpha() != alpha) throw MeshMismatchError("mesh is not fitted to the problem interface");
}

}  // namespace

SolveResult solve_elliptic(const EllipticProblem& problem, const MeshPtr<Real>& mesh, const SolverOptions& opts) {
    check_geometry(mesh, problem.x_left, problem.x_right, problem.alpha);

    // bulk solve
    Vector<Real> u0 = solve_zero_jump_elliptic(*mesh, problem.beta, problem.f, problem.xi, problem.eta);
    // interface response
    const auto u1 = unit_jump_response(problem.beta, problem.alpha, problem.x_left, problem.x_right);
    // scalar interface equation
    InterfaceReport<Real> report;
    try {
        report = solve_scalar_interface(problem.law, interface_of_continuous(*mesh, u0), interface_of(u1), Real(0),
                                        opts.scalar);
    } catch (const Error& e) {
        throw Error(std::string("elliptic solve: ") + e.what());
    }
    // reconstruction
    BrokenField<Real> u_h = reconstruct(mesh, u0, report.s, u1);
    const Real s = report.s;
    return SolveResult{std::move(u0), s, std::move(u_h), std::move(report), u1, {}};
}

ParabolicOperators ParabolicOperators::build(const ParabolicProblem& problem, const MeshPtr<Real>& mesh) {
    check_geometry(mesh, problem.x_left, problem.x_right, problem.alpha);
    const Real dt = problem.dt;
    auto stiffness = assemble_stiffness(*mesh, problem.beta);
    auto mass = assemble_mass(*mesh);
    TridiagonalMatrix<Real> op = (Real(1) / dt) * mass + stiffness;
    TridiagonalMatrix<Real> bounded = op;
    apply_dirichlet_rows(bounded);
    const auto u1 = unit_jump_response(problem.beta, problem.alpha, problem.x_left, problem.x_right);
    auto u1_field = u1.as_broken_field(mesh);
    Vector<Real> mass_u1 = mass_apply_broken(*mesh, u1_field);
    return ParabolicOperators{std::move(stiffness),
                              std::move(mass),
                              std::move(op),
                              TridiagonalFactorization<Real>(bounded),
                              u1,
                              std::move(u1_field),
                              std::move(mass_u1),
                              dt};
}

StepResult step_parabolic(const ParabolicState& state, const ParabolicProblem& problem, const MeshPtr<Real>& mesh,
                          Real t_next, const ParabolicOperators& ops, const SolverOptions& opts) {
    if (!(state.u.mesh() == *mesh))
        throw MeshMismatchError("parabolic state lives on another mesh");

    // (u^n - s^n u1, phi_i), i.e. the mass product of the continuous part
    Vector<Real> rhs = mass_apply_broken(*mesh, state.u) - state.s * ops.mass_u1;
    rhs /= ops.dt;
    rhs += assemble_load(*mesh, problem.f, t_next);
    apply_dirichlet_rhs(ops.step_operator, rhs, problem.xi(t_next), problem.eta(t_next));
    Vector<Real> u0 = ops.factorization.solve(rhs);

    auto report = solve_scalar_interface(problem.law, interface_of_continuous(*mesh, u0), interface_of(ops.u1),
                                         state.s, opts.scalar);
    BrokenField<Real> u = reconstruct(mesh, u0, report.s, ops.u1);
    const Real s = report.s;
    return StepResult{ParabolicState{std::move(u), s}, std::move(u0), std::move(report)};
}

SolveResult run_parabolic(const ParabolicProblem& problem, const MeshPtr<Real>& mesh, const SolverOptions& opts) {
    const int steps = problem.num_steps();
    const ParabolicOperators ops = ParabolicOperators::build(problem, mesh);

    BrokenField<Real> u = BrokenField<Real>::sample(mesh, problem.initial);
    const Real s0 = u.jump();
    ParabolicState state{std::move(u), s0};
    Vector<Real> u0 = (state.u - s0 * ops.u1_field).nodal();

    std::vector<TimeSample> history;
    history.reserve(static_cast<std::size_t>(steps) + 1);
    history.push_back({0, s0});
    InterfaceReport<Real> report;
    report.s = s0;

    for (int n = 0; n < steps; ++n) {
        const Real t_next = Real(n + 1) * problem.dt;
        try {
            StepResult next = step_parabolic(state, problem, mesh, t_next, ops, opts);
            state = std::move(next.state);
            u0 = std::move(next.u0_part);
            report = std::move(next.interface);
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "parabolic run aborted at step " << n + 1 << " (t = " << t_next << "): " << e.what();
            throw RunAbortedError(msg.str(), n + 1, std::move(history));
        }
        history.push_back({t_next, state.s});
    }
    return SolveResult{std::move(u0), state.s, std::move(state.u), std::move(report), ops.u1, std::move(history)};
}

}  // namespace ifr
