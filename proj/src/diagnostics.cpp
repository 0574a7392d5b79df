#include "ifr/diagnostics.hpp"

#include <cmath>
#include <future>
#include <limits>

namespace ifr {

std::vector<SamplePoint> sampling_grid(const Mesh1D<Real>& mesh) {
    const auto& x = mesh.nodes();
    const Eigen::Index k = mesh.interface_index();
    std::vector<SamplePoint> points;
    points.reserve(static_cast<std::size_t>(2 * mesh.num_nodes() + 1));
    for (Eigen::Index i = 0; i < mesh.num_nodes(); ++i) {
        if (i == k) {
            points.push_back({x[i], true, i - 1, i});
            points.push_back({x[i], false, i, i});
        } else {
            const bool minus = i < k;
            points.push_back({x[i], minus, i == 0 ? 0 : i - 1, i});
        }
        if (i + 1 < mesh.num_nodes())
            points.push_back({0.5 * (x[i] + x[i + 1]), mesh.on_minus_side(i), i, -1});
    }
    return points;
}

Real sample(const BrokenField<Real>& field, const SamplePoint& p) {
    if (p.node >= 0) return field.at_node(p.node, p.minus_side);
    return field.on_element(p.element, p.x);
}

InterfaceErrors interface_errors(const BrokenField<Real>& u_h, Real s_h, const Benchmark& benchmark, Real t) {
    const auto exact = benchmark.exact_traces(t);
    return {std::abs(s_h - benchmark.exact_jump(t)), std::abs(u_h.value_minus() - exact.minus),
            std::abs(u_h.value_plus() - exact.plus)};
}

Real observed_order(Real coarse, Real fine) {
    if (coarse == 0 || fine == 0) return std::numeric_limits<Real>::quiet_NaN();
    return std::log2(coarse / fine);
}

std::vector<OrderRow> estimate_orders(const std::vector<ErrorRecord>& records) {
    if (records.size() < 2) throw InvalidLadderError("order estimation needs at least two levels");
    std::vector<OrderRow> rows;
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const auto& a = records[i];
        const auto& b = records[i + 1];
        if (std::abs(a.h / b.h - 2) > 1e-12) throw InvalidLadderError("mesh sizes must halve between levels");
        rows.push_back({a.mr, b.mr, observed_order(a.jump_error, b.jump_error),
                        observed_order(a.left_trace_error, b.left_trace_error),
                        observed_order(a.right_trace_error, b.right_trace_error),
                        observed_order(a.linf_error, b.linf_error)});
    }
    return rows;
}

LevelRun run_level(const Benchmark& benchmark, Eigen::Index mr, const LevelOptions& opts) {
    auto mesh = std::make_shared<const Mesh1D<Real>>(
        build_fitted(benchmark.x_left(), benchmark.x_right(), benchmark.alpha(), mr));
    const Real h = mesh->h_max();

    ErrorRecord record;
    record.mr = mr;
    record.h = h;
    Real t = 0;
    SolveResult result = [&] {
        if (!benchmark.is_parabolic()) return solve_elliptic(benchmark.elliptic(), mesh, opts.solver);
        ParabolicProblem problem = benchmark.parabolic();
        problem.dt = opts.dt_rule == DtRule::h_squared ? h * h : opts.dt;
        if (opts.final_time) problem.T = *opts.final_time;
        t = problem.T;
        record.dt = problem.dt;
        return run_parabolic(problem, mesh, opts.solver);
    }();
    LevelRun run{mesh, std::move(result), record, t};

    const auto& u_h = run.result.u_h;
    const auto ie = interface_errors(u_h, run.result.s, benchmark, run.t);
    const auto exact = benchmark.exact_traces(run.t);
    run.record.jump_error = ie.jump_error;
    run.record.left_trace_error = ie.left_trace_error;
    run.record.right_trace_error = ie.right_trace_error;
    run.record.left_signed = u_h.value_minus() - exact.minus;
    run.record.right_signed = u_h.value_plus() - exact.plus;
    run.record.linf_error = linf_error(u_h, benchmark.exact, run.t);
    run.record.s_h = run.result.s;
    return run;
}

ConvergenceTable converge(const Benchmark& benchmark, const std::vector<Eigen::Index>& mr_list,
                          const LevelOptions& opts) {
    for (std::size_t i = 0; i + 1 < mr_list.size(); ++i)
        if (mr_list[i + 1] != 2 * mr_list[i]) throw InvalidLadderError("mr list must double between levels");

    std::vector<std::future<LevelRun>> pending;
    pending.reserve(mr_list.size());
    for (const auto mr : mr_list)
        pending.push_back(std::async(std::launch::async, [&benchmark, mr, &opts] { return run_level(benchmark, mr, opts); }));

    ConvergenceTable table{benchmark.id, {}, {}};
    for (auto& f : pending) table.records.push_back(f.get().record);
    if (table.records.size() >= 2) table.orders = estimate_orders(table.records);
    return table;
}

std::vector<ModeSample> error_mode_samples(const SolveResult& run, const Benchmark& benchmark, Real t) {
    const Real s = benchmark.exact_jump(t);
    const Real s_h = run.s;
    const auto& mesh = run.u_h.mesh();
    const BrokenField<Real> u0_h = BrokenField<Real>::continuous(run.u_h.mesh_ptr(), run.u0_part);

    std::vector<ModeSample> out;
    for (const auto& p : sampling_grid(mesh)) {
        const Real u = benchmark.exact(p.x, t, p.minus_side);
        const Real u1 = run.u1(p.x, p.minus_side);
        const Real u0 = u - s * u1;
        const Real lhs = (u - sample(run.u_h, p)) - (u0 - sample(u0_h, p));
        out.push_back({p.x, p.minus_side, lhs, (s - s_h) * u1});
    }
    return out;
}

Real error_mode_residual(const SolveResult& run, const Benchmark& benchmark, Real t) {
    Real worst = 0;
    for (const auto& m : error_mode_samples(run, benchmark, t)) worst = std::max(worst, std::abs(m.lhs - m.rhs));
    return worst;
}

}  // namespace ifr
