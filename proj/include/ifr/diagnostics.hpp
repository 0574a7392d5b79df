#pragma once

#include <optional>
#include <vector>

#include "ifr/benchmarks.hpp"
#include "ifr/drivers.hpp"

namespace ifr {

/// A point of the diagnostic grid: every node (the interface node once per
/// side) and every element midpoint, in ascending x.
struct SamplePoint {
    Real x;
    bool minus_side;
    Eigen::Index element;   // element used to evaluate a broken field
    Eigen::Index node = -1;  // node index, -1 for midpoints
};

std::vector<SamplePoint> sampling_grid(const Mesh1D<Real>& mesh);

Real sample(const BrokenField<Real>& field, const SamplePoint& p);

/// Max |u_h - exact| over the sampling grid.
template <typename Exact>
Real linf_error(const BrokenField<Real>& u_h, Exact&& exact, Real t = 0) {
    Real worst = 0;
    for (const auto& p : sampling_grid(u_h.mesh())) {
        const Real e = std::abs(sample(u_h, p) - exact(p.x, t, p.minus_side));
        if (e > worst || std::isnan(e)) worst = e;
    }
    return worst;
}

struct InterfaceErrors {
    Real jump_error;
    Real left_trace_error;
    Real right_trace_error;
};

InterfaceErrors interface_errors(const BrokenField<Real>& u_h, Real s_h, const Benchmark& benchmark, Real t);

struct ErrorRecord {
    Eigen::Index mr = 0;
    Real h = 0;
    std::optional<Real> dt;
    Real jump_error = 0;
    Real left_trace_error = 0;
    Real right_trace_error = 0;
    Real linf_error = 0;
    /// Signed trace errors u_h -/+ minus exact, kept for consistency checks.
    Real left_signed = 0;
    Real right_signed = 0;
    Real s_h = 0;
};

struct OrderRow {
    Eigen::Index mr_from;
    Eigen::Index mr_to;
    Real jump;
    Real left_trace;
    Real right_trace;
    Real linf;
};

struct ConvergenceTable {
    BenchmarkId id;
    std::vector<ErrorRecord> records;  // decreasing h
    std::vector<OrderRow> orders;
};

/// log2(e(h) / e(h/2)) per column for each consecutive pair.
std::vector<OrderRow> estimate_orders(const std::vector<ErrorRecord>& records);

Real observed_order(Real coarse, Real fine);

enum class DtRule { h_squared, fixed };

struct LevelOptions {
    DtRule dt_rule = DtRule::h_squared;
    Real dt = 0;                        // used with DtRule::fixed
    std::optional<Real> final_time;     // overrides the benchmark's T
    SolverOptions solver{};
};

struct LevelRun {
    MeshPtr<Real> mesh;
    SolveResult result;
    ErrorRecord record;
    Real t = 0;  // time at which errors are measured
};

/// Solves a benchmark on a uniform fitted mesh with `mr` elements and measures its errors.
LevelRun run_level(const Benchmark& benchmark, Eigen::Index mr, const LevelOptions& opts = {});

/// Runs every level (concurrently) and returns rows ordered by mr.
ConvergenceTable converge(const Benchmark& benchmark, const std::vector<Eigen::Index>& mr_list,
                          const LevelOptions& opts = {});

struct ModeSample {
    Real x;
    bool minus_side;
    Real lhs;  // (u - u_h) - (u0 - u0_h)
    Real rhs;  // (s - s_h) u1
};

/// Both sides of the error splitting on the sampling grid, with u0 := u - s u1
/// for the exact jump s and u0_h the run's continuous part.
std::vector<ModeSample> error_mode_samples(const SolveResult& run, const Benchmark& benchmark, Real t);

/// max |lhs - rhs| over error_mode_samples.
Real error_mode_residual(const SolveResult& run, const Benchmark& benchmark, Real t);

}  // namespace ifr
