#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ifr/drivers.hpp"

namespace ifr {

enum class BenchmarkId { elliptic_prescribed, parabolic_prescribed, parabolic_nonlinear };

std::string_view to_string(BenchmarkId id);
std::optional<BenchmarkId> parse_benchmark_id(std::string_view name);

/// Manufactured interface problem with its two-sided exact solution.
struct Benchmark {
    BenchmarkId id;
    std::variant<EllipticProblem, ParabolicProblem> problem;
    /// u(x, t) evaluated on the given side (t ignored for elliptic problems).
    std::function<Real(Real, Real, bool)> exact;

    bool is_parabolic() const noexcept { return std::holds_alternative<ParabolicProblem>(problem); }
    const EllipticProblem& elliptic() const { return std::get<EllipticProblem>(problem); }
    const ParabolicProblem& parabolic() const { return std::get<ParabolicProblem>(problem); }
    ParabolicProblem& parabolic() { return std::get<ParabolicProblem>(problem); }

    Real alpha() const;
    Real x_left() const;
    Real x_right() const;
    const CoefficientPair<Real>& beta() const;
    const JumpLaw<Real>& law() const;
    /// Final time (0 for elliptic problems).
    Real final_time() const;

    InterfaceTraces<Real> exact_traces(Real t = 0) const { return {exact(alpha(), t, false), exact(alpha(), t, true)}; }
    Real exact_jump(Real t = 0) const {
        const auto tr = exact_traces(t);
        return tr.plus - tr.minus;
    }
};

/// -(beta u')' = 0.1 sin(pi x), beta = (1, 0.1), alpha = 0, prescribed jump 1.1.
Benchmark make_elliptic_prescribed();
/// Heat equation with prescribed unit jump, T = 1.
Benchmark make_parabolic_prescribed();
/// Heat equation with [u] = 0.5 u+ u-, u(-1) = 0, u(1) = 2, T = 2.
Benchmark make_parabolic_nonlinear();

Benchmark make_benchmark(BenchmarkId id);

}  // namespace ifr
