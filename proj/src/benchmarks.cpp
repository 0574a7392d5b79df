#include "ifr/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace ifr {

using std::numbers::pi;

std::string_view to_string(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::elliptic_prescribed: return "elliptic-prescribed";
        case BenchmarkId::parabolic_prescribed: return "parabolic-prescribed";
        case BenchmarkId::parabolic_nonlinear: return "parabolic-nonlinear";
    }
    return "unknown";
}

std::optional<BenchmarkId> parse_benchmark_id(std::string_view name) {
    for (auto id : {BenchmarkId::elliptic_prescribed, BenchmarkId::parabolic_prescribed,
                    BenchmarkId::parabolic_nonlinear})
        if (to_string(id) == name) return id;
    return std::nullopt;
}

namespace {

template <typename F>
decltype(auto) visit_problem(const Benchmark& b, F&& f) {
    return std::visit(std::forward<F>(f), b.problem);
}

}  // namespace

Real Benchmark::alpha() const {
    return visit_problem(*this, [](const auto& p) { return p.alpha; });
}
Real Benchmark::x_left() const {
    return visit_problem(*this, [](const auto& p) { return p.x_left; });
}
Real Benchmark::x_right() const {
    return visit_problem(*this, [](const auto& p) { return p.x_right; });
}
const CoefficientPair<Real>& Benchmark::beta() const {
    return visit_problem(*this, [](const auto& p) -> const CoefficientPair<Real>& { return p.beta; });
}
const JumpLaw<Real>& Benchmark::law() const {
    return visit_problem(*this, [](const auto& p) -> const JumpLaw<Real>& { return p.law; });
}
Real Benchmark::final_time() const { return is_parabolic() ? parabolic().T : Real(0); }

Benchmark make_elliptic_prescribed() {
    EllipticProblem p;
    p.x_left = -1;
    p.x_right = 1;
    p.alpha = 0;
    p.beta = CoefficientPair<Real>(1, 0.1);
    p.f = [](Real x) { return 0.1 * std::sin(pi * x); };
    p.xi = 0;
    p.eta = 0;
    p.law = JumpLaw<Real>::constant(1.1);
    auto exact = [](Real x, Real, bool minus) {
        const Real s = std::sin(pi * x) / (pi * pi);
        return minus ? 0.1 * s - 0.1 * (x + 1) : s - (x - 1);
    };
    return Benchmark{BenchmarkId::elliptic_prescribed, p, exact};
}

Benchmark make_parabolic_prescribed() {
    constexpr Real mu = 1;
    constexpr Real a = -mu / 11;
    constexpr Real b = 10 * a;
    ParabolicProblem p;
    p.beta = CoefficientPair<Real>(1, 0.1);
    p.f = [](Real x, Real t) {
        const Real base = std::exp(t) * std::sin(pi * x);
        return x < 0 ? (1 + pi * pi) * base : (10 + pi * pi) * base;
    };
    p.xi = [](Real) { return Real(0); };
    p.eta = [](Real) { return Real(0); };
    auto exact = [a, b](Real x, Real t, bool minus) {
        const Real base = std::exp(t) * std::sin(pi * x);
        return minus ? base + a * (x + 1) : 10 * base + b * (x - 1);
    };
    p.initial = [exact](Real x, bool minus) { return exact(x, 0, minus); };
    p.law = JumpLaw<Real>::constant(mu);
    p.T = 1;
    p.dt = 0.015625;
    return Benchmark{BenchmarkId::parabolic_prescribed, p, exact};
}

Benchmark make_parabolic_nonlinear() {
    ParabolicProblem p;
    p.beta = CoefficientPair<Real>(1, 0.1);
    p.f = [](Real x, Real t) {
        const Real decay = std::exp(-t);
        if (x < 0) return (pi * pi - 1) * decay * std::sin(pi * x);
        return -10 * pi * decay * (x - x * x) + 2 * (pi * decay + 1);
    };
    p.xi = [](Real) { return Real(0); };
    p.eta = [](Real) { return Real(2); };
    auto exact = [](Real x, Real t, bool minus) {
        const Real decay = std::exp(-t);
        return minus ? decay * std::sin(pi * x) + x + 1 : 2 + 10 * (pi * decay + 1) * (x - x * x);
    };
    p.initial = [exact](Real x, bool minus) { return exact(x, 0, minus); };
    p.law = JumpLaw<Real>::bilinear(0.5);
    p.T = 2;
    p.dt = 0.015625;
    return Benchmark{BenchmarkId::parabolic_nonlinear, p, exact};
}

Benchmark make_benchmark(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::elliptic_prescribed: return make_elliptic_prescribed();
        case BenchmarkId::parabolic_prescribed: return make_parabolic_prescribed();
        case BenchmarkId::parabolic_nonlinear: return make_parabolic_nonlinear();
    }
    throw Error("unknown benchmark");
}

}  // namespace ifr
