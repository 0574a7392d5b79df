#include "doctest.h"

#include <cmath>
#include <limits>
#include <memory>

#include "ifr/ifr.hpp"
#include "oracles.hpp"

using namespace ifr;
using Law = JumpLaw<double>;

namespace {

MeshPtr<double> make_mesh(double a, double b, double alpha, Eigen::Index mr) {
    return std::make_shared<const Mesh1D<double>>(build_fitted(a, b, alpha, mr));
}

ParabolicProblem zero_parabolic() {
    ParabolicProblem p;
    p.beta = CoefficientPair<double>(1, 0.1);
    p.f = [](double, double) { return 0.0; };
    p.xi = [](double) { return 0.0; };
    p.eta = [](double) { return 0.0; };
    p.initial = [](double, bool) { return 0.0; };
    p.T = 0.25;
    p.dt = 0.0625;
    return p;
}

}  // namespace

TEST_SUITE("drivers") {
    TEST_CASE("elliptic prescribed-jump benchmark, first table row") {
        const auto bench = make_elliptic_prescribed();
        const auto mesh = make_mesh(-1, 1, 0, 16);  // h = 0.125
        const auto r = solve_elliptic(bench.elliptic(), mesh);
        const auto exact = bench.exact_traces();
        CHECK(r.s == 1.1);
        CHECK(std::abs(r.u_h.value_minus() - exact.minus) <= 1e-13);
        CHECK(std::abs(r.u_h.value_plus() - exact.plus) <= 1e-13);
        CHECK(traces(r.u_h).jump == doctest::Approx(1.1).epsilon(1e-15));
        const double linf = linf_error(r.u_h, bench.exact);
        CHECK(linf <= 3 * 6.5989e-4);
        CHECK(linf >= 6.5989e-4 / 3);
        CHECK(r.u_h.values() == reconstruct(mesh, r.u0_part, r.s, r.u1).values());
    }

    TEST_CASE("elliptic trivial data") {
        const auto mesh = make_mesh(-1, 1, 0, 8);
        EllipticProblem p;
        p.f = [](double) { return 0.0; };
        p.law = Law::constant(0);
        const auto zero = solve_elliptic(p, mesh);
        CHECK(zero.s == 0.0);
        CHECK(zero.u_h.values().isZero());

        p.law = Law::constant(1);
        const auto unit = solve_elliptic(p, mesh);
        CHECK(unit.s == 1.0);
        const auto u1 = unit_jump_response(p.beta, 0.0, -1.0, 1.0).as_broken_field(mesh);
        CHECK((unit.u_h.values() - u1.values()).lpNorm<Eigen::Infinity>() <= 1e-15);
    }

    TEST_CASE("elliptic solve rejects an unfitted mesh") {
        EllipticProblem p;
        p.f = [](double) { return 0.0; };
        p.alpha = 0.3;
        CHECK_THROWS_AS(solve_elliptic(p, make_mesh(-1, 1, 0, 8)), MeshMismatchError);
    }

    TEST_CASE("nonlinear elliptic solve matches the monolithic oracle") {
        EllipticProblem p;
        p.beta = CoefficientPair<double>(2, 0.5);
        p.alpha = 0.3;
        p.f = [](double x) { return 1 + x * x; };
        p.xi = 0.5;
        p.eta = 1.5;
        p.law = Law::polynomial({{1, 1, 0.4}, {2, 0, -0.1}, {0, 0, 0.2}});
        const auto mesh = make_mesh(-1, 1, 0.3, 20);
        const auto r = solve_elliptic(p, mesh);
        const auto mono = oracle::monolithic_elliptic(p, mesh);
        CHECK(std::abs(r.s - mono.s) <= 1e-10);
        CHECK((r.u_h.values() - mono.u.values()).lpNorm<Eigen::Infinity>() <= 1e-10);
        const double g = evaluate(p.law, r.u_h.value_plus(), r.u_h.value_minus());
        CHECK(std::abs(r.s - g) <= 1e-12 * (1 + std::abs(r.s)));
    }

    TEST_CASE("step count") {
        ParabolicProblem p = zero_parabolic();
        p.T = 1;
        p.dt = 1.0 / 64;
        CHECK(p.num_steps() == 64);
        p.dt = 0.3;
        CHECK_THROWS_AS(p.num_steps(), Error);
        p.dt = 2;
        CHECK_THROWS_AS(p.num_steps(), Error);
    }

    TEST_CASE("zero data stays zero") {
        const auto r = run_parabolic(zero_parabolic(), make_mesh(-1, 1, 0, 8));
        CHECK(r.u_h.values().isZero());
        CHECK(r.history.size() == 5);
        for (const auto& h : r.history) CHECK(h.s == 0.0);
    }

    TEST_CASE("steady state is a fixed point") {
        // continuous harmonic part through (-1, 0) and (1, 2) plus 1.1 u1
        const CoefficientPair<double> beta(1, 0.1);
        const auto u1 = unit_jump_response(beta, 0.0, -1.0, 1.0);
        const double q = 2.0 / 1.1;  // right slope; left slope is 0.1 q
        auto steady = [&](double x, bool minus) {
            const double u0 = minus ? 0.1 * q * (x + 1) : 2 + q * (x - 1);
            return u0 + 1.1 * u1(x, minus);
        };
        ParabolicProblem p = zero_parabolic();
        p.eta = [](double) { return 2.0; };
        p.initial = steady;
        p.law = Law::constant(1.1);
        p.T = 1;
        p.dt = 0.05;
        const auto mesh = make_mesh(-1, 1, 0, 10);
        const auto ops = ParabolicOperators::build(p, mesh);
        ParabolicState state{BrokenField<double>::sample(mesh, steady), 1.1};
        const Vector<double> start = state.u.values();
        for (int n = 1; n <= 20; ++n) {
            auto next = step_parabolic(state, p, mesh, n * p.dt, ops);
            CHECK((next.state.u.values() - state.u.values()).lpNorm<Eigen::Infinity>() <= 1e-12);
            CHECK(next.state.s == 1.1);
            state = std::move(next.state);
        }
        CHECK((state.u.values() - start).lpNorm<Eigen::Infinity>() <= 1e-11);
    }

    TEST_CASE("constant law keeps s fixed and every step satisfies the scalar equation") {
        auto bench = make_parabolic_nonlinear();
        const auto mesh = make_mesh(-1, 1, 0, 16);
        ParabolicProblem p = bench.parabolic();
        p.dt = 1.0 / 64;
        p.T = 0.5;
        const auto ops = ParabolicOperators::build(p, mesh);
        ParabolicState state{BrokenField<double>::sample(mesh, p.initial), 1.0};
        for (int n = 1; n <= 32; ++n) {
            auto next = step_parabolic(state, p, mesh, n * p.dt, ops);
            const auto tr = traces(next.state.u);
            CHECK(tr.minus == next.u0_part[8] + next.state.s * ops.u1.trace_minus);
            CHECK(tr.plus == next.u0_part[8] + next.state.s * ops.u1.trace_plus);
            const double g = evaluate(p.law, tr.plus, tr.minus);
            CHECK(std::abs(next.state.s - g) <= 1e-12 * (1 + std::abs(next.state.s)));
            state = std::move(next.state);
        }

        auto prescribed = make_parabolic_prescribed();
        const auto r = run_parabolic(prescribed.parabolic(), make_mesh(-1, 1, 0, 8));
        for (const auto& h : r.history) CHECK(h.s == 1.0);
        CHECK(r.interface.method == ScalarMethod::direct);
    }

    TEST_CASE("parabolic runs match the monolithic oracle on a coarse mesh") {
        for (auto id : {BenchmarkId::parabolic_prescribed, BenchmarkId::parabolic_nonlinear}) {
            auto bench = make_benchmark(id);
            ParabolicProblem p = bench.parabolic();
            p.dt = 1.0 / 64;
            p.T = 0.5;
            const auto mesh = make_mesh(-1, 1, 0, 8);
            const auto r = run_parabolic(p, mesh);
            const auto mono = oracle::monolithic_parabolic(p, mesh);
            CHECK(std::abs(r.s - mono.s) <= 1e-10);
            CHECK((r.u_h.values() - mono.u.values()).lpNorm<Eigen::Infinity>() <= 1e-10);
        }
    }

    TEST_CASE("scalar failure aborts the run and keeps the history") {
        ParabolicProblem p = zero_parabolic();
        p.beta = CoefficientPair<double>(1, 1);
        p.eta = [](double t) { return 4 * t; };
        // finite only while the plus trace stays below 1
        p.law = Law::general(
            [](double up, double) { return up < 1 ? 0.0 : std::numeric_limits<double>::quiet_NaN(); },
            [](double, double) { return Law::Partials{0.0, 0.0}; });
        p.T = 1;
        p.dt = 0.125;
        try {
            run_parabolic(p, make_mesh(-1, 1, 0, 8));
            FAIL("expected the run to abort");
        } catch (const RunAbortedError& e) {
            CHECK(e.step() > 1);
            CHECK(e.history().size() == static_cast<std::size_t>(e.step()));
            CHECK(e.history().front().t == 0.0);
        }
    }

    TEST_CASE("time error is subdominant at dt = h^2") {
        const auto bench = make_parabolic_prescribed();
        LevelOptions coarse;
        LevelOptions fine;
        fine.dt_rule = DtRule::fixed;
        fine.dt = (1.0 / 32) * (1.0 / 32) / 2;
        const auto a = run_level(bench, 64, coarse).record;  // h = 1/32
        const auto b = run_level(bench, 64, fine).record;
        CHECK(std::abs(a.left_trace_error - b.left_trace_error) < 0.25 * a.left_trace_error);
        CHECK(std::abs(a.right_trace_error - b.right_trace_error) < 0.25 * a.right_trace_error);
    }
}
