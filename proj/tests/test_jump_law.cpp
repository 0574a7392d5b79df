#include "doctest.h"

#include <limits>
#include <random>

#include "ifr/jump_law.hpp"

using namespace ifr;
using Law = JumpLaw<double>;

namespace {

void check_partials_against_fd(const Law& law, double up, double um) {
    const double step = 1e-6;
    const double fd_plus = (evaluate(law, up + step, um) - evaluate(law, up - step, um)) / (2 * step);
    const double fd_minus = (evaluate(law, up, um + step) - evaluate(law, up, um - step)) / (2 * step);
    const auto d = partials(law, up, um);
    CHECK(std::abs(d.d_plus - fd_plus) <= 1e-6 * std::max(1.0, std::abs(fd_plus)));
    CHECK(std::abs(d.d_minus - fd_minus) <= 1e-6 * std::max(1.0, std::abs(fd_minus)));
}

}  // namespace

TEST_SUITE("jump_law") {
    TEST_CASE("evaluate") {
        CHECK(evaluate(Law::constant(1.1), 3.0, -7.0) == 1.1);
        CHECK(evaluate(Law::bilinear(0.5), 2.0, 1.0) == 1.0);
        CHECK(evaluate(Law::bilinear(-3.7), 4.2, 0.0) == 0.0);
        CHECK(evaluate(Law::bilinear(123.0), 0.0, 9.0) == 0.0);
        const auto poly = Law::polynomial({{2, 0, 1.0}, {0, 1, -2.0}, {0, 0, 0.25}});
        CHECK(evaluate(poly, 3.0, 5.0) == doctest::Approx(9 - 10 + 0.25));
    }

    TEST_CASE("partials") {
        const auto c = partials(Law::constant(2.0), 1.0, 1.0);
        CHECK(c.d_plus == 0);
        CHECK(c.d_minus == 0);
        const auto b = partials(Law::bilinear(0.5), 3.0, -4.0);
        CHECK(b.d_plus == -2.0);
        CHECK(b.d_minus == 1.5);
        const auto square = Law::polynomial({{2, 0, 1.0}});
        const auto p = partials(square, 3.0, 17.0);
        CHECK(p.d_plus == 6.0);
        CHECK(p.d_minus == 0.0);
        check_partials_against_fd(square, 3.0, 17.0);
    }

    TEST_CASE("degree") {
        CHECK(Law::constant(1).degree() == 0);
        CHECK(Law::bilinear(0.5).degree() == 2);
        CHECK(Law::polynomial({{3, 1, 1.0}, {1, 0, 2.0}}).degree() == 4);
        CHECK(Law::polynomial({{3, 1, 0.0}, {1, 0, 2.0}}).degree() == 1);
        CHECK_THROWS_AS(Law::polynomial({{-1, 0, 1.0}}), Error);
    }

    TEST_CASE("polynomial c11 matches bilinear exactly") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-10, 10);
        for (int i = 0; i < 1000; ++i) {
            const double lambda = u(rng), up = u(rng), um = u(rng);
            CHECK(evaluate(Law::polynomial({{1, 1, lambda}}), up, um) == evaluate(Law::bilinear(lambda), up, um));
        }
    }

    TEST_CASE("analytic partials match central differences") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(-2, 2);
        const std::vector<Law> laws{Law::constant(0.3), Law::bilinear(0.5), Law::bilinear(-1.25),
                                    Law::polynomial({{2, 1, 0.5}, {0, 3, -0.2}, {1, 0, 1.0}, {0, 0, 4.0}}),
                                    Law::polynomial({{4, 2, 0.01}})};
        for (const auto& law : laws)
            for (int i = 0; i < 200; ++i) check_partials_against_fd(law, u(rng), u(rng));
    }

    TEST_CASE("general law and overflow") {
        const auto g = Law::general([](double up, double um) { return std::sin(up) * um; },
                                    [](double up, double um) { return Law::Partials{std::cos(up) * um, std::sin(up)}; });
        CHECK(!g.is_polynomial());
        CHECK(g.degree() == -1);
        CHECK(evaluate(g, 0.5, 2.0) == doctest::Approx(2 * std::sin(0.5)));
        check_partials_against_fd(g, 0.5, 2.0);
        CHECK_THROWS_AS(evaluate(Law::bilinear(1e300), 1e10, 1e10), EvaluationError);
    }
}
