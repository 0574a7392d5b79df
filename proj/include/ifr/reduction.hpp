#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ifr/assembly.hpp"
#include "ifr/error.hpp"
#include "ifr/jump_law.hpp"
#include "ifr/mesh.hpp"
#include "ifr/tridiagonal.hpp"

namespace ifr {

/// Homogeneous piecewise-linear response to a unit interface jump.
///
/// Linear on each side, zero at both ends of the domain, continuous flux
/// beta * u' across alpha, and u(alpha+) - u(alpha-) = 1.
template <typename Scalar>
struct UnitJumpResponse {
    Scalar x_left;
    Scalar x_right;
    Scalar alpha;
    Scalar a_minus;  // slope left of alpha
    Scalar a_plus;   // slope right of alpha
    Scalar trace_minus;
    Scalar trace_plus;

    Scalar operator()(Scalar x, bool minus_side) const noexcept {
        return minus_side ? a_minus * (x - x_left) : a_plus * (x - x_right);
    }

    /// Side is inferred from x; alpha itself is taken from the minus side.
    Scalar operator()(Scalar x) const noexcept { return (*this)(x, !(x > alpha)); }

    BrokenField<Scalar> as_broken_field(MeshPtr<Scalar> mesh) const {
        return BrokenField<Scalar>::sample(std::move(mesh), [this](Scalar x, bool minus) { return (*this)(x, minus); });
    }
};

template <typename Scalar>
UnitJumpResponse<Scalar> unit_jump_response(const CoefficientPair<Scalar>& beta, Scalar alpha, Scalar x_left,
                                            Scalar x_right) {
    if (!(x_left < alpha && alpha < x_right))
        throw InvalidInterfaceError("interface must lie strictly inside the domain");
    const Scalar left_len = alpha - x_left;
    const Scalar right_len = x_right - alpha;
    const Scalar d = beta.beta_plus * left_len + beta.beta_minus * right_len;
    UnitJumpResponse<Scalar> r;
    r.x_left = x_left;
    r.x_right = x_right;
    r.alpha = alpha;
    r.a_minus = -beta.beta_plus / d;
    r.a_plus = -beta.beta_minus / d;
    r.trace_minus = r.a_minus * left_len;
    r.trace_plus = -r.a_plus * right_len;
    return r;
}

/// P1 solve of -(beta u')' = f with u(x_left) = xi, u(x_right) = eta and no jump.
template <typename Scalar, typename Source>
Vector<Scalar> solve_zero_jump_elliptic(const Mesh1D<Scalar>& mesh, const CoefficientPair<Scalar>& beta,
                                        Source&& f, Scalar xi, Scalar eta) {
    LinearSystem<Scalar> system{assemble_stiffness(mesh, beta), assemble_load(mesh, std::forward<Source>(f))};
    apply_dirichlet(system, xi, eta);
    return solve_tridiagonal(system.matrix, system.rhs);
}

template <typename Scalar>
struct InterfaceTraces {
    Scalar plus;
    Scalar minus;
};

/// Dense coefficients of a polynomial in s, lowest degree first.
template <typename Scalar>
struct ScalarPolynomial {
    std::vector<Scalar> coeffs;

    int degree() const noexcept {
        int d = static_cast<int>(coeffs.size()) - 1;
        while (d > 0 && coeffs[static_cast<std::size_t>(d)] == Scalar(0)) --d;
        return d;
    }

    Scalar operator()(Scalar s) const noexcept {
        Scalar r(0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) r = r * s + *it;
        return r;
    }

    Scalar coefficient(std::size_t power) const noexcept {
        return power < coeffs.size() ? coeffs[power] : Scalar(0);
    }
};

namespace detail {

template <typename Scalar>
std::vector<Scalar> poly_mul(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    std::vector<Scalar> r(a.size() + b.size() - 1, Scalar(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

template <typename Scalar>
std::vector<Scalar> poly_pow(const std::vector<Scalar>& base, int exponent) {
    std::vector<Scalar> r{Scalar(1)};
    for (int e = 0; e < exponent; ++e) r = poly_mul(r, base);
    return r;
}

}  // namespace detail

/// Expands p(s) = g(u0+ + s u1+, u0- + s u1-) - s for a polynomial law.
template <typename Scalar>
ScalarPolynomial<Scalar> reduced_equation_coefficients(const JumpLaw<Scalar>& law, InterfaceTraces<Scalar> u0,
                                                       InterfaceTraces<Scalar> u1) {
    if (!law.is_polynomial()) throw Error("reduced equation needs a polynomial jump law");
    const std::vector<Scalar> plus{u0.plus, u1.plus};
    const std::vector<Scalar> minus{u0.minus, u1.minus};
    std::vector<Scalar> p{Scalar(0), Scalar(0)};
    for (const auto& t : law.terms()) {
        const auto term = detail::poly_mul(detail::poly_pow(plus, t.i), detail::poly_pow(minus, t.j));
        if (term.size() > p.size()) p.resize(term.size(), Scalar(0));
        for (std::size_t n = 0; n < term.size(); ++n) p[n] += t.c * term[n];
    }
    p[1] -= Scalar(1);
    return ScalarPolynomial<Scalar>{std::move(p)};
}

enum class ScalarMethod { direct, closed_form_quadratic, newton, bisection_fallback };

inline const char* to_string(ScalarMethod m) {
    switch (m) {
        case ScalarMethod::direct: return "direct";
        case ScalarMethod::closed_form_quadratic: return "closed_form_quadratic";
        case ScalarMethod::newton: return "newton";
        case ScalarMethod::bisection_fallback: return "bisection_fallback";
    }
    return "unknown";
}

template <typename Scalar>
struct InterfaceReport {
    Scalar s{};
    Scalar residual{};  // |s - g(traces(s))|
    int iterations = 0;
    ScalarMethod method = ScalarMethod::direct;
    std::vector<Scalar> discarded_roots;
};

struct ScalarSolveOptions {
    double tol = 1e-12;
    int max_iter = 50;
    /// Skip the closed forms and always run the safeguarded Newton path.
    bool force_newton = false;
};

namespace detail {

template <typename Scalar>
struct ReducedFunction {
    const JumpLaw<Scalar>& law;
    InterfaceTraces<Scalar> u0;
    InterfaceTraces<Scalar> u1;

    Scalar value(Scalar s) const { return evaluate(law, u0.plus + s * u1.plus, u0.minus + s * u1.minus) - s; }

    Scalar derivative(Scalar s) const {
        const auto d = partials(law, u0.plus + s * u1.plus, u0.minus + s * u1.minus);
        return d.d_plus * u1.plus + d.d_minus * u1.minus - Scalar(1);
    }
};

template <typename Scalar>
bool converged(Scalar residual, Scalar s, double tol) {
    using std::abs;
    return abs(residual) <= Scalar(tol) * (Scalar(1) + abs(s));
}

template <typename Scalar>
bool sign_change(Scalar a, Scalar b) {
    return (a <= Scalar(0) && b >= Scalar(0)) || (a >= Scalar(0) && b <= Scalar(0));
}

/// Extra Newton steps past the tolerance while they keep lowering |p|.
template <typename Scalar>
Scalar polish(const ReducedFunction<Scalar>& p, Scalar s, Scalar& fs) {
    using std::abs;
    using std::isfinite;
    for (int k = 0; k < 3 && fs != Scalar(0); ++k) {
        const Scalar ds = p.derivative(s);
        if (ds == Scalar(0) || !isfinite(ds)) break;
        const Scalar next = s - fs / ds;
        const Scalar fnext = p.value(next);
        if (!(abs(fnext) < abs(fs))) break;
        s = next;
        fs = fnext;
    }
    return s;
}

template <typename Scalar>
InterfaceReport<Scalar> safeguarded_newton(const ReducedFunction<Scalar>& p, Scalar s_init,
                                           const ScalarSolveOptions& opts) {
    using std::abs;
    using std::isfinite;
    constexpr double bracket_limit = 1e6;

    InterfaceReport<Scalar> report;
    report.method = ScalarMethod::newton;

    // Plain Newton from the initial guess. On a quadratic this lands on the
    // root on the same side of the vertex, i.e. the root nearest s_init.
    Scalar s = s_init;
    int newton_steps = 0;
    for (int it = 0; it <= opts.max_iter; ++it, ++newton_steps) {
        Scalar fs;
        Scalar ds;
        try {
            fs = p.value(s);
            ds = p.derivative(s);
        } catch (const EvaluationError&) {
            break;
        }
        if (converged(fs, s, opts.tol)) {
            report.s = polish(p, s, fs);
            report.residual = abs(fs);
            report.iterations = it;
            return report;
        }
        if (it == opts.max_iter || ds == Scalar(0) || !isfinite(ds)) break;
        s -= fs / ds;
        if (!isfinite(s) || abs(s - s_init) > Scalar(bracket_limit)) break;
    }

    // Bracket by doubling around s_init, then Newton steps kept inside the
    // bracket with bisection whenever a step would leave it.
    report.method = ScalarMethod::bisection_fallback;
    const Scalar f0 = p.value(s_init);
    Scalar lo{}, hi{}, flo{}, fhi{};
    bool bracketed = false;
    for (Scalar w(1e-3); w <= Scalar(bracket_limit) && !bracketed; w *= Scalar(2)) {
        const Scalar right = s_init + w;
        const Scalar left = s_init - w;
        Scalar fr, fl;
        try {
            fr = p.value(right);
            fl = p.value(left);
        } catch (const EvaluationError&) {
            break;
        }
        if (sign_change(f0, fr)) {
            lo = s_init, hi = right, flo = f0, fhi = fr;
            bracketed = true;
        } else if (sign_change(fl, f0)) {
            lo = left, hi = s_init, flo = fl, fhi = f0;
            bracketed = true;
        }
    }
    if (!bracketed)
        throw ConvergenceError("scalar interface equation: Newton did not converge and no bracket was found",
                               static_cast<double>(s));

    s = abs(flo) < abs(fhi) ? lo : hi;
    const int budget = opts.max_iter + 64;  // 64 bisections exhaust a double bracket
    for (int it = 0; it < budget; ++it) {
        Scalar fs = p.value(s);
        if (converged(fs, s, opts.tol)) {
            report.s = polish(p, s, fs);
            report.residual = abs(fs);
            report.iterations = newton_steps + it;
            return report;
        }
        if (sign_change(flo, fs)) hi = s, fhi = fs;
        else lo = s, flo = fs;
        const Scalar ds = p.derivative(s);
        Scalar next = ds != Scalar(0) ? s - fs / ds : lo - Scalar(1);
        if (!(next > lo && next < hi)) next = (lo + hi) / Scalar(2);
        if (next == s) break;
        s = next;
    }
    throw ConvergenceError("scalar interface equation: bracketed iteration did not converge",
                           static_cast<double>(s));
}

}  // namespace detail

/// Solves s = g(u0+ + s u1+, u0- + s u1-).
///
/// Constant laws are direct, bilinear laws use the quadratic formula with
/// the root nearest s_init, everything else goes through safeguarded Newton.
template <typename Scalar>
InterfaceReport<Scalar> solve_scalar_interface(const JumpLaw<Scalar>& law, InterfaceTraces<Scalar> u0,
                                               InterfaceTraces<Scalar> u1, Scalar s_init,
                                               const ScalarSolveOptions& opts = {}) {
    using std::abs;
    using std::sqrt;
    using Law = JumpLaw<Scalar>;
    const detail::ReducedFunction<Scalar> p{law, u0, u1};

    if (!opts.force_newton) {
        if (const auto* c = std::get_if<typename Law::Constant>(&law.kind())) {
            InterfaceReport<Scalar> report;
            report.s = c->mu;
            report.residual = abs(p.value(report.s));
            report.method = ScalarMethod::direct;
            return report;
        }
        if (std::holds_alternative<typename Law::Bilinear>(law.kind())) {
            const auto poly = reduced_equation_coefficients(law, u0, u1);
            const Scalar a = poly.coefficient(2);
            const Scalar b = poly.coefficient(1);
            const Scalar c = poly.coefficient(0);
            InterfaceReport<Scalar> report;
            report.method = ScalarMethod::closed_form_quadratic;
            if (a == Scalar(0)) {
                // b = -1 + lambda * (...) can only vanish together with a in degenerate data
                if (b == Scalar(0)) throw NoRootError("reduced interface equation is degenerate");
                report.s = -c / b;
            } else {
                const Scalar disc = b * b - Scalar(4) * a * c;
                if (disc < Scalar(0)) throw NoRootError("reduced quadratic has no real root (discriminant < 0)");
                const Scalar q = -(b + (b >= Scalar(0) ? sqrt(disc) : -sqrt(disc))) / Scalar(2);
                const Scalar r1 = q / a;
                const Scalar r2 = q != Scalar(0) ? c / q : r1;
                const bool first = abs(r1 - s_init) <= abs(r2 - s_init);
                report.s = first ? r1 : r2;
                report.discarded_roots.push_back(first ? r2 : r1);
            }
            Scalar fs = p.value(report.s);
            // cancellation in the expanded coefficients is cleaned up against the law itself
            const Scalar before = report.s;
            report.s = detail::polish(p, report.s, fs);
            if (report.s != before) report.iterations = 1;
            report.residual = abs(fs);
            return report;
        }
    }
    return detail::safeguarded_newton(p, s_init, opts);
}

/// u_h = u0 + s * u1 on the mesh of u0.
template <typename Scalar>
BrokenField<Scalar> reconstruct(const MeshPtr<Scalar>& mesh, const Vector<Scalar>& u0, Scalar s,
                                const UnitJumpResponse<Scalar>& u1) {
    if (u0.size() != mesh->num_nodes()) throw MeshMismatchError("reconstruct: nodal field size mismatch");
    if (mesh->alpha() != u1.alpha || mesh->x_left() != u1.x_left || mesh->x_right() != u1.x_right)
        throw MeshMismatchError("reconstruct: unit-jump response built for another geometry");
    BrokenField<Scalar> field = BrokenField<Scalar>::continuous(mesh, u0);
    const BrokenField<Scalar> mode = u1.as_broken_field(mesh);
    field.values() += s * mode.values();
    return field;
}

template <typename Scalar>
struct TraceTriple {
    Scalar minus;
    Scalar plus;
    Scalar jump;
};

template <typename Scalar>
TraceTriple<Scalar> traces(const BrokenField<Scalar>& field) {
    return {field.value_minus(), field.value_plus(), field.value_plus() - field.value_minus()};
}

}  // namespace ifr
