#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "ifr/error.hpp"

namespace ifr {

/// Transmission law [u] = g(u_plus, u_minus) and its first partials.
///
/// Closed-form laws are bivariate polynomials. `General` wraps a
/// user-supplied smooth law for library callers.
template <typename Scalar>
class JumpLaw {
public:
    struct Constant {
        Scalar mu;
    };
    struct Bilinear {
        Scalar lambda;
    };
    struct Term {
        int i;  // power of u_plus
        int j;  // power of u_minus
        Scalar c;
    };
    struct Polynomial {
        std::vector<Term> terms;
    };
    struct Partials {
        Scalar d_plus;
        Scalar d_minus;
    };
    struct General {
        std::function<Scalar(Scalar, Scalar)> value;
        std::function<Partials(Scalar, Scalar)> partials;
    };

    using Kind = std::variant<Constant, Bilinear, Polynomial, General>;

    static JumpLaw constant(Scalar mu) { return JumpLaw(Constant{mu}); }
    static JumpLaw bilinear(Scalar lambda) { return JumpLaw(Bilinear{lambda}); }
    static JumpLaw polynomial(std::vector<Term> terms) {
        for (const Term& t : terms) {
            if (t.i < 0 || t.j < 0) throw Error("polynomial jump law: negative exponent");
            if (!std::isfinite(static_cast<double>(t.c))) throw Error("polynomial jump law: non-finite coefficient");
        }
        return JumpLaw(Polynomial{std::move(terms)});
    }
    static JumpLaw general(std::function<Scalar(Scalar, Scalar)> value,
                           std::function<Partials(Scalar, Scalar)> partials) {
        return JumpLaw(General{std::move(value), std::move(partials)});
    }

    const Kind& kind() const noexcept { return kind_; }

    bool is_polynomial() const noexcept { return !std::holds_alternative<General>(kind_); }

    /// Total degree; -1 for a general (non-polynomial) law.
    int degree() const {
        return std::visit(
            [](const auto& k) -> int {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>) {
                    return 0;
                } else if constexpr (std::is_same_v<K, Bilinear>) {
                    return 2;
                } else if constexpr (std::is_same_v<K, Polynomial>) {
                    int d = 0;
                    for (const Term& t : k.terms)
                        if (t.c != Scalar(0) && t.i + t.j > d) d = t.i + t.j;
                    return d;
                } else {
                    return -1;
                }
            },
            kind_);
    }

    /// Nonzero term list of a polynomial law (Constant and Bilinear included).
    std::vector<Term> terms() const {
        return std::visit(
            [](const auto& k) -> std::vector<Term> {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, Constant>) {
                    return {Term{0, 0, k.mu}};
                } else if constexpr (std::is_same_v<K, Bilinear>) {
                    return {Term{1, 1, k.lambda}};
                } else if constexpr (std::is_same_v<K, Polynomial>) {
                    return k.terms;
                } else {
                    throw Error("general jump law has no polynomial terms");
                }
            },
            kind_);
    }

private:
    explicit JumpLaw(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

namespace detail {

template <typename Scalar>
Scalar ipow(Scalar base, int exponent) {
    Scalar r(1);
    for (int e = 0; e < exponent; ++e) r *= base;
    return r;
}

}  // namespace detail

template <typename Scalar>
Scalar evaluate(const JumpLaw<Scalar>& law, Scalar u_plus, Scalar u_minus) {
    using Law = JumpLaw<Scalar>;
    const Scalar g = std::visit(
        [&](const auto& k) -> Scalar {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, typename Law::Constant>) {
                return k.mu;
            } else if constexpr (std::is_same_v<K, typename Law::Bilinear>) {
                return k.lambda * u_plus * u_minus;
            } else if constexpr (std::is_same_v<K, typename Law::Polynomial>) {
                Scalar sum(0);
                for (const auto& t : k.terms)
                    sum += t.c * detail::ipow(u_plus, t.i) * detail::ipow(u_minus, t.j);
                return sum;
            } else {
                return k.value(u_plus, u_minus);
            }
        },
        law.kind());
    using std::isfinite;
    if (!isfinite(g)) throw EvaluationError("jump law overflow: non-finite value");
    return g;
}

template <typename Scalar>
typename JumpLaw<Scalar>::Partials partials(const JumpLaw<Scalar>& law, Scalar u_plus, Scalar u_minus) {
    using Law = JumpLaw<Scalar>;
    using P = typename Law::Partials;
    return std::visit(
        [&](const auto& k) -> P {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, typename Law::Constant>) {
                return P{Scalar(0), Scalar(0)};
            } else if constexpr (std::is_same_v<K, typename Law::Bilinear>) {
                return P{k.lambda * u_minus, k.lambda * u_plus};
            } else if constexpr (std::is_same_v<K, typename Law::Polynomial>) {
                P d{Scalar(0), Scalar(0)};
                for (const auto& t : k.terms) {
                    if (t.i > 0)
                        d.d_plus += t.c * Scalar(t.i) * detail::ipow(u_plus, t.i - 1) * detail::ipow(u_minus, t.j);
                    if (t.j > 0)
                        d.d_minus += t.c * Scalar(t.j) * detail::ipow(u_plus, t.i) * detail::ipow(u_minus, t.j - 1);
                }
                return d;
            } else {
                return k.partials(u_plus, u_minus);
            }
        },
        law.kind());
}

}  // namespace ifr
