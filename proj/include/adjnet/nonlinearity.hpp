// nonlinearity.hpp - elementwise activation functions and their derivative actions
//
// A closed set of four scalar nonlinearities (tanh, sigmoid, ramp, identity),
// each with first and second derivatives, lifted componentwise to vectors.
// The derivative of an elementwise map acts by Hadamard product:
//
//     deriv_action(n, z, v)          = sigma'(z) (.) v
//     second_deriv_action(n, z, a, b) = sigma''(z) (.) a (.) b
//
// Both actions are self-adjoint in the Euclidean inner product, which the
// backpropagation engines rely on.
//
// Conventions: ramp uses H(0) = 0 for its derivative and sigma'' = 0
// everywhere, kink included. Tanh derivatives use the simplified forms
// 1 - tanh^2 and -2 tanh (1 - tanh^2).

#ifndef ADJNET_NONLINEARITY_HPP
#define ADJNET_NONLINEARITY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "adjnet/linalg.hpp"

namespace adjnet {

enum class Nonlinearity { Tanh, Sigmoid, Ramp, Identity };

// ============================================================================
// serialization tokens
// ============================================================================

[[nodiscard]] constexpr auto to_token(Nonlinearity n) -> std::string_view {
    switch (n) {
        case Nonlinearity::Tanh: return "tanh";
        case Nonlinearity::Sigmoid: return "sigmoid";
        case Nonlinearity::Ramp: return "ramp";
        case Nonlinearity::Identity: return "identity";
    }
    throw std::logic_error("to_token: unknown nonlinearity");
}

[[nodiscard]] inline auto nonlinearity_from_token(std::string_view token) -> Nonlinearity {
    if (token == "tanh") return Nonlinearity::Tanh;
    if (token == "sigmoid") return Nonlinearity::Sigmoid;
    if (token == "ramp") return Nonlinearity::Ramp;
    if (token == "identity") return Nonlinearity::Identity;
    throw std::invalid_argument("unknown nonlinearity token: " + std::string(token));
}

// ============================================================================
// scalar values
// ============================================================================

[[nodiscard]] inline auto sigma(Nonlinearity n, double x) -> double {
    switch (n) {
        case Nonlinearity::Tanh:
            return std::tanh(x);
        case Nonlinearity::Sigmoid: {
            // Saturating form on each side; never exponentiates a large
            // positive argument.
            if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
            const double e = std::exp(x);
            return e / (1.0 + e);
        }
        case Nonlinearity::Ramp:
            return x > 0.0 ? x : 0.0;
        case Nonlinearity::Identity:
            return x;
    }
    throw std::logic_error("sigma: unknown nonlinearity");
}

[[nodiscard]] inline auto sigma_d1(Nonlinearity n, double x) -> double {
    switch (n) {
        case Nonlinearity::Tanh: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case Nonlinearity::Sigmoid: {
            const double s = sigma(Nonlinearity::Sigmoid, x);
            return s * (1.0 - s);
        }
        case Nonlinearity::Ramp:
            return x > 0.0 ? 1.0 : 0.0;  // H(0) = 0
        case Nonlinearity::Identity:
            return 1.0;
    }
    throw std::logic_error("sigma_d1: unknown nonlinearity");
}

[[nodiscard]] inline auto sigma_d2(Nonlinearity n, double x) -> double {
    switch (n) {
        case Nonlinearity::Tanh: {
            const double t = std::tanh(x);
            return -2.0 * t * (1.0 - t * t);
        }
        case Nonlinearity::Sigmoid: {
            const double s = sigma(Nonlinearity::Sigmoid, x);
            return s * (1.0 - s) * (1.0 - 2.0 * s);
        }
        case Nonlinearity::Ramp:
            return 0.0;
        case Nonlinearity::Identity:
            return 0.0;
    }
    throw std::logic_error("sigma_d2: unknown nonlinearity");
}

// ============================================================================
// componentwise lifts
// ============================================================================

[[nodiscard]] inline auto apply(Nonlinearity n, const Vec& z) -> Vec {
    Vec r(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) r[k] = sigma(n, z[k]);
    return r;
}

[[nodiscard]] inline auto apply_d1(Nonlinearity n, const Vec& z) -> Vec {
    Vec r(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) r[k] = sigma_d1(n, z[k]);
    return r;
}

[[nodiscard]] inline auto apply_d2(Nonlinearity n, const Vec& z) -> Vec {
    Vec r(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) r[k] = sigma_d2(n, z[k]);
    return r;
}

// ============================================================================
// derivative actions
// ============================================================================

// First derivative of the componentwise map at z, applied to v. Self-adjoint.
[[nodiscard]] inline auto deriv_action(Nonlinearity n, const Vec& z, const Vec& v) -> Vec {
    return hadamard(apply_d1(n, z), v);
}

// Second derivative of the componentwise map at z, as a bilinear action on
// (a, b). Symmetric in (a, b); hooking either argument gives a self-adjoint
// linear map.
[[nodiscard]] inline auto second_deriv_action(Nonlinearity n, const Vec& z,
                                              const Vec& a, const Vec& b) -> Vec {
    return hadamard(hadamard(apply_d2(n, z), a), b);
}

}  // namespace adjnet

#endif  // ADJNET_NONLINEARITY_HPP
