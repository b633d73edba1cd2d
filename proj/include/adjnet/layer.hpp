// layer.hpp - one network level and its derivative actions
//
// A level computes y = S(K x + b) where S is a componentwise nonlinearity
// and K is the effective weight: the stored matrix itself, or its transpose
// for the decoder half of a tied autoencoder. The forward pass materializes
// K into a cache together with the input and pre-activation; every backward
// action reads exclusively from that cache, so a later parameter update can
// never leak into an in-flight backward sweep.
//
// The backward actions exposed here are exactly the ones the engines
// consume:
//
//   jvp_state            u = S'(z) (.) (K v)                  (forward tangent)
//   vjp_state            K^T (S'(z) (.) u)                    (backward error)
//   grad_w_adjoint       (S'(z) (.) u) x^T                    (weight gradient)
//   grad_b_adjoint       S'(z) (.) u                          (bias gradient)
//   d2f_hook_adjoint     K^T (S''(z) (.) (K v) (.) u)         (curvature, state)
//   mixed_w_hook_adjoint (S''(z) (.) (K v) (.) y) x^T + (S'(z) (.) y) v^T
//   mixed_b_hook_adjoint S''(z) (.) (K v) (.) y
//
// For decoder levels the two weight-gradient actions return the transpose
// of the formulas above, i.e. the gradient already shaped like the stored
// encoder matrix, so callers only ever accumulate.

#ifndef ADJNET_LAYER_HPP
#define ADJNET_LAYER_HPP

#include <cstddef>
#include <utility>

#include "adjnet/linalg.hpp"
#include "adjnet/nonlinearity.hpp"

namespace adjnet {

// Everything a backward sweep needs to know about one forward application.
struct LayerCache {
    Vec x_in;            // input state
    Vec z;               // pre-activation K x_in + b
    Mat K;               // effective weight used in the forward pass
    Nonlinearity act;
    bool tied_decoder;   // weight gradients are returned in stored (transposed) shape
};

struct LayerForward {
    Vec y;
    LayerCache cache;
};

// Shared-weight pairing: the sharing map and its adjoint. Fixed to matrix
// transpose; kept behind named functions so a different pairing stays a
// two-line change.
[[nodiscard]] inline auto tie_map(const Mat& w) -> Mat { return transpose(w); }
[[nodiscard]] inline auto tie_map_adjoint(const Mat& g) -> Mat { return transpose(g); }

[[nodiscard]] inline auto layer_forward(const Mat& stored_w, bool tied_decoder,
                                        const Vec& b, Nonlinearity act,
                                        const Vec& x) -> LayerForward {
    Mat k = tied_decoder ? tie_map(stored_w) : stored_w;
    if (k.cols() != x.size())
        throw std::invalid_argument("layer_forward: input length " + std::to_string(x.size()) +
                                    " does not match weight with " + std::to_string(k.cols()) +
                                    " columns");
    Vec z = matvec(k, x) + b;
    Vec y = apply(act, z);
    return {std::move(y), LayerCache{x, std::move(z), std::move(k), act, tied_decoder}};
}

// ============================================================================
// first order
// ============================================================================

// Df(x) . v = S'(z) (.) (K v)
[[nodiscard]] inline auto jvp_state(const LayerCache& c, const Vec& v) -> Vec {
    return deriv_action(c.act, c.z, matvec(c.K, v));
}

// D*f(x) . u = K^T (S'(z) (.) u)
[[nodiscard]] inline auto vjp_state(const LayerCache& c, const Vec& u) -> Vec {
    return matvec_adjoint(c.K, deriv_action(c.act, c.z, u));
}

// Adjoint of the weight-direction derivative: (S'(z) (.) u) x^T, transposed
// into the stored shape for decoder levels.
[[nodiscard]] inline auto grad_w_adjoint(const LayerCache& c, const Vec& u) -> Mat {
    Mat g = outer(deriv_action(c.act, c.z, u), c.x_in);
    return c.tied_decoder ? tie_map_adjoint(g) : g;
}

// Adjoint of the bias-direction derivative: S'(z) (.) u.
[[nodiscard]] inline auto grad_b_adjoint(const LayerCache& c, const Vec& u) -> Vec {
    return deriv_action(c.act, c.z, u);
}

// ============================================================================
// second order (hooked bilinear maps)
// ============================================================================

// Adjoint of u' |-> D^2 f(x)(v, u'): K^T (S''(z) (.) (K v) (.) u).
[[nodiscard]] inline auto d2f_hook_adjoint(const LayerCache& c, const Vec& v, const Vec& u) -> Vec {
    return matvec_adjoint(c.K, second_deriv_action(c.act, c.z, matvec(c.K, v), u));
}

// Adjoint of the v-hooked derivative of the weight gradient, applied to y:
// (S''(z) (.) (K v) (.) y) x^T + (S'(z) (.) y) v^T. Decoder levels return
// the transpose (stored shape).
[[nodiscard]] inline auto mixed_w_hook_adjoint(const LayerCache& c, const Vec& v, const Vec& y) -> Mat {
    Mat g = outer(second_deriv_action(c.act, c.z, matvec(c.K, v), y), c.x_in) +
            outer(deriv_action(c.act, c.z, y), v);
    return c.tied_decoder ? tie_map_adjoint(g) : g;
}

// Adjoint of the v-hooked derivative of the bias gradient, applied to y:
// S''(z) (.) (K v) (.) y.
[[nodiscard]] inline auto mixed_b_hook_adjoint(const LayerCache& c, const Vec& v, const Vec& y) -> Vec {
    return second_deriv_action(c.act, c.z, matvec(c.K, v), y);
}

}  // namespace adjnet

#endif  // ADJNET_LAYER_HPP
