// engine.hpp - losses, backpropagation engines, and descent
//
// Gradients flow by the adjoint recursion: the error cursor at level i is
// the adjoint of the remaining composition applied to the output-space
// seed, and each level peels off as
//
//     cursor_i = vjp_state(cache_{i+1}, cursor_{i+1})
//
// Per-level parameter gradients are read off the cursor before it moves.
// The higher-order engine carries three cursors (e_y for the data loss,
// e_v for the tangent residual, e_t for accumulated curvature); e_t is
// updated with the value of e_v from before e_v's own update.
//
// Tied autoencoders share weight storage between partner levels, so weight
// gradients accumulate two contributions per slot; the decoder contribution
// arrives already transposed into stored shape from the layer actions.
//
// Batch gradients are summed in batch order, never averaged; scaling
// belongs to the learning rate.

#ifndef ADJNET_ENGINE_HPP
#define ADJNET_ENGINE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "adjnet/layer.hpp"
#include "adjnet/linalg.hpp"
#include "adjnet/network.hpp"

namespace adjnet {

// ============================================================================
// configuration and result types
// ============================================================================

enum class Loss { Mse, CrossEntropy };

[[nodiscard]] constexpr auto to_token(Loss l) -> std::string_view {
    return l == Loss::Mse ? "mse" : "xent";
}

[[nodiscard]] inline auto loss_from_token(std::string_view token) -> Loss {
    if (token == "mse") return Loss::Mse;
    if (token == "xent") return Loss::CrossEntropy;
    throw std::invalid_argument("unknown loss token: " + std::string(token));
}

struct LossConfig {
    Loss loss = Loss::Mse;
    double eta = 1e-2;   // learning rate, >= 0 (0 makes descent_step a no-op)
    double lambda = 0.0; // l2 weight, >= 0
    double mu = 0.0;     // tangent-penalty weight, >= 0
};

inline void require_valid(const LossConfig& cfg) {
    if (!(cfg.eta >= 0.0)) throw std::invalid_argument("config: eta must be nonnegative");
    if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("config: lambda must be nonnegative");
    if (!(cfg.mu >= 0.0)) throw std::invalid_argument("config: mu must be nonnegative");
}

// One term of the tangent penalty: direction in the input space, target
// derivative in the output space.
struct TangentPair {
    Vec direction;
    Vec target;
};

using TangentTargets = std::vector<TangentPair>;

// Per-parameter gradients: one matrix per stored weight slot, one vector
// per layer bias.
struct Gradients {
    std::vector<Mat> w;
    std::vector<Vec> b;

    auto operator+=(const Gradients& o) -> Gradients& {
        if (w.size() != o.w.size() || b.size() != o.b.size())
            throw std::invalid_argument("gradients +=: shape mismatch");
        for (std::size_t s = 0; s < w.size(); ++s) w[s] += o.w[s];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] += o.b[i];
        return *this;
    }
};

[[nodiscard]] inline auto zero_gradients(const Network& net) -> Gradients {
    Gradients g;
    g.w.reserve(net.weight_count());
    for (std::size_t s = 0; s < net.weight_count(); ++s)
        g.w.emplace_back(net.weight(s).rows(), net.weight(s).cols());
    g.b.reserve(net.layer_count());
    for (std::size_t i = 0; i < net.layer_count(); ++i) g.b.emplace_back(net.bias(i).size());
    return g;
}

// Data-loss and tangent-penalty gradients of one backward sweep.
struct GradPair {
    Gradients loss;
    Gradients penalty;
};

// ============================================================================
// losses and seeds
// ============================================================================

inline constexpr double xent_clamp = 1e-12;

namespace detail {

inline auto loss_target(const Network& net, const PassState& state, const Vec& y,
                        const char* who) -> const Vec& {
    require_state_match(net, state, who);
    if (net.kind() == NetworkKind::TiedAutoencoder && !(y == state.xs.front()))
        throw std::invalid_argument(std::string(who) +
                                    ": autoencoder targets are the inputs; pass y = x");
    if (y.size() != net.output_dim())
        throw std::invalid_argument(std::string(who) + ": target has length " +
                                    std::to_string(y.size()) + ", expected " +
                                    std::to_string(net.output_dim()));
    return y;
}

inline void require_xent_output(const Network& net, const char* who) {
    if (net.activation(net.layer_count() - 1) != Nonlinearity::Sigmoid)
        throw std::invalid_argument(std::string(who) +
                                    ": cross-entropy requires a sigmoid final activation");
}

[[nodiscard]] inline auto clamp_unit(double f) -> double {
    if (f < xent_clamp) return xent_clamp;
    if (f > 1.0 - xent_clamp) return 1.0 - xent_clamp;
    return f;
}

}  // namespace detail

[[nodiscard]] inline auto loss_value(const Network& net, const PassState& state, const Vec& y,
                                     const LossConfig& cfg) -> double {
    const Vec& target = detail::loss_target(net, state, y, "loss_value");
    const Vec& out = state.xs.back();
    if (cfg.loss == Loss::Mse) {
        const Vec d = target - out;
        return 0.5 * inner(d, d);
    }
    detail::require_xent_output(net, "loss_value");
    double acc = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double f = detail::clamp_unit(out[k]);
        acc -= target[k] * std::log(f) + (1.0 - target[k]) * std::log(1.0 - f);
    }
    return acc;
}

// Output-space gradient of the loss at the network output, used to seed the
// backward sweep.
[[nodiscard]] inline auto seed_error(const Network& net, const PassState& state, const Vec& y,
                                     const LossConfig& cfg) -> Vec {
    const Vec& target = detail::loss_target(net, state, y, "seed_error");
    const Vec& out = state.xs.back();
    if (cfg.loss == Loss::Mse) return out - target;
    detail::require_xent_output(net, "seed_error");
    Vec e(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double f = detail::clamp_unit(out[k]);
        e[k] = -target[k] / f + (1.0 - target[k]) / (1.0 - f);
    }
    return e;
}

// ============================================================================
// backward sweeps
// ============================================================================

[[nodiscard]] inline auto backprop_standard(const Network& net, const PassState& state,
                                            const Vec& e) -> Gradients {
    require_state_match(net, state, "backprop_standard");
    if (e.size() != net.output_dim())
        throw std::invalid_argument("backprop_standard: seed has length " + std::to_string(e.size()) +
                                    ", expected " + std::to_string(net.output_dim()));
    Gradients g = zero_gradients(net);
    Vec cursor = e;
    for (std::size_t i = net.layer_count(); i-- > 0;) {
        const LayerCache& c = state.caches[i];
        g.b[i] = grad_b_adjoint(c, cursor);
        g.w[net.weight_slot(i)] += grad_w_adjoint(c, cursor);
        if (i > 0) cursor = vjp_state(c, cursor);
    }
    return g;
}

// Error cursors of the higher-order sweep, all living at one level's output.
struct BackpropCursors {
    Vec e_y;  // data-loss error
    Vec e_v;  // tangent residual
    Vec e_t;  // accumulated curvature (starts at zero)
};

// Joint sweep for the data loss and the tangent penalty. Needs tangent
// states in `state`. Seeds: e_y from the data loss, e_v the tangent
// residual at the output. Returns both gradient sets; the data-loss set is
// bit-identical to backprop_standard on the same state and seed.
[[nodiscard]] inline auto backprop_higher(const Network& net, const PassState& state,
                                          const Vec& e_y_seed, const Vec& e_v_seed) -> GradPair {
    require_state_match(net, state, "backprop_higher");
    if (!state.has_tangents())
        throw std::invalid_argument("backprop_higher: pass state has no tangent states");
    if (e_y_seed.size() != net.output_dim() || e_v_seed.size() != net.output_dim())
        throw std::invalid_argument("backprop_higher: seed length mismatch");

    GradPair out{zero_gradients(net), zero_gradients(net)};
    BackpropCursors cur{e_y_seed, e_v_seed, Vec(net.output_dim())};
    for (std::size_t i = net.layer_count(); i-- > 0;) {
        const LayerCache& c = state.caches[i];
        const std::size_t slot = net.weight_slot(i);
        const Vec& v_in = state.vs[i];

        out.loss.b[i] = grad_b_adjoint(c, cur.e_y);
        out.loss.w[slot] += grad_w_adjoint(c, cur.e_y);

        out.penalty.b[i] = grad_b_adjoint(c, cur.e_t) + mixed_b_hook_adjoint(c, v_in, cur.e_v);
        out.penalty.w[slot] += grad_w_adjoint(c, cur.e_t) + mixed_w_hook_adjoint(c, v_in, cur.e_v);

        if (i > 0) {
            // e_t consumes the pre-update e_v.
            cur.e_t = vjp_state(c, cur.e_t) + d2f_hook_adjoint(c, v_in, cur.e_v);
            cur.e_v = vjp_state(c, cur.e_v);
            cur.e_y = vjp_state(c, cur.e_y);
        }
    }
    return out;
}

namespace detail {

// Penalty gradients for all pairs, sharing one primal pass.
[[nodiscard]] inline auto penalty_grads_on_state(const Network& net, PassState state,
                                                 const TangentTargets& targets) -> Gradients {
    Gradients total = zero_gradients(net);
    const Vec zero_seed(net.output_dim());
    for (const TangentPair& pair : targets) {
        if (pair.target.size() != net.output_dim())
            throw std::invalid_argument("tangent pair: target has length " +
                                        std::to_string(pair.target.size()) + ", expected " +
                                        std::to_string(net.output_dim()));
        state = tangent_forward(net, std::move(state), pair.direction);
        const Vec e_v = state.vs.back() - pair.target;
        total += backprop_higher(net, state, zero_seed, e_v).penalty;
    }
    return total;
}

}  // namespace detail

// Gradient of the summed tangent penalty over all pairs at input x, each
// pair with its own tangent sweep over a shared primal pass.
[[nodiscard]] inline auto grad_penalty_multi(const Network& net, const Vec& x,
                                             const TangentTargets& targets) -> Gradients {
    if (targets.empty())
        throw std::invalid_argument("grad_penalty_multi: no tangent pairs");
    return detail::penalty_grads_on_state(net, forward(net, x), targets);
}

// Value of the summed tangent penalty, for oracles and diagnostics.
[[nodiscard]] inline auto penalty_value(const Network& net, const Vec& x,
                                        const TangentTargets& targets) -> double {
    PassState state = forward(net, x);
    double acc = 0.0;
    for (const TangentPair& pair : targets) {
        state = tangent_forward(net, std::move(state), pair.direction);
        const Vec d = state.vs.back() - pair.target;
        acc += 0.5 * inner(d, d);
    }
    return acc;
}

// ============================================================================
// descent and batching
// ============================================================================

// One plain gradient-descent step,
//     theta <- theta - eta * (loss_grad + mu * penalty_grad + lambda * theta),
// applied to every parameter; each stored weight of a tied network is
// updated exactly once from its accumulated gradient.
inline void descent_step(Network& net, const Gradients& loss_g, const Gradients& penalty_g,
                         const LossConfig& cfg) {
    require_valid(cfg);
    if (loss_g.w.size() != net.weight_count() || loss_g.b.size() != net.layer_count() ||
        penalty_g.w.size() != net.weight_count() || penalty_g.b.size() != net.layer_count())
        throw std::invalid_argument("descent_step: gradient shapes do not match the network");

    for (std::size_t s = 0; s < net.weight_count(); ++s) {
        Mat w = net.weight(s);
        const Mat& gl = loss_g.w[s];
        const Mat& gp = penalty_g.w[s];
        if (gl.rows() != w.rows() || gl.cols() != w.cols() || gp.rows() != w.rows() ||
            gp.cols() != w.cols())
            throw std::invalid_argument("descent_step: weight gradient shape mismatch at slot " +
                                        std::to_string(s));
        for (std::size_t i = 0; i < w.rows(); ++i)
            for (std::size_t j = 0; j < w.cols(); ++j)
                w(i, j) -= cfg.eta * (gl(i, j) + cfg.mu * gp(i, j) + cfg.lambda * w(i, j));
        net.set_weight(s, std::move(w));
    }
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        Vec b = net.bias(i);
        const Vec& gl = loss_g.b[i];
        const Vec& gp = penalty_g.b[i];
        if (gl.size() != b.size() || gp.size() != b.size())
            throw std::invalid_argument("descent_step: bias gradient length mismatch at layer " +
                                        std::to_string(i));
        for (std::size_t k = 0; k < b.size(); ++k)
            b[k] -= cfg.eta * (gl[k] + cfg.mu * gp[k] + cfg.lambda * b[k]);
        net.set_bias(i, std::move(b));
    }
}

// One training example. For autoencoders y must equal x; tangents may be
// empty when the run has no penalty term.
struct Example {
    Vec x;
    Vec y;
    TangentTargets tangents;
};

// Summed gradients over the batch, accumulated in batch order.
[[nodiscard]] inline auto batch_grads(const Network& net, const std::vector<Example>& batch,
                                      const LossConfig& cfg) -> GradPair {
    if (batch.empty()) throw std::invalid_argument("batch_grads: empty batch");
    GradPair total{zero_gradients(net), zero_gradients(net)};
    for (const Example& ex : batch) {
        PassState state = forward(net, ex.x);
        const Vec e = seed_error(net, state, ex.y, cfg);
        total.loss += backprop_standard(net, state, e);
        if (!ex.tangents.empty())
            total.penalty += detail::penalty_grads_on_state(net, std::move(state), ex.tangents);
    }
    return total;
}

// Summed data-term loss over the batch.
[[nodiscard]] inline auto batch_loss(const Network& net, const std::vector<Example>& batch,
                                     const LossConfig& cfg) -> double {
    if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
    double acc = 0.0;
    for (const Example& ex : batch) acc += loss_value(net, forward(net, ex.x), ex.y, cfg);
    return acc;
}

}  // namespace adjnet

#endif  // ADJNET_ENGINE_HPP
