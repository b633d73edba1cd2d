// checksuite.hpp - the enumerated derivative checks for a whole model
//
// Runs every oracle the library has against every derivative the engines
// produce for one network at one probe input, and collects the results in
// a CheckReport. The gradcheck command prints this report; tests assert on
// it. Enumerating the checks in one place keeps coverage mechanical: a new
// engine derivative gets a line here or it does not ship.
//
// The finite-difference lines only ever see the network through forward
// evaluation on rebuilt parameter sets, so they are independent of the
// backward code paths under test.

#ifndef ADJNET_CHECKSUITE_HPP
#define ADJNET_CHECKSUITE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "adjnet/engine.hpp"
#include "adjnet/gradcheck.hpp"
#include "adjnet/layer.hpp"
#include "adjnet/linalg.hpp"
#include "adjnet/network.hpp"

namespace adjnet {

// ============================================================================
// untied reference for tied autoencoders
// ============================================================================

// Materializes every effective weight of a tied autoencoder into an
// ordinary MLP with the same biases and activations. The twin computes the
// same function but shares nothing, so its gradients come out per layer.
[[nodiscard]] inline auto untied_twin(const Network& ae) -> Network {
    std::vector<Mat> weights;
    std::vector<Vec> biases;
    std::vector<Nonlinearity> acts;
    for (std::size_t i = 0; i < ae.layer_count(); ++i) {
        const Mat& stored = ae.weight(ae.weight_slot(i));
        weights.push_back(ae.is_decoder(i) ? tie_map(stored) : stored);
        biases.push_back(ae.bias(i));
        acts.push_back(ae.activation(i));
    }
    return Network::make_mlp(std::move(weights), std::move(biases), std::move(acts));
}

// Folds per-layer untied weight gradients back onto shared storage:
// slot s receives its encoder gradient plus the tie-adjoint of the partner
// decoder gradient. Bias gradients pass through unchanged.
[[nodiscard]] inline auto fold_untied_grads(const Gradients& untied, std::size_t half) -> Gradients {
    Gradients folded;
    folded.b = untied.b;
    for (std::size_t s = 0; s < half; ++s)
        folded.w.push_back(untied.w[s] + tie_map_adjoint(untied.w[untied.w.size() - 1 - s]));
    return folded;
}

// ============================================================================
// model-level check suite
// ============================================================================

struct SuiteConfig {
    LossConfig loss_cfg;
    std::uint64_t seed = 1;
    std::size_t identity_trials = 100;
    double tol_identity = 1e-12;
    double tol_grad = 1e-6;
    double tol_tangent = 1e-6;
    double tol_penalty_grad = 1e-5;
    double tol_untied = 1e-12;
    double ramp_kink_margin = 1e-3;
    FdConfig fd;
};

namespace detail {

// Smallest |z| over all ramp pre-activations; finite differences are only
// trustworthy when this stays clear of the kink.
[[nodiscard]] inline auto ramp_kink_distance(const Network& net, const PassState& state) -> double {
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        if (net.activation(i) != Nonlinearity::Ramp) continue;
        for (double zk : state.caches[i].z) dist = std::min(dist, std::fabs(zk));
    }
    return dist;
}

[[nodiscard]] inline auto data_loss_of(const Network& net, const Vec& x, const Vec& y,
                                       const LossConfig& cfg) -> double {
    return loss_value(net, forward(net, x), y, cfg);
}

}  // namespace detail

// Runs the full oracle suite for one model at one probe row. When no
// tangent pairs are supplied, two seeded random pairs are synthesized so
// the higher-order engines are always exercised.
[[nodiscard]] inline auto run_model_checks(const Network& net, const Vec& x, const Vec& y,
                                           TangentTargets targets,
                                           const SuiteConfig& sc = {}) -> CheckReport {
    CheckReport report;
    std::mt19937_64 rng(sc.seed);
    const LossConfig& cfg = sc.loss_cfg;

    // --- oracle self-checks (gate: closed-form cases) ---
    {
        const Vec theta{0.75, -1.5, 2.0};
        const Vec c{0.3, -0.2, 1.1};
        const Vec fd = fd_grad([&](const Vec& t) { return inner(c, t); }, theta, sc.fd);
        report.add("oracle: fd_grad on linear form", max_coord_rel_error(fd, c), 1e-9);

        const Vec q = fd_grad([&](const Vec& t) { return 0.5 * inner(t, t); }, theta, sc.fd);
        report.add("oracle: fd_grad on quadratic", max_coord_rel_error(q, theta), 1e-9);
    }

    PassState state = forward(net, x);

    const double kink = detail::ramp_kink_distance(net, state);
    const bool fd_safe = kink >= sc.ramp_kink_margin;
    if (!fd_safe)
        report.note("ramp pre-activation within " + std::to_string(sc.ramp_kink_margin) +
                    " of the kink at this input; finite-difference checks skipped");

    // --- per-layer adjoint identities ---
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        const LayerCache& c = state.caches[i];
        const std::size_t n_in = c.K.cols();
        const std::size_t n_out = c.K.rows();
        const std::string tag = "layer " + std::to_string(i);

        auto jv = adjoint_check([&](const Vec& v) { return jvp_state(c, v); },
                                [&](const Vec& u) { return vjp_state(c, u); },
                                n_in, n_out, sc.identity_trials, rng);
        report.add(tag + ": jvp/vjp adjoint", jv.max_defect, sc.tol_identity);

        auto ds = adjoint_check([&](const Vec& v) { return deriv_action(c.act, c.z, v); },
                                [&](const Vec& u) { return deriv_action(c.act, c.z, u); },
                                n_out, n_out, sc.identity_trials, rng);
        report.add(tag + ": activation derivative self-adjoint", ds.max_defect, sc.tol_identity);

        const Vec hook_v = random_vec(n_in, rng);
        const Vec kv = matvec(c.K, hook_v);
        auto d2 = adjoint_check(
            [&](const Vec& u) { return second_deriv_action(c.act, c.z, kv, matvec(c.K, u)); },
            [&](const Vec& u) { return d2f_hook_adjoint(c, hook_v, u); },
            n_in, n_out, sc.identity_trials, rng);
        report.add(tag + ": curvature hook adjoint", d2.max_defect, sc.tol_identity);

        // Weight-gradient transfer: <grad_w_adjoint(u), U> = <u, S'(z) (.) (K_U x)>
        // where K_U is how a stored-space direction U moves the effective weight.
        double worst = 0.0;
        for (std::size_t t = 0; t < sc.identity_trials; ++t) {
            const Vec u = random_vec(n_out, rng);
            const Mat g = grad_w_adjoint(c, u);
            const Mat dir = random_mat(g.rows(), g.cols(), rng);
            const Mat k_dir = c.tied_decoder ? tie_map(dir) : dir;
            const double lhs = inner(g, dir);
            const double rhs = inner(u, deriv_action(c.act, c.z, matvec(k_dir, c.x_in)));
            worst = std::max(worst, std::fabs(lhs - rhs) / (1.0 + std::fabs(lhs)));
        }
        report.add(tag + ": weight gradient transfer", worst, sc.tol_identity);
    }

    // --- tangent propagation vs directional finite difference ---
    if (fd_safe) {
        const Vec dir = random_vec(net.input_dim(), rng);
        state = tangent_forward(net, std::move(state), dir);
        const Vec fd = fd_jvp([&](const Vec& xx) { return forward(net, xx).xs.back(); },
                              x, dir, sc.fd);
        report.add("tangent forward vs fd directional derivative",
                   rel_error(state.vs.back(), fd), sc.tol_tangent);
    }

    // --- first-order gradients vs finite differences ---
    const Vec e = seed_error(net, state, y, cfg);
    const Gradients g = backprop_standard(net, state, e);
    if (fd_safe) {
        for (std::size_t s = 0; s < net.weight_count(); ++s) {
            Network probe = net;
            const Mat fd = fd_grad(
                [&](const Mat& w) {
                    probe.set_weight(s, w);
                    return detail::data_loss_of(probe, x, y, cfg);
                },
                net.weight(s), sc.fd);
            report.add("loss gradient vs fd: weight " + std::to_string(s),
                       rel_error(g.w[s], fd), sc.tol_grad);
        }
        for (std::size_t i = 0; i < net.layer_count(); ++i) {
            Network probe = net;
            const Vec fd = fd_grad(
                [&](const Vec& b) {
                    probe.set_bias(i, b);
                    return detail::data_loss_of(probe, x, y, cfg);
                },
                net.bias(i), sc.fd);
            report.add("loss gradient vs fd: bias " + std::to_string(i),
                       rel_error(g.b[i], fd), sc.tol_grad);
        }

        if (cfg.lambda > 0.0) {
            // l2 term: the regularized objective J + lambda/2 |theta|^2 must
            // differentiate to the engine gradient plus exactly lambda*theta.
            double worst = 0.0;
            for (std::size_t s = 0; s < net.weight_count(); ++s) {
                Network probe = net;
                const Mat fd = fd_grad(
                    [&](const Mat& w) {
                        probe.set_weight(s, w);
                        return detail::data_loss_of(probe, x, y, cfg) + 0.5 * cfg.lambda * inner(w, w);
                    },
                    net.weight(s), sc.fd);
                worst = std::max(worst, rel_error(g.w[s] + cfg.lambda * net.weight(s), fd));
            }
            report.add("regularized gradient vs fd (weights)", worst, sc.tol_grad);
        }
    }

    // --- higher-order gradients ---
    if (targets.empty()) {
        report.note("no tangent pairs supplied; using two synthesized pairs");
        for (int t = 0; t < 2; ++t)
            targets.push_back(TangentPair{random_vec(net.input_dim(), rng),
                                          random_vec(net.output_dim(), rng)});
    }
    const Gradients gp = grad_penalty_multi(net, x, targets);
    if (fd_safe) {
        for (std::size_t s = 0; s < net.weight_count(); ++s) {
            Network probe = net;
            const Mat fd = fd_grad(
                [&](const Mat& w) {
                    probe.set_weight(s, w);
                    return penalty_value(probe, x, targets);
                },
                net.weight(s), sc.fd);
            report.add("penalty gradient vs fd: weight " + std::to_string(s),
                       rel_error(gp.w[s], fd), sc.tol_penalty_grad);
        }
        for (std::size_t i = 0; i < net.layer_count(); ++i) {
            Network probe = net;
            const Vec fd = fd_grad(
                [&](const Vec& b) {
                    probe.set_bias(i, b);
                    return penalty_value(probe, x, targets);
                },
                net.bias(i), sc.fd);
            report.add("penalty gradient vs fd: bias " + std::to_string(i),
                       rel_error(gp.b[i], fd), sc.tol_penalty_grad);
        }
    }

    // Zero direction and zero target annihilate the penalty gradient.
    {
        TangentTargets zero_pair;
        zero_pair.push_back(TangentPair{Vec(net.input_dim()), Vec(net.output_dim())});
        const Gradients gz = grad_penalty_multi(net, x, zero_pair);
        double worst = 0.0;
        for (const Mat& w : gz.w) worst = std::max(worst, norm(w));
        for (const Vec& b : gz.b) worst = std::max(worst, norm(b));
        report.add("zero tangent pair annihilates penalty gradient", worst, 0.0);
    }

    // --- tied-weight routing against the untied twin ---
    if (net.kind() == NetworkKind::TiedAutoencoder) {
        const Network twin = untied_twin(net);
        const std::size_t half = net.weight_count();
        PassState tstate = forward(twin, x);
        const Gradients tg = fold_untied_grads(
            backprop_standard(twin, tstate, seed_error(twin, tstate, y, cfg)), half);
        double worst = 0.0;
        for (std::size_t s = 0; s < half; ++s)
            worst = std::max(worst, rel_error(g.w[s], tg.w[s]));
        report.add("tied loss gradient vs untied-sum oracle", worst, sc.tol_untied);

        const Gradients tgp = fold_untied_grads(
            detail::penalty_grads_on_state(twin, std::move(tstate), targets), half);
        worst = 0.0;
        for (std::size_t s = 0; s < half; ++s)
            worst = std::max(worst, rel_error(gp.w[s], tgp.w[s]));
        report.add("tied penalty gradient vs untied-sum oracle", worst, sc.tol_untied);
    }

    return report;
}

}  // namespace adjnet

#endif  // ADJNET_CHECKSUITE_HPP
