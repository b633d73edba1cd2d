// network.hpp - layered networks and forward passes
//
// A network is a composition of levels, each mapping a fixed-dimension space
// to the next. Two kinds exist:
//
//   Mlp              every level owns its weight matrix
//   TiedAutoencoder  2L levels over palindromic dimensions; level i >= L
//                    reuses the stored weight of its partner level through
//                    the transpose, and owns only its bias
//
// Parameters live in the Network; passes record everything derivative code
// needs into PassState, so backward sweeps never read the network again.

#ifndef ADJNET_NETWORK_HPP
#define ADJNET_NETWORK_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adjnet/layer.hpp"
#include "adjnet/linalg.hpp"
#include "adjnet/nonlinearity.hpp"

namespace adjnet {

enum class NetworkKind { Mlp, TiedAutoencoder };

// Storage slot feeding layer `i` in a 2L-layer tied network: encoder levels
// own slots 0..L-1, decoder level i reuses slot 2L-1-i. Involution: applying
// it twice returns i.
[[nodiscard]] inline auto tied_partner(std::size_t i, std::size_t layer_count) -> std::size_t {
    return layer_count - 1 - i;
}

class Network {
public:
    [[nodiscard]] static auto make_mlp(std::vector<Mat> weights, std::vector<Vec> biases,
                                       std::vector<Nonlinearity> acts) -> Network {
        if (weights.empty() || weights.size() != biases.size() || weights.size() != acts.size())
            throw std::invalid_argument("mlp: need one weight, bias, and activation per layer");
        std::vector<std::size_t> dims;
        dims.push_back(weights.front().cols());
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i].cols() != dims.back())
                throw std::invalid_argument("mlp: layer " + std::to_string(i) +
                                            " weight columns do not chain");
            if (weights[i].rows() != biases[i].size())
                throw std::invalid_argument("mlp: layer " + std::to_string(i) +
                                            " bias length does not match weight rows");
            dims.push_back(weights[i].rows());
        }
        return Network(NetworkKind::Mlp, std::move(dims), std::move(weights),
                       std::move(biases), std::move(acts));
    }

    [[nodiscard]] static auto make_tied_autoencoder(std::vector<Mat> encoder_weights,
                                                    std::vector<Vec> biases,
                                                    std::vector<Nonlinearity> acts) -> Network {
        const std::size_t half = encoder_weights.size();
        if (half == 0)
            throw std::invalid_argument("tied autoencoder: no encoder weights");
        if (biases.size() != 2 * half || acts.size() != 2 * half)
            throw std::invalid_argument("tied autoencoder: need a bias and activation for each of " +
                                        std::to_string(2 * half) + " layers");
        std::vector<std::size_t> dims;
        dims.push_back(encoder_weights.front().cols());
        for (std::size_t s = 0; s < half; ++s) {
            if (encoder_weights[s].cols() != dims.back())
                throw std::invalid_argument("tied autoencoder: encoder weight " + std::to_string(s) +
                                            " does not chain");
            dims.push_back(encoder_weights[s].rows());
        }
        // Mirrored decoder dimensions; biases must conform level by level.
        for (std::size_t m = 1; m <= half; ++m) dims.push_back(dims[half - m]);
        for (std::size_t i = 0; i < 2 * half; ++i) {
            if (biases[i].size() != dims[i + 1])
                throw std::invalid_argument("tied autoencoder: bias " + std::to_string(i) +
                                            " has length " + std::to_string(biases[i].size()) +
                                            ", expected " + std::to_string(dims[i + 1]));
        }
        return Network(NetworkKind::TiedAutoencoder, std::move(dims), std::move(encoder_weights),
                       std::move(biases), std::move(acts));
    }

    [[nodiscard]] auto kind() const -> NetworkKind { return kind_; }
    [[nodiscard]] auto layer_count() const -> std::size_t { return biases_.size(); }
    [[nodiscard]] auto weight_count() const -> std::size_t { return weights_.size(); }
    [[nodiscard]] auto dims() const -> const std::vector<std::size_t>& { return dims_; }
    [[nodiscard]] auto input_dim() const -> std::size_t { return dims_.front(); }
    [[nodiscard]] auto output_dim() const -> std::size_t { return dims_.back(); }

    [[nodiscard]] auto is_decoder(std::size_t layer) const -> bool {
        return kind_ == NetworkKind::TiedAutoencoder && layer >= weights_.size();
    }

    [[nodiscard]] auto weight_slot(std::size_t layer) const -> std::size_t {
        return is_decoder(layer) ? tied_partner(layer, layer_count()) : layer;
    }

    [[nodiscard]] auto weight(std::size_t slot) const -> const Mat& { return weights_[slot]; }
    [[nodiscard]] auto bias(std::size_t layer) const -> const Vec& { return biases_[layer]; }
    [[nodiscard]] auto activation(std::size_t layer) const -> Nonlinearity { return acts_[layer]; }

    void set_weight(std::size_t slot, Mat w) {
        if (w.rows() != weights_[slot].rows() || w.cols() != weights_[slot].cols())
            throw std::invalid_argument("set_weight: shape mismatch at slot " + std::to_string(slot));
        weights_[slot] = std::move(w);
    }

    void set_bias(std::size_t layer, Vec b) {
        if (b.size() != biases_[layer].size())
            throw std::invalid_argument("set_bias: length mismatch at layer " + std::to_string(layer));
        biases_[layer] = std::move(b);
    }

private:
    Network(NetworkKind kind, std::vector<std::size_t> dims, std::vector<Mat> weights,
            std::vector<Vec> biases, std::vector<Nonlinearity> acts)
        : kind_(kind), dims_(std::move(dims)), weights_(std::move(weights)),
          biases_(std::move(biases)), acts_(std::move(acts)) {}

    NetworkKind kind_;
    std::vector<std::size_t> dims_;
    std::vector<Mat> weights_;
    std::vector<Vec> biases_;
    std::vector<Nonlinearity> acts_;
};

// ============================================================================
// initialization
// ============================================================================

// Fresh parameters, every entry uniform on [-1/sqrt(n_in), +1/sqrt(n_in)]
// for its layer, drawn in a fixed order (per layer: weight row-major, then
// bias) from a seeded 64-bit generator. Same seed, same network.
[[nodiscard]] inline auto initialize(NetworkKind kind, const std::vector<std::size_t>& dims,
                                     const std::vector<Nonlinearity>& acts,
                                     std::uint64_t seed) -> Network {
    if (dims.size() < 2)
        throw std::invalid_argument("initialize: need at least an input and an output dimension");
    const std::size_t layers = dims.size() - 1;
    if (acts.size() != layers)
        throw std::invalid_argument("initialize: need exactly " + std::to_string(layers) +
                                    " activations, got " + std::to_string(acts.size()));
    for (std::size_t d : dims)
        if (d == 0) throw std::invalid_argument("initialize: dimensions must be positive");

    std::size_t stored = layers;
    if (kind == NetworkKind::TiedAutoencoder) {
        if (layers % 2 != 0)
            throw std::invalid_argument("initialize: tied autoencoder needs an even layer count");
        stored = layers / 2;
        for (std::size_t m = 1; m <= stored; ++m)
            if (dims[stored + m] != dims[stored - m])
                throw std::invalid_argument("initialize: tied autoencoder dimensions must be palindromic");
    }

    std::mt19937_64 rng(seed);
    auto draw = [&rng](double bound) {
        std::uniform_real_distribution<double> dist(-bound, bound);
        return dist(rng);
    };

    std::vector<Mat> weights;
    std::vector<Vec> biases;
    for (std::size_t i = 0; i < layers; ++i) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(dims[i]));
        if (i < stored) {
            Mat w(dims[i + 1], dims[i]);
            for (std::size_t r = 0; r < w.rows(); ++r)
                for (std::size_t c = 0; c < w.cols(); ++c) w(r, c) = draw(bound);
            weights.push_back(std::move(w));
        }
        Vec b(dims[i + 1]);
        for (std::size_t k = 0; k < b.size(); ++k) b[k] = draw(bound);
        biases.push_back(std::move(b));
    }

    return kind == NetworkKind::Mlp
               ? Network::make_mlp(std::move(weights), std::move(biases), std::vector(acts))
               : Network::make_tied_autoencoder(std::move(weights), std::move(biases),
                                                std::vector(acts));
}

// ============================================================================
// passes
// ============================================================================

// States and caches of one forward pass; optionally the tangent states of a
// directional-derivative pass alongside.
struct PassState {
    std::vector<Vec> xs;             // states x_1 .. x_{M+1}
    std::vector<LayerCache> caches;  // one per layer
    std::vector<Vec> vs;             // tangent states, empty until requested

    [[nodiscard]] auto has_tangents() const -> bool { return !vs.empty(); }
};

inline void require_state_match(const Network& net, const PassState& state, const char* who) {
    if (state.caches.size() != net.layer_count() || state.xs.size() != net.layer_count() + 1)
        throw std::invalid_argument(std::string(who) + ": pass state does not belong to this network");
    if (state.has_tangents() && state.vs.size() != state.xs.size())
        throw std::invalid_argument(std::string(who) + ": tangent states are incomplete");
}

[[nodiscard]] inline auto forward(const Network& net, const Vec& x) -> PassState {
    PassState state;
    state.xs.reserve(net.layer_count() + 1);
    state.caches.reserve(net.layer_count());
    state.xs.push_back(x);
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        if (state.xs.back().size() != net.dims()[i])
            throw std::invalid_argument("forward: layer " + std::to_string(i) + " expects length " +
                                        std::to_string(net.dims()[i]) + ", got " +
                                        std::to_string(state.xs.back().size()));
        LayerForward f = layer_forward(net.weight(net.weight_slot(i)), net.is_decoder(i),
                                       net.bias(i), net.activation(i), state.xs.back());
        state.caches.push_back(std::move(f.cache));
        state.xs.push_back(std::move(f.y));
    }
    return state;
}

// Propagates a directional derivative through an existing pass:
// v_1 = v_x, v_{i+1} = Df_i(x_i) . v_i. Returns the state with vs filled.
[[nodiscard]] inline auto tangent_forward(const Network& net, PassState state,
                                          const Vec& v_x) -> PassState {
    require_state_match(net, state, "tangent_forward");
    if (v_x.size() != net.input_dim())
        throw std::invalid_argument("tangent_forward: direction has length " +
                                    std::to_string(v_x.size()) + ", expected " +
                                    std::to_string(net.input_dim()));
    state.vs.clear();
    state.vs.reserve(state.xs.size());
    state.vs.push_back(v_x);
    for (const LayerCache& c : state.caches) state.vs.push_back(jvp_state(c, state.vs.back()));
    return state;
}

}  // namespace adjnet

#endif  // ADJNET_NETWORK_HPP
