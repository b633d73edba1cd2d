// cli.hpp - the init / train / gradcheck / eval commands
//
// The command bodies live here as plain functions over streams and paths so
// they can be driven both by the command-line binary and by tests. Errors
// surface as exceptions; the binary maps them onto its exit codes:
//
//     0  success
//     1  usage or configuration error   (std::invalid_argument)
//     2  numerical check failure        (gradcheck report with failures)
//     3  I/O error                      (IoError)

#ifndef ADJNET_CLI_HPP
#define ADJNET_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "adjnet/checksuite.hpp"
#include "adjnet/engine.hpp"
#include "adjnet/io.hpp"
#include "adjnet/network.hpp"

namespace adjnet {

inline constexpr int exit_success = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_check_failure = 2;
inline constexpr int exit_io = 3;

struct RunConfig {
    double eta = 1e-2;
    double lambda = 0.0;
    double mu = 0.0;
    std::size_t epochs = 1;
    Loss loss = Loss::Mse;
    std::uint64_t seed = 0;
    std::string tangents_path;  // empty: no tangent file

    [[nodiscard]] auto loss_config() const -> LossConfig {
        return LossConfig{loss, eta, lambda, mu};
    }
};

namespace detail {

// Target width the dataset must carry for this model.
[[nodiscard]] inline auto target_width(const Network& net) -> std::size_t {
    return net.kind() == NetworkKind::Mlp ? net.output_dim() : 0;
}

inline void attach_tangents(std::vector<Example>& data, const Network& net,
                            const std::string& path) {
    const auto pairs = load_tangents(path, net.input_dim(), net.output_dim());
    if (pairs.size() != data.size())
        throw IoError("tangent file has " + std::to_string(pairs.size()) +
                      " rows, dataset has " + std::to_string(data.size()));
    for (std::size_t r = 0; r < data.size(); ++r) data[r].tangents = {pairs[r]};
}

}  // namespace detail

// ============================================================================
// init
// ============================================================================

inline auto cmd_init(const std::string& out_path, const std::string& kind_token,
                     const std::vector<std::size_t>& dims,
                     const std::vector<std::string>& activation_tokens,
                     std::uint64_t seed) -> int {
    NetworkKind kind;
    if (kind_token == "mlp")
        kind = NetworkKind::Mlp;
    else if (kind_token == "ae")
        kind = NetworkKind::TiedAutoencoder;
    else
        throw std::invalid_argument("--kind must be mlp or ae, got '" + kind_token + "'");

    std::vector<Nonlinearity> acts;
    acts.reserve(activation_tokens.size());
    for (const auto& tok : activation_tokens) acts.push_back(nonlinearity_from_token(tok));

    const Network net = initialize(kind, dims, acts, seed);
    save_model(net, out_path);
    return exit_success;
}

// ============================================================================
// train
// ============================================================================

inline auto cmd_train(const std::string& model_path, const std::string& data_path,
                      const std::string& out_path, const RunConfig& rc,
                      std::ostream& log) -> int {
    const LossConfig cfg = rc.loss_config();
    require_valid(cfg);
    if (rc.epochs == 0) throw std::invalid_argument("--epochs must be positive");
    if (rc.mu > 0.0 && rc.tangents_path.empty())
        throw std::invalid_argument("--mu requires --tangents");

    Network net = load_model(model_path);
    if (cfg.loss == Loss::CrossEntropy &&
        net.activation(net.layer_count() - 1) != Nonlinearity::Sigmoid)
        throw std::invalid_argument("cross-entropy needs a sigmoid final activation");

    std::vector<Example> data =
        load_dataset(data_path, net.input_dim(), detail::target_width(net));
    if (!rc.tangents_path.empty()) detail::attach_tangents(data, net, rc.tangents_path);

    for (std::size_t epoch = 1; epoch <= rc.epochs; ++epoch) {
        const double total = batch_loss(net, data, cfg);
        const GradPair grads = batch_grads(net, data, cfg);
        char line[64];
        std::snprintf(line, sizeof(line), "epoch %zu loss %.12f\n", epoch, total);
        log << line;
        descent_step(net, grads.loss, grads.penalty, cfg);
    }

    save_model(net, out_path);
    return exit_success;
}

// ============================================================================
// gradcheck
// ============================================================================

inline auto cmd_gradcheck(const std::string& model_path, const std::string& data_path,
                          std::size_t row, const RunConfig& rc, std::ostream& out) -> int {
    const Network net = load_model(model_path);
    std::vector<Example> data =
        load_dataset(data_path, net.input_dim(), detail::target_width(net));
    if (row >= data.size())
        throw std::invalid_argument("--row " + std::to_string(row) + " out of range; dataset has " +
                                    std::to_string(data.size()) + " rows");
    if (!rc.tangents_path.empty()) detail::attach_tangents(data, net, rc.tangents_path);

    SuiteConfig sc;
    sc.loss_cfg = rc.loss_config();
    sc.seed = rc.seed == 0 ? 1 : rc.seed;

    const Example& ex = data[row];
    const CheckReport report = run_model_checks(net, ex.x, ex.y, ex.tangents, sc);
    report.print(out);
    out << (report.all_passed() ? "all checks passed\n" : "CHECKS FAILED\n");
    return report.all_passed() ? exit_success : exit_check_failure;
}

// ============================================================================
// eval
// ============================================================================

inline auto cmd_eval(const std::string& model_path, const std::string& data_path,
                     std::ostream& out) -> int {
    const Network net = load_model(model_path);
    const std::vector<Example> data =
        load_dataset(data_path, net.input_dim(), detail::target_width(net));

    const LossConfig cfg;  // data term is reported as mean-squared-error style loss
    double total = 0.0;
    std::vector<Vec> outputs;
    outputs.reserve(data.size());
    for (const Example& ex : data) {
        const PassState state = forward(net, ex.x);
        total += loss_value(net, state, ex.y, cfg);
        outputs.push_back(state.xs.back());
    }
    out << "loss " << detail::fmt17(total) << "\n";
    for (const Vec& o : outputs) {
        for (std::size_t k = 0; k < o.size(); ++k)
            out << (k == 0 ? "" : ",") << detail::fmt17(o[k]);
        out << "\n";
    }
    return exit_success;
}

}  // namespace adjnet

#endif  // ADJNET_CLI_HPP
