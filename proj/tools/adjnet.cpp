// adjnet - command-line front end
//
// Subcommands: init, train, gradcheck, eval. Long-form flags only.
// Exit codes: 0 success, 1 usage/config error, 2 numerical-check failure,
// 3 I/O error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adjnet/adjnet.hpp"

namespace {

auto run(int argc, char** argv) -> int {
    CLI::App app{"coordinate-free backprop networks: init, train, gradcheck, eval"};
    app.require_subcommand(1);

    std::string model_path;
    std::string data_path;
    std::string out_path;
    std::string kind = "mlp";
    std::string loss_token = "mse";
    std::vector<std::size_t> dims;
    std::vector<std::string> activations;
    adjnet::RunConfig rc;
    std::size_t row = 0;

    CLI::App* init = app.add_subcommand("init", "write a freshly initialized model");
    init->add_option("--out", out_path, "model file to write")->required();
    init->add_option("--kind", kind, "network kind: mlp or ae");
    init->add_option("--dims", dims, "layer widths, first to last")->required()->expected(-2);
    init->add_option("--activations", activations,
                     "one activation per layer: tanh, sigmoid, ramp, identity")
        ->required()
        ->expected(-1);
    init->add_option("--seed", rc.seed, "initialization seed");

    CLI::App* train = app.add_subcommand("train", "full-batch gradient descent");
    train->add_option("--model", model_path, "model file to start from")->required();
    train->add_option("--data", data_path, "dataset, comma-separated rows")->required();
    train->add_option("--out", out_path, "model file to write after training")->required();
    train->add_option("--eta", rc.eta, "learning rate");
    train->add_option("--lambda", rc.lambda, "l2 weight");
    train->add_option("--mu", rc.mu, "tangent-penalty weight");
    train->add_option("--epochs", rc.epochs, "number of full-batch steps");
    train->add_option("--loss", loss_token, "loss: mse or xent");
    train->add_option("--tangents", rc.tangents_path, "tangent file, one pair per data row");

    CLI::App* gradcheck = app.add_subcommand("gradcheck", "run the derivative check suite");
    gradcheck->add_option("--model", model_path, "model file to check")->required();
    gradcheck->add_option("--data", data_path, "dataset supplying the probe row")->required();
    gradcheck->add_option("--row", row, "dataset row to probe");
    gradcheck->add_option("--loss", loss_token, "loss: mse or xent");
    gradcheck->add_option("--lambda", rc.lambda, "l2 weight");
    gradcheck->add_option("--mu", rc.mu, "tangent-penalty weight");
    gradcheck->add_option("--seed", rc.seed, "seed for the identity-check probes");
    gradcheck->add_option("--tangents", rc.tangents_path, "tangent file, one pair per data row");

    CLI::App* eval = app.add_subcommand("eval", "print loss and per-row outputs");
    eval->add_option("--model", model_path, "model file to evaluate")->required();
    eval->add_option("--data", data_path, "dataset, comma-separated rows")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return adjnet::exit_usage;
    }

    rc.loss = adjnet::loss_from_token(loss_token);

    if (init->parsed()) return adjnet::cmd_init(out_path, kind, dims, activations, rc.seed);
    if (train->parsed()) return adjnet::cmd_train(model_path, data_path, out_path, rc, std::cout);
    if (gradcheck->parsed())
        return adjnet::cmd_gradcheck(model_path, data_path, row, rc, std::cout);
    return adjnet::cmd_eval(model_path, data_path, std::cout);
}

}  // namespace

auto main(int argc, char** argv) -> int {
    try {
        return run(argc, argv);
    } catch (const adjnet::IoError& e) {
        std::cerr << "adjnet: " << e.what() << "\n";
        return adjnet::exit_io;
    } catch (const std::invalid_argument& e) {
        std::cerr << "adjnet: " << e.what() << "\n";
        return adjnet::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "adjnet: " << e.what() << "\n";
        return adjnet::exit_usage;
    }
}
