// End-to-end checks of the adjnet binary. Every test shells out to the real
// executable (path injected via ADJNET_CLI_PATH) and inspects exit codes,
// captured output, and the files the commands leave behind.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "adjnet/adjnet.hpp"

namespace {

struct CmdResult {
    int status = -1;
    std::string out;  // stdout and stderr, interleaved
};

auto run_cli(const std::string& args) -> CmdResult {
    const std::string cmd = std::string(ADJNET_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {};
    CmdResult result;
    char buf[512];
    while (std::fgets(buf, sizeof(buf), pipe) != nullptr) result.out += buf;
    const int raw = ::pclose(pipe);
    result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return result;
}

auto work_dir() -> const std::string& {
    static const std::string dir = [] {
        const auto d = std::filesystem::temp_directory_path() /
                       ("adjnet_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d.string();
    }();
    return dir;
}

auto path_in(const std::string& name) -> std::string { return work_dir() + "/" + name; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    ASSERT_TRUE(out.good()) << path;
    out << text;
}

auto read_file(const std::string& path) -> std::string {
    std::ifstream in(path);
    EXPECT_TRUE(in.good()) << path;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Loss values from "epoch <n> loss <value>" lines, in order.
auto loss_column(const std::string& log) -> std::vector<double> {
    std::vector<double> losses;
    std::istringstream in(log);
    std::string word;
    while (in >> word)
        if (word == "loss" && in >> word) losses.push_back(std::stod(word));
    return losses;
}

auto frob(const adjnet::Mat& w) -> double {
    double s = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) s += w(i, j) * w(i, j);
    return std::sqrt(s);
}

// A 2-in 2-out single identity layer whose weights decay but whose data
// gradient is exactly zero (x = 0, b = 0, y = 0).
const char* const kDecayModel =
    "adjnet-model 1\n"
    "kind mlp\n"
    "dims 2 2\n"
    "activations identity\n"
    "weight 0\n"
    "0.5 -0.25\n"
    "1 0.75\n"
    "bias 0\n"
    "0 0\n";

const char* const kIdentityModel =
    "adjnet-model 1\n"
    "kind mlp\n"
    "dims 2 2\n"
    "activations identity\n"
    "weight 0\n"
    "1 0\n"
    "0 1\n"
    "bias 0\n"
    "0 0\n";

}  // namespace

TEST(CliUsage, RejectsBadInvocations) {
    EXPECT_EQ(run_cli("").status, adjnet::exit_usage);
    EXPECT_EQ(run_cli("frobnicate").status, adjnet::exit_usage);
    EXPECT_EQ(run_cli("init --out " + path_in("x.txt")).status, adjnet::exit_usage);
    EXPECT_EQ(run_cli("init --out " + path_in("x.txt") +
                      " --dims 2 1 --activations tanh --frobs 3")
                  .status,
              adjnet::exit_usage);
    EXPECT_EQ(run_cli("--help").status, adjnet::exit_success);
}

TEST(CliInit, SameSeedWritesIdenticalFiles) {
    const std::string a = path_in("init_a.txt");
    const std::string b = path_in("init_b.txt");
    const std::string c = path_in("init_c.txt");
    const std::string flags = " --kind mlp --dims 2 3 1 --activations tanh tanh --seed 7";
    ASSERT_EQ(run_cli("init --out " + a + flags).status, adjnet::exit_success);
    ASSERT_EQ(run_cli("init --out " + b + flags).status, adjnet::exit_success);
    ASSERT_EQ(run_cli("init --out " + c +
                      " --kind mlp --dims 2 3 1 --activations tanh tanh --seed 8")
                  .status,
              adjnet::exit_success);

    const std::string text = read_file(a);
    EXPECT_EQ(text, read_file(b));
    EXPECT_NE(text, read_file(c));
    EXPECT_NE(text.find("adjnet-model 1"), std::string::npos);
    EXPECT_NE(text.find("kind mlp"), std::string::npos);
    EXPECT_NE(text.find("dims 2 3 1"), std::string::npos);
}

TEST(CliInit, ValidationErrorsExitWithUsage) {
    const std::string out = " --out " + path_in("bad.txt");
    EXPECT_EQ(run_cli("init" + out + " --kind cnn --dims 2 1 --activations tanh").status,
              adjnet::exit_usage);
    EXPECT_EQ(run_cli("init" + out + " --dims 2 --activations tanh").status,
              adjnet::exit_usage);
    EXPECT_EQ(run_cli("init" + out + " --dims 2 3 1 --activations tanh").status,
              adjnet::exit_usage);
    EXPECT_EQ(run_cli("init" + out + " --dims 2 1 --activations relu").status,
              adjnet::exit_usage);
    EXPECT_EQ(
        run_cli("init" + out + " --kind ae --dims 4 2 3 --activations tanh tanh").status,
        adjnet::exit_usage);
}

TEST(CliTrain, ZeroEtaLeavesModelUntouched) {
    const std::string model = path_in("zeta_model.txt");
    const std::string data = path_in("zeta_data.csv");
    const std::string out = path_in("zeta_out.txt");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind mlp --dims 2 3 1 --activations tanh sigmoid --seed 3")
                  .status,
              adjnet::exit_success);
    write_file(data, "0,0,0\n0,1,1\n1,0,1\n1,1,0\n");

    const CmdResult r = run_cli("train --model " + model + " --data " + data + " --out " +
                                out + " --eta 0 --epochs 3");
    ASSERT_EQ(r.status, adjnet::exit_success);
    EXPECT_EQ(read_file(out), read_file(model));

    const std::vector<double> losses = loss_column(r.out);
    ASSERT_EQ(losses.size(), 3u);
    EXPECT_EQ(losses[0], losses[1]);
    EXPECT_EQ(losses[1], losses[2]);
}

TEST(CliTrain, RepeatedRunsAreByteIdentical) {
    const std::string model = path_in("rep_model.txt");
    const std::string data = path_in("rep_data.csv");
    const std::string out1 = path_in("rep_out1.txt");
    const std::string out2 = path_in("rep_out2.txt");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind mlp --dims 2 4 1 --activations tanh sigmoid --seed 42")
                  .status,
              adjnet::exit_success);
    write_file(data, "0,0,0\n0,1,1\n1,0,1\n1,1,0\n");

    const std::string args =
        " --data " + data + " --eta 0.5 --epochs 50 --loss mse";
    const CmdResult r1 = run_cli("train --model " + model + " --out " + out1 + args);
    const CmdResult r2 = run_cli("train --model " + model + " --out " + out2 + args);
    ASSERT_EQ(r1.status, adjnet::exit_success);
    ASSERT_EQ(r2.status, adjnet::exit_success);
    EXPECT_EQ(r1.out, r2.out);
    EXPECT_EQ(read_file(out1), read_file(out2));

    const std::vector<double> losses = loss_column(r1.out);
    ASSERT_EQ(losses.size(), 50u);
    EXPECT_LT(losses.back(), losses.front());
}

TEST(CliTrain, WeightDecayShrinksParameters) {
    const std::string model = path_in("decay_model.txt");
    const std::string data = path_in("decay_data.csv");
    const std::string out1 = path_in("decay_out1.txt");
    const std::string out2 = path_in("decay_out2.txt");
    write_file(model, kDecayModel);
    write_file(data, "0,0,0,0\n");

    const std::string args = "train --model " + model + " --data " + data +
                             " --eta 0.01 --lambda 10";
    const CmdResult r1 = run_cli(args + " --epochs 1 --out " + out1);
    const CmdResult r2 = run_cli(args + " --epochs 2 --out " + out2);
    ASSERT_EQ(r1.status, adjnet::exit_success);
    ASSERT_EQ(r2.status, adjnet::exit_success);
    EXPECT_NE(r1.out.find("epoch 1 loss 0.000000000000"), std::string::npos);

    const double n0 = frob(adjnet::load_model(model).weight(0));
    const double n1 = frob(adjnet::load_model(out1).weight(0));
    const double n2 = frob(adjnet::load_model(out2).weight(0));
    EXPECT_LT(n1, n0);
    EXPECT_LT(n2, n1);
    EXPECT_EQ(adjnet::load_model(out2).bias(0), (adjnet::Vec{0.0, 0.0}));
}

TEST(CliTrain, ConfigErrorsExitWithUsage) {
    const std::string model = path_in("cfg_model.txt");
    const std::string data = path_in("cfg_data.csv");
    const std::string out = path_in("cfg_out.txt");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind mlp --dims 2 1 --activations tanh --seed 1")
                  .status,
              adjnet::exit_success);
    write_file(data, "0,0,0\n");

    const std::string base = "train --model " + model + " --data " + data + " --out " + out;
    EXPECT_EQ(run_cli(base + " --epochs 0").status, adjnet::exit_usage);
    EXPECT_EQ(run_cli(base + " --eta -1").status, adjnet::exit_usage);
    EXPECT_EQ(run_cli(base + " --mu 0.1").status, adjnet::exit_usage);
    EXPECT_EQ(run_cli(base + " --loss xent").status, adjnet::exit_usage);
    EXPECT_EQ(run_cli(base + " --loss hinge").status, adjnet::exit_usage);
}

TEST(CliTrain, IoErrorsExitWithIoCode) {
    const std::string model = path_in("io_model.txt");
    const std::string out = path_in("io_out.txt");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind mlp --dims 2 1 --activations tanh --seed 1")
                  .status,
              adjnet::exit_success);

    const std::string narrow = path_in("io_narrow.csv");
    write_file(narrow, "1,2\n");
    EXPECT_EQ(run_cli("train --model " + model + " --data " + narrow + " --out " + out)
                  .status,
              adjnet::exit_io);

    EXPECT_EQ(run_cli("train --model " + path_in("io_absent.txt") + " --data " + narrow +
                      " --out " + out)
                  .status,
              adjnet::exit_io);

    const std::string data = path_in("io_data.csv");
    const std::string tangents = path_in("io_tangents.csv");
    write_file(data, "0,0,0\n1,1,0\n");
    write_file(tangents, "1,0 ; 0.5\n");  // two data rows, one tangent row
    EXPECT_EQ(run_cli("train --model " + model + " --data " + data + " --out " + out +
                      " --mu 0.1 --tangents " + tangents)
                  .status,
              adjnet::exit_io);
}

TEST(CliEval, IdentityModelEchoesInputs) {
    const std::string model = path_in("eval_model.txt");
    const std::string data = path_in("eval_data.csv");
    write_file(model, kIdentityModel);
    write_file(data, "0.5,-0.25,0.5,-0.25\n2,4,2,4\n");

    const CmdResult r = run_cli("eval --model " + model + " --data " + data);
    ASSERT_EQ(r.status, adjnet::exit_success);
    EXPECT_EQ(r.out, "loss 0\n0.5,-0.25\n2,4\n");
}

TEST(CliEval, MissingOrEmptyInputsExitWithIoCode) {
    const std::string model = path_in("evio_model.txt");
    write_file(model, kIdentityModel);

    EXPECT_EQ(run_cli("eval --model " + path_in("evio_absent.txt") + " --data " +
                      path_in("evio_absent.csv"))
                  .status,
              adjnet::exit_io);
    EXPECT_EQ(run_cli("eval --model " + model + " --data " + path_in("evio_absent.csv"))
                  .status,
              adjnet::exit_io);

    const std::string empty = path_in("evio_empty.csv");
    write_file(empty, "\n\n");
    EXPECT_EQ(run_cli("eval --model " + model + " --data " + empty).status,
              adjnet::exit_io);
}

TEST(CliGradcheck, PassesOnFreshModel) {
    const std::string model = path_in("gc_model.txt");
    const std::string data = path_in("gc_data.csv");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind mlp --dims 3 4 2 --activations tanh sigmoid --seed 5")
                  .status,
              adjnet::exit_success);
    write_file(data, "0.1,-0.2,0.3,1,0\n");

    const CmdResult r = run_cli("gradcheck --model " + model + " --data " + data);
    EXPECT_EQ(r.status, adjnet::exit_success);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(CliGradcheck, AcceptsTangentFileAndPenaltyWeight) {
    const std::string model = path_in("gct_model.txt");
    const std::string data = path_in("gct_data.csv");
    const std::string tangents = path_in("gct_tangents.csv");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind mlp --dims 3 4 2 --activations tanh sigmoid --seed 6")
                  .status,
              adjnet::exit_success);
    write_file(data, "0.1,-0.2,0.3,1,0\n0.4,0.5,-0.6,0,1\n");
    write_file(tangents, "1,0,0 ; 0.1,-0.2\n0,1,0 ; 0,0.3\n");

    const CmdResult r = run_cli("gradcheck --model " + model + " --data " + data +
                                " --row 1 --mu 0.05 --tangents " + tangents +
                                " --lambda 0.1 --seed 11");
    EXPECT_EQ(r.status, adjnet::exit_success);
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);

    EXPECT_EQ(run_cli("gradcheck --model " + model + " --data " + data + " --row 2").status,
              adjnet::exit_usage);
}

TEST(CliGradcheck, CoversTiedAutoencoders) {
    const std::string model = path_in("gca_model.txt");
    const std::string data = path_in("gca_data.csv");
    ASSERT_EQ(run_cli("init --out " + model +
                      " --kind ae --dims 4 2 4 --activations tanh tanh --seed 9")
                  .status,
              adjnet::exit_success);
    write_file(data, "0.5,-0.25,0.125,1\n");

    const CmdResult r = run_cli("gradcheck --model " + model + " --data " + data);
    EXPECT_EQ(r.status, adjnet::exit_success);
    EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
