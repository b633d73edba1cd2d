// io.hpp - text formats for models, datasets, and tangent targets
//
// Everything is line-oriented text. Parameters are written as decimals with
// 17 significant digits, which round-trips every float64 bit-exactly:
// save, load, save again gives identical bytes.
//
// Model file layout (version 1):
//
//     adjnet-model 1
//     kind mlp            (or: ae)
//     dims 2 4 1
//     activations sigmoid sigmoid
//     weight 0            (row-major, one matrix row per line)
//     ...
//     bias 0              (one line of entries)
//     ...
//
// Tied autoencoders store only the encoder weights plus every layer's bias.
//
// Datasets are comma-separated rows without a header: input entries, then
// target entries (no target entries for autoencoders; the input is the
// target). A tangent file has one line per dataset row: the direction
// block, a ';', then the target-derivative block, both comma-separated.

#ifndef ADJNET_IO_HPP
#define ADJNET_IO_HPP

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adjnet/engine.hpp"
#include "adjnet/network.hpp"

namespace adjnet {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

[[nodiscard]] inline auto fmt17(double v) -> std::string {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Accepts surrounding whitespace but nothing else around the number.
[[nodiscard]] inline auto parse_double(const std::string& token, const std::string& where) -> double {
    const char* s = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    while (*end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (end == s || *end != '\0')
        throw IoError(where + ": cannot parse number '" + token + "'");
    if (!std::isfinite(v))
        throw IoError(where + ": non-finite value '" + token + "'");
    return v;
}

[[nodiscard]] inline auto parse_size(const std::string& token, const std::string& where) -> std::size_t {
    const char* s = token.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0' || v <= 0)
        throw IoError(where + ": expected a positive integer, got '" + token + "'");
    return static_cast<std::size_t>(v);
}

[[nodiscard]] inline auto split_ws(const std::string& line) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

[[nodiscard]] inline auto split_on(const std::string& line, char sep) -> std::vector<std::string> {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

[[nodiscard]] inline auto is_blank(const std::string& line) -> bool {
    for (char ch : line)
        if (!std::isspace(static_cast<unsigned char>(ch))) return false;
    return true;
}

// getline with \r tolerance; returns false at EOF.
inline auto next_line(std::istream& in, std::string& line) -> bool {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

inline auto expect_line(std::istream& in, const std::string& what) -> std::string {
    std::string line;
    if (!next_line(in, line)) throw IoError("model file: unexpected end of file, expected " + what);
    return line;
}

}  // namespace detail

// ============================================================================
// model files
// ============================================================================

inline void save_model(const Network& net, std::ostream& os) {
    os << "adjnet-model 1\n";
    os << "kind " << (net.kind() == NetworkKind::Mlp ? "mlp" : "ae") << "\n";
    os << "dims";
    for (std::size_t d : net.dims()) os << ' ' << d;
    os << "\n";
    os << "activations";
    for (std::size_t i = 0; i < net.layer_count(); ++i) os << ' ' << to_token(net.activation(i));
    os << "\n";
    for (std::size_t s = 0; s < net.weight_count(); ++s) {
        os << "weight " << s << "\n";
        const Mat& w = net.weight(s);
        for (std::size_t i = 0; i < w.rows(); ++i) {
            for (std::size_t j = 0; j < w.cols(); ++j)
                os << (j == 0 ? "" : " ") << detail::fmt17(w(i, j));
            os << "\n";
        }
    }
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        os << "bias " << i << "\n";
        const Vec& b = net.bias(i);
        for (std::size_t k = 0; k < b.size(); ++k)
            os << (k == 0 ? "" : " ") << detail::fmt17(b[k]);
        os << "\n";
    }
}

inline void save_model(const Network& net, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    save_model(net, os);
    os.flush();
    if (!os) throw IoError("write to '" + path + "' failed");
}

[[nodiscard]] inline auto load_model(std::istream& in) -> Network {
    using detail::expect_line;
    using detail::parse_double;
    using detail::split_ws;

    auto header = split_ws(expect_line(in, "header"));
    if (header.size() != 2 || header[0] != "adjnet-model")
        throw IoError("model file: not an adjnet model file");
    if (header[1] != "1")
        throw IoError("model file: unsupported version '" + header[1] + "'");

    auto kind_line = split_ws(expect_line(in, "kind"));
    if (kind_line.size() != 2 || kind_line[0] != "kind" ||
        (kind_line[1] != "mlp" && kind_line[1] != "ae"))
        throw IoError("model file: malformed kind line");
    const NetworkKind kind =
        kind_line[1] == "mlp" ? NetworkKind::Mlp : NetworkKind::TiedAutoencoder;

    auto dims_line = split_ws(expect_line(in, "dims"));
    if (dims_line.size() < 3 || dims_line[0] != "dims")
        throw IoError("model file: malformed dims line");
    std::vector<std::size_t> dims;
    for (std::size_t t = 1; t < dims_line.size(); ++t)
        dims.push_back(detail::parse_size(dims_line[t], "model file dims"));

    const std::size_t layers = dims.size() - 1;
    auto act_line = split_ws(expect_line(in, "activations"));
    if (act_line.size() != layers + 1 || act_line[0] != "activations")
        throw IoError("model file: expected " + std::to_string(layers) + " activation tags");
    std::vector<Nonlinearity> acts;
    for (std::size_t t = 1; t < act_line.size(); ++t) {
        try {
            acts.push_back(nonlinearity_from_token(act_line[t]));
        } catch (const std::invalid_argument& ex) {
            throw IoError(std::string("model file: ") + ex.what());
        }
    }

    std::size_t stored = layers;
    if (kind == NetworkKind::TiedAutoencoder) {
        if (layers % 2 != 0)
            throw IoError("model file: tied autoencoder must have an even layer count");
        stored = layers / 2;
    }

    std::vector<Mat> weights;
    for (std::size_t s = 0; s < stored; ++s) {
        auto head = split_ws(expect_line(in, "weight " + std::to_string(s)));
        if (head.size() != 2 || head[0] != "weight" || head[1] != std::to_string(s))
            throw IoError("model file: expected 'weight " + std::to_string(s) + "'");
        Mat w(dims[s + 1], dims[s]);
        for (std::size_t i = 0; i < w.rows(); ++i) {
            auto row = split_ws(expect_line(in, "weight row"));
            if (row.size() != w.cols())
                throw IoError("model file: weight " + std::to_string(s) + " row " +
                              std::to_string(i) + " has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(w.cols()));
            for (std::size_t j = 0; j < w.cols(); ++j)
                w(i, j) = parse_double(row[j], "model file");
        }
        weights.push_back(std::move(w));
    }

    std::vector<Vec> biases;
    for (std::size_t i = 0; i < layers; ++i) {
        auto head = split_ws(expect_line(in, "bias " + std::to_string(i)));
        if (head.size() != 2 || head[0] != "bias" || head[1] != std::to_string(i))
            throw IoError("model file: expected 'bias " + std::to_string(i) + "'");
        auto row = split_ws(expect_line(in, "bias entries"));
        if (row.size() != dims[i + 1])
            throw IoError("model file: bias " + std::to_string(i) + " has " +
                          std::to_string(row.size()) + " entries, expected " +
                          std::to_string(dims[i + 1]));
        Vec b(dims[i + 1]);
        for (std::size_t k = 0; k < b.size(); ++k) b[k] = parse_double(row[k], "model file");
        biases.push_back(std::move(b));
    }

    try {
        return kind == NetworkKind::Mlp
                   ? Network::make_mlp(std::move(weights), std::move(biases), std::move(acts))
                   : Network::make_tied_autoencoder(std::move(weights), std::move(biases),
                                                    std::move(acts));
    } catch (const std::invalid_argument& ex) {
        throw IoError(std::string("model file: inconsistent contents: ") + ex.what());
    }
}

[[nodiscard]] inline auto load_model(const std::string& path) -> Network {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    return load_model(in);
}

// ============================================================================
// datasets
// ============================================================================

// Parses comma-separated rows of width input_width + target_width. With
// target_width 0 (autoencoders) the row is the input and also the target.
[[nodiscard]] inline auto load_dataset(std::istream& in, std::size_t input_width,
                                       std::size_t target_width) -> std::vector<Example> {
    std::vector<Example> out;
    std::string line;
    std::size_t row_no = 0;
    while (detail::next_line(in, line)) {
        ++row_no;
        if (detail::is_blank(line)) continue;
        const auto cells = detail::split_on(line, ',');
        const std::string where = "dataset row " + std::to_string(row_no);
        if (cells.size() != input_width + target_width)
            throw IoError(where + ": has " + std::to_string(cells.size()) +
                          " entries, expected " + std::to_string(input_width + target_width));
        Vec x(input_width);
        for (std::size_t k = 0; k < input_width; ++k)
            x[k] = detail::parse_double(cells[k], where);
        if (target_width == 0) {
            out.push_back(Example{x, x, {}});
            continue;
        }
        Vec y(target_width);
        for (std::size_t k = 0; k < target_width; ++k)
            y[k] = detail::parse_double(cells[input_width + k], where);
        out.push_back(Example{std::move(x), std::move(y), {}});
    }
    if (out.empty()) throw IoError("dataset is empty");
    return out;
}

[[nodiscard]] inline auto load_dataset(const std::string& path, std::size_t input_width,
                                       std::size_t target_width) -> std::vector<Example> {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset '" + path + "'");
    return load_dataset(in, input_width, target_width);
}

// ============================================================================
// tangent files
// ============================================================================

// One line per dataset row: direction entries, ';', target-derivative
// entries. Returns one pair per row.
[[nodiscard]] inline auto load_tangents(std::istream& in, std::size_t input_width,
                                        std::size_t output_width) -> std::vector<TangentPair> {
    std::vector<TangentPair> out;
    std::string line;
    std::size_t row_no = 0;
    while (detail::next_line(in, line)) {
        ++row_no;
        if (detail::is_blank(line)) continue;
        const std::string where = "tangent row " + std::to_string(row_no);
        const auto blocks = detail::split_on(line, ';');
        if (blocks.size() != 2)
            throw IoError(where + ": expected 'direction ; target'");
        const auto dir_cells = detail::split_on(blocks[0], ',');
        const auto tgt_cells = detail::split_on(blocks[1], ',');
        if (dir_cells.size() != input_width)
            throw IoError(where + ": direction has " + std::to_string(dir_cells.size()) +
                          " entries, expected " + std::to_string(input_width));
        if (tgt_cells.size() != output_width)
            throw IoError(where + ": target has " + std::to_string(tgt_cells.size()) +
                          " entries, expected " + std::to_string(output_width));
        Vec v(input_width);
        for (std::size_t k = 0; k < input_width; ++k)
            v[k] = detail::parse_double(dir_cells[k], where);
        Vec t(output_width);
        for (std::size_t k = 0; k < output_width; ++k)
            t[k] = detail::parse_double(tgt_cells[k], where);
        out.push_back(TangentPair{std::move(v), std::move(t)});
    }
    if (out.empty()) throw IoError("tangent file is empty");
    return out;
}

[[nodiscard]] inline auto load_tangents(const std::string& path, std::size_t input_width,
                                        std::size_t output_width) -> std::vector<TangentPair> {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tangent file '" + path + "'");
    return load_tangents(in, input_width, output_width);
}

}  // namespace adjnet

#endif  // ADJNET_IO_HPP
