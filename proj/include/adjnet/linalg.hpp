// linalg.hpp - dense float64 vectors and matrices
//
// The smallest linear-algebra core the rest of the library needs: real
// vectors and row-major matrices under the Euclidean / Frobenius inner
// products. Everything is a plain loop in index order, so identical inputs
// give bit-identical results on every run; there is no BLAS behind this.
//
// Dimension mismatches are hard errors (std::invalid_argument), never
// broadcasts. Lengths are always positive; an empty vector or matrix is
// not a value of these types.

#ifndef ADJNET_LINALG_HPP
#define ADJNET_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace adjnet {

// ============================================================================
// vec
// ============================================================================

class Vec {
public:
    explicit Vec(std::size_t n) : data_(checked_size(n), 0.0) {}

    Vec(std::size_t n, double fill) : data_(checked_size(n), fill) {}

    Vec(std::initializer_list<double> xs) : data_(xs) {
        checked_size(data_.size());
    }

    explicit Vec(std::vector<double> entries) : data_(std::move(entries)) {
        checked_size(data_.size());
    }

    [[nodiscard]] auto size() const -> std::size_t { return data_.size(); }

    auto operator[](std::size_t i) -> double& { return data_[i]; }
    auto operator[](std::size_t i) const -> const double& { return data_[i]; }

    [[nodiscard]] auto begin() const { return data_.begin(); }
    [[nodiscard]] auto end() const { return data_.end(); }

    auto operator+=(const Vec& o) -> Vec& {
        require_same_size(o, "vec +=");
        for (std::size_t i = 0; i < size(); ++i) data_[i] += o[i];
        return *this;
    }

    auto operator-=(const Vec& o) -> Vec& {
        require_same_size(o, "vec -=");
        for (std::size_t i = 0; i < size(); ++i) data_[i] -= o[i];
        return *this;
    }

    auto operator*=(double s) -> Vec& {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend auto operator==(const Vec& a, const Vec& b) -> bool {
        return a.data_ == b.data_;
    }

private:
    static auto checked_size(std::size_t n) -> std::size_t {
        if (n == 0) throw std::invalid_argument("vec: length must be positive");
        return n;
    }

    void require_same_size(const Vec& o, const char* op) const {
        if (size() != o.size())
            throw std::invalid_argument(std::string(op) + ": length mismatch (" +
                                        std::to_string(size()) + " vs " +
                                        std::to_string(o.size()) + ")");
    }

    std::vector<double> data_;
};

[[nodiscard]] inline auto operator+(Vec a, const Vec& b) -> Vec { return a += b; }
[[nodiscard]] inline auto operator-(Vec a, const Vec& b) -> Vec { return a -= b; }
[[nodiscard]] inline auto operator*(double s, Vec a) -> Vec { return a *= s; }
[[nodiscard]] inline auto operator*(Vec a, double s) -> Vec { return a *= s; }

[[nodiscard]] inline auto operator-(const Vec& a) -> Vec {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

// ============================================================================
// mat (row-major)
// ============================================================================

class Mat {
public:
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(checked_area(rows, cols), 0.0) {}

    Mat(std::size_t rows, std::size_t cols, double fill)
        : rows_(rows), cols_(cols), data_(checked_area(rows, cols), fill) {}

    Mat(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        checked_area(rows_, cols_);
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw std::invalid_argument("mat: ragged initializer rows");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    [[nodiscard]] auto rows() const -> std::size_t { return rows_; }
    [[nodiscard]] auto cols() const -> std::size_t { return cols_; }

    auto operator()(std::size_t i, std::size_t j) -> double& {
        return data_[i * cols_ + j];
    }
    auto operator()(std::size_t i, std::size_t j) const -> const double& {
        return data_[i * cols_ + j];
    }

    auto operator+=(const Mat& o) -> Mat& {
        require_same_shape(o, "mat +=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }

    auto operator-=(const Mat& o) -> Mat& {
        require_same_shape(o, "mat -=");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }

    auto operator*=(double s) -> Mat& {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend auto operator==(const Mat& a, const Mat& b) -> bool {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    static auto checked_area(std::size_t rows, std::size_t cols) -> std::size_t {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("mat: dimensions must be positive");
        return rows * cols;
    }

    void require_same_shape(const Mat& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                        std::to_string(rows_) + "x" + std::to_string(cols_) +
                                        " vs " + std::to_string(o.rows_) + "x" +
                                        std::to_string(o.cols_) + ")");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

[[nodiscard]] inline auto operator+(Mat a, const Mat& b) -> Mat { return a += b; }
[[nodiscard]] inline auto operator-(Mat a, const Mat& b) -> Mat { return a -= b; }
[[nodiscard]] inline auto operator*(double s, Mat a) -> Mat { return a *= s; }
[[nodiscard]] inline auto operator*(Mat a, double s) -> Mat { return a *= s; }

// ============================================================================
// products
// ============================================================================

// <a, b>, accumulated left to right in index order.
[[nodiscard]] inline auto inner(const Vec& a, const Vec& b) -> double {
    if (a.size() != b.size())
        throw std::invalid_argument("inner: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Frobenius inner product tr(A^T B), accumulated in row-major index order.
[[nodiscard]] inline auto inner(const Mat& a, const Mat& b) -> double {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("inner: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * b(i, j);
    return acc;
}

[[nodiscard]] inline auto hadamard(const Vec& a, const Vec& b) -> Vec {
    if (a.size() != b.size())
        throw std::invalid_argument("hadamard: length mismatch (" + std::to_string(a.size()) +
                                    " vs " + std::to_string(b.size()) + ")");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * b[i];
    return r;
}

[[nodiscard]] inline auto matvec(const Mat& w, const Vec& v) -> Vec {
    if (w.cols() != v.size())
        throw std::invalid_argument("matvec: " + std::to_string(w.rows()) + "x" +
                                    std::to_string(w.cols()) + " against length " +
                                    std::to_string(v.size()));
    Vec r(w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.cols(); ++j) acc += w(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

// W^T u without materializing the transpose. Each output coordinate sums
// over rows in ascending order, so the result is bit-identical to
// matvec(transpose(w), u).
[[nodiscard]] inline auto matvec_adjoint(const Mat& w, const Vec& u) -> Vec {
    if (w.rows() != u.size())
        throw std::invalid_argument("matvec_adjoint: " + std::to_string(w.rows()) + "x" +
                                    std::to_string(w.cols()) + " against length " +
                                    std::to_string(u.size()));
    Vec r(w.cols());
    for (std::size_t j = 0; j < w.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) acc += w(i, j) * u[i];
        r[j] = acc;
    }
    return r;
}

// Rank-one u x^T.
[[nodiscard]] inline auto outer(const Vec& u, const Vec& x) -> Mat {
    Mat r(u.size(), x.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) r(i, j) = u[i] * x[j];
    return r;
}

[[nodiscard]] inline auto transpose(const Mat& w) -> Mat {
    Mat r(w.cols(), w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) r(j, i) = w(i, j);
    return r;
}

[[nodiscard]] inline auto norm(const Vec& a) -> double { return std::sqrt(inner(a, a)); }
[[nodiscard]] inline auto norm(const Mat& a) -> double { return std::sqrt(inner(a, a)); }

}  // namespace adjnet

#endif  // ADJNET_LINALG_HPP
