// gradcheck.hpp - finite-difference and adjoint-identity oracles
//
// Independent ground truth for every derivative the library produces. The
// oracles only ever call the function under test as a black box (forward
// evaluation), so they cannot share a bug with the derivative code paths
// they are checking.
//
// Scheme is fixed: central differences. Step sizes follow the coordinate
// magnitude for gradients and the direction magnitude for directional
// derivatives; comparisons use a floored relative error so checks stay
// meaningful near zero.

#ifndef ADJNET_GRADCHECK_HPP
#define ADJNET_GRADCHECK_HPP

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adjnet/linalg.hpp"

namespace adjnet {

struct FdConfig {
    double h_base = 1e-5;
    double abs_floor = 1e-10;
};

// ============================================================================
// relative error
// ============================================================================

[[nodiscard]] inline auto rel_error(double a, double b, double abs_floor = 1e-10) -> double {
    const double scale = std::max(abs_floor, std::max(std::fabs(a), std::fabs(b)));
    return std::fabs(a - b) / scale;
}

[[nodiscard]] inline auto rel_error(const Vec& a, const Vec& b, double abs_floor = 1e-10) -> double {
    const double scale = std::max(abs_floor, std::max(norm(a), norm(b)));
    return norm(a - b) / scale;
}

[[nodiscard]] inline auto rel_error(const Mat& a, const Mat& b, double abs_floor = 1e-10) -> double {
    const double scale = std::max(abs_floor, std::max(norm(a), norm(b)));
    return norm(a - b) / scale;
}

// Worst floored relative error over individual coordinates.
[[nodiscard]] inline auto max_coord_rel_error(const Vec& a, const Vec& b,
                                              double abs_floor = 1e-10) -> double {
    if (a.size() != b.size()) throw std::invalid_argument("max_coord_rel_error: length mismatch");
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max(worst, rel_error(a[k], b[k], abs_floor));
    return worst;
}

[[nodiscard]] inline auto max_coord_rel_error(const Mat& a, const Mat& b,
                                              double abs_floor = 1e-10) -> double {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_coord_rel_error: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            worst = std::max(worst, rel_error(a(i, j), b(i, j), abs_floor));
    return worst;
}

// ============================================================================
// finite differences
// ============================================================================

namespace detail {

inline void require_finite(double value, const std::string& where) {
    if (!std::isfinite(value))
        throw std::runtime_error("fd: non-finite evaluation at " + where);
}

}  // namespace detail

// Central-difference gradient of a scalar loss with respect to a vector
// parameter. Step h = h_base * (1 + |coordinate|), one coordinate at a time.
template <class Eval>
[[nodiscard]] auto fd_grad(Eval&& eval, const Vec& theta, const FdConfig& cfg = {}) -> Vec {
    Vec grad(theta.size());
    Vec work = theta;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        const double orig = theta[k];
        const double h = cfg.h_base * (1.0 + std::fabs(orig));
        work[k] = orig + h;
        const double fp = eval(work);
        detail::require_finite(fp, "coordinate " + std::to_string(k));
        work[k] = orig - h;
        const double fm = eval(work);
        detail::require_finite(fm, "coordinate " + std::to_string(k));
        work[k] = orig;
        grad[k] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

// Same for a matrix parameter, coordinate (i, j) at a time in row-major order.
template <class Eval>
[[nodiscard]] auto fd_grad(Eval&& eval, const Mat& theta, const FdConfig& cfg = {}) -> Mat {
    Mat grad(theta.rows(), theta.cols());
    Mat work = theta;
    for (std::size_t i = 0; i < theta.rows(); ++i) {
        for (std::size_t j = 0; j < theta.cols(); ++j) {
            const double orig = theta(i, j);
            const double h = cfg.h_base * (1.0 + std::fabs(orig));
            work(i, j) = orig + h;
            const double fp = eval(work);
            detail::require_finite(fp, "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            work(i, j) = orig - h;
            const double fm = eval(work);
            detail::require_finite(fm, "entry (" + std::to_string(i) + "," + std::to_string(j) + ")");
            work(i, j) = orig;
            grad(i, j) = (fp - fm) / (2.0 * h);
        }
    }
    return grad;
}

// Central-difference directional derivative (F(x + h v) - F(x - h v)) / 2h
// with h = h_base / (1 + |v|_2).
template <class Eval>
[[nodiscard]] auto fd_jvp(Eval&& eval, const Vec& x, const Vec& v, const FdConfig& cfg = {}) -> Vec {
    if (x.size() != v.size())
        throw std::invalid_argument("fd_jvp: direction length mismatch");
    const double h = cfg.h_base / (1.0 + norm(v));
    const Vec fp = eval(x + h * v);
    const Vec fm = eval(x - h * v);
    Vec out(fp.size());
    for (std::size_t k = 0; k < fp.size(); ++k) {
        detail::require_finite(fp[k], "output coordinate " + std::to_string(k));
        detail::require_finite(fm[k], "output coordinate " + std::to_string(k));
        out[k] = (fp[k] - fm[k]) / (2.0 * h);
    }
    return out;
}

// ============================================================================
// adjoint identity
// ============================================================================

[[nodiscard]] inline auto random_vec(std::size_t n, std::mt19937_64& rng,
                                     double lo = -1.0, double hi = 1.0) -> Vec {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

[[nodiscard]] inline auto random_mat(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                     double lo = -1.0, double hi = 1.0) -> Mat {
    std::uniform_real_distribution<double> dist(lo, hi);
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

struct AdjointReport {
    double max_defect = 0.0;
    std::size_t trials = 0;

    [[nodiscard]] auto passed(double tol = 1e-12) const -> bool { return max_defect <= tol; }
};

// Draws random (u, v) pairs and measures how far <u, L v> and <L* u, v>
// disagree, normalized by 1 + |<u, L v>|. A correct adjoint sits at rounding
// noise; a wrong one shows up at O(1).
template <class Primal, class Adjoint>
[[nodiscard]] auto adjoint_check(Primal&& primal, Adjoint&& adjoint,
                                 std::size_t in_dim, std::size_t out_dim,
                                 std::size_t trials, std::mt19937_64& rng) -> AdjointReport {
    AdjointReport report;
    report.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const Vec v = random_vec(in_dim, rng);
        const Vec u = random_vec(out_dim, rng);
        const double lhs = inner(u, primal(v));
        const double rhs = inner(adjoint(u), v);
        const double defect = std::fabs(lhs - rhs) / (1.0 + std::fabs(lhs));
        if (defect > report.max_defect) report.max_defect = defect;
    }
    return report;
}

// ============================================================================
// report accumulator
// ============================================================================

// Collects named checks and prints one line each: name, observed error,
// tolerance, PASS/FAIL. Used by the gradcheck command and by test harnesses.
class CheckReport {
public:
    void add(std::string name, double err, double tol) {
        lines_.push_back({std::move(name), err, tol, err <= tol, false});
    }

    // Commentary (for example a skipped-check explanation); not a check.
    void note(std::string text) {
        lines_.push_back({std::move(text), 0.0, 0.0, true, true});
    }

    [[nodiscard]] auto all_passed() const -> bool {
        for (const auto& l : lines_)
            if (!l.is_note && !l.pass) return false;
        return true;
    }

    [[nodiscard]] auto check_count() const -> std::size_t {
        std::size_t n = 0;
        for (const auto& l : lines_)
            if (!l.is_note) ++n;
        return n;
    }

    void print(std::ostream& os) const {
        for (const auto& l : lines_) {
            if (l.is_note) {
                os << "# " << l.name << "\n";
                continue;
            }
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%-44s %11.4e  tol %-8.1e %s",
                          l.name.c_str(), l.err, l.tol, l.pass ? "PASS" : "FAIL");
            os << buf << "\n";
        }
    }

private:
    struct Line {
        std::string name;
        double err;
        double tol;
        bool pass;
        bool is_note;
    };

    std::vector<Line> lines_;
};

}  // namespace adjnet

#endif  // ADJNET_GRADCHECK_HPP
