#include <cmath>
#include <random>
#include <stdexcept>

#include "adjnet/nonlinearity.hpp"
#include "gtest/gtest.h"

using adjnet::Nonlinearity;
using adjnet::Vec;
using enum adjnet::Nonlinearity;

namespace {

// cosh-based forms of the tanh derivatives; algebraically equal to the
// shipped 1 - tanh^2 and -2 tanh (1 - tanh^2) but numerically touchier,
// which is why the library uses the simplified ones.
auto tanh_d1_cosh_form(double x) -> double {
    const double c = std::cosh(x);
    const double d = std::cosh(2.0 * x) + 1.0;
    return 4.0 * c * c / (d * d);
}

auto tanh_d2_cosh_form(double x) -> double {
    const double c = std::cosh(x);
    const double d = std::cosh(2.0 * x) + 1.0;
    return -8.0 * std::sinh(2.0 * x) * c * c / (d * d * d);
}

}  // namespace

TEST(Sigma, Values) {
    EXPECT_EQ(adjnet::sigma(Sigmoid, 0.0), 0.5);
    EXPECT_EQ(adjnet::sigma(Tanh, 0.0), 0.0);
    EXPECT_EQ(adjnet::sigma(Ramp, -2.0), 0.0);
    EXPECT_EQ(adjnet::sigma(Ramp, 3.0), 3.0);
    EXPECT_EQ(adjnet::sigma(Identity, -7.5), -7.5);
    EXPECT_NEAR(adjnet::sigma(Sigmoid, 0.5), 0.6224593312018546, 1e-15);
    // saturation stays finite far out on both sides
    EXPECT_EQ(adjnet::sigma(Sigmoid, 700.0), 1.0);
    const double tiny = adjnet::sigma(Sigmoid, -700.0);
    EXPECT_TRUE(std::isfinite(tiny));
    EXPECT_GE(tiny, 0.0);
    EXPECT_LE(tiny, 1e-300);
    EXPECT_TRUE(std::isfinite(adjnet::sigma(Tanh, 700.0)));
}

TEST(SigmaD1, Values) {
    EXPECT_EQ(adjnet::sigma_d1(Sigmoid, 0.0), 0.25);
    EXPECT_EQ(adjnet::sigma_d1(Tanh, 0.0), 1.0);
    EXPECT_EQ(adjnet::sigma_d1(Ramp, 0.0), 0.0);  // step convention at the kink
    EXPECT_EQ(adjnet::sigma_d1(Ramp, -1.0), 0.0);
    EXPECT_EQ(adjnet::sigma_d1(Ramp, 2.0), 1.0);
    EXPECT_EQ(adjnet::sigma_d1(Identity, 123.0), 1.0);
    EXPECT_NEAR(adjnet::sigma_d1(Sigmoid, 1.0), 0.19661193324148185, 1e-15);
    EXPECT_NEAR(adjnet::sigma_d1(Tanh, 0.5), 0.7864477329659274, 1e-15);
}

TEST(SigmaD2, Values) {
    EXPECT_EQ(adjnet::sigma_d2(Sigmoid, 0.0), 0.0);
    EXPECT_EQ(adjnet::sigma_d2(Tanh, 0.0), 0.0);
    EXPECT_EQ(adjnet::sigma_d2(Ramp, 0.0), 0.0);
    EXPECT_EQ(adjnet::sigma_d2(Ramp, 5.0), 0.0);
    EXPECT_EQ(adjnet::sigma_d2(Identity, -3.0), 0.0);
    EXPECT_NEAR(adjnet::sigma_d2(Sigmoid, 1.0), -0.09085774767294842, 1e-15);
    EXPECT_NEAR(adjnet::sigma_d2(Tanh, 0.5), -0.7268619813835873, 1e-15);
}

TEST(TanhDerivs, MatchCoshForms) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int t = 0; t < 100; ++t) {
        const double x = d(rng);
        const double a1 = adjnet::sigma_d1(Tanh, x);
        const double b1 = tanh_d1_cosh_form(x);
        EXPECT_LE(std::fabs(a1 - b1), 1e-12 * (1.0 + std::fabs(a1)));
        const double a2 = adjnet::sigma_d2(Tanh, x);
        const double b2 = tanh_d2_cosh_form(x);
        EXPECT_LE(std::fabs(a2 - b2), 1e-12 * (1.0 + std::fabs(a2)));
    }
}

TEST(SigmaDerivs, FiniteDifferenceAgreement) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    const double h = 1e-5;
    for (Nonlinearity n : {Tanh, Sigmoid, Ramp, Identity}) {
        for (int t = 0; t < 100; ++t) {
            double x = d(rng);
            if (n == Ramp)
                while (std::fabs(x) < 1e-3) x = d(rng);  // stay clear of the kink
            const double fd1 = (adjnet::sigma(n, x + h) - adjnet::sigma(n, x - h)) / (2.0 * h);
            EXPECT_LE(std::fabs(adjnet::sigma_d1(n, x) - fd1), 1e-7);
            if (n == Ramp) continue;
            const double fd2 =
                (adjnet::sigma_d1(n, x + h) - adjnet::sigma_d1(n, x - h)) / (2.0 * h);
            EXPECT_LE(std::fabs(adjnet::sigma_d2(n, x) - fd2), 1e-7);
        }
    }
}

TEST(Apply, ComponentwiseExactly) {
    const Vec z{-1.5, 0.0, 2.25};
    for (Nonlinearity n : {Tanh, Sigmoid, Ramp, Identity}) {
        const Vec y = adjnet::apply(n, z);
        const Vec y1 = adjnet::apply_d1(n, z);
        const Vec y2 = adjnet::apply_d2(n, z);
        for (std::size_t k = 0; k < z.size(); ++k) {
            EXPECT_EQ(y[k], adjnet::sigma(n, z[k]));
            EXPECT_EQ(y1[k], adjnet::sigma_d1(n, z[k]));
            EXPECT_EQ(y2[k], adjnet::sigma_d2(n, z[k]));
        }
    }
    EXPECT_EQ(adjnet::apply(Identity, Vec{1.0, 2.0}), (Vec{1.0, 2.0}));
    EXPECT_EQ(adjnet::apply(Sigmoid, Vec(2)), (Vec{0.5, 0.5}));
    EXPECT_EQ(adjnet::apply_d2(Ramp, Vec{-3.0, 0.0, 9.0}), Vec(3));
}

TEST(DerivAction, ExamplesAndSelfAdjointness) {
    const Vec v{2.0, 3.0};
    EXPECT_EQ(adjnet::deriv_action(Identity, Vec{5.0, -5.0}, v), v);
    EXPECT_EQ(adjnet::deriv_action(Sigmoid, Vec(2), v), (Vec{0.5, 0.75}));
    EXPECT_THROW(adjnet::deriv_action(Tanh, Vec(2), Vec(3)), std::invalid_argument);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto draw = [&](std::size_t n) {
        Vec out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = d(rng);
        return out;
    };
    for (Nonlinearity n : {Tanh, Sigmoid, Ramp, Identity}) {
        for (int t = 0; t < 50; ++t) {
            const Vec z = draw(5);
            const Vec a = draw(5);
            const Vec y = draw(5);
            const double lhs = inner(y, adjnet::deriv_action(n, z, a));
            const double rhs = inner(adjnet::deriv_action(n, z, y), a);
            EXPECT_LE(std::fabs(lhs - rhs), 1e-12 * (1.0 + std::fabs(lhs)));
        }
    }
}

TEST(SecondDerivAction, SymmetryAndExamples) {
    EXPECT_EQ(adjnet::second_deriv_action(Ramp, Vec{1.0, -1.0}, Vec{2.0, 2.0}, Vec{3.0, 3.0}),
              Vec(2));
    EXPECT_EQ(adjnet::second_deriv_action(Identity, Vec{1.0}, Vec{2.0}, Vec{3.0}), Vec(1));

    const Vec got = adjnet::second_deriv_action(Sigmoid, Vec{1.0}, Vec{1.0}, Vec{1.0});
    EXPECT_NEAR(got[0], -0.09085774767294842, 1e-15);

    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    auto draw = [&](std::size_t n) {
        Vec out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = d(rng);
        return out;
    };
    for (int t = 0; t < 50; ++t) {
        const Vec z = draw(4);
        const Vec v1 = draw(4);
        const Vec v2 = draw(4);
        // symmetric up to reassociation: (d2*v1)*v2 vs (d2*v2)*v1 round once each
        const Vec ab = adjnet::second_deriv_action(Tanh, z, v1, v2);
        const Vec ba = adjnet::second_deriv_action(Tanh, z, v2, v1);
        for (std::size_t i = 0; i < ab.size(); ++i)
            EXPECT_NEAR(ab[i], ba[i], 1e-15 * (1.0 + std::fabs(ab[i])));

        // with one slot fixed the map in the other slot is self-adjoint
        const Vec y = draw(4);
        const double lhs = inner(y, adjnet::second_deriv_action(Sigmoid, z, v1, v2));
        const double rhs = inner(adjnet::second_deriv_action(Sigmoid, z, v1, y), v2);
        EXPECT_LE(std::fabs(lhs - rhs), 1e-12 * (1.0 + std::fabs(lhs)));
    }
}

TEST(Tokens, RoundTripAndErrors) {
    for (Nonlinearity n : {Tanh, Sigmoid, Ramp, Identity})
        EXPECT_EQ(adjnet::nonlinearity_from_token(std::string(adjnet::to_token(n))), n);
    EXPECT_EQ(adjnet::to_token(Tanh), "tanh");
    EXPECT_EQ(adjnet::to_token(Sigmoid), "sigmoid");
    EXPECT_EQ(adjnet::to_token(Ramp), "ramp");
    EXPECT_EQ(adjnet::to_token(Identity), "identity");
    EXPECT_THROW((void)adjnet::nonlinearity_from_token("relu"), std::invalid_argument);
    EXPECT_THROW((void)adjnet::nonlinearity_from_token(""), std::invalid_argument);
}
