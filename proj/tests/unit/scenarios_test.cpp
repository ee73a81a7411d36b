#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "tangleroof/error.hpp"
#include "tangleroof/invariants.hpp"
#include "tangleroof/scenarios.hpp"

namespace tangleroof {
namespace {

TEST(FourQubit, StateFamily) {
    EXPECT_NEAR(std::abs(inner_product(four_qubit_state(1.0, 0.3), make_ghz(4))), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(inner_product(four_qubit_state(0.0, 0.3), make_w(4))), 1.0, 1e-15);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) EXPECT_NEAR(four_qubit_state(u(rng), 6 * u(rng)).norm_squared(), 1.0, 1e-14);
    EXPECT_THROW(four_qubit_state(-0.1, 0.0), Error);
}

TEST(FourQubit, LargerEigenvalue) {
    EXPECT_DOUBLE_EQ(q_of_p(0.0), 0.75);
    EXPECT_DOUBLE_EQ(q_of_p(1.0), 0.5);
    const RankTwoMixture mix = reduced_mixture(0.5, 0.0);
    EXPECT_NEAR(mix.p, (2.0 + std::sqrt(0.75)) / 4.0, 1e-12);
}

TEST(FourQubit, ClosedFormsNormalizedAndSigned) {
    for (const double p : {0.05, 0.3, 0.59, 0.61, 0.9, 0.99}) {
        const auto c = closed_form_coefficients(p);
        EXPECT_NEAR(c.f1 * c.f1 + c.g1 * c.g1 + c.h1 * c.h1, 1.0, 1e-10) << p;
        EXPECT_NEAR(c.f2 * c.f2 + c.g2 * c.g2 + c.h2 * c.h2, 1.0, 1e-10) << p;
        EXPECT_EQ(c.g2 >= 0.0, p < 0.6) << p;
    }
    EXPECT_THROW(closed_form_coefficients(0.0), Error);
}

TEST(FourQubit, ClosedFormsMatchEigenvectors) {
    for (const auto& [p, phi] : std::vector<std::pair<double, double>>{{0.2, 0.0}, {0.5, 1.0}, {0.8, -2.3}}) {
        const RankTwoMixture mix = reduced_mixture(p, phi);
        const auto [a, b] = closed_form_eigenstates(p, phi);
        EXPECT_GT(std::abs(inner_product(a, mix.psi1)), 1 - 1e-8);
        EXPECT_GT(std::abs(inner_product(b, mix.psi2)), 1 - 1e-8);
    }
}

TEST(FourQubit, EndpointLimitsAgreeWithNearbyReductions) {
    const RankTwoMixture top = reduced_mixture(1.0, 0.0);
    EXPECT_EQ(top.p, 0.5);
    const RankTwoMixture bottom = reduced_mixture(0.0, 0.0);
    EXPECT_EQ(bottom.p, 0.75);
    // amplitudes go like sqrt(p), so the density converges at that rate
    const RankTwoMixture near_bottom = reduced_mixture(1e-10, 0.0);
    EXPECT_LT((near_bottom.density() - bottom.density()).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(FourQubit, SimplexDimensions) {
    EXPECT_EQ(simplex_sample(0.9, 0.0).dimension, 2);
    EXPECT_EQ(simplex_sample(0.9, std::numbers::pi / 4).dimension, 3);
    EXPECT_EQ(simplex_sample(0.3, 0.0).dimension, 3);
}

TEST(FourQubit, QuarterPeriod) {
    for (const double p : {0.2, 0.65}) {
        const auto a = simplex_sample(p, 0.3);
        const auto b = simplex_sample(p, 0.3 + std::numbers::pi / 2);
        EXPECT_NEAR(a.volume, b.volume, 1e-9);
        ASSERT_EQ(a.interval.has_value(), b.interval.has_value());
        if (a.interval) EXPECT_NEAR(a.interval->first, b.interval->first, 1e-9);
    }
}

TEST(Monogamy, ResidualIdentityAndSymmetry) {
    for (const double p : {0.0, 0.35, 0.7, 1.0}) {
        const MonogamyReport r = monogamy_report(p, 0.0);
        double expected = r.one_tangle;
        for (int k = 0; k < 3; ++k) expected -= r.pairwise[static_cast<std::size_t>(k)] + r.three_tangle_bounds[static_cast<std::size_t>(k)];
        EXPECT_NEAR(r.residual, expected, 1e-14);
        EXPECT_NEAR(r.pairwise[0], r.pairwise[2], 1e-10);
        EXPECT_NEAR(r.three_tangle_bounds[0], r.three_tangle_bounds[1], 1e-10);
        EXPECT_GE(r.residual, -1e-9);
    }
    EXPECT_NEAR(monogamy_report(1.0, 0.0).residual, 1.0, 1e-9);
    EXPECT_NEAR(monogamy_report(0.0, 0.0).residual, 0.0, 1e-9);
}

TEST(GhzWMixture, TriviallyZero) {
    for (const double p : {0.0, 0.5, 1.0}) {
        const ZeroCheck z = ghzw_mixture_zero_check(p);
        EXPECT_TRUE(z.zero) << p;
        EXPECT_LT(z.reconstruction_error, 1e-12);
    }
    EXPECT_EQ(ghzw_mixture_zero_check(0.5).witness.size(), 4u);
}

TEST(Toy, ReportShape) {
    const ToyReport r = toy_report();
    EXPECT_EQ(r.low_witness.size(), 2u);
    EXPECT_EQ(r.high_witness.size(), 3u);
    EXPECT_EQ(r.linearized.knots().size(), 4u);
    ASSERT_TRUE(r.improved.p_right);
    EXPECT_GT(*r.improved.p_right, r.analysis.interval->p_high);
}

}  // namespace
}  // namespace tangleroof
