#include <gtest/gtest.h>

#include <array>

#include "oracles.hpp"
#include "tangleroof/error.hpp"
#include "tangleroof/state.hpp"

namespace tangleroof {
namespace {

TEST(PureState, BitStringIndexing) {
    const PureState s = PureState::basis("011");
    EXPECT_EQ(s.dim(), 8u);
    EXPECT_EQ(s[3], Complex(1.0, 0.0));
    EXPECT_EQ(s.amplitude("011"), Complex(1.0, 0.0));
    EXPECT_EQ(s.amplitude("110"), Complex(0.0, 0.0));
    EXPECT_THROW(PureState::basis("01x"), Error);
    EXPECT_THROW(PureState::basis(3, 8), Error);
}

TEST(PureState, RejectsWrongLength) {
    try {
        PureState(3, Eigen::VectorXcd::Zero(4));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
    }
}

TEST(PureState, CanonicalPhase) {
    Eigen::VectorXcd v(4);
    v << Complex(0.1, 0.0), Complex(0.0, -0.7), Complex(0.3, 0.3), Complex(0.0, 0.0);
    const PureState s = PureState(2, v).normalized().with_canonical_phase();
    EXPECT_NEAR(s[1].imag(), 0.0, 1e-15);
    EXPECT_GT(s[1].real(), 0.0);
    EXPECT_NEAR(s.norm_squared(), 1.0, 1e-15);
}

TEST(PureState, GhzAndW) {
    const PureState ghz = make_ghz(3);
    const PureState w = make_w(4);
    EXPECT_NEAR(std::abs(ghz.amplitude("111")), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(std::abs(w.amplitude("0100")), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(w.amplitude("0000")), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(inner_product(make_ghz(4), w)), 0.0, 1e-15);
    EXPECT_THROW(make_w(1), Error);
}

TEST(DensityMatrix, Validation) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2) * 0.5;
    EXPECT_NO_THROW(DensityMatrix(1, m));
    m(0, 1) = Complex(0.1, 0.0);
    EXPECT_THROW(DensityMatrix(1, m), Error);
    Eigen::MatrixXcd neg(2, 2);
    neg << 1.2, 0.0, 0.0, -0.2;
    EXPECT_THROW(DensityMatrix(1, neg), Error);
    EXPECT_THROW(DensityMatrix(2, Eigen::MatrixXcd::Identity(2, 2) * 0.5), Error);
}

TEST(PartialTrace, MatchesIndexLoopOracle) {
    std::mt19937_64 rng(7);
    const std::vector<std::vector<int>> keeps{{0}, {2}, {0, 2}, {1, 3}, {0, 1, 2}, {1, 2, 3}};
    for (int trial = 0; trial < 20; ++trial) {
        const PureState s = testing::random_state(rng, 4);
        for (const auto& keep : keeps) {
            const auto got = partial_trace(s, keep).entries();
            const auto want = testing::partial_trace_oracle(s.amplitudes(), 4, keep);
            EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-13);
        }
    }
}

TEST(PartialTrace, MixedInputAgreesWithPure) {
    std::mt19937_64 rng(11);
    const PureState s = testing::random_state(rng, 3);
    const std::array<int, 2> keep{0, 2};
    const auto from_pure = partial_trace(s, keep).entries();
    const auto from_mixed = partial_trace(DensityMatrix::projector(s), keep).entries();
    EXPECT_LT((from_pure - from_mixed).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PartialTrace, RejectsBadKeepSets) {
    const PureState s = make_ghz(3);
    EXPECT_THROW(partial_trace(s, std::vector<int>{}), Error);
    EXPECT_THROW(partial_trace(s, std::vector<int>{0, 0}), Error);
    EXPECT_THROW(partial_trace(s, std::vector<int>{3}), Error);
}

TEST(RankTwo, RecoversMixture) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::MatrixXcd u = testing::random_unitary(rng, 8);
        const double p = 0.55 + 0.4 * trial / 20.0;
        const Eigen::MatrixXcd rho = p * u.col(0) * u.col(0).adjoint() + (1 - p) * u.col(1) * u.col(1).adjoint();
        const RankTwoMixture mix = rank_two_eigendecomposition(DensityMatrix(3, rho, 1e-10));
        EXPECT_NEAR(mix.p, p, 1e-12);
        EXPECT_LT((mix.density() - rho).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(std::abs(inner_product(mix.psi1, PureState(3, u.col(0)))), 1.0, 1e-10);
    }
}

TEST(RankTwo, RankThreeIsRejected) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(8, 8);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.3;
    rho(2, 2) = 0.2;
    try {
        rank_two_eigendecomposition(DensityMatrix(3, rho));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::rank_exceeded);
    }
}

TEST(RankTwo, PureInputIsFlagged) {
    const RankTwoMixture mix = rank_two_eigendecomposition(DensityMatrix::projector(make_ghz(3)));
    EXPECT_TRUE(mix.degenerate_rank);
    EXPECT_EQ(mix.p, 1.0);
    EXPECT_NEAR(std::abs(inner_product(mix.psi1, mix.psi2)), 0.0, 1e-12);
}

TEST(RankTwo, DegenerateSpectrumIsDeterministic) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(8, 8);
    rho(0, 0) = 0.5;
    rho(7, 7) = 0.5;
    const RankTwoMixture mix = rank_two_eigendecomposition(DensityMatrix(3, rho));
    EXPECT_NEAR(mix.p, 0.5, 1e-14);
    EXPECT_NEAR(std::abs(mix.psi1.amplitude("000")), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(mix.psi2.amplitude("111")), 1.0, 1e-12);
}

TEST(Mixture, ValidatesInputs) {
    EXPECT_THROW(RankTwoMixture(PureState::basis("000"), PureState::basis("000"), 0.5), Error);
    EXPECT_THROW(RankTwoMixture(PureState::basis("000"), PureState::basis("001"), 1.5), Error);
    EXPECT_THROW(RankTwoMixture(PureState::basis("000"), PureState::basis("01"), 0.5), Error);
}

}  // namespace
}  // namespace tangleroof
