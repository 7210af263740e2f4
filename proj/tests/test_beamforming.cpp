// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "nris/beamforming.hpp"
#include "test_support.hpp"

using namespace nris;
using nris::testing::gaussian_matrix;
using nris::testing::uniform_phases;

TEST(Cascade, MatchesExplicitSum) {
    RngStream rng(11);
    const CMatrix h1 = gaussian_matrix(5, 7, rng);
    const CMatrix h2 = gaussian_matrix(3, 5, rng);
    const auto state = make_reflection_state(uniform_phases(5, rng), 0.8);
    const CMatrix he = cascaded_channel(h1, h2, state);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 7; ++j) {
            cplx acc(0.0, 0.0);
            for (int n = 0; n < 5; ++n) acc += h2(i, n) * 0.8 * std::polar(1.0, state.phases_rad(n)) * h1(n, j);
            EXPECT_LT(std::abs(he(i, j) - acc), 1e-13);
        }
    }
}

TEST(Cascade, RejectsMismatchedDimensions) {
    RngStream rng(1);
    const CMatrix h1 = gaussian_matrix(5, 7, rng);
    const CMatrix h2 = gaussian_matrix(3, 4, rng);
    EXPECT_THROW(cascaded_channel(h1, h2, CVector::Ones(5)), UsageError);
    EXPECT_THROW(cascaded_channel(h1, gaussian_matrix(3, 5, rng), CVector::Ones(4)), UsageError);
}

TEST(Svd, BeamformersHaveOrthonormalColumns) {
    RngStream rng(2);
    const CMatrix he = gaussian_matrix(6, 10, rng);
    const auto bf = svd_beamformers(he, 4);
    EXPECT_EQ(bf.precoder.rows(), 10);
    EXPECT_EQ(bf.precoder.cols(), 4);
    EXPECT_EQ(bf.combiner.rows(), 6);
    EXPECT_LT((bf.precoder.adjoint() * bf.precoder - CMatrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_LT((bf.combiner.adjoint() * bf.combiner - CMatrix::Identity(4, 4)).norm(), 1e-12);
    EXPECT_NEAR(bf.precoder.squaredNorm(), 4.0, 1e-10);
    // W^H He F = diag(sigma_1..4)
    const CMatrix heff = bf.combiner.adjoint() * he * bf.precoder;
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(std::abs(heff(k, k)), bf.singular_values(k), 1e-10);
}

TEST(Svd, StreamCountBounds) {
    RngStream rng(3);
    const CMatrix he = gaussian_matrix(4, 8, rng);
    EXPECT_THROW(svd_beamformers(he, 0), UsageError);
    EXPECT_THROW(svd_beamformers(he, 5), UsageError);
    EXPECT_NO_THROW(svd_beamformers(he, 4));
}

TEST(Rate, DiagonalChannelClosedForm) {
    CMatrix he = CMatrix::Zero(3, 4);
    he(0, 0) = 2.0;
    he(1, 1) = cplx(0.0, 1.0);
    he(2, 2) = 0.5;
    const auto bf = svd_beamformers(he, 2);
    const double snr = 10.0;
    const double expected = std::log2(1.0 + snr / 2.0 * 4.0) + std::log2(1.0 + snr / 2.0 * 1.0);
    EXPECT_NEAR(achievable_rate(he, bf, snr, 2), expected, 1e-12);
}

TEST(Rate, LogDetMatchesSingularValueForm) {
    RngStream rng(4);
    for (int t = 0; t < 50; ++t) {
        const CMatrix he = gaussian_matrix(6, 9, rng);
        for (int ns : {1, 3, 6}) {
            const auto bf = svd_beamformers(he, ns);
            for (double db : {-10.0, 0.0, 20.0}) {
                const double snr = db_to_linear(db);
                const double r = achievable_rate(he, bf, snr, ns);
                EXPECT_NEAR(r, rate_from_singular_values(bf.singular_values, snr, ns), 1e-8);
                EXPECT_LE(r, jensen_upper_bound(he, snr, ns) + 1e-12);
            }
        }
    }
}

TEST(Rate, ZeroSnrGivesZeroAndGrowsWithSnr) {
    RngStream rng(5);
    const CMatrix he = gaussian_matrix(4, 4, rng);
    const auto bf = svd_beamformers(he, 2);
    EXPECT_NEAR(achievable_rate(he, bf, 0.0, 2), 0.0, 1e-15);
    double prev = 0.0;
    for (int db = -20; db <= 30; db += 5) {
        const double r = achievable_rate(he, bf, db_to_linear(db), 2);
        EXPECT_GT(r, prev);
        prev = r;
    }
    EXPECT_THROW(achievable_rate(he, bf, -1.0, 2), UsageError);
}

TEST(Rate, SingularCombinerIsReported) {
    RngStream rng(6);
    const CMatrix he = gaussian_matrix(4, 4, rng);
    auto bf = svd_beamformers(he, 2);
    bf.combiner.col(1) = bf.combiner.col(0);
    EXPECT_THROW(achievable_rate(he, bf, 1.0, 2), NumericalError);
    EXPECT_THROW(achievable_rate(he, bf, 1.0, 3), UsageError);
}

TEST(Rate, JensenBoundTightForRankOneSingleStream) {
    CVector u(3), v(5);
    u << 1.0, cplx(0.0, 2.0), -0.5;
    v << 0.3, 0.1, cplx(1.0, 1.0), 0.0, 2.0;
    const CMatrix he = u * v.adjoint();
    const auto bf = svd_beamformers(he, 1);
    EXPECT_NEAR(achievable_rate(he, bf, 3.0, 1), jensen_upper_bound(he, 3.0, 1), 1e-10);
}
