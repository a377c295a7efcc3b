// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <doctest.h>

#include "scsr/loss.hpp"

using namespace scsr;

TEST_CASE("vr_filter is a causal exponential with the right decay") {
    Matrix x = Matrix::Zero(1, 5);
    x(0, 0) = 1.0;
    const Matrix f = vr_filter(x, 8.0);
    CHECK(f(0, 0) == doctest::Approx(1.0));
    CHECK(f(0, 1) == doctest::Approx(0.875));
    CHECK(f(0, 2) == doctest::Approx(0.765625));
    CHECK(f(0, 3) == doctest::Approx(0.669921875));
}

TEST_CASE("vr_filter is linear") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Matrix a(3, 12), b(3, 12);
    for (Eigen::Index c = 0; c < 12; ++c)
        for (Eigen::Index r = 0; r < 3; ++r) {
            a(r, c) = d(rng);
            b(r, c) = d(rng);
        }
    const Matrix lhs = vr_filter(a + 2.0 * b, 8.0);
    const Matrix rhs = vr_filter(a, 8.0) + 2.0 * vr_filter(b, 8.0);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("loss of a train against itself is zero, and never negative") {
    std::mt19937_64 rng(2);
    std::bernoulli_distribution coin(0.3);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix s = Matrix::Zero(4, 30);
        for (Eigen::Index c = 0; c < 30; ++c)
            for (Eigen::Index r = 0; r < 4; ++r)
                s(r, c) = coin(rng) ? 1.0 : 0.0;
        TargetRaster tgt{s, 0};
        CHECK(vr_loss(tgt, s, 8.0) == 0.0);

        Matrix other = Matrix::Zero(4, 30);
        for (Eigen::Index c = 0; c < 30; ++c)
            for (Eigen::Index r = 0; r < 4; ++r)
                other(r, c) = coin(rng) ? 1.0 : 0.0;
        CHECK(vr_loss(tgt, other, 8.0) >= 0.0);
    }
}

TEST_CASE("single desired spike against silence over three steps") {
    // Desired spike at t=0, actual train silent, three timesteps:
    // 0.5 (1^2 + 0.875^2 + 0.765625^2) = 1.1759033203125.
    Matrix d = Matrix::Zero(1, 3);
    d(0, 0) = 1.0;
    const Matrix s = Matrix::Zero(1, 3);
    const double loss = vr_loss(TargetRaster{d, 0}, s, 8.0);
    CHECK(loss == doctest::Approx(1.1759033203125).epsilon(1e-12));
}

TEST_CASE("loss is symmetric in desired and actual trains") {
    std::mt19937_64 rng(3);
    std::bernoulli_distribution coin(0.25);
    Matrix a = Matrix::Zero(2, 20), b = Matrix::Zero(2, 20);
    for (Eigen::Index c = 0; c < 20; ++c)
        for (Eigen::Index r = 0; r < 2; ++r) {
            a(r, c) = coin(rng) ? 1.0 : 0.0;
            b(r, c) = coin(rng) ? 1.0 : 0.0;
        }
    CHECK(vr_loss(TargetRaster{a, 0}, b, 8.0) ==
          doctest::Approx(vr_loss(TargetRaster{b, 0}, a, 8.0)).epsilon(1e-14));
}

TEST_CASE("warmup masks the early error") {
    Matrix d = Matrix::Zero(1, 10);
    d(0, 0) = 1.0; // only pre-warmup mismatch...
    const Matrix s = Matrix::Zero(1, 10);
    // ...but the filter tail still leaks past the mask, so masking from
    // t >= 10 must zero the loss entirely while warmup=0 does not.
    CHECK(vr_loss(TargetRaster{d, 0}, s, 8.0) > 0.0);
    const double masked = vr_loss(TargetRaster{d, 3}, s, 8.0);
    const double full = vr_loss(TargetRaster{d, 0}, s, 8.0);
    CHECK(masked < full);
    CHECK(vr_loss(TargetRaster{d, 10}, s, 8.0) == 0.0);
}

TEST_CASE("output_error is the negative filtered difference") {
    Matrix d = Matrix::Zero(2, 4);
    d(0, 0) = 1.0;
    Matrix s = Matrix::Zero(2, 4);
    s(1, 1) = 1.0;
    const Matrix fd = vr_filter(d, 8.0);
    const Matrix fs = vr_filter(s, 8.0);
    for (Eigen::Index t = 0; t < 4; ++t) {
        const Vector e = output_error(TargetRaster{d, 0}, s, 8.0, t);
        CHECK((e + (fd.col(t) - fs.col(t))).cwiseAbs().maxCoeff() < 1e-15);
    }
    // Before the warmup boundary the error is masked to zero.
    const Vector e0 = output_error(TargetRaster{d, 2}, s, 8.0, 1);
    CHECK(e0.cwiseAbs().maxCoeff() == 0.0);
    const Vector e2 = output_error(TargetRaster{d, 2}, s, 8.0, 2);
    CHECK(e2.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("classification targets fire periodically on one row") {
    const TargetRaster t = make_classification_target(4, 2, 23, 5, 5);
    CHECK(t.d.rows() == 4);
    CHECK(t.d.cols() == 23);
    CHECK(t.warmup == 5);
    for (Eigen::Index c = 0; c < 23; ++c)
        for (Eigen::Index r = 0; r < 4; ++r) {
            const bool expect = (r == 2) && c >= 5 && (c - 5) % 5 == 0;
            CHECK(t.d(r, c) == (expect ? 1.0 : 0.0));
        }
    CHECK(t.d.sum() == doctest::Approx(4.0)); // t = 5, 10, 15, 20
}
