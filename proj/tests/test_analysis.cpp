// SPDX-License-Identifier: Apache-2.0
#include <random>

#include <doctest.h>

#include "scsr/analysis.hpp"

using namespace scsr;

TEST_CASE("identity network combines to pure leak matrices") {
    LinearGateConfig cfg;
    cfg.h = 1.0;
    cfg.theta_m = 0.9375;
    cfg.w_next = Matrix::Identity(3, 3);
    cfg.ws = Vector::Zero(3);
    const auto [w1, w2] = combine_two_layer(cfg);
    CHECK((w1 - 0.9375 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((w2 + 0.87890625 * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("the second-order term is always -theta times the first") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        LinearGateConfig cfg;
        cfg.h = 0.8;
        cfg.theta_m = 0.9375;
        cfg.w_next = Matrix::Identity(4, 4);
        cfg.ws.resize(4);
        for (Eigen::Index i = 0; i < 4; ++i) {
            cfg.ws[i] = 0.1 * unit(rng);
            for (Eigen::Index j = 0; j < 4; ++j)
                cfg.w_next(i, j) += 0.2 * unit(rng);
        }
        const auto [w1, w2] = combine_two_layer(cfg);
        CHECK((w2 + cfg.theta_m * w1).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("diagonal readout keeps the combination diagonal") {
    LinearGateConfig cfg;
    cfg.h = 2.0;
    cfg.theta_m = 0.9;
    cfg.w_next = Vector::LinSpaced(3, 1.0, 3.0).asDiagonal();
    cfg.ws.resize(3);
    cfg.ws << 0.1, -0.2, 0.3;
    const auto [w1, w2] = combine_two_layer(cfg);
    const Matrix expect =
        (Vector::Constant(3, cfg.theta_m / cfg.h) + cfg.ws).asDiagonal();
    CHECK((w1 - expect).cwiseAbs().maxCoeff() < 1e-14);
    (void)w2;
}

TEST_CASE("scalar self weights make the combination basis independent") {
    // With Ws = c*1 the middle factor is a multiple of the identity, so
    // W1 collapses to (theta/h + c) I for every invertible readout.
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
        LinearGateConfig cfg;
        cfg.h = 1.2;
        cfg.theta_m = 0.9375;
        cfg.w_next = Matrix::Identity(5, 5);
        for (Eigen::Index i = 0; i < 5; ++i)
            for (Eigen::Index j = 0; j < 5; ++j)
                cfg.w_next(i, j) += 0.3 * unit(rng);
        cfg.ws = Vector::Constant(5, 0.05);
        const auto [w1, w2] = combine_two_layer(cfg);
        const Matrix expect =
            (cfg.theta_m / cfg.h + 0.05) * Matrix::Identity(5, 5);
        CHECK((w1 - expect).cwiseAbs().maxCoeff() < 1e-8);
        (void)w2;
    }
}

TEST_CASE("singular or malformed readouts are rejected") {
    LinearGateConfig cfg;
    cfg.w_next = Matrix::Zero(3, 3);
    cfg.ws = Vector::Zero(3);
    CHECK_THROWS_WITH_AS(combine_two_layer(cfg),
                         doctest::Contains("singular"), std::invalid_argument);
    cfg.w_next = Matrix::Identity(3, 3);
    cfg.h = 0.0;
    CHECK_THROWS_AS(combine_two_layer(cfg), std::invalid_argument);
    cfg.h = 1.0;
    cfg.ws = Vector::Zero(2);
    CHECK_THROWS_AS(combine_two_layer(cfg), std::invalid_argument);
}

TEST_CASE("two-layer and combined recurrences agree to solver precision") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull, 99ull}) {
        const EquivalenceRow row = run_equivalence_trial(seed);
        INFO("seed " << row.seed << " size " << row.size << " steps "
                     << row.timesteps);
        CHECK(row.deviation < 1e-9);
    }
}

TEST_CASE("equivalence trials are deterministic per seed") {
    const EquivalenceRow a = run_equivalence_trial(12);
    const EquivalenceRow b = run_equivalence_trial(12);
    CHECK(a.size == b.size);
    CHECK(a.timesteps == b.timesteps);
    CHECK(a.deviation == b.deviation);
}

TEST_CASE("thresholded spiking breaks the algebraic identity") {
    // The equivalence is a statement about the linear gate; with a hard
    // threshold the two systems genuinely diverge, which is worth pinning
    // down so the linear result is not over-claimed.
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    LinearGateConfig cfg;
    cfg.h = 1.0;
    cfg.theta_m = 0.9375;
    cfg.w_next = Matrix::Identity(4, 4);
    cfg.ws.resize(4);
    for (Eigen::Index i = 0; i < 4; ++i) {
        cfg.ws[i] = 0.3 * unit(rng);
        for (Eigen::Index j = 0; j < 4; ++j)
            cfg.w_next(i, j) += 0.3 * unit(rng);
    }
    Matrix drive(4, 120);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index t = 0; t < 120; ++t)
            drive(i, t) = 0.4 * unit(rng) + 0.2;
    CHECK(spiking_mode_deviation(cfg, drive, 1.0) > 1e-3);
}
