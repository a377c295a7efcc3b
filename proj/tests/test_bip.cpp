// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "scsr/bip.hpp"

using namespace scsr;

namespace {
LifParams lif_default(Eigen::Index n) {
    LifParams p;
    p.theta_m = Vector::Constant(n, 0.9375);
    return p;
}
} // namespace

TEST_CASE("carried_potentials recovers the post-reset history") {
    LayerTrace trace(1, 3);
    trace.u << 0.6, 1.4, 0.2;
    trace.s << 0.0, 1.0, 0.0;
    const Matrix to_zero = carried_potentials(trace, lif_default(1), false);
    CHECK(to_zero(0, 0) == 0.6);
    CHECK(to_zero(0, 1) == 0.0); // reset swallowed the 1.4
    CHECK(to_zero(0, 2) == 0.2);

    LifParams sub = lif_default(1);
    sub.reset_mode = ResetMode::SubtractThreshold;
    const Matrix subtracted = carried_potentials(trace, sub, false);
    CHECK(subtracted(0, 1) == doctest::Approx(0.4));

    // Smooth mode has no reset, so the history is the raw trace.
    const Matrix smooth = carried_potentials(trace, lif_default(1), true);
    CHECK(smooth == trace.u);
}

TEST_CASE("leak gradient pairs delayed potentials with deltas") {
    Matrix u_post(1, 2), delta(1, 2);
    u_post << 0.5, 0.9;
    delta << 0.7, 0.2;
    const Vector g = grad_theta(u_post, delta);
    CHECK(g[0] == doctest::Approx(0.1)); // 0.5 * 0.2; t=0 has no predecessor

    // Multi-step: sum over t >= 1 of u[t-1] delta[t].
    Matrix u2(1, 3), d2(1, 3);
    u2 << 0.5, 0.9, 0.1;
    d2 << 0.7, 0.2, 0.4;
    CHECK(grad_theta(u2, d2)[0] == doctest::Approx(0.5 * 0.2 + 0.9 * 0.4));
    CHECK_THROWS_AS(grad_theta(Matrix::Zero(1, 2), Matrix::Zero(2, 2)),
                    std::invalid_argument);
}

TEST_CASE("theta updates descend and stay clamped") {
    const Vector theta = Vector::Constant(1, 0.9375);
    CHECK(apply_theta_update(theta, Vector::Constant(1, -0.01))[0] ==
          doctest::Approx(0.9475));
    CHECK(apply_theta_update(theta, Vector::Constant(1, 0.02))[0] ==
          doctest::Approx(0.9175));
    // Clamp at both ends.
    CHECK(apply_theta_update(theta, Vector::Constant(1, -5.0))[0] == 0.999);
    CHECK(apply_theta_update(theta, Vector::Constant(1, 5.0))[0] == 0.01);
}
