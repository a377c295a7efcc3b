// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "scsr/types.hpp"

namespace scsr {

// Linear-gate setting for the two-layer vs. recurrent-layer comparison:
// g(v) = h*v, both layers share the scalar leak theta_m, the upper layer
// holds W_next, the lower one the diagonal self weights Ws.
struct LinearGateConfig {
    double h = 1.0;
    double theta_m = 0.9375;
    Matrix w_next;
    Vector ws;
};

// Combined recurrence weights:
//   W1 = W_next (theta_m/h I + diag(Ws)) W_next^-1,  W2 = -theta_m W1.
// Throws (with a condition estimate) when W_next is numerically singular.
std::pair<Matrix, Matrix> combine_two_layer(const LinearGateConfig& cfg);

// Simulates the two-layer self-recurrent linear-gate system and the
// delayed combined recurrence driven by the same input series and
// returns max |u_a - u_b| over neurons and time.
double verify_equivalence(const LinearGateConfig& cfg, const Matrix& drive);

struct EquivalenceRow {
    std::uint64_t seed = 0;
    int size = 0;
    int timesteps = 0;
    double deviation = 0.0;
};

// Random well-conditioned instance for one seed (sizes <= 20, N_t <= 200).
EquivalenceRow run_equivalence_trial(std::uint64_t seed);

// Diagnostic only: the same pair simulated with thresholded spiking
// neurons; the deviation is reported, not asserted small.
double spiking_mode_deviation(const LinearGateConfig& cfg, const Matrix& drive,
                              double v_th);

} // namespace scsr
