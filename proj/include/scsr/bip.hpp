// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scsr/dynamics.hpp"
#include "scsr/types.hpp"

namespace scsr {

// Post-reset membrane history of a recorded layer, i.e. the values the
// forward recursion actually carried (identical to trace.u in smooth mode).
Matrix carried_potentials(const LayerTrace& trace, const LifParams& lif,
                          bool smooth);

// dL/dtheta[i] = sum_{t>=1} u_post[i][t-1] delta[i][t].
Vector grad_theta(const Matrix& u_post, const Matrix& delta);

// Gradient-descent step on the leak vector, clamped to [0.01, 0.999].
Vector apply_theta_update(const Vector& theta, const Vector& step);

} // namespace scsr
