// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "scsr/types.hpp"

namespace scsr {

enum class ResetMode { ToZero, SubtractThreshold };

// Per-layer LIF constants. theta_m is the per-neuron membrane leak
// factor 1 - 1/tau_m; tau_s is the synaptic time constant in steps.
struct LifParams {
    Vector theta_m;
    double tau_s = 8.0;
    double v_th = 1.0;
    ResetMode reset_mode = ResetMode::ToZero;
};

// Time series recorded for one layer during a forward run.
//   u: membrane potentials *before* reset (the values compared against
//      the threshold); the post-reset value carried into the next step
//      is recovered via post_reset_column below.
//   a: unweighted PSCs of the layer's own output
//   s: spike outputs (0/1 in spiking mode, gate values in smooth mode)
struct LayerTrace {
    Matrix u;
    Matrix a;
    Matrix s;

    LayerTrace() = default;
    LayerTrace(Eigen::Index neurons, Eigen::Index timesteps)
        : u(Matrix::Zero(neurons, timesteps)),
          a(Matrix::Zero(neurons, timesteps)),
          s(Matrix::Zero(neurons, timesteps)) {}

    Eigen::Index neurons() const { return u.rows(); }
    Eigen::Index timesteps() const { return u.cols(); }
};

// First-order synapse: a[t] = (1 - 1/tau_s) a[t-1] + s[t].
Vector psc_step(const Vector& a_prev, const Vector& s_now, double tau_s);

// Euler LIF update: u[t] = theta_m (.) u[t-1] + weighted_input.
Vector membrane_step(const Vector& u_prev, const Vector& weighted_input,
                     const Vector& theta_m);

// Threshold comparison on the pre-reset potential (>= fires), then reset.
std::pair<Vector, Vector> fire_and_reset(const Vector& u_now, double v_th,
                                         ResetMode mode);

// Post-reset potential for a stored (pre-reset, spikes) column.
Vector post_reset(const Vector& u_pre, const Vector& s, double v_th,
                  ResetMode mode);

// Fill column t of the trace from an externally weighted input drive.
void step_layer(LayerTrace& trace, Eigen::Index t, const Vector& weighted_input,
                const LifParams& params);

} // namespace scsr
