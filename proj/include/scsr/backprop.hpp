// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "scsr/loss.hpp"
#include "scsr/network.hpp"
#include "scsr/surrogate.hpp"

namespace scsr {

// Backpropagated error per layer; delta[l-1] holds the [N_l x N_t]
// field for network layer l. Filled in decreasing layer order and, within
// a layer, by a reverse-time scan.
struct ErrorField {
    std::vector<Matrix> delta;
};

// Gradients shape-matched to WeightSet.
struct GradientSet {
    std::vector<Matrix> W;
    std::vector<Vector> Ws;
    std::vector<Matrix> Wskip;
    std::vector<Vector> theta;
};

// sigma'(u[t] - v_th) per neuron at one timestep.
Vector spike_response_jacobian_step(const LayerTrace& trace, Eigen::Index t,
                                    double v_th, const SurrogateConfig& cfg);

// Reverse-time scan for one layer. `ext_abar` carries the same-timestep
// adjoint contributions to this layer's PSC from its consumers (next
// layer, skip targets, or the loss for the output layer); the scan adds
// the PSC decay carry, the optional self-recurrent feedback (pass
// `self_weights` = nullptr for a plain feedforward layer), and the
// membrane leak/reset carry.
Matrix delta_scan(const Matrix& ext_abar, const LayerTrace& trace,
                  const Vector* self_weights, const Vector& theta,
                  const LifParams& lif, bool smooth, const SurrogateConfig& cfg);

// Output-layer delta: the Van Rossum output error chained through the
// PSC filter and membrane recursions (the loss kernel is the synaptic
// filter, so the filtered actual train is the output PSC itself).
Matrix delta_output(const TargetRaster& target, const LayerTrace& trace,
                    const Vector& theta, const LifParams& lif, bool smooth,
                    const SurrogateConfig& cfg);

// Plain feedforward hidden layer.
Matrix delta_hidden(const Matrix& w_next, const Matrix& delta_next,
                    const LayerTrace& trace, const Vector& theta,
                    const LifParams& lif, bool smooth, const SurrogateConfig& cfg);

// Self-recurrent hidden layer.
Matrix delta_self_recurrent(const Matrix& w_next, const Matrix& delta_next,
                            const Vector& self_weights, const LayerTrace& trace,
                            const Vector& theta, const LifParams& lif,
                            bool smooth, const SurrogateConfig& cfg);

// Self-recurrent hidden layer that also feeds a skip target.
Matrix delta_skip(const Matrix& w_next, const Matrix& delta_next,
                  const Matrix& w_skip, const Matrix& delta_skip_target,
                  const Vector& self_weights, const LayerTrace& trace,
                  const Vector& theta, const LifParams& lif, bool smooth,
                  const SurrogateConfig& cfg);

// Outer-product accumulation over time: sum_t delta[t] a_prev[t]^T.
Matrix grad_feedforward(const Matrix& a_prev, const Matrix& delta);

// Diagonal accumulation with the 1-step delayed own PSC.
Vector grad_self(const Matrix& a_self, const Matrix& delta);

// Skip weights follow the feedforward pattern with the source PSCs.
Matrix grad_skip(const Matrix& a_src, const Matrix& delta_target);

// Deltas for every layer, dispatched by architecture.
ErrorField compute_deltas(const NetworkSpec& spec, const WeightSet& weights,
                          const NetworkTrace& trace, const TargetRaster& target,
                          const SurrogateConfig& cfg);

// Full gradient set (including per-neuron leak gradients).
GradientSet backward(const NetworkSpec& spec, const WeightSet& weights,
                     const NetworkTrace& trace, const TargetRaster& target,
                     const SurrogateConfig& cfg);

} // namespace scsr
