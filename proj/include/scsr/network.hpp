// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scsr/dynamics.hpp"
#include "scsr/types.hpp"

namespace scsr {

enum class InputMode { AnalogCurrent, Spike };

struct SkipEdge {
    int source = 0; // layer index, 0 = input layer
    int target = 0; // must satisfy target >= source + 2
};

// Architecture description. Layer 0 is the input layer; layers
// 1..hidden_count() are hidden; the last layer is the output layer.
struct NetworkSpec {
    std::vector<int> layer_sizes;
    std::vector<bool> self_recurrent; // one flag per hidden layer
    std::vector<SkipEdge> skip_edges;
    LifParams lif;        // theta_m here is a single-entry default; per-layer
                          // vectors live in WeightSet::theta
    double tau_m = 16.0;  // used to derive the homogeneous initial theta
    InputMode input_mode = InputMode::Spike;

    int layer_count() const { return static_cast<int>(layer_sizes.size()); }
    int output_layer() const { return layer_count() - 1; }
    int hidden_count() const { return layer_count() - 2; }
    bool is_self_recurrent(int layer) const;
    // Indices into skip_edges with the given source / target layer.
    std::vector<int> skips_from(int layer) const;
    std::vector<int> skips_into(int layer) const;
};

// All trainable tensors. Indexing convention: W[l] and theta[l] belong to
// layer l+1 (the first non-input layer), Ws[l] likewise (empty vector when
// the layer is not self-recurrent), Wskip[k] matches spec.skip_edges[k].
struct WeightSet {
    std::vector<Matrix> W;
    std::vector<Vector> Ws;
    std::vector<Matrix> Wskip;
    std::vector<Vector> theta;
};

struct NetworkTrace {
    Matrix input_psc;               // a^(0), [N_0 x N_t]
    std::vector<LayerTrace> layers; // layers[l] is network layer l+1
    bool smooth = false;            // recorded with a smooth gate instead of spikes

    Eigen::Index timesteps() const { return input_psc.cols(); }
};

// Forward evaluation mode: thresholded spiking by default, or the
// differentiable logistic gate (no reset) used for gradient verification.
struct GateMode {
    bool smooth = false;
    double steepness = 10.0;

    static GateMode spiking() { return {false, 0.0}; }
    static GateMode smooth_gate(double steepness) { return {true, steepness}; }
};

// Returns every violated invariant; empty means the spec is valid.
std::vector<std::string> validate(const NetworkSpec& spec);

WeightSet init_weights(const NetworkSpec& spec, std::uint64_t seed);

// Full multi-layer pass. `input` is [N_0 x N_t]; analog inputs are used
// directly as the input PSC, spike inputs are run through the synaptic
// filter first.
NetworkTrace forward(const NetworkSpec& spec, const WeightSet& weights,
                     const Matrix& input, const GateMode& gate = GateMode::spiking());

} // namespace scsr
