// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scsr/types.hpp"

namespace scsr {

// Desired output spikes plus the count of leading timesteps excluded
// from the loss while the network settles.
struct TargetRaster {
    Matrix d; // [output neurons x timesteps], entries in {0,1}
    int warmup = 0;
};

// Causal exponential filter applied row-wise:
//   f[t] = (1 - 1/kernel_tau) f[t-1] + x[t],  f[-1] = 0.
Matrix vr_filter(const Matrix& train, double kernel_tau);

// Van Rossum loss: sum over neurons and t >= warmup of
// 0.5 ((eps*d)[t] - (eps*s)[t])^2.
double vr_loss(const TargetRaster& target, const Matrix& s, double kernel_tau);

// dE[t_k]/d(filtered actual output) = -((eps*d)[t_k] - (eps*s)[t_k]).
Vector output_error(const TargetRaster& target, const Matrix& s,
                    double kernel_tau, Eigen::Index t_k);

// Desired raster for a classification label: the target neuron fires
// every `period` steps starting at `warmup`; all other neurons stay silent.
TargetRaster make_classification_target(int class_count, int label,
                                        Eigen::Index timesteps, int warmup,
                                        int period);

} // namespace scsr
