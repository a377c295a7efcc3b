// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "scsr/backprop.hpp"
#include "scsr/network.hpp"

namespace scsr {

// L2-norm relative error against central finite differences, per tensor
// class: ||analytic - fd|| / ||fd|| over all parameters of that class.
struct GradCheckReport {
    double w = 0.0;
    double ws = 0.0;
    double wskip = 0.0;
    double theta = 0.0;

    double worst() const;
};

// Smooth-gate loss used on both sides of the comparison: forward with the
// logistic gate at the surrogate steepness, then the Van Rossum loss.
double smooth_loss(const NetworkSpec& spec, const WeightSet& weights,
                   const Matrix& input, const TargetRaster& target,
                   double steepness);

// Checks analytic gradients of every trainable tensor against central
// finite differences of smooth_loss (step `fd_step`). The finite-difference
// side touches only the forward pass and the loss. The default step
// balances the O(h^2) truncation error of the steep logistic chain
// against floating-point cancellation in the loss difference.
GradCheckReport run_gradcheck(const NetworkSpec& spec, const WeightSet& weights,
                              const Matrix& input, const TargetRaster& target,
                              double steepness, double fd_step = 2e-5);

} // namespace scsr
