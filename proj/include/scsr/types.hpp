// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace scsr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Binary neuron x time spike matrix. Entries are 0/1; dt is the step
// duration in ms (1 ms everywhere in practice).
struct SpikeRaster {
    Matrix data;
    double dt = 1.0;

    SpikeRaster() = default;
    SpikeRaster(Eigen::Index neurons, Eigen::Index timesteps, double dt_ms = 1.0)
        : data(Matrix::Zero(neurons, timesteps)), dt(dt_ms) {}

    Eigen::Index neurons() const { return data.rows(); }
    Eigen::Index timesteps() const { return data.cols(); }
};

} // namespace scsr
