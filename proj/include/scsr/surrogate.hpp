// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace scsr {

enum class SurrogateKind { Rectangular, FastSigmoid, SmoothGate };

// Pluggable stand-in for the derivative of the spike nonlinearity.
// `param` is the rectangle width for Rectangular and the steepness for
// the other two kinds.
struct SurrogateConfig {
    SurrogateKind kind = SurrogateKind::FastSigmoid;
    double param = 10.0;
};

// Logistic gate used in smooth mode instead of the Heaviside step.
inline double smooth_gate(double u, double v_th, double steepness) {
    return 1.0 / (1.0 + std::exp(-steepness * (u - v_th)));
}

inline double surrogate_slope(double u, double v_th, const SurrogateConfig& cfg) {
    const double x = u - v_th;
    switch (cfg.kind) {
    case SurrogateKind::Rectangular:
        return std::abs(x) < cfg.param / 2.0 ? 1.0 : 0.0;
    case SurrogateKind::FastSigmoid: {
        const double d = 1.0 + cfg.param * std::abs(x);
        return 1.0 / (d * d);
    }
    case SurrogateKind::SmoothGate: {
        const double g = smooth_gate(u, v_th, cfg.param);
        return cfg.param * g * (1.0 - g);
    }
    }
    throw std::logic_error("unknown surrogate kind");
}

} // namespace scsr
