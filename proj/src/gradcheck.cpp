// SPDX-License-Identifier: Apache-2.0
#include "scsr/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace scsr {

double GradCheckReport::worst() const {
    return std::max({w, ws, wskip, theta});
}

double smooth_loss(const NetworkSpec& spec, const WeightSet& weights,
                   const Matrix& input, const TargetRaster& target,
                   double steepness) {
    const NetworkTrace trace =
        forward(spec, weights, input, GateMode::smooth_gate(steepness));
    return vr_loss(target, trace.layers.back().s, spec.lif.tau_s);
}

namespace {

// Per-tensor-class accumulator for ||analytic - fd|| / ||fd||. An
// elementwise quotient would be dominated by floating-point noise on the
// many near-zero gradient entries (the central difference of a loss of
// magnitude L carries ~eps*L/h absolute noise per probe), while a
// systematic backprop error shows up in the norm ratio immediately.
struct NormRatio {
    double diff_sq = 0.0;
    double ref_sq = 0.0;

    void add(double analytic, double fd) {
        diff_sq += (analytic - fd) * (analytic - fd);
        ref_sq += fd * fd;
    }
    double value() const {
        return std::sqrt(diff_sq) / std::max(std::sqrt(ref_sq), 1e-12);
    }
};

} // namespace

GradCheckReport run_gradcheck(const NetworkSpec& spec, const WeightSet& weights,
                              const Matrix& input, const TargetRaster& target,
                              double steepness, double fd_step) {
    SurrogateConfig cfg{SurrogateKind::SmoothGate, steepness};
    const NetworkTrace trace =
        forward(spec, weights, input, GateMode::smooth_gate(steepness));
    const GradientSet analytic = backward(spec, weights, trace, target, cfg);

    WeightSet probe = weights;
    auto central = [&](double& slot) {
        const double saved = slot;
        slot = saved + fd_step;
        const double up = smooth_loss(spec, probe, input, target, steepness);
        slot = saved - fd_step;
        const double down = smooth_loss(spec, probe, input, target, steepness);
        slot = saved;
        return (up - down) / (2.0 * fd_step);
    };

    NormRatio w, ws, wskip, theta;
    for (std::size_t l = 0; l < probe.W.size(); ++l)
        for (Eigen::Index i = 0; i < probe.W[l].rows(); ++i)
            for (Eigen::Index j = 0; j < probe.W[l].cols(); ++j)
                w.add(analytic.W[l](i, j), central(probe.W[l](i, j)));
    for (std::size_t l = 0; l < probe.Ws.size(); ++l)
        for (Eigen::Index i = 0; i < probe.Ws[l].size(); ++i)
            ws.add(analytic.Ws[l][i], central(probe.Ws[l][i]));
    for (std::size_t k = 0; k < probe.Wskip.size(); ++k)
        for (Eigen::Index i = 0; i < probe.Wskip[k].rows(); ++i)
            for (Eigen::Index j = 0; j < probe.Wskip[k].cols(); ++j)
                wskip.add(analytic.Wskip[k](i, j), central(probe.Wskip[k](i, j)));
    for (std::size_t l = 0; l < probe.theta.size(); ++l)
        for (Eigen::Index i = 0; i < probe.theta[l].size(); ++i)
            theta.add(analytic.theta[l][i], central(probe.theta[l][i]));

    GradCheckReport report;
    report.w = w.value();
    report.ws = probe.Ws.empty() ? 0.0 : ws.value();
    report.wskip = probe.Wskip.empty() ? 0.0 : wskip.value();
    report.theta = theta.value();
    return report;
}

} // namespace scsr
