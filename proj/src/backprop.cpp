// SPDX-License-Identifier: Apache-2.0
#include "scsr/backprop.hpp"

#include <stdexcept>

#include "scsr/bip.hpp"

namespace scsr {

Vector spike_response_jacobian_step(const LayerTrace& trace, Eigen::Index t,
                                    double v_th, const SurrogateConfig& cfg) {
    if (t < 0 || t >= trace.timesteps())
        throw std::out_of_range("spike_response_jacobian_step: t out of range");
    Vector slope(trace.neurons());
    for (Eigen::Index i = 0; i < slope.size(); ++i)
        slope[i] = surrogate_slope(trace.u(i, t), v_th, cfg);
    return slope;
}

Matrix delta_scan(const Matrix& ext_abar, const LayerTrace& trace,
                  const Vector* self_weights, const Vector& theta,
                  const LifParams& lif, bool smooth, const SurrogateConfig& cfg) {
    const Eigen::Index n = trace.neurons();
    const Eigen::Index nt = trace.timesteps();
    if (ext_abar.rows() != n || ext_abar.cols() != nt)
        throw std::invalid_argument("delta_scan: shape mismatch");
    const double lam_s = 1.0 - 1.0 / lif.tau_s;

    Matrix delta(n, nt);
    Vector abar_next = Vector::Zero(n);
    Vector delta_next = Vector::Zero(n);
    for (Eigen::Index t = nt - 1; t >= 0; --t) {
        // Full adjoint of this layer's PSC at t: same-timestep consumers,
        // the PSC decay carry, and the delayed self-recurrent feedback.
        Vector abar = ext_abar.col(t) + lam_s * abar_next;
        if (self_weights != nullptr)
            abar += self_weights->cwiseProduct(delta_next);

        const Vector slope = spike_response_jacobian_step(trace, t, lif.v_th, cfg);
        Vector carry = theta.cwiseProduct(delta_next);
        if (!smooth && lif.reset_mode == ResetMode::ToZero)
            carry = carry.cwiseProduct(Vector::Ones(n) - trace.s.col(t));
        delta.col(t) = abar.cwiseProduct(slope) + carry;
        abar_next = abar;
        delta_next = delta.col(t);
    }
    return delta;
}

Matrix delta_output(const TargetRaster& target, const LayerTrace& trace,
                    const Vector& theta, const LifParams& lif, bool smooth,
                    const SurrogateConfig& cfg) {
    const Eigen::Index nt = trace.timesteps();
    Matrix ext_abar = Matrix::Zero(trace.neurons(), nt);
    const Matrix diff =
        vr_filter(target.d, lif.tau_s) - vr_filter(trace.s, lif.tau_s);
    for (Eigen::Index t = target.warmup; t < nt; ++t)
        ext_abar.col(t) = -diff.col(t);
    return delta_scan(ext_abar, trace, nullptr, theta, lif, smooth, cfg);
}

Matrix delta_hidden(const Matrix& w_next, const Matrix& delta_next,
                    const LayerTrace& trace, const Vector& theta,
                    const LifParams& lif, bool smooth, const SurrogateConfig& cfg) {
    const Matrix ext_abar = w_next.transpose() * delta_next;
    return delta_scan(ext_abar, trace, nullptr, theta, lif, smooth, cfg);
}

Matrix delta_self_recurrent(const Matrix& w_next, const Matrix& delta_next,
                            const Vector& self_weights, const LayerTrace& trace,
                            const Vector& theta, const LifParams& lif,
                            bool smooth, const SurrogateConfig& cfg) {
    const Matrix ext_abar = w_next.transpose() * delta_next;
    return delta_scan(ext_abar, trace, &self_weights, theta, lif, smooth, cfg);
}

Matrix delta_skip(const Matrix& w_next, const Matrix& delta_next,
                  const Matrix& w_skip, const Matrix& delta_skip_target,
                  const Vector& self_weights, const LayerTrace& trace,
                  const Vector& theta, const LifParams& lif, bool smooth,
                  const SurrogateConfig& cfg) {
    const Matrix ext_abar =
        w_next.transpose() * delta_next + w_skip.transpose() * delta_skip_target;
    return delta_scan(ext_abar, trace, &self_weights, theta, lif, smooth, cfg);
}

Matrix grad_feedforward(const Matrix& a_prev, const Matrix& delta) {
    if (a_prev.cols() != delta.cols())
        throw std::invalid_argument("grad_feedforward: timestep mismatch");
    return delta * a_prev.transpose();
}

Vector grad_self(const Matrix& a_self, const Matrix& delta) {
    if (a_self.rows() != delta.rows() || a_self.cols() != delta.cols())
        throw std::invalid_argument("grad_self: shape mismatch");
    const Eigen::Index nt = delta.cols();
    if (nt < 2)
        return Vector::Zero(delta.rows());
    return a_self.leftCols(nt - 1)
        .cwiseProduct(delta.rightCols(nt - 1))
        .rowwise()
        .sum();
}

Matrix grad_skip(const Matrix& a_src, const Matrix& delta_target) {
    return grad_feedforward(a_src, delta_target);
}

ErrorField compute_deltas(const NetworkSpec& spec, const WeightSet& weights,
                          const NetworkTrace& trace, const TargetRaster& target,
                          const SurrogateConfig& cfg) {
    const int layers = spec.layer_count();
    ErrorField field;
    field.delta.resize(static_cast<std::size_t>(layers - 1));
    for (int l = layers - 1; l >= 1; --l) {
        const LayerTrace& lt = trace.layers[static_cast<std::size_t>(l - 1)];
        const Vector& theta = weights.theta[static_cast<std::size_t>(l - 1)];
        Matrix ext_abar;
        if (l == layers - 1) {
            const Eigen::Index nt = lt.timesteps();
            ext_abar = Matrix::Zero(lt.neurons(), nt);
            const Matrix diff = vr_filter(target.d, spec.lif.tau_s) -
                                vr_filter(lt.s, spec.lif.tau_s);
            for (Eigen::Index t = target.warmup; t < nt; ++t)
                ext_abar.col(t) = -diff.col(t);
        } else {
            ext_abar = weights.W[static_cast<std::size_t>(l)].transpose() *
                       field.delta[static_cast<std::size_t>(l)];
        }
        for (int k : spec.skips_from(l)) {
            const int tgt = spec.skip_edges[static_cast<std::size_t>(k)].target;
            ext_abar += weights.Wskip[static_cast<std::size_t>(k)].transpose() *
                        field.delta[static_cast<std::size_t>(tgt - 1)];
        }
        const Vector* self_w =
            spec.is_self_recurrent(l) ? &weights.Ws[static_cast<std::size_t>(l - 1)]
                                      : nullptr;
        field.delta[static_cast<std::size_t>(l - 1)] = delta_scan(
            ext_abar, lt, self_w, theta, spec.lif, trace.smooth, cfg);
    }
    return field;
}

GradientSet backward(const NetworkSpec& spec, const WeightSet& weights,
                     const NetworkTrace& trace, const TargetRaster& target,
                     const SurrogateConfig& cfg) {
    const ErrorField field = compute_deltas(spec, weights, trace, target, cfg);
    const int layers = spec.layer_count();
    GradientSet g;
    for (int l = 1; l < layers; ++l) {
        const std::size_t li = static_cast<std::size_t>(l - 1);
        const Matrix& delta = field.delta[li];
        const LayerTrace& lt = trace.layers[li];
        const Matrix& a_below =
            l == 1 ? trace.input_psc : trace.layers[li - 1].a;
        g.W.push_back(grad_feedforward(a_below, delta));
        g.Ws.push_back(spec.is_self_recurrent(l) ? grad_self(lt.a, delta)
                                                 : Vector());
        g.theta.push_back(
            grad_theta(carried_potentials(lt, spec.lif, trace.smooth), delta));
    }
    for (const SkipEdge& e : spec.skip_edges) {
        const Matrix& a_src =
            e.source == 0 ? trace.input_psc
                          : trace.layers[static_cast<std::size_t>(e.source - 1)].a;
        g.Wskip.push_back(
            grad_skip(a_src, field.delta[static_cast<std::size_t>(e.target - 1)]));
    }
    return g;
}

} // namespace scsr
