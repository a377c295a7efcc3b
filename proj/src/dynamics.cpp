// SPDX-License-Identifier: Apache-2.0
#include "scsr/dynamics.hpp"

#include <stdexcept>

namespace scsr {

namespace {
void require_same_size(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}
} // namespace

Vector psc_step(const Vector& a_prev, const Vector& s_now, double tau_s) {
    require_same_size(a_prev, s_now, "psc_step");
    if (tau_s < 1.0)
        throw std::invalid_argument("psc_step: tau_s must be >= 1");
    return (1.0 - 1.0 / tau_s) * a_prev + s_now;
}

Vector membrane_step(const Vector& u_prev, const Vector& weighted_input,
                     const Vector& theta_m) {
    require_same_size(u_prev, weighted_input, "membrane_step");
    require_same_size(u_prev, theta_m, "membrane_step");
    return theta_m.cwiseProduct(u_prev) + weighted_input;
}

std::pair<Vector, Vector> fire_and_reset(const Vector& u_now, double v_th,
                                         ResetMode mode) {
    if (v_th <= 0.0)
        throw std::invalid_argument("fire_and_reset: v_th must be > 0");
    Vector s = (u_now.array() >= v_th).cast<double>();
    return {s, post_reset(u_now, s, v_th, mode)};
}

Vector post_reset(const Vector& u_pre, const Vector& s, double v_th,
                  ResetMode mode) {
    if (mode == ResetMode::ToZero)
        return u_pre.cwiseProduct(Vector::Ones(s.size()) - s);
    return u_pre - v_th * s;
}

void step_layer(LayerTrace& trace, Eigen::Index t, const Vector& weighted_input,
                const LifParams& params) {
    if (t < 0 || t >= trace.timesteps())
        throw std::out_of_range("step_layer: timestep out of range");
    Vector u_prev = Vector::Zero(trace.neurons());
    Vector a_prev = Vector::Zero(trace.neurons());
    if (t > 0) {
        u_prev = post_reset(trace.u.col(t - 1), trace.s.col(t - 1),
                            params.v_th, params.reset_mode);
        a_prev = trace.a.col(t - 1);
    }
    const Vector u_now = membrane_step(u_prev, weighted_input, params.theta_m);
    auto [s_now, u_post] = fire_and_reset(u_now, params.v_th, params.reset_mode);
    trace.u.col(t) = u_now;
    trace.s.col(t) = s_now;
    trace.a.col(t) = psc_step(a_prev, s_now, params.tau_s);
}

} // namespace scsr
