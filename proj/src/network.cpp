// SPDX-License-Identifier: Apache-2.0
#include "scsr/network.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "scsr/surrogate.hpp"

namespace scsr {

bool NetworkSpec::is_self_recurrent(int layer) const {
    if (layer < 1 || layer > hidden_count())
        return false;
    return self_recurrent[static_cast<std::size_t>(layer - 1)];
}

std::vector<int> NetworkSpec::skips_from(int layer) const {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(skip_edges.size()); ++k)
        if (skip_edges[static_cast<std::size_t>(k)].source == layer)
            out.push_back(k);
    return out;
}

std::vector<int> NetworkSpec::skips_into(int layer) const {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(skip_edges.size()); ++k)
        if (skip_edges[static_cast<std::size_t>(k)].target == layer)
            out.push_back(k);
    return out;
}

std::vector<std::string> validate(const NetworkSpec& spec) {
    std::vector<std::string> errors;
    if (spec.layer_count() < 2)
        errors.push_back("network needs an input and an output layer");
    for (int n : spec.layer_sizes)
        if (n < 1)
            errors.push_back("every layer must have at least one neuron");
    if (static_cast<int>(spec.self_recurrent.size()) == spec.hidden_count() + 1 &&
        !spec.self_recurrent.empty() && spec.self_recurrent.back())
        errors.push_back("output layer cannot be self-recurrent");
    else if (static_cast<int>(spec.self_recurrent.size()) != spec.hidden_count())
        errors.push_back("self_recurrent needs one flag per hidden layer");
    for (const SkipEdge& e : spec.skip_edges) {
        if (e.target < e.source + 2)
            errors.push_back("skip must bypass >=1 layer (edge " +
                             std::to_string(e.source) + "->" +
                             std::to_string(e.target) + ")");
        if (e.source < 0 || e.target > spec.output_layer())
            errors.push_back("skip edge " + std::to_string(e.source) + "->" +
                             std::to_string(e.target) + " out of range");
        if (e.source == spec.output_layer())
            errors.push_back("output layer cannot be a skip source");
    }
    const double tm = spec.lif.theta_m.size() > 0 ? spec.lif.theta_m[0]
                                                  : 1.0 - 1.0 / spec.tau_m;
    if (!(tm > 0.0 && tm < 1.0))
        errors.push_back("theta_m must lie in (0,1)");
    if (spec.lif.tau_s < 1.0)
        errors.push_back("tau_s must be >= 1");
    if (spec.lif.v_th <= 0.0)
        errors.push_back("v_th must be > 0");
    return errors;
}

WeightSet init_weights(const NetworkSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng](double lo, double hi) {
        std::uniform_real_distribution<double> d(lo, hi);
        return d(rng);
    };

    WeightSet w;
    const int layers = spec.layer_count();
    const double theta0 = 1.0 - 1.0 / spec.tau_m;
    for (int l = 1; l < layers; ++l) {
        const int rows = spec.layer_sizes[static_cast<std::size_t>(l)];
        const int cols = spec.layer_sizes[static_cast<std::size_t>(l - 1)];
        const double b = std::sqrt(3.0 / cols);
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m(i, j) = uniform(-b, b);
        w.W.push_back(std::move(m));
        Vector ws;
        if (spec.is_self_recurrent(l)) {
            ws.resize(rows);
            for (int i = 0; i < rows; ++i)
                ws[i] = uniform(-0.1, 0.1);
        }
        w.Ws.push_back(std::move(ws));
        w.theta.push_back(Vector::Constant(rows, theta0));
    }
    for (const SkipEdge& e : spec.skip_edges) {
        const int rows = spec.layer_sizes[static_cast<std::size_t>(e.target)];
        const int cols = spec.layer_sizes[static_cast<std::size_t>(e.source)];
        const double b = std::sqrt(3.0 / cols);
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j)
                m(i, j) = uniform(-b, b);
        w.Wskip.push_back(std::move(m));
    }
    return w;
}

NetworkTrace forward(const NetworkSpec& spec, const WeightSet& weights,
                     const Matrix& input, const GateMode& gate) {
    if (input.rows() != spec.layer_sizes.front())
        throw std::invalid_argument("forward: input channel count mismatch");
    const Eigen::Index nt = input.cols();
    const int layers = spec.layer_count();
    const double lam_s = 1.0 - 1.0 / spec.lif.tau_s;
    const double v_th = spec.lif.v_th;

    NetworkTrace trace;
    trace.smooth = gate.smooth;
    trace.input_psc.resize(input.rows(), nt);
    if (spec.input_mode == InputMode::AnalogCurrent) {
        trace.input_psc = input;
    } else {
        Vector acc = Vector::Zero(input.rows());
        for (Eigen::Index t = 0; t < nt; ++t) {
            acc = lam_s * acc + input.col(t);
            trace.input_psc.col(t) = acc;
        }
    }

    trace.layers.reserve(static_cast<std::size_t>(layers - 1));
    for (int l = 1; l < layers; ++l)
        trace.layers.emplace_back(spec.layer_sizes[static_cast<std::size_t>(l)], nt);

    for (Eigen::Index t = 0; t < nt; ++t) {
        for (int l = 1; l < layers; ++l) {
            LayerTrace& lt = trace.layers[static_cast<std::size_t>(l - 1)];
            const Matrix& a_below =
                l == 1 ? trace.input_psc : trace.layers[static_cast<std::size_t>(l - 2)].a;
            Vector drive = weights.W[static_cast<std::size_t>(l - 1)] * a_below.col(t);
            if (spec.is_self_recurrent(l) && t > 0)
                drive += weights.Ws[static_cast<std::size_t>(l - 1)].cwiseProduct(
                    lt.a.col(t - 1));
            for (int k : spec.skips_into(l)) {
                const int src = spec.skip_edges[static_cast<std::size_t>(k)].source;
                const Matrix& a_src =
                    src == 0 ? trace.input_psc
                             : trace.layers[static_cast<std::size_t>(src - 1)].a;
                drive += weights.Wskip[static_cast<std::size_t>(k)] * a_src.col(t);
            }

            Vector u_prev = Vector::Zero(lt.neurons());
            Vector a_prev = Vector::Zero(lt.neurons());
            if (t > 0) {
                a_prev = lt.a.col(t - 1);
                u_prev = gate.smooth
                             ? Vector(lt.u.col(t - 1))
                             : post_reset(lt.u.col(t - 1), lt.s.col(t - 1), v_th,
                                          spec.lif.reset_mode);
            }
            const Vector u_now =
                weights.theta[static_cast<std::size_t>(l - 1)].cwiseProduct(u_prev) +
                drive;
            Vector s_now(lt.neurons());
            if (gate.smooth) {
                for (Eigen::Index i = 0; i < s_now.size(); ++i)
                    s_now[i] = smooth_gate(u_now[i], v_th, gate.steepness);
            } else {
                s_now = (u_now.array() >= v_th).cast<double>();
            }
            lt.u.col(t) = u_now;
            lt.s.col(t) = s_now;
            lt.a.col(t) = lam_s * a_prev + s_now;
        }
    }
    return trace;
}

} // namespace scsr
