// SPDX-License-Identifier: Apache-2.0
#include "scsr/optim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

#include "scsr/bip.hpp"

namespace scsr {

namespace {

void check_finite(const Matrix& g, const std::string& name) {
    if (!g.allFinite())
        throw std::runtime_error("non-finite gradient in tensor " + name);
}

// One bias-corrected Adam step for a single tensor; returns the descent
// step (to be subtracted from the parameter).
template <typename T>
T adam_tensor_step(T& m, T& v, const T& g, long step, double beta1, double beta2,
                   double eps, double lr) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    const T mhat = m / bc1;
    const T vhat = v / bc2;
    return lr *
           mhat.cwiseQuotient(vhat.cwiseSqrt() + T::Constant(vhat.rows(), vhat.cols(), eps));
}

Vector adam_vector_step(Vector& m, Vector& v, const Vector& g, long step,
                        double beta1, double beta2, double eps, double lr) {
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    const Vector mhat = m / bc1;
    const Vector vhat = v / bc2;
    return lr * mhat.cwiseQuotient((vhat.cwiseSqrt().array() + eps).matrix());
}

void clip_matrix(Matrix& g, double max_norm) {
    const double n = g.norm();
    if (n > max_norm)
        g *= max_norm / n;
}

void clip_vector(Vector& g, double max_norm) {
    const double n = g.norm();
    if (n > max_norm)
        g *= max_norm / n;
}

} // namespace

AdamState make_adam_state(const NetworkSpec& spec, const WeightSet& weights,
                          double lr) {
    AdamState st;
    st.lr = lr;
    auto zeros_like = [](const auto& t) { return t.Zero(t.rows(), t.cols()); };
    for (const Matrix& w : weights.W) {
        st.m.W.push_back(zeros_like(w));
        st.v.W.push_back(zeros_like(w));
    }
    for (const Vector& ws : weights.Ws) {
        st.m.Ws.push_back(Vector::Zero(ws.size()));
        st.v.Ws.push_back(Vector::Zero(ws.size()));
    }
    for (const Matrix& w : weights.Wskip) {
        st.m.Wskip.push_back(zeros_like(w));
        st.v.Wskip.push_back(zeros_like(w));
    }
    for (const Vector& th : weights.theta) {
        st.m.theta.push_back(Vector::Zero(th.size()));
        st.v.theta.push_back(Vector::Zero(th.size()));
    }
    (void)spec;
    return st;
}

void adam_step(AdamState& state, WeightSet& params, const GradientSet& grads,
               bool update_theta) {
    ++state.step;
    for (std::size_t i = 0; i < params.W.size(); ++i) {
        check_finite(grads.W[i], "W[" + std::to_string(i + 1) + "]");
        params.W[i] -= adam_tensor_step(state.m.W[i], state.v.W[i], grads.W[i],
                                        state.step, state.beta1, state.beta2,
                                        state.epsilon, state.lr);
    }
    for (std::size_t i = 0; i < params.Ws.size(); ++i) {
        if (params.Ws[i].size() == 0)
            continue;
        if (!grads.Ws[i].allFinite())
            throw std::runtime_error("non-finite gradient in tensor Ws[" +
                                     std::to_string(i + 1) + "]");
        params.Ws[i] -= adam_vector_step(state.m.Ws[i], state.v.Ws[i], grads.Ws[i],
                                         state.step, state.beta1, state.beta2,
                                         state.epsilon, state.lr);
    }
    for (std::size_t i = 0; i < params.Wskip.size(); ++i) {
        check_finite(grads.Wskip[i], "Wskip[" + std::to_string(i) + "]");
        params.Wskip[i] -= adam_tensor_step(state.m.Wskip[i], state.v.Wskip[i],
                                            grads.Wskip[i], state.step, state.beta1,
                                            state.beta2, state.epsilon, state.lr);
    }
    if (update_theta) {
        for (std::size_t i = 0; i < params.theta.size(); ++i) {
            if (!grads.theta[i].allFinite())
                throw std::runtime_error("non-finite gradient in tensor theta[" +
                                         std::to_string(i + 1) + "]");
            const Vector step = adam_vector_step(
                state.m.theta[i], state.v.theta[i], grads.theta[i], state.step,
                state.beta1, state.beta2, state.epsilon,
                state.lr * state.theta_lr_scale);
            params.theta[i] = apply_theta_update(params.theta[i], step);
        }
    }
}

int classify(const NetworkTrace& trace, int class_count, double kernel_tau,
             int warmup) {
    (void)kernel_tau; // output PSC already carries the synaptic filter
    const LayerTrace& out = trace.layers.back();
    if (out.neurons() != class_count)
        throw std::invalid_argument("classify: class count mismatch");
    Vector mass = Vector::Zero(class_count);
    for (Eigen::Index t = warmup; t < out.timesteps(); ++t)
        mass += out.a.col(t);
    int best = 0;
    for (int i = 1; i < class_count; ++i)
        if (mass[i] > mass[best])
            best = i;
    return best;
}

double evaluate_accuracy(const NetworkSpec& spec, const WeightSet& weights,
                         const std::vector<Sample>& samples, int class_count,
                         int warmup) {
    if (samples.empty())
        return 0.0;
    int correct = 0;
    for (const Sample& s : samples) {
        const NetworkTrace trace = forward(spec, weights, s.input);
        if (classify(trace, class_count, spec.lif.tau_s, warmup) == s.label)
            ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

namespace {

void clip_gradients(GradientSet& g, double max_norm) {
    for (Matrix& m : g.W)
        clip_matrix(m, max_norm);
    for (Vector& v : g.Ws)
        if (v.size() > 0)
            clip_vector(v, max_norm);
    for (Matrix& m : g.Wskip)
        clip_matrix(m, max_norm);
    for (Vector& v : g.theta)
        clip_vector(v, max_norm);
}

void accumulate(GradientSet& acc, const GradientSet& g) {
    if (acc.W.empty()) {
        acc = g;
        return;
    }
    for (std::size_t i = 0; i < g.W.size(); ++i)
        acc.W[i] += g.W[i];
    for (std::size_t i = 0; i < g.Ws.size(); ++i)
        if (g.Ws[i].size() > 0)
            acc.Ws[i] += g.Ws[i];
    for (std::size_t i = 0; i < g.Wskip.size(); ++i)
        acc.Wskip[i] += g.Wskip[i];
    for (std::size_t i = 0; i < g.theta.size(); ++i)
        acc.theta[i] += g.theta[i];
}

} // namespace

TrainResult train(const NetworkSpec& spec, const Dataset& data,
                  const TrainConfig& cfg) {
    {
        const auto errors = validate(spec);
        if (!errors.empty())
            throw std::invalid_argument("invalid network spec: " + errors.front());
    }
    if (data.train.empty())
        throw std::invalid_argument("train: empty dataset");
    if (spec.layer_sizes.back() != data.class_count)
        throw std::invalid_argument("train: output layer size != class count");
    if (data.train.front().input.rows() != spec.layer_sizes.front())
        throw std::invalid_argument("train: input channels != input layer size");

    const GateMode gate = cfg.surrogate.kind == SurrogateKind::SmoothGate
                              ? GateMode::smooth_gate(cfg.surrogate.param)
                              : GateMode::spiking();

    TrainResult result;
    result.weights = init_weights(spec, cfg.seed);
    AdamState adam = make_adam_state(spec, result.weights, cfg.lr);

    auto track_theta = [&result](const WeightSet& w, bool first) {
        for (const Vector& th : w.theta) {
            const double lo = th.minCoeff();
            const double hi = th.maxCoeff();
            if (first) {
                result.theta_min = lo;
                result.theta_max = hi;
                first = false;
            } else {
                result.theta_min = std::min(result.theta_min, lo);
                result.theta_max = std::max(result.theta_max, hi);
            }
        }
    };
    track_theta(result.weights, true);

    // Dedicated shuffle stream so data order is independent of init draws.
    std::mt19937_64 shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order(data.train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    const int n_classes = data.class_count;
    const Eigen::Index nt = data.train.front().input.cols();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t_start = std::chrono::steady_clock::now();
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        for (std::size_t b = 0; b < order.size();
             b += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t end =
                std::min(order.size(), b + static_cast<std::size_t>(cfg.batch_size));
            GradientSet batch_grads;
            for (std::size_t k = b; k < end; ++k) {
                const Sample& sample = data.train[order[k]];
                const NetworkTrace trace =
                    forward(spec, result.weights, sample.input, gate);
                const TargetRaster target = make_classification_target(
                    n_classes, sample.label, nt, cfg.warmup, cfg.target_period);
                loss_sum +=
                    vr_loss(target, trace.layers.back().s, spec.lif.tau_s);
                accumulate(batch_grads,
                           backward(spec, result.weights, trace, target,
                                    cfg.surrogate));
            }
            clip_gradients(batch_grads, cfg.grad_clip);
            adam_step(adam, result.weights, batch_grads, cfg.bip);
            track_theta(result.weights, false);
        }

        EpochMetrics em;
        em.epoch = epoch;
        em.train_loss = loss_sum / static_cast<double>(data.train.size());
        em.train_acc = evaluate_accuracy(spec, result.weights, data.train,
                                         n_classes, cfg.warmup);
        em.test_acc = evaluate_accuracy(spec, result.weights, data.test,
                                        n_classes, cfg.warmup);
        em.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t_start)
                         .count();
        result.metrics.push_back(em);
    }
    return result;
}

std::string metrics_csv(const std::vector<EpochMetrics>& metrics) {
    std::string out = "epoch,train_loss,train_acc,test_acc,wall_ms\n";
    char buf[160];
    for (const EpochMetrics& m : metrics) {
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.6f,%.6f,%ld\n", m.epoch,
                      m.train_loss, m.train_acc, m.test_acc, m.wall_ms);
        out += buf;
    }
    return out;
}

} // namespace scsr
