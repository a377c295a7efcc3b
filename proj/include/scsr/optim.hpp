// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scsr/backprop.hpp"
#include "scsr/data.hpp"
#include "scsr/network.hpp"

namespace scsr {

// One Adam accumulator pair per trainable tensor, laid out like WeightSet.
struct AdamState {
    GradientSet m;
    GradientSet v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double lr = 0.005;
    double theta_lr_scale = 0.1; // leak constants train at lr * this
};

struct TrainConfig {
    int epochs = 50;
    int batch_size = 10;
    double lr = 0.005;
    bool bip = true;
    SurrogateConfig surrogate;
    std::uint64_t seed = 1;
    int warmup = 5;
    int target_period = 5;
    double grad_clip = 5.0; // L2 norm per tensor per batch
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    long wall_ms = 0;
};

AdamState make_adam_state(const NetworkSpec& spec, const WeightSet& weights,
                          double lr);

// Standard bias-corrected Adam update, in place. Leak vectors use the
// scaled learning rate and stay clamped to (0,1) via apply_theta_update.
// BIP off skips the leak tensors entirely.
void adam_step(AdamState& state, WeightSet& params, const GradientSet& grads,
               bool update_theta);

// Argmax over output neurons of the filtered PSC mass on the scored
// window; ties go to the lowest index.
int classify(const NetworkTrace& trace, int class_count, double kernel_tau,
             int warmup);

struct TrainResult {
    WeightSet weights;
    std::vector<EpochMetrics> metrics;
    // Extremes of every leak constant observed after each optimizer step.
    double theta_min = 0.0;
    double theta_max = 0.0;
};

TrainResult train(const NetworkSpec& spec, const Dataset& data,
                  const TrainConfig& cfg);

double evaluate_accuracy(const NetworkSpec& spec, const WeightSet& weights,
                         const std::vector<Sample>& samples, int class_count,
                         int warmup);

std::string metrics_csv(const std::vector<EpochMetrics>& metrics);

} // namespace scsr
