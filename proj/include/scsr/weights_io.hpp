// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "scsr/network.hpp"

namespace scsr {

// Self-contained model file: architecture, LIF constants, the evaluation
// window parameters, and every trainable tensor.
//
// Layout (all integers little-endian):
//   magic "SCSW", version u32, layer_count u32, layer sizes u32 each,
//   self-recurrent flags u8 per hidden layer, skip_count u32,
//   (source u32, target u32) per skip edge, input_mode u8, reset_mode u8,
//   tau_m f64, tau_s f64, v_th f64, warmup u32, target_period u32,
//   then per non-input layer: W row-major f64, Ws f64 (iff self-recurrent),
//   theta f64; then each Wskip row-major f64.
struct SavedModel {
    NetworkSpec spec;
    WeightSet weights;
    int warmup = 5;
    int target_period = 5;
};

void save_model(const std::filesystem::path& path, const SavedModel& model);
SavedModel load_model(const std::filesystem::path& path);

} // namespace scsr
