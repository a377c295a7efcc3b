// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "scsr/types.hpp"

namespace scsr {

struct Sample {
    Matrix input; // [channels x timesteps], binary for spike data
    int label = 0;
    bool analog = false;
};

struct Dataset {
    std::vector<Sample> train;
    std::vector<Sample> test;
    int class_count = 0;
    int channels = 0;
    int timesteps = 0;
};

// Synthetic jittered-template generator, the stand-in for the licensed
// speech corpora.
struct SynthSpec {
    int class_count = 4;
    int channels = 40;
    int timesteps = 100;
    int spikes_per_template = 20;
    double jitter_std = 2.0;
    int samples_per_class_train = 25;
    int samples_per_class_test = 25;
    std::uint64_t seed = 1;
};

Dataset generate(const SynthSpec& spec);

// Class templates drawn by generate() for the same spec (test oracle and
// diagnostics).
std::vector<Matrix> class_templates(const SynthSpec& spec);

// OR-bin time downsampling: output[t'] = OR of input over
// [t'*factor, (t'+1)*factor).
SpikeRaster time_bin_downsample(const SpikeRaster& raster, int factor);

// SCSR raster file: magic "SCSR", version u32 LE, channels u32 LE,
// timesteps u32 LE, dtype u8 (0 = binary u8, 1 = analog float32 LE),
// then channel-major row data.
void write_raster(const std::filesystem::path& path, const Sample& sample);
Sample read_raster(const std::filesystem::path& path);

// Manifest: one "relative_path,label" line per sample.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, int>>& entries);
std::vector<Sample> load_manifest(const std::filesystem::path& manifest_path);

} // namespace scsr
