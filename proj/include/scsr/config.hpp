// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "scsr/data.hpp"
#include "scsr/network.hpp"
#include "scsr/optim.hpp"

namespace scsr {

// Parsed run configuration: flat INI-style sections [network], [lif],
// [train], [data]; unknown keys and sections are rejected.
struct RunConfig {
    NetworkSpec network;
    TrainConfig train;

    bool synthetic = true;
    SynthSpec synth;
    std::string manifest_path;      // when synthetic == false
    std::string test_manifest_path; // optional
    int bin_factor = 1;
};

// Throws ConfigError with line/key diagnostics on any problem.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::filesystem::path& path);

// Canonical text round-trip of a resolved configuration.
std::string render_config(const RunConfig& cfg);

// Builds the dataset named by [data] (generating or loading manifests,
// then applying the OR-bin factor to spike data).
Dataset build_dataset(const RunConfig& cfg,
                      const std::filesystem::path& base_dir = ".");

} // namespace scsr
