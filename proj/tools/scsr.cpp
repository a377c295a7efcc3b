// SPDX-License-Identifier: Apache-2.0
//
// Command-line entry points: train, eval, gradcheck, equivcheck, gen-data.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "scsr/analysis.hpp"
#include "scsr/config.hpp"
#include "scsr/gradcheck.hpp"
#include "scsr/optim.hpp"
#include "scsr/weights_io.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_train(const std::string& config_path, const std::string& out_dir,
              long seed_override) {
    scsr::RunConfig cfg = scsr::load_config(config_path);
    if (seed_override >= 0) {
        cfg.train.seed = static_cast<std::uint64_t>(seed_override);
        cfg.synth.seed = cfg.train.seed;
    }
    fs::create_directories(out_dir);

    const scsr::Dataset data =
        scsr::build_dataset(cfg, fs::path(config_path).parent_path());
    const scsr::TrainResult result = scsr::train(cfg.network, data, cfg.train);

    std::ofstream metrics(fs::path(out_dir) / "metrics.csv");
    metrics << scsr::metrics_csv(result.metrics);
    metrics.close();

    scsr::SavedModel model{cfg.network, result.weights, cfg.train.warmup,
                           cfg.train.target_period};
    scsr::save_model(fs::path(out_dir) / "weights.scsw", model);

    std::ofstream resolved(fs::path(out_dir) / "config.resolved.ini");
    resolved << scsr::render_config(cfg);
    resolved.close();

    if (!result.metrics.empty())
        std::printf("final epoch %d: train_loss %.6g train_acc %.4f test_acc %.4f\n",
                    result.metrics.back().epoch, result.metrics.back().train_loss,
                    result.metrics.back().train_acc, result.metrics.back().test_acc);
    return 0;
}

int cmd_eval(const std::string& weights_path, const std::string& data_path) {
    if (!fs::exists(weights_path)) {
        std::cerr << "error: weights file not found: " << weights_path << "\n";
        return 2;
    }
    const scsr::SavedModel model = scsr::load_model(weights_path);
    const std::vector<scsr::Sample> samples = scsr::load_manifest(data_path);
    if (samples.empty()) {
        std::cerr << "error: no samples in " << data_path << "\n";
        return 2;
    }
    const int classes = model.spec.layer_sizes.back();
    std::vector<std::vector<long>> confusion(
        static_cast<std::size_t>(classes),
        std::vector<long>(static_cast<std::size_t>(classes), 0));
    long correct = 0;
    for (const scsr::Sample& s : samples) {
        const scsr::NetworkTrace trace =
            scsr::forward(model.spec, model.weights, s.input);
        const int pred = scsr::classify(trace, classes, model.spec.lif.tau_s,
                                        model.warmup);
        if (s.label >= 0 && s.label < classes)
            ++confusion[static_cast<std::size_t>(s.label)]
                       [static_cast<std::size_t>(pred)];
        if (pred == s.label)
            ++correct;
    }
    std::printf("accuracy,%.6f\n",
                static_cast<double>(correct) / static_cast<double>(samples.size()));
    for (int t = 0; t < classes; ++t)
        for (int p = 0; p < classes; ++p)
            std::printf("confusion,%d,%d,%ld\n", t, p,
                        confusion[static_cast<std::size_t>(t)]
                                 [static_cast<std::size_t>(p)]);
    return 0;
}

int cmd_gradcheck(const std::string& config_path, bool corrupt) {
    scsr::RunConfig cfg = scsr::load_config(config_path);
    const double steepness = cfg.train.surrogate.kind == scsr::SurrogateKind::SmoothGate
                                 ? cfg.train.surrogate.param
                                 : 10.0;

    const int channels = cfg.network.layer_sizes.front();
    const int timesteps = std::min(cfg.synth.timesteps, 30);
    std::mt19937_64 rng(cfg.train.seed);
    std::bernoulli_distribution spike(0.2);
    scsr::Matrix input = scsr::Matrix::Zero(channels, timesteps);
    for (int c = 0; c < channels; ++c)
        for (int t = 0; t < timesteps; ++t)
            if (spike(rng))
                input(c, t) = 1.0;

    const scsr::WeightSet weights = scsr::init_weights(cfg.network, cfg.train.seed);
    const scsr::TargetRaster target = scsr::make_classification_target(
        cfg.network.layer_sizes.back(), 0, timesteps, cfg.train.warmup,
        cfg.train.target_period);

    scsr::GradCheckReport report =
        scsr::run_gradcheck(cfg.network, weights, input, target, steepness);
    if (corrupt)
        report.w += 1.0; // negative-control hook
    std::printf("W      max rel err %.3e\n", report.w);
    std::printf("Ws     max rel err %.3e\n", report.ws);
    std::printf("Wskip  max rel err %.3e\n", report.wskip);
    std::printf("theta  max rel err %.3e\n", report.theta);
    const bool ok = report.worst() < 1e-4;
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

int cmd_equivcheck(int seeds, const std::string& out_path) {
    if (seeds <= 0) {
        std::cerr << "error: --seeds must be positive\n";
        return 2;
    }
    std::ofstream report;
    if (!out_path.empty()) {
        report.open(out_path);
        if (!report) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return 2;
        }
        report << "seed,size,N_t,deviation\n";
    }
    double worst = 0.0;
    for (int s = 1; s <= seeds; ++s) {
        const scsr::EquivalenceRow row =
            scsr::run_equivalence_trial(static_cast<std::uint64_t>(s));
        worst = std::max(worst, row.deviation);
        if (report.is_open())
            report << row.seed << "," << row.size << "," << row.timesteps << ","
                   << row.deviation << "\n";
    }
    std::printf("max deviation over %d seeds: %.3e\n", seeds, worst);
    const bool ok = worst < 1e-9;
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

int cmd_gendata(const std::string& spec_path, const std::string& out_dir) {
    const scsr::RunConfig cfg = scsr::load_config(spec_path);
    if (!cfg.synthetic) {
        std::cerr << "error: gen-data needs [data] source = synthetic\n";
        return 2;
    }
    const scsr::Dataset data = scsr::generate(cfg.synth);
    fs::create_directories(out_dir);

    auto dump = [&out_dir](const std::vector<scsr::Sample>& pool,
                           const std::string& prefix) {
        std::vector<std::pair<std::string, int>> entries;
        char name[64];
        for (std::size_t i = 0; i < pool.size(); ++i) {
            std::snprintf(name, sizeof(name), "%s_%04zu.scsr", prefix.c_str(), i);
            scsr::write_raster(fs::path(out_dir) / name, pool[i]);
            entries.emplace_back(name, pool[i].label);
        }
        scsr::write_manifest(fs::path(out_dir) / (prefix + "_manifest.csv"), entries);
    };
    dump(data.train, "train");
    dump(data.test, "test");
    std::printf("wrote %zu train and %zu test samples to %s\n", data.train.size(),
                data.test.size(), out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skip-connected self-recurrent spiking network trainer"};
    app.require_subcommand(1);

    std::string config_path, out_dir, weights_path, data_path, report_path;
    long seed_override = -1;
    int seeds = 100;
    bool corrupt = false;

    auto* train = app.add_subcommand("train", "Train a network from a config file");
    train->add_option("--config", config_path, "Run configuration file")->required();
    train->add_option("--out", out_dir, "Output directory")->required();
    train->add_option("--seed", seed_override, "Override the config seed");

    auto* eval = app.add_subcommand("eval", "Evaluate saved weights on a manifest");
    eval->add_option("--weights", weights_path, "SCSW weights file")->required();
    eval->add_option("--data", data_path, "Manifest CSV of samples")->required();

    auto* gradcheck = app.add_subcommand(
        "gradcheck", "Compare analytic gradients against finite differences");
    gradcheck->add_option("--config", config_path, "Run configuration file")
        ->required();
    gradcheck->add_flag("--corrupt", corrupt,
                        "Deliberately corrupt one gradient (negative control)");

    auto* equivcheck = app.add_subcommand(
        "equivcheck", "Verify the two-layer/recurrent-layer linear-gate equivalence");
    equivcheck->add_option("--seeds", seeds, "Number of random trials");
    equivcheck->add_option("--out", report_path, "CSV report path");

    auto* gendata = app.add_subcommand("gen-data", "Write a synthetic dataset");
    gendata->add_option("--spec", config_path, "Config file with a [data] section")
        ->required();
    gendata->add_option("--out", out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed())
            return cmd_train(config_path, out_dir, seed_override);
        if (eval->parsed())
            return cmd_eval(weights_path, data_path);
        if (gradcheck->parsed())
            return cmd_gradcheck(config_path, corrupt);
        if (equivcheck->parsed())
            return cmd_equivcheck(seeds, report_path);
        if (gendata->parsed())
            return cmd_gendata(config_path, out_dir);
    } catch (const scsr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
