// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL
// line; the process exits nonzero if any of them fail.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "scsr/analysis.hpp"
#include "scsr/backprop.hpp"
#include "scsr/data.hpp"
#include "scsr/gradcheck.hpp"
#include "scsr/optim.hpp"

using namespace scsr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail = "") {
    std::printf("%-28s %s%s%s\n", name, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : "  ", detail.c_str());
    if (!ok)
        ++g_failures;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

Matrix random_spikes(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                     double p) {
    std::bernoulli_distribution coin(p);
    Matrix m = Matrix::Zero(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = coin(rng) ? 1.0 : 0.0;
    return m;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(),
                       sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// --- individual criteria -------------------------------------------------

void check_gradient_oracle() {
    NetworkSpec spec;
    spec.layer_sizes = {12, 16, 16, 16, 4};
    spec.self_recurrent = {true, true, true};
    spec.skip_edges.push_back({0, 2});
    spec.skip_edges.push_back({1, 3});
    spec.skip_edges.push_back({2, 4});
    const WeightSet weights = init_weights(spec, 101);
    std::mt19937_64 rng(102);
    const Matrix input = random_spikes(rng, 12, 25, 0.25);
    const TargetRaster target = make_classification_target(4, 2, 25, 5, 5);

    const GradCheckReport r = run_gradcheck(spec, weights, input, target, 10.0);
    const double worst = r.worst();
    report("gradient-oracle", worst < 1e-4, "max rel err " + fmt("%.3e", worst));
}

void check_equivalence() {
    double worst = 0.0;
    for (std::uint64_t s = 1; s <= 100; ++s)
        worst = std::max(worst, run_equivalence_trial(s).deviation);
    report("linear-gate-equivalence", worst < 1e-9,
           "max deviation " + fmt("%.3e", worst));
}

void check_case_degeneracy() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    bool ok = true;
    for (int rep = 0; rep < 20 && ok; ++rep) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rep % 6);
        const Eigen::Index nt = 10 + static_cast<Eigen::Index>(rep);
        LayerTrace trace(n, nt);
        for (Eigen::Index c = 0; c < nt; ++c)
            for (Eigen::Index r = 0; r < n; ++r) {
                trace.u(r, c) = unit(rng) + 0.5;
                trace.s(r, c) = trace.u(r, c) >= 1.0 ? 1.0 : 0.0;
            }
        Matrix w_next(n, n), d_next(n, nt), d_tgt(n, nt);
        Vector ws(n);
        for (Eigen::Index c = 0; c < n; ++c) {
            ws[c] = unit(rng);
            for (Eigen::Index r = 0; r < n; ++r)
                w_next(r, c) = unit(rng);
        }
        for (Eigen::Index c = 0; c < nt; ++c)
            for (Eigen::Index r = 0; r < n; ++r) {
                d_next(r, c) = unit(rng);
                d_tgt(r, c) = unit(rng);
            }
        LifParams lif;
        lif.theta_m = Vector::Constant(n, 0.9375);
        const Vector theta = Vector::Constant(n, 0.9375);
        const SurrogateConfig cfg{};

        const Matrix c3 = delta_skip(w_next, d_next, Matrix::Zero(n, n), d_tgt,
                                     ws, trace, theta, lif, false, cfg);
        const Matrix c2 = delta_self_recurrent(w_next, d_next, ws, trace, theta,
                                               lif, false, cfg);
        const Matrix c2z = delta_self_recurrent(w_next, d_next, Vector::Zero(n),
                                                trace, theta, lif, false, cfg);
        const Matrix c1 =
            delta_hidden(w_next, d_next, trace, theta, lif, false, cfg);
        ok = bitwise_equal(c3, c2) && bitwise_equal(c2z, c1);
    }
    report("case-degeneracy", ok);
}

void check_loss_properties() {
    std::mt19937_64 rng(3);
    bool nonneg = true, self_zero = true;
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix d = random_spikes(rng, 3, 40, 0.2);
        const Matrix s = random_spikes(rng, 3, 40, 0.2);
        nonneg = nonneg && vr_loss(TargetRaster{d, 0}, s, 8.0) >= 0.0;
        self_zero = self_zero && vr_loss(TargetRaster{d, 0}, d, 8.0) == 0.0;
    }
    // Single desired spike vs. silence over three steps with the tau = 8
    // exponential kernel: 0.5 (1 + 0.875^2 + 0.765625^2) = 1.1759033203125.
    Matrix d1 = Matrix::Zero(1, 3);
    d1(0, 0) = 1.0;
    const double hand = vr_loss(TargetRaster{d1, 0}, Matrix::Zero(1, 3), 8.0);
    const bool hand_ok = std::abs(hand - 1.1759033203125) < 1e-9;
    report("loss-properties", nonneg && self_zero && hand_ok,
           "single-spike value " + fmt("%.13g", hand));
}

SynthSpec benchmark_data_spec() {
    return SynthSpec{}; // 4 classes, 40 channels, 100 steps, 25 + 25 per class
}

TrainConfig benchmark_train_config() {
    TrainConfig cfg;
    cfg.epochs = 50;
    cfg.batch_size = 10;
    cfg.lr = 0.005;
    cfg.bip = true;
    cfg.seed = 1;
    return cfg;
}

void check_learning_and_bip() {
    const Dataset data = generate(benchmark_data_spec());
    const TrainConfig cfg = benchmark_train_config();

    NetworkSpec scsr_net;
    scsr_net.layer_sizes = {40, 32, 32, 32, 4};
    scsr_net.self_recurrent = {true, true, true};
    scsr_net.skip_edges.push_back({1, 3});

    NetworkSpec ff_net;
    ff_net.layer_sizes = scsr_net.layer_sizes;
    ff_net.self_recurrent = {false, false, false};

    const TrainResult rec = train(scsr_net, data, cfg);
    const TrainResult ff = train(ff_net, data, cfg);

    double best_rec = 0.0;
    for (const EpochMetrics& m : rec.metrics)
        best_rec = std::max(best_rec, m.test_acc);
    const double final_rec = rec.metrics.back().test_acc;
    const double final_ff = ff.metrics.back().test_acc;

    report("learning-synthetic", best_rec >= 0.90 && final_rec >= final_ff,
           "best " + fmt("%.3f", best_rec) + " final " + fmt("%.3f", final_rec) +
               " feedforward " + fmt("%.3f", final_ff));

    report("bip-theta-range",
           rec.theta_min >= 0.01 && rec.theta_max <= 0.999,
           "theta in [" + fmt("%.4f", rec.theta_min) + ", " +
               fmt("%.4f", rec.theta_max) + "]");

    // With plasticity off the leaks must not move at all.
    TrainConfig frozen = cfg;
    frozen.epochs = 2;
    frozen.bip = false;
    NetworkSpec small;
    small.layer_sizes = {40, 16, 4};
    small.self_recurrent = {true};
    SynthSpec small_data = benchmark_data_spec();
    small_data.samples_per_class_train = 5;
    small_data.samples_per_class_test = 2;
    const TrainResult off = train(small, generate(small_data), frozen);
    const WeightSet init = init_weights(small, frozen.seed);
    bool theta_frozen = true;
    for (std::size_t i = 0; i < init.theta.size(); ++i)
        theta_frozen = theta_frozen &&
                       std::memcmp(off.weights.theta[i].data(),
                                   init.theta[i].data(),
                                   sizeof(double) * static_cast<std::size_t>(
                                                        init.theta[i].size())) == 0;
    report("bip-off-freezes-theta", theta_frozen);
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

// metrics.csv minus the wall-clock column (timing legitimately varies).
std::string strip_wall_column(const std::string& csv) {
    std::istringstream is(csv);
    std::string out, line;
    while (std::getline(is, line)) {
        const auto comma = line.find_last_of(',');
        out += line.substr(0, comma);
        out += '\n';
    }
    return out;
}

void check_determinism() {
    const fs::path dir = fs::temp_directory_path() / "scsr_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[network]\n"
               "layer_sizes = 12 10 3\n"
               "self_recurrent = on\n"
               "\n[train]\n"
               "epochs = 3\n"
               "batch_size = 5\n"
               "seed = 7\n"
               "\n[data]\n"
               "source = synthetic\n"
               "classes = 3\n"
               "channels = 12\n"
               "timesteps = 40\n"
               "spikes_per_template = 10\n"
               "train_per_class = 5\n"
               "test_per_class = 3\n";
    }
    const std::string cli = SCSR_CLI_PATH;
    bool ran = true;
    for (const char* run : {"a", "b"}) {
        const std::string cmd = cli + " train --config " + (dir / "run.ini").string() +
                                " --out " + (dir / run).string() + " > /dev/null";
        ran = ran && std::system(cmd.c_str()) == 0;
    }
    bool ok = false;
    if (ran) {
        const std::string wa = read_file(dir / "a" / "weights.scsw");
        const std::string wb = read_file(dir / "b" / "weights.scsw");
        const std::string ma = read_file(dir / "a" / "metrics.csv");
        const std::string mb = read_file(dir / "b" / "metrics.csv");
        ok = !wa.empty() && wa == wb && !ma.empty() &&
             strip_wall_column(ma) == strip_wall_column(mb);
    }
    report("train-determinism", ok, ran ? "" : "CLI run failed");
}

void check_format_roundtrip() {
    const fs::path dir = fs::temp_directory_path() / "scsr_acceptance_fmt";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<int> chd(1, 12), ntd(1, 60);
    std::uniform_real_distribution<double> val(-4.0, 4.0);

    bool round_ok = true;
    for (int i = 0; i < 1000 && round_ok; ++i) {
        Sample s;
        const int ch = chd(rng), nt = ntd(rng);
        if (i % 2 == 0) {
            s.input = random_spikes(rng, ch, nt, 0.3);
            s.analog = false;
        } else {
            s.input.resize(ch, nt);
            for (int c = 0; c < ch; ++c)
                for (int t = 0; t < nt; ++t)
                    s.input(c, t) = static_cast<float>(val(rng));
            s.analog = true;
        }
        const fs::path p = dir / "sample.scsr";
        write_raster(p, s);
        const Sample back = read_raster(p);
        round_ok = back.analog == s.analog && bitwise_equal(back.input, s.input);
    }
    report("raster-roundtrip", round_ok);

    bool bin_ok = true;
    std::uniform_int_distribution<int> factor_d(1, 9);
    for (int i = 0; i < 1000 && bin_ok; ++i) {
        SpikeRaster r(chd(rng), ntd(rng));
        r.data = random_spikes(rng, r.neurons(), r.timesteps(), 0.25);
        const int factor = factor_d(rng);
        const SpikeRaster out = time_bin_downsample(r, factor);
        const Eigen::Index expect_nt =
            (r.timesteps() + factor - 1) / factor;
        bin_ok = out.timesteps() == expect_nt;
        for (Eigen::Index c = 0; bin_ok && c < r.neurons(); ++c)
            for (Eigen::Index t = 0; bin_ok && t < expect_nt; ++t) {
                bool any = false;
                for (Eigen::Index k = t * factor;
                     k < std::min<Eigen::Index>((t + 1) * factor, r.timesteps());
                     ++k)
                    any = any || r.data(c, k) != 0.0;
                bin_ok = out.data(c, t) == (any ? 1.0 : 0.0);
            }
    }
    report("or-bin-oracle", bin_ok);
}

} // namespace

int main() {
    check_gradient_oracle();
    check_equivalence();
    check_case_degeneracy();
    check_loss_properties();
    check_learning_and_bip();
    check_determinism();
    check_format_roundtrip();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
