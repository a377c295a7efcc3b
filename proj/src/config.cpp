// SPDX-License-Identifier: Apache-2.0
#include "scsr/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace scsr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream iss(s);
    std::vector<std::string> out;
    std::string tok;
    while (iss >> tok)
        out.push_back(tok);
    return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& origin, int line,
                 const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "': expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& v, const std::string& origin, int line,
             const std::string& key) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        fail(origin, line, "key '" + key + "': expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& origin, int line,
             const std::string& key) {
    if (v == "on" || v == "true" || v == "1")
        return true;
    if (v == "off" || v == "false" || v == "0")
        return false;
    fail(origin, line, "key '" + key + "': expected on/off, got '" + v + "'");
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.network.lif.tau_s = 8.0;
    cfg.network.lif.v_th = 1.0;
    cfg.network.tau_m = 16.0;

    bool saw_network = false;
    bool saw_layer_sizes = false;
    bool have_data_seed = false;
    std::string section;
    std::istringstream iss(text);
    std::string raw;
    int line_no = 0;
    const std::set<std::string> sections = {"network", "lif", "train", "data"};

    while (std::getline(iss, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(origin, line_no, "malformed section header '" + line + "'");
            section = line.substr(1, line.size() - 2);
            if (!sections.count(section))
                fail(origin, line_no, "unknown section [" + section + "]");
            if (section == "network")
                saw_network = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            fail(origin, line_no, "key '" + key + "' outside any section");

        if (section == "network") {
            if (key == "layer_sizes") {
                cfg.network.layer_sizes.clear();
                for (const auto& tok : split_ws(value))
                    cfg.network.layer_sizes.push_back(
                        static_cast<int>(to_long(tok, origin, line_no, key)));
                saw_layer_sizes = true;
            } else if (key == "self_recurrent") {
                cfg.network.self_recurrent.clear();
                for (const auto& tok : split_ws(value))
                    cfg.network.self_recurrent.push_back(
                        to_bool(tok, origin, line_no, key));
            } else if (key == "skip_edges") {
                cfg.network.skip_edges.clear();
                for (const auto& tok : split_ws(value)) {
                    const auto colon = tok.find(':');
                    if (colon == std::string::npos)
                        fail(origin, line_no,
                             "skip_edges entries must look like src:tgt");
                    SkipEdge e;
                    e.source = static_cast<int>(
                        to_long(tok.substr(0, colon), origin, line_no, key));
                    e.target = static_cast<int>(
                        to_long(tok.substr(colon + 1), origin, line_no, key));
                    cfg.network.skip_edges.push_back(e);
                }
            } else if (key == "input_mode") {
                if (value == "spike")
                    cfg.network.input_mode = InputMode::Spike;
                else if (value == "analog")
                    cfg.network.input_mode = InputMode::AnalogCurrent;
                else
                    fail(origin, line_no, "input_mode must be spike or analog");
            } else {
                fail(origin, line_no, "unknown key '" + key + "' in [network]");
            }
        } else if (section == "lif") {
            if (key == "tau_m")
                cfg.network.tau_m = to_double(value, origin, line_no, key);
            else if (key == "tau_s")
                cfg.network.lif.tau_s = to_double(value, origin, line_no, key);
            else if (key == "v_th")
                cfg.network.lif.v_th = to_double(value, origin, line_no, key);
            else if (key == "reset_mode") {
                if (value == "to-zero")
                    cfg.network.lif.reset_mode = ResetMode::ToZero;
                else if (value == "subtract-threshold")
                    cfg.network.lif.reset_mode = ResetMode::SubtractThreshold;
                else
                    fail(origin, line_no,
                         "reset_mode must be to-zero or subtract-threshold");
            } else {
                fail(origin, line_no, "unknown key '" + key + "' in [lif]");
            }
        } else if (section == "train") {
            if (key == "epochs")
                cfg.train.epochs = static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "batch_size")
                cfg.train.batch_size =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "lr")
                cfg.train.lr = to_double(value, origin, line_no, key);
            else if (key == "bip")
                cfg.train.bip = to_bool(value, origin, line_no, key);
            else if (key == "surrogate") {
                std::string kind = value;
                double param = -1.0;
                const auto colon = value.find(':');
                if (colon != std::string::npos) {
                    kind = value.substr(0, colon);
                    param = to_double(value.substr(colon + 1), origin, line_no, key);
                }
                if (kind == "rectangular") {
                    cfg.train.surrogate.kind = SurrogateKind::Rectangular;
                    cfg.train.surrogate.param = param > 0 ? param : 1.0;
                } else if (kind == "fast-sigmoid") {
                    cfg.train.surrogate.kind = SurrogateKind::FastSigmoid;
                    cfg.train.surrogate.param = param > 0 ? param : 10.0;
                } else if (kind == "smooth-gate") {
                    cfg.train.surrogate.kind = SurrogateKind::SmoothGate;
                    cfg.train.surrogate.param = param > 0 ? param : 10.0;
                } else {
                    fail(origin, line_no,
                         "surrogate must be rectangular, fast-sigmoid or "
                         "smooth-gate (optionally :param)");
                }
            } else if (key == "warmup")
                cfg.train.warmup = static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "seed")
                cfg.train.seed =
                    static_cast<std::uint64_t>(to_long(value, origin, line_no, key));
            else if (key == "target_period")
                cfg.train.target_period =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else
                fail(origin, line_no, "unknown key '" + key + "' in [train]");
        } else if (section == "data") {
            if (key == "source") {
                if (value == "synthetic")
                    cfg.synthetic = true;
                else if (value == "manifest")
                    cfg.synthetic = false;
                else
                    fail(origin, line_no, "source must be synthetic or manifest");
            } else if (key == "classes")
                cfg.synth.class_count =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "channels")
                cfg.synth.channels =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "timesteps")
                cfg.synth.timesteps =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "spikes_per_template")
                cfg.synth.spikes_per_template =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "jitter_std")
                cfg.synth.jitter_std = to_double(value, origin, line_no, key);
            else if (key == "train_per_class")
                cfg.synth.samples_per_class_train =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "test_per_class")
                cfg.synth.samples_per_class_test =
                    static_cast<int>(to_long(value, origin, line_no, key));
            else if (key == "seed") {
                cfg.synth.seed =
                    static_cast<std::uint64_t>(to_long(value, origin, line_no, key));
                have_data_seed = true;
            } else if (key == "train_manifest")
                cfg.manifest_path = value;
            else if (key == "test_manifest")
                cfg.test_manifest_path = value;
            else if (key == "bin_factor")
                cfg.bin_factor = static_cast<int>(to_long(value, origin, line_no, key));
            else
                fail(origin, line_no, "unknown key '" + key + "' in [data]");
        }
    }

    if (!saw_network)
        throw ConfigError(origin + ": missing required section [network]");
    if (!saw_layer_sizes)
        throw ConfigError(origin + ": [network] is missing layer_sizes");
    if (!have_data_seed)
        cfg.synth.seed = cfg.train.seed;
    if (cfg.network.self_recurrent.empty() && cfg.network.hidden_count() > 0)
        cfg.network.self_recurrent.assign(
            static_cast<std::size_t>(cfg.network.hidden_count()), false);

    const double theta0 = 1.0 - 1.0 / cfg.network.tau_m;
    cfg.network.lif.theta_m = Vector::Constant(1, theta0);
    const auto errors = validate(cfg.network);
    if (!errors.empty())
        throw ConfigError(origin + ": invalid network: " + errors.front());
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string render_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[network]\nlayer_sizes =";
    for (int n : cfg.network.layer_sizes)
        os << " " << n;
    os << "\nself_recurrent =";
    for (bool b : cfg.network.self_recurrent)
        os << " " << (b ? 1 : 0);
    os << "\nskip_edges =";
    for (const SkipEdge& e : cfg.network.skip_edges)
        os << " " << e.source << ":" << e.target;
    os << "\ninput_mode = "
       << (cfg.network.input_mode == InputMode::Spike ? "spike" : "analog");
    os << "\n\n[lif]\ntau_m = " << cfg.network.tau_m
       << "\ntau_s = " << cfg.network.lif.tau_s << "\nv_th = " << cfg.network.lif.v_th
       << "\nreset_mode = "
       << (cfg.network.lif.reset_mode == ResetMode::ToZero ? "to-zero"
                                                           : "subtract-threshold");
    os << "\n\n[train]\nepochs = " << cfg.train.epochs
       << "\nbatch_size = " << cfg.train.batch_size << "\nlr = " << cfg.train.lr
       << "\nbip = " << (cfg.train.bip ? "on" : "off") << "\nsurrogate = ";
    switch (cfg.train.surrogate.kind) {
    case SurrogateKind::Rectangular:
        os << "rectangular";
        break;
    case SurrogateKind::FastSigmoid:
        os << "fast-sigmoid";
        break;
    case SurrogateKind::SmoothGate:
        os << "smooth-gate";
        break;
    }
    os << ":" << cfg.train.surrogate.param << "\nwarmup = " << cfg.train.warmup
       << "\nseed = " << cfg.train.seed
       << "\ntarget_period = " << cfg.train.target_period;
    os << "\n\n[data]\nsource = " << (cfg.synthetic ? "synthetic" : "manifest");
    if (cfg.synthetic) {
        os << "\nclasses = " << cfg.synth.class_count
           << "\nchannels = " << cfg.synth.channels
           << "\ntimesteps = " << cfg.synth.timesteps
           << "\nspikes_per_template = " << cfg.synth.spikes_per_template
           << "\njitter_std = " << cfg.synth.jitter_std
           << "\ntrain_per_class = " << cfg.synth.samples_per_class_train
           << "\ntest_per_class = " << cfg.synth.samples_per_class_test
           << "\nseed = " << cfg.synth.seed;
    } else {
        os << "\ntrain_manifest = " << cfg.manifest_path
           << "\ntest_manifest = " << cfg.test_manifest_path;
    }
    os << "\nbin_factor = " << cfg.bin_factor << "\n";
    return os.str();
}

Dataset build_dataset(const RunConfig& cfg, const std::filesystem::path& base_dir) {
    Dataset ds;
    if (cfg.synthetic) {
        ds = generate(cfg.synth);
    } else {
        if (cfg.manifest_path.empty())
            throw ConfigError("[data] source = manifest requires train_manifest");
        ds.train = load_manifest(base_dir / cfg.manifest_path);
        if (!cfg.test_manifest_path.empty())
            ds.test = load_manifest(base_dir / cfg.test_manifest_path);
        int max_label = -1;
        for (const auto& pool : {ds.train, ds.test})
            for (const Sample& s : pool)
                max_label = std::max(max_label, s.label);
        ds.class_count = max_label + 1;
        if (!ds.train.empty()) {
            ds.channels = static_cast<int>(ds.train.front().input.rows());
            ds.timesteps = static_cast<int>(ds.train.front().input.cols());
        }
    }
    if (cfg.bin_factor > 1) {
        auto bin_all = [&cfg](std::vector<Sample>& pool) {
            for (Sample& s : pool) {
                if (s.analog)
                    continue;
                SpikeRaster r;
                r.data = s.input;
                s.input = time_bin_downsample(r, cfg.bin_factor).data;
            }
        };
        bin_all(ds.train);
        bin_all(ds.test);
        ds.timesteps = ds.train.empty()
                           ? ds.timesteps
                           : static_cast<int>(ds.train.front().input.cols());
    }
    return ds;
}

} // namespace scsr
