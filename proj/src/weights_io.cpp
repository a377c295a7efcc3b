// SPDX-License-Identifier: Apache-2.0
#include "scsr/weights_io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace scsr {

namespace {

constexpr char kMagic[4] = {'S', 'C', 'S', 'W'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u8(std::ostream& os, unsigned char v) {
    os.write(reinterpret_cast<const char*>(&v), 1);
}

void put_f64(std::ostream& os, double v) {
    static_assert(sizeof(double) == 8);
    os.write(reinterpret_cast<const char*>(&v), 8);
}

void put_matrix(std::ostream& os, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            put_f64(os, m(i, j));
}

void put_vector(std::ostream& os, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        put_f64(os, v[i]);
}

struct Reader {
    std::ifstream is;
    std::filesystem::path path;

    void read_bytes(void* dst, std::size_t n) {
        if (!is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n)))
            throw std::runtime_error(path.string() + ": truncated weights file");
    }
    std::uint32_t u32() {
        unsigned char b[4];
        read_bytes(b, 4);
        return static_cast<std::uint32_t>(b[0]) |
               (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) |
               (static_cast<std::uint32_t>(b[3]) << 24);
    }
    unsigned char u8() {
        unsigned char v;
        read_bytes(&v, 1);
        return v;
    }
    double f64() {
        double v;
        read_bytes(&v, 8);
        return v;
    }
    Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                m(i, j) = f64();
        return m;
    }
    Vector vector(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] = f64();
        return v;
    }
};

} // namespace

void save_model(const std::filesystem::path& path, const SavedModel& model) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    const NetworkSpec& spec = model.spec;
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(spec.layer_count()));
    for (int n : spec.layer_sizes)
        put_u32(os, static_cast<std::uint32_t>(n));
    for (int l = 1; l <= spec.hidden_count(); ++l)
        put_u8(os, spec.is_self_recurrent(l) ? 1 : 0);
    put_u32(os, static_cast<std::uint32_t>(spec.skip_edges.size()));
    for (const SkipEdge& e : spec.skip_edges) {
        put_u32(os, static_cast<std::uint32_t>(e.source));
        put_u32(os, static_cast<std::uint32_t>(e.target));
    }
    put_u8(os, spec.input_mode == InputMode::Spike ? 0 : 1);
    put_u8(os, spec.lif.reset_mode == ResetMode::ToZero ? 0 : 1);
    put_f64(os, spec.tau_m);
    put_f64(os, spec.lif.tau_s);
    put_f64(os, spec.lif.v_th);
    put_u32(os, static_cast<std::uint32_t>(model.warmup));
    put_u32(os, static_cast<std::uint32_t>(model.target_period));

    for (int l = 1; l < spec.layer_count(); ++l) {
        const std::size_t li = static_cast<std::size_t>(l - 1);
        put_matrix(os, model.weights.W[li]);
        if (spec.is_self_recurrent(l))
            put_vector(os, model.weights.Ws[li]);
        put_vector(os, model.weights.theta[li]);
    }
    for (const Matrix& m : model.weights.Wskip)
        put_matrix(os, m);
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

SavedModel load_model(const std::filesystem::path& path) {
    Reader r{std::ifstream(path, std::ios::binary), path};
    if (!r.is)
        throw std::runtime_error("cannot open " + path.string());
    char magic[4];
    r.read_bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path.string() + ": bad magic");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error(path.string() + ": unsupported version " +
                                 std::to_string(version));

    SavedModel model;
    NetworkSpec& spec = model.spec;
    const std::uint32_t layers = r.u32();
    for (std::uint32_t i = 0; i < layers; ++i)
        spec.layer_sizes.push_back(static_cast<int>(r.u32()));
    for (int l = 1; l <= spec.hidden_count(); ++l)
        spec.self_recurrent.push_back(r.u8() != 0);
    const std::uint32_t skips = r.u32();
    for (std::uint32_t k = 0; k < skips; ++k) {
        SkipEdge e;
        e.source = static_cast<int>(r.u32());
        e.target = static_cast<int>(r.u32());
        spec.skip_edges.push_back(e);
    }
    spec.input_mode = r.u8() == 0 ? InputMode::Spike : InputMode::AnalogCurrent;
    spec.lif.reset_mode = r.u8() == 0 ? ResetMode::ToZero : ResetMode::SubtractThreshold;
    spec.tau_m = r.f64();
    spec.lif.tau_s = r.f64();
    spec.lif.v_th = r.f64();
    spec.lif.theta_m = Vector::Constant(1, 1.0 - 1.0 / spec.tau_m);
    model.warmup = static_cast<int>(r.u32());
    model.target_period = static_cast<int>(r.u32());

    for (int l = 1; l < spec.layer_count(); ++l) {
        const Eigen::Index rows = spec.layer_sizes[static_cast<std::size_t>(l)];
        const Eigen::Index cols = spec.layer_sizes[static_cast<std::size_t>(l - 1)];
        model.weights.W.push_back(r.matrix(rows, cols));
        model.weights.Ws.push_back(spec.is_self_recurrent(l) ? r.vector(rows)
                                                             : Vector());
        model.weights.theta.push_back(r.vector(rows));
    }
    for (const SkipEdge& e : spec.skip_edges)
        model.weights.Wskip.push_back(
            r.matrix(spec.layer_sizes[static_cast<std::size_t>(e.target)],
                     spec.layer_sizes[static_cast<std::size_t>(e.source)]));
    return model;
}

} // namespace scsr
