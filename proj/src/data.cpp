// SPDX-License-Identifier: Apache-2.0
#include "scsr/data.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace scsr {

namespace {

Matrix draw_template(std::mt19937_64& rng, const SynthSpec& spec) {
    Matrix tpl = Matrix::Zero(spec.channels, spec.timesteps);
    std::uniform_int_distribution<int> ch(0, spec.channels - 1);
    std::uniform_int_distribution<int> tm(0, spec.timesteps - 1);
    for (int k = 0; k < spec.spikes_per_template; ++k)
        tpl(ch(rng), tm(rng)) = 1.0; // collisions merge
    return tpl;
}

Sample jittered_sample(std::mt19937_64& rng, const Matrix& tpl, int label,
                       double jitter_std) {
    Sample s;
    s.label = label;
    s.input = Matrix::Zero(tpl.rows(), tpl.cols());
    std::normal_distribution<double> jitter(0.0, jitter_std);
    const Eigen::Index last = tpl.cols() - 1;
    for (Eigen::Index c = 0; c < tpl.rows(); ++c)
        for (Eigen::Index t = 0; t < tpl.cols(); ++t)
            if (tpl(c, t) != 0.0) {
                Eigen::Index shifted = t;
                if (jitter_std > 0.0)
                    shifted = t + static_cast<Eigen::Index>(
                                      std::llround(jitter(rng)));
                shifted = std::min(std::max<Eigen::Index>(shifted, 0), last);
                s.input(c, shifted) = 1.0;
            }
    return s;
}

void check_spec(const SynthSpec& spec) {
    if (spec.class_count < 1 || spec.channels < 1 || spec.timesteps < 1)
        throw std::invalid_argument("synthetic spec: empty dimensions");
    if (spec.spikes_per_template < 0 ||
        spec.spikes_per_template > spec.channels * spec.timesteps)
        throw std::invalid_argument("synthetic spec: spikes do not fit");
    if (spec.jitter_std < 0.0)
        throw std::invalid_argument("synthetic spec: negative jitter");
}

} // namespace

std::vector<Matrix> class_templates(const SynthSpec& spec) {
    check_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::vector<Matrix> tpls;
    tpls.reserve(static_cast<std::size_t>(spec.class_count));
    for (int c = 0; c < spec.class_count; ++c)
        tpls.push_back(draw_template(rng, spec));
    return tpls;
}

Dataset generate(const SynthSpec& spec) {
    check_spec(spec);
    std::mt19937_64 rng(spec.seed);
    std::vector<Matrix> tpls;
    for (int c = 0; c < spec.class_count; ++c)
        tpls.push_back(draw_template(rng, spec));

    Dataset ds;
    ds.class_count = spec.class_count;
    ds.channels = spec.channels;
    ds.timesteps = spec.timesteps;
    for (int c = 0; c < spec.class_count; ++c)
        for (int i = 0; i < spec.samples_per_class_train; ++i)
            ds.train.push_back(jittered_sample(rng, tpls[static_cast<std::size_t>(c)],
                                               c, spec.jitter_std));
    for (int c = 0; c < spec.class_count; ++c)
        for (int i = 0; i < spec.samples_per_class_test; ++i)
            ds.test.push_back(jittered_sample(rng, tpls[static_cast<std::size_t>(c)],
                                              c, spec.jitter_std));
    return ds;
}

SpikeRaster time_bin_downsample(const SpikeRaster& raster, int factor) {
    if (factor < 1)
        throw std::invalid_argument("time_bin_downsample: factor must be >= 1");
    const Eigen::Index nt = raster.timesteps();
    const Eigen::Index out_nt = (nt + factor - 1) / factor;
    SpikeRaster out(raster.neurons(), out_nt, raster.dt * factor);
    for (Eigen::Index c = 0; c < raster.neurons(); ++c)
        for (Eigen::Index t = 0; t < nt; ++t)
            if (raster.data(c, t) != 0.0)
                out.data(c, t / factor) = 1.0;
    return out;
}

namespace {

constexpr char kMagic[4] = {'S', 'C', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is, const std::filesystem::path& path,
                      std::streamoff offset) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw std::runtime_error(path.string() + ": truncated at offset " +
                                 std::to_string(offset));
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void write_raster(const std::filesystem::path& path, const Sample& sample) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(sample.input.rows()));
    put_u32(os, static_cast<std::uint32_t>(sample.input.cols()));
    const unsigned char dtype = sample.analog ? 1 : 0;
    os.write(reinterpret_cast<const char*>(&dtype), 1);
    for (Eigen::Index c = 0; c < sample.input.rows(); ++c)
        for (Eigen::Index t = 0; t < sample.input.cols(); ++t) {
            if (sample.analog) {
                const float v = static_cast<float>(sample.input(c, t));
                static_assert(sizeof(float) == 4);
                os.write(reinterpret_cast<const char*>(&v), 4);
            } else {
                const unsigned char v = sample.input(c, t) != 0.0 ? 1 : 0;
                os.write(reinterpret_cast<const char*>(&v), 1);
            }
        }
    if (!os)
        throw std::runtime_error("write failed: " + path.string());
}

Sample read_raster(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error(path.string() + ": bad magic at offset 0");
    const std::uint32_t version = get_u32(is, path, 4);
    if (version != kVersion)
        throw std::runtime_error(path.string() + ": unsupported version " +
                                 std::to_string(version) + " at offset 4");
    const std::uint32_t channels = get_u32(is, path, 8);
    const std::uint32_t timesteps = get_u32(is, path, 12);
    unsigned char dtype = 0;
    if (!is.read(reinterpret_cast<char*>(&dtype), 1))
        throw std::runtime_error(path.string() + ": truncated at offset 16");
    if (dtype > 1)
        throw std::runtime_error(path.string() + ": unknown dtype at offset 16");

    Sample s;
    s.analog = dtype == 1;
    s.input.resize(channels, timesteps);
    std::streamoff offset = 17;
    for (std::uint32_t c = 0; c < channels; ++c)
        for (std::uint32_t t = 0; t < timesteps; ++t) {
            if (s.analog) {
                float v;
                if (!is.read(reinterpret_cast<char*>(&v), 4))
                    throw std::runtime_error(path.string() + ": truncated at offset " +
                                             std::to_string(offset));
                s.input(c, t) = v;
                offset += 4;
            } else {
                unsigned char v;
                if (!is.read(reinterpret_cast<char*>(&v), 1))
                    throw std::runtime_error(path.string() + ": truncated at offset " +
                                             std::to_string(offset));
                s.input(c, t) = v != 0 ? 1.0 : 0.0;
                offset += 1;
            }
        }
    return s;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<std::pair<std::string, int>>& entries) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& [rel, label] : entries)
        os << rel << "," << label << "\n";
}

std::vector<Sample> load_manifest(const std::filesystem::path& manifest_path) {
    std::ifstream is(manifest_path);
    if (!is)
        throw std::runtime_error("cannot open " + manifest_path.string());
    const std::filesystem::path base = manifest_path.parent_path();
    std::vector<Sample> samples;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto comma = line.find_last_of(',');
        if (comma == std::string::npos)
            throw std::runtime_error(manifest_path.string() + ":" +
                                     std::to_string(line_no) +
                                     ": expected 'relative_path,label'");
        const std::string rel = line.substr(0, comma);
        int label = 0;
        try {
            label = std::stoi(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::runtime_error(manifest_path.string() + ":" +
                                     std::to_string(line_no) + ": bad label");
        }
        const std::filesystem::path file = base / rel;
        if (!std::filesystem::exists(file))
            throw std::runtime_error("manifest references missing file: " +
                                     file.string());
        Sample s = read_raster(file);
        s.label = label;
        samples.push_back(std::move(s));
    }
    return samples;
}

} // namespace scsr
