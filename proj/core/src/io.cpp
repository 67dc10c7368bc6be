#include "mimoid/io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace mimoid {
namespace {

static_assert(std::endian::native == std::endian::little, "sample files assume a little-endian host");

void put_u32(std::ofstream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); }

}  // namespace

void write_frame(const std::filesystem::path& path, const TxFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const auto& s = frame.samples;
    put_u32(out, kFrameMagic);
    put_u32(out, static_cast<std::uint32_t>(frame.variant));
    put_u32(out, static_cast<std::uint32_t>(s.rows()));
    put_u32(out, static_cast<std::uint32_t>(s.cols()));
    put_u32(out, static_cast<std::uint32_t>(frame.ofdm.subcarriers));
    put_u32(out, static_cast<std::uint32_t>(frame.ofdm.cp_len));
    put_u32(out, static_cast<std::uint32_t>(frame.ofdm.symbols));
    put_u32(out, 0);
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        for (Eigen::Index c = 0; c < s.cols(); ++c) {
            const double re = s(r, c).real();
            const double im = s(r, c).imag();
            out.write(reinterpret_cast<const char*>(&re), 8);
            out.write(reinterpret_cast<const char*>(&im), 8);
        }
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

TxFrame read_frame(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sample file " + path.string());
    std::array<std::uint32_t, 8> h{};
    in.read(reinterpret_cast<char*>(h.data()), sizeof h);
    if (!in) throw std::runtime_error(path.string() + ": truncated header");
    if (h[0] != kFrameMagic) throw std::runtime_error(path.string() + ": not a sample file (bad magic)");
    if (h[1] > 2) throw std::runtime_error(path.string() + ": unknown system variant " + std::to_string(h[1]));
    TxFrame f;
    f.variant = static_cast<SystemVariant>(h[1]);
    f.ofdm = {static_cast<int>(h[4]), static_cast<int>(h[5]), static_cast<int>(h[6])};
    const auto rows = static_cast<Eigen::Index>(h[2]);
    const auto cols = static_cast<Eigen::Index>(h[3]);
    f.samples.resize(rows, cols);
    std::array<double, 2> v{};
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            in.read(reinterpret_cast<char*>(v.data()), sizeof v);
            if (!in) throw std::runtime_error(path.string() + ": truncated sample data");
            f.samples(r, c) = {v[0], v[1]};
        }
    }
    return f;
}

}  // namespace mimoid
