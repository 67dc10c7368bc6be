#include "mimoid/txchain.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include "mimoid/fft.hpp"

namespace mimoid {
namespace {

unsigned gray_decode(unsigned g) {
    unsigned b = g;
    for (unsigned shift = 1; shift < 32; shift <<= 1) b ^= b >> shift;
    return b;
}

void check_spec(const ModulationSpec& spec) {
    const bool ok = spec.order >= 4 && std::has_single_bit(static_cast<unsigned>(spec.order)) &&
                    (spec.family == ModulationFamily::PSK ||
                     (spec.bits_per_symbol() % 2 == 0));
    if (!ok) throw ArgumentError("unsupported modulation " + spec.label());
}

}  // namespace

int ModulationSpec::bits_per_symbol() const {
    return std::countr_zero(static_cast<unsigned>(order));
}

std::string ModulationSpec::label() const {
    return std::to_string(order) + (family == ModulationFamily::PSK ? "PSK" : "QAM");
}

ModulationSpec ModulationSpec::parse(std::string_view text) {
    std::string t(text);
    for (auto& ch : t) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    ModulationSpec spec;
    std::size_t pos = 0;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos == 0) throw ArgumentError("modulation '" + std::string(text) + "' has no order");
    spec.order = std::stoi(t.substr(0, pos));
    std::string fam = t.substr(pos);
    if (!fam.empty() && fam.front() == '-') fam.erase(0, 1);
    if (fam == "PSK")
        spec.family = ModulationFamily::PSK;
    else if (fam == "QAM")
        spec.family = ModulationFamily::QAM;
    else
        throw ArgumentError("modulation '" + std::string(text) + "': family must be PSK or QAM");
    check_spec(spec);
    return spec;
}

std::vector<cplx> constellation(const ModulationSpec& spec) {
    check_spec(spec);
    const int m = spec.order;
    std::vector<cplx> points(static_cast<std::size_t>(m));
    if (spec.family == ModulationFamily::PSK) {
        for (int label = 0; label < m; ++label) {
            const double k = gray_decode(static_cast<unsigned>(label));
            const double phase = std::numbers::pi / m + 2.0 * std::numbers::pi * k / m;
            points[static_cast<std::size_t>(label)] = std::polar(1.0, phase);
        }
        return points;
    }
    const int half_bits = spec.bits_per_symbol() / 2;
    const int side = 1 << half_bits;
    const double scale = 1.0 / std::sqrt(2.0 * (m - 1) / 3.0);
    for (int label = 0; label < m; ++label) {
        const unsigned i_bits = static_cast<unsigned>(label) >> half_bits;
        const unsigned q_bits = static_cast<unsigned>(label) & static_cast<unsigned>(side - 1);
        // Gray PAM level: label 0 sits at the top amplitude.
        const double i_level = (side - 1) - 2.0 * gray_decode(i_bits);
        const double q_level = (side - 1) - 2.0 * gray_decode(q_bits);
        points[static_cast<std::size_t>(label)] = cplx(i_level, q_level) * scale;
    }
    return points;
}

std::vector<cplx> modulate(std::span<const std::uint8_t> bits, const ModulationSpec& spec) {
    const auto points = constellation(spec);
    const auto k = static_cast<std::size_t>(spec.bits_per_symbol());
    if (bits.size() % k != 0)
        throw ArgumentError("modulate: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                            std::to_string(k));
    std::vector<cplx> out(bits.size() / k);
    for (std::size_t s = 0; s < out.size(); ++s) {
        unsigned label = 0;
        for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[s * k + b] & 1u);
        out[s] = points[label];
    }
    return out;
}

ComplexMatrix encode_stream(SchemeId id, std::span<const cplx> symbols) {
    const auto& d = descriptor(id);
    const auto ns = static_cast<std::size_t>(d.symbols_per_block);
    if (symbols.size() % ns != 0)
        throw ArgumentError("encode_stream(" + std::string(d.name) + "): symbol count " +
                            std::to_string(symbols.size()) + " not divisible by " + std::to_string(ns));
    const std::size_t blocks = symbols.size() / ns;
    ComplexMatrix out(d.n_t, static_cast<Eigen::Index>(blocks) * d.block_len);
    for (std::size_t b = 0; b < blocks; ++b)
        out.middleCols(static_cast<Eigen::Index>(b) * d.block_len, d.block_len) =
            codeword(id, symbols.subspan(b * ns, ns));
    return out;
}

std::string_view name(SystemVariant v) {
    switch (v) {
        case SystemVariant::SingleCarrier: return "single-carrier";
        case SystemVariant::StbcOfdm: return "stbc-ofdm";
        case SystemVariant::SfbcOfdm: return "sfbc-ofdm";
    }
    return "?";
}

SystemVariant parse_system(std::string_view text) {
    if (text == "single-carrier" || text == "sc" || text == "single") return SystemVariant::SingleCarrier;
    if (text == "stbc-ofdm" || text == "stbc") return SystemVariant::StbcOfdm;
    if (text == "sfbc-ofdm" || text == "sfbc") return SystemVariant::SfbcOfdm;
    throw ArgumentError("unknown system '" + std::string(text) + "'");
}

std::size_t ofdm_symbols_needed(SystemVariant variant, SchemeId id, int subcarriers, int ofdm_symbols) {
    const auto& d = descriptor(id);
    if (subcarriers <= 0 || ofdm_symbols <= 0) throw ArgumentError("OFDM dimensions must be positive");
    const auto n = static_cast<std::size_t>(subcarriers);
    const auto nb = static_cast<std::size_t>(ofdm_symbols);
    const auto t = static_cast<std::size_t>(d.block_len);
    const auto ns = static_cast<std::size_t>(d.symbols_per_block);
    switch (variant) {
        case SystemVariant::StbcOfdm:
            return n * ((nb + t - 1) / t) * ns;
        case SystemVariant::SfbcOfdm:
            if (n % t != 0)
                throw ArgumentError("SFBC-OFDM needs N divisible by T=" + std::to_string(t));
            return nb * (n / t) * ns;
        case SystemVariant::SingleCarrier: break;
    }
    throw ArgumentError("ofdm_symbols_needed: not an OFDM variant");
}

std::vector<ComplexMatrix> ofdm_grid(SystemVariant variant, SchemeId id, std::span<const cplx> symbols,
                                     int subcarriers, int ofdm_symbols) {
    const auto& d = descriptor(id);
    const std::size_t needed = ofdm_symbols_needed(variant, id, subcarriers, ofdm_symbols);
    if (symbols.size() < needed)
        throw ArgumentError("ofdm_grid: need " + std::to_string(needed) + " symbols, got " +
                            std::to_string(symbols.size()));
    const auto ns = static_cast<std::size_t>(d.symbols_per_block);
    std::vector<ComplexMatrix> grid(static_cast<std::size_t>(d.n_t),
                                    ComplexMatrix::Zero(subcarriers, ofdm_symbols));
    std::size_t next = 0;
    if (variant == SystemVariant::StbcOfdm) {
        // Code period p places block b+k on subcarrier k across OFDM symbols pT..pT+T-1.
        const int periods = (ofdm_symbols + d.block_len - 1) / d.block_len;
        for (int p = 0; p < periods; ++p) {
            for (int k = 0; k < subcarriers; ++k) {
                const ComplexMatrix c = codeword(id, symbols.subspan(next, ns));
                next += ns;
                for (int t = 0; t < d.block_len; ++t) {
                    const int n = p * d.block_len + t;
                    if (n >= ofdm_symbols) break;
                    for (int a = 0; a < d.n_t; ++a) grid[static_cast<std::size_t>(a)](k, n) = c(a, t);
                }
            }
        }
    } else {
        for (int n = 0; n < ofdm_symbols; ++n) {
            for (int k0 = 0; k0 < subcarriers; k0 += d.block_len) {
                const ComplexMatrix c = codeword(id, symbols.subspan(next, ns));
                next += ns;
                for (int t = 0; t < d.block_len; ++t)
                    for (int a = 0; a < d.n_t; ++a) grid[static_cast<std::size_t>(a)](k0 + t, n) = c(a, t);
            }
        }
    }
    return grid;
}

ComplexMatrix ofdm_modulate(const std::vector<ComplexMatrix>& grid, int cp_len) {
    if (grid.empty()) throw ArgumentError("ofdm_modulate: empty grid");
    const Eigen::Index n = grid.front().rows();
    const Eigen::Index nb = grid.front().cols();
    if (cp_len < 0 || cp_len > n) throw ArgumentError("ofdm_modulate: CP length out of range");
    const Eigen::Index sym_len = n + cp_len;
    ComplexMatrix out(static_cast<Eigen::Index>(grid.size()), nb * sym_len);
    std::vector<cplx> buf(static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (Eigen::Index s = 0; s < nb; ++s) {
            for (Eigen::Index k = 0; k < n; ++k) buf[static_cast<std::size_t>(k)] = grid[a](k, s);
            fft::inverse(buf);
            const Eigen::Index base = s * sym_len;
            const auto row = static_cast<Eigen::Index>(a);
            for (Eigen::Index i = 0; i < cp_len; ++i)
                out(row, base + i) = buf[static_cast<std::size_t>(n - cp_len + i)];
            for (Eigen::Index i = 0; i < n; ++i) out(row, base + cp_len + i) = buf[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

TxFrame frame_ofdm(SystemVariant variant, SchemeId id, std::span<const cplx> symbols, int subcarriers,
                   int cp_len, int ofdm_symbols) {
    if (variant == SystemVariant::SingleCarrier) throw ArgumentError("frame_ofdm: not an OFDM variant");
    TxFrame frame;
    frame.variant = variant;
    frame.ofdm = {subcarriers, cp_len, ofdm_symbols};
    frame.samples = ofdm_modulate(ofdm_grid(variant, id, symbols, subcarriers, ofdm_symbols), cp_len);
    return frame;
}

}  // namespace mimoid
