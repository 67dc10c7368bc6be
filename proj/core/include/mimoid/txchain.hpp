#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mimoid/schemes.hpp"
#include "mimoid/types.hpp"

namespace mimoid {

enum class ModulationFamily : std::uint8_t { PSK, QAM };

struct ModulationSpec {
    ModulationFamily family = ModulationFamily::PSK;
    int order = 4;

    int bits_per_symbol() const;
    std::string label() const;  ///< e.g. "4PSK", "16QAM"
    static ModulationSpec parse(std::string_view text);

    friend bool operator==(const ModulationSpec&, const ModulationSpec&) = default;
};

/// Gray-labelled, unit average power constellation in label order.
std::vector<cplx> constellation(const ModulationSpec& spec);

/// Maps bits (one 0/1 per element, MSB first per symbol) onto constellation points.
/// Throws ArgumentError if the length is not a multiple of log2(M).
std::vector<cplx> modulate(std::span<const std::uint8_t> bits, const ModulationSpec& spec);

/// Horizontal concatenation of codewords C(x_0..x_{Ns-1}) | C(x_Ns..) | ...
/// Slot 0 is a code-block boundary.
ComplexMatrix encode_stream(SchemeId id, std::span<const cplx> symbols);

enum class SystemVariant : std::uint8_t { SingleCarrier, StbcOfdm, SfbcOfdm };

std::string_view name(SystemVariant v);
SystemVariant parse_system(std::string_view text);

struct OfdmParams {
    int subcarriers = 256;  ///< N
    int cp_len = 10;        ///< ν
    int symbols = 100;      ///< N_b
};

struct TxFrame {
    SystemVariant variant = SystemVariant::SingleCarrier;
    ComplexMatrix samples;  ///< n_t x columns, time domain
    OfdmParams ofdm;        ///< meaningful for the OFDM variants
};

/// Symbols consumed by ofdm_grid/frame_ofdm for the given layout.
std::size_t ofdm_symbols_needed(SystemVariant variant, SchemeId id, int subcarriers, int ofdm_symbols);

/// Frequency-domain resource grid, one N x N_b matrix per transmit antenna.
///   StbcOfdm: subcarrier k carries its own codeword stream across OFDM symbols.
///   SfbcOfdm: codewords span T consecutive subcarriers inside each OFDM symbol.
std::vector<ComplexMatrix> ofdm_grid(SystemVariant variant, SchemeId id, std::span<const cplx> symbols,
                                     int subcarriers, int ofdm_symbols);

/// Unitary inverse FFT per OFDM symbol with the last ν samples prefixed.
ComplexMatrix ofdm_modulate(const std::vector<ComplexMatrix>& grid, int cp_len);

TxFrame frame_ofdm(SystemVariant variant, SchemeId id, std::span<const cplx> symbols, int subcarriers,
                   int cp_len, int ofdm_symbols);

}  // namespace mimoid
