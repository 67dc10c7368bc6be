#pragma once

#include <cstdint>
#include <filesystem>

#include "mimoid/txchain.hpp"

namespace mimoid {

/// Sample file layout: 32-byte header of little-endian u32
/// (magic, variant, rows, columns, N, cp, N_b, 0), then rows x columns
/// complex samples, row-major, as little-endian float64 (re, im) pairs.
inline constexpr std::uint32_t kFrameMagic = 0x4F4D494D;  // "MIMO"

void write_frame(const std::filesystem::path& path, const TxFrame& frame);

/// Throws std::runtime_error on I/O failure or a malformed header.
TxFrame read_frame(const std::filesystem::path& path);

}  // namespace mimoid
