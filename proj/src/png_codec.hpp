#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seedseg::detail {

/// Decoded PNG samples widened to 16 bits, palette/low-bit-depth expanded,
/// alpha dropped. channels is 1 (gray) or 3 (RGB).
struct PngRaster {
    int width = 0;
    int height = 0;
    int channels = 0;
    int bitDepth = 0;  // 8 or 16
    std::vector<std::uint16_t> samples;
};

PngRaster decodePng(std::span<const std::uint8_t> bytes);
/// channels 1 or 3, bitDepth 8; samples hold the 8-bit values.
std::vector<std::uint8_t> encodePng(const PngRaster& raster);

bool looksLikePng(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace seedseg::detail
