#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seedseg/contour.hpp"
#include "seedseg/grid.hpp"

namespace seedseg {

/// Level-set dump, all little-endian:
///   "SSLS" | u32 N1 | u32 N2 | f64 L1 | f64 L2 | f64 time | (N1+1)(N2+1) x f64, i fastest.
inline constexpr char kLevelSetMagic[4] = {'S', 'S', 'L', 'S'};

std::vector<std::uint8_t> encodeLevelSet(const GridField& u, double time);
void writeLevelSet(const std::filesystem::path& path, const GridField& u, double time);

struct LevelSetDump {
    GridField u;
    double time = 0.0;
};

/// Throws IngestError (with byte offset) on malformed data.
LevelSetDump decodeLevelSet(std::span<const std::uint8_t> bytes);
LevelSetDump readLevelSet(const std::filesystem::path& path);

/// [{"closed": bool, "points": [[x1, x2], ...]}, ...] in domain coordinates.
std::string contourToJson(const std::vector<Polyline>& contour);
std::vector<Polyline> contourFromJson(const std::string& text);

}  // namespace seedseg
