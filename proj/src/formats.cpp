#include "seedseg/formats.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "seedseg/errors.hpp"

namespace seedseg {

namespace {

template <class T>
void putLE(std::vector<std::uint8_t>& out, T value) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t k = 0; k < sizeof(U); ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

template <class T>
T getLE(std::span<const std::uint8_t> in, std::size_t& pos) {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    if (in.size() - pos < sizeof(U)) throw IngestError("level-set dump truncated", pos);
    U bits = 0;
    for (std::size_t k = 0; k < sizeof(U); ++k) bits |= static_cast<U>(in[pos + k]) << (8 * k);
    pos += sizeof(U);
    return std::bit_cast<T>(bits);
}

}  // namespace

std::vector<std::uint8_t> encodeLevelSet(const GridField& u, double time) {
    const GridSpec& s = u.spec();
    std::vector<std::uint8_t> out(kLevelSetMagic, kLevelSetMagic + 4);
    out.reserve(4 + 8 + 24 + 8 * u.size());
    putLE(out, static_cast<std::uint32_t>(s.N1()));
    putLE(out, static_cast<std::uint32_t>(s.N2()));
    putLE(out, s.L1());
    putLE(out, s.L2());
    putLE(out, time);
    for (double v : u.values()) putLE(out, v);
    return out;
}

void writeLevelSet(const std::filesystem::path& path, const GridField& u, double time) {
    const auto bytes = encodeLevelSet(u, time);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

LevelSetDump decodeLevelSet(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kLevelSetMagic, 4) != 0)
        throw IngestError("not a level-set dump: bad magic", 0);
    std::size_t pos = 4;
    const auto N1 = getLE<std::uint32_t>(bytes, pos);
    const auto N2 = getLE<std::uint32_t>(bytes, pos);
    const auto L1 = getLE<double>(bytes, pos);
    const auto L2 = getLE<double>(bytes, pos);
    const auto time = getLE<double>(bytes, pos);
    if (N1 < 2 || N2 < 2 || N1 > (1u << 20) || N2 > (1u << 20)) throw IngestError("level-set dump: bad grid size", 4);
    GridSpec spec(L1, L2, static_cast<int>(N1), static_cast<int>(N2));
    const std::size_t n = spec.nodeCount();
    if ((bytes.size() - pos) / 8 < n) throw IngestError("level-set dump: value block truncated", bytes.size());
    std::vector<double> values(n);
    for (auto& v : values) v = getLE<double>(bytes, pos);
    if (pos != bytes.size()) throw IngestError("level-set dump: trailing bytes", pos);
    return {GridField(spec, std::move(values)), time};
}

LevelSetDump readLevelSet(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return decodeLevelSet(bytes);
}

std::string contourToJson(const std::vector<Polyline>& contour) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Polyline& pl : contour) {
        nlohmann::json pts = nlohmann::json::array();
        for (const Point2& p : pl.points) pts.push_back({p.x1, p.x2});
        arr.push_back({{"closed", pl.closed}, {"points", std::move(pts)}});
    }
    return arr.dump();
}

std::vector<Polyline> contourFromJson(const std::string& text) {
    const auto arr = nlohmann::json::parse(text);
    std::vector<Polyline> out;
    for (const auto& item : arr) {
        Polyline pl;
        pl.closed = item.at("closed").get<bool>();
        for (const auto& p : item.at("points")) pl.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace seedseg
