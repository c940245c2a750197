#include "seedseg/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "png_codec.hpp"
#include "seedseg/errors.hpp"

namespace seedseg {

namespace {

std::vector<std::uint8_t> readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void writeFile(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

bool isPgmSpace(std::uint8_t c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

// Reads one unsigned decimal header token, skipping whitespace and comments.
unsigned long pgmToken(std::span<const std::uint8_t> b, std::size_t& pos, const char* what) {
    for (;;) {
        while (pos < b.size() && isPgmSpace(b[pos])) ++pos;
        if (pos < b.size() && b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n') ++pos;
            continue;
        }
        break;
    }
    if (pos >= b.size()) throw IngestError(std::string("PGM header truncated before ") + what, pos);
    if (!std::isdigit(b[pos])) throw IngestError(std::string("PGM header: expected ") + what, pos);
    unsigned long v = 0;
    while (pos < b.size() && std::isdigit(b[pos])) {
        v = v * 10 + (b[pos] - '0');
        if (v > 1u << 30) throw IngestError(std::string("PGM header: ") + what + " too large", pos);
        ++pos;
    }
    return v;
}

Image decodePgm(std::span<const std::uint8_t> b) {
    if (b.size() < 2 || b[0] != 'P' || b[1] != '5') throw IngestError("not a binary PGM: expected 'P5' magic", 0);
    std::size_t pos = 2;
    const auto width = pgmToken(b, pos, "width");
    const auto height = pgmToken(b, pos, "height");
    const std::size_t maxvalPos = pos;
    const auto maxval = pgmToken(b, pos, "maxval");
    if (width == 0 || height == 0) throw IngestError("PGM has zero width or height", maxvalPos);
    if (maxval == 0 || maxval > 65535) throw IngestError("unsupported PGM maxval " + std::to_string(maxval), maxvalPos);
    if (pos >= b.size() || !isPgmSpace(b[pos])) throw IngestError("PGM header: missing whitespace after maxval", pos);
    ++pos;

    const std::size_t bytesPerSample = maxval < 256 ? 1 : 2;
    const std::size_t n = width * height;
    if (b.size() - pos < n * bytesPerSample)
        throw IngestError("PGM raster truncated: need " + std::to_string(n * bytesPerSample) + " bytes", b.size());

    Image img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.intensities.resize(n);
    const double scale = 1.0 / static_cast<double>(maxval);
    for (std::size_t k = 0; k < n; ++k) {
        unsigned v = bytesPerSample == 1 ? b[pos + k] : (unsigned(b[pos + 2 * k]) << 8) | b[pos + 2 * k + 1];
        if (v > maxval) throw IngestError("PGM sample exceeds maxval", pos + k * bytesPerSample);
        img.intensities[k] = v * scale;
    }
    return img;
}

Image imageFromPng(const detail::PngRaster& r) {
    Image img;
    img.width = r.width;
    img.height = r.height;
    const std::size_t n = static_cast<std::size_t>(r.width) * r.height;
    img.intensities.resize(n);
    const double maxv = r.bitDepth == 16 ? 65535.0 : 255.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (r.channels == 1) {
            img.intensities[k] = r.samples[k] / maxv;
        } else {
            const double luma = 0.299 * r.samples[3 * k] + 0.587 * r.samples[3 * k + 1] + 0.114 * r.samples[3 * k + 2];
            img.intensities[k] = std::clamp(luma / maxv, 0.0, 1.0);
        }
    }
    return img;
}

bool inClosedBox(double x1, double x2, double lo1, double hi1, double lo2, double hi2) {
    constexpr double slack = 1e-12;
    return x1 >= lo1 - slack && x1 <= hi1 + slack && x2 >= lo2 - slack && x2 <= hi2 + slack;
}

}  // namespace

Image decodeImage(std::span<const std::uint8_t> bytes, ImageFormat format) {
    if (bytes.empty()) throw IngestError("empty image data", 0);
    if (format == ImageFormat::Auto) format = detail::looksLikePng(bytes) ? ImageFormat::Png : ImageFormat::Pgm;
    if (format == ImageFormat::Png) return imageFromPng(detail::decodePng(bytes));
    return decodePgm(bytes);
}

Image loadImage(const std::filesystem::path& path, ImageFormat format) {
    const auto bytes = readFile(path);
    try {
        return decodeImage(bytes, format);
    } catch (const IngestError& e) {
        throw IngestError(path.string() + ": ", e);
    }
}

std::vector<std::uint8_t> encodePgm(const Image& img, int maxval) {
    if (maxval != 255 && maxval != 65535) throw std::invalid_argument("encodePgm: maxval must be 255 or 65535");
    std::ostringstream header;
    header << "P5\n" << img.width << ' ' << img.height << '\n' << maxval << '\n';
    const std::string h = header.str();
    std::vector<std::uint8_t> out(h.begin(), h.end());
    out.reserve(out.size() + img.intensities.size() * (maxval > 255 ? 2 : 1));
    for (double v : img.intensities) {
        const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * maxval));
        if (maxval > 255) out.push_back(static_cast<std::uint8_t>(q >> 8));
        out.push_back(static_cast<std::uint8_t>(q & 0xff));
    }
    return out;
}

void savePgm(const std::filesystem::path& path, const Image& img, int maxval) { writeFile(path, encodePgm(img, maxval)); }

RgbImage decodeRgbPng(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw IngestError("empty mask data", 0);
    const auto r = detail::decodePng(bytes);
    if (r.channels != 3) throw IngestError("seed mask must be an RGB PNG, got " + std::to_string(r.channels) + " channel(s)");
    RgbImage img(r.width, r.height);
    const int shift = r.bitDepth == 16 ? 8 : 0;
    for (std::size_t k = 0; k < img.rgb.size(); ++k) img.rgb[k] = static_cast<std::uint8_t>(r.samples[k] >> shift);
    return img;
}

RgbImage loadRgbPng(const std::filesystem::path& path) {
    const auto bytes = readFile(path);
    try {
        return decodeRgbPng(bytes);
    } catch (const IngestError& e) {
        throw IngestError(path.string() + ": ", e);
    }
}

std::vector<std::uint8_t> encodeRgbPng(const RgbImage& img) {
    detail::PngRaster r;
    r.width = img.width;
    r.height = img.height;
    r.channels = 3;
    r.bitDepth = 8;
    r.samples.assign(img.rgb.begin(), img.rgb.end());
    return detail::encodePng(r);
}

void saveRgbPng(const std::filesystem::path& path, const RgbImage& img) { writeFile(path, encodeRgbPng(img)); }

GridSpec gridForImage(int width, int height) {
    return GridSpec(static_cast<double>(width) / height, 1.0, width, height);
}

GridField imageToField(const Image& img, const GridSpec& spec, Sampling method) {
    if (img.width <= 0 || img.height <= 0 || img.intensities.size() != static_cast<std::size_t>(img.width) * img.height)
        throw ShapeError("imageToField: image dimensions do not match its data");
    GridField f(spec);
    const double sx = img.width / spec.L1();
    const double sy = img.height / spec.L2();
    for (int j = 0; j <= spec.N2(); ++j) {
        const double fy = std::clamp(j * spec.h2() * sy, 0.0, img.height - 1.0);
        for (int i = 0; i <= spec.N1(); ++i) {
            const double fx = std::clamp(i * spec.h1() * sx, 0.0, img.width - 1.0);
            if (method == Sampling::Nearest) {
                f(i, j) = img.at(static_cast<int>(std::lround(fx)), static_cast<int>(std::lround(fy)));
            } else {
                const int x0 = std::min(static_cast<int>(std::floor(fx)), img.width - 1);
                const int y0 = std::min(static_cast<int>(std::floor(fy)), img.height - 1);
                const int x1 = std::min(x0 + 1, img.width - 1);
                const int y1 = std::min(y0 + 1, img.height - 1);
                const double ax = fx - x0;
                const double ay = fy - y0;
                const double top = (1 - ax) * img.at(x0, y0) + ax * img.at(x1, y0);
                const double bot = (1 - ax) * img.at(x0, y1) + ax * img.at(x1, y1);
                f(i, j) = (1 - ay) * top + ay * bot;
            }
        }
    }
    return f;
}

// --- scene ----------------------------------------------------------------------------

void validateScene(const SceneParams& p, double L1, double L2) {
    if (!(p.edgeThickness > 0.0)) throw SceneError("edge thickness must be positive");
    if (!(p.width > 2 * p.edgeThickness) || !(p.height > 2 * p.edgeThickness))
        throw SceneError("rectangle must be larger than twice the edge thickness");
    if (p.holeHeight < 0.0 || p.holeHeight > p.height - 2 * p.edgeThickness)
        throw SceneError("hole height must lie in [0, height - 2*thickness]");
    for (const Point2& c : {p.leftCenter, p.rightCenter}) {
        if (c.x1 - p.width / 2 < 0.0 || c.x1 + p.width / 2 > L1 || c.x2 - p.height / 2 < 0.0 || c.x2 + p.height / 2 > L2)
            throw SceneError("rectangle leaves the image domain");
    }
}

namespace {

// Rectangle outline strip test; `innerSide` is +1 when the hole sits on the
// right edge, -1 for the left edge.
bool onOutline(const Point2& c, int innerSide, const SceneParams& p, double x1, double x2) {
    const double lo1 = c.x1 - p.width / 2, hi1 = c.x1 + p.width / 2;
    const double lo2 = c.x2 - p.height / 2, hi2 = c.x2 + p.height / 2;
    if (!inClosedBox(x1, x2, lo1, hi1, lo2, hi2)) return false;
    const double t = p.edgeThickness;
    const bool leftStrip = x1 <= lo1 + t;
    const bool rightStrip = x1 >= hi1 - t;
    const bool bottomStrip = x2 <= lo2 + t;
    const bool topStrip = x2 >= hi2 - t;
    if (!(leftStrip || rightStrip || bottomStrip || topStrip)) return false;
    if (p.holeHeight > 0.0 && !bottomStrip && !topStrip && std::abs(x2 - c.x2) <= p.holeHeight / 2) {
        const bool inInnerStrip = innerSide > 0 ? rightStrip : leftStrip;
        const bool inOuterStrip = innerSide > 0 ? leftStrip : rightStrip;
        if (inInnerStrip && !inOuterStrip) return false;
    }
    return true;
}

}  // namespace

double sceneValue(const SceneParams& p, double x1, double x2) {
    const int leftInner = p.rightCenter.x1 >= p.leftCenter.x1 ? +1 : -1;
    if (onOutline(p.leftCenter, leftInner, p, x1, x2)) return 0.0;
    if (onOutline(p.rightCenter, -leftInner, p, x1, x2)) return 0.0;
    return 1.0;
}

GridField synthTwoRectangles(const SceneParams& p, const GridSpec& spec) {
    validateScene(p, spec.L1(), spec.L2());
    GridField f(spec);
    for (int j = 0; j <= spec.N2(); ++j)
        for (int i = 0; i <= spec.N1(); ++i) f(i, j) = sceneValue(p, i * spec.h1(), j * spec.h2());
    return f;
}

Image synthTwoRectanglesImage(const SceneParams& p, int width, int height) {
    const GridSpec spec = gridForImage(width, height);
    validateScene(p, spec.L1(), spec.L2());
    Image img;
    img.width = width;
    img.height = height;
    img.intensities.resize(static_cast<std::size_t>(width) * height);
    for (int b = 0; b < height; ++b)
        for (int a = 0; a < width; ++a)
            img.intensities[static_cast<std::size_t>(b) * width + a] = sceneValue(p, a * spec.h1(), b * spec.h2());
    return img;
}

// --- masks ----------------------------------------------------------------------------

const char* toString(SeedLabel label) noexcept {
    switch (label) {
        case SeedLabel::Inside: return "inside";
        case SeedLabel::Outside: return "outside";
        default: return "free";
    }
}

SeedLabel parseSeedLabel(const std::string& s) {
    std::string l(s);
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (l == "inside") return SeedLabel::Inside;
    if (l == "outside") return SeedLabel::Outside;
    if (l == "free") return SeedLabel::Free;
    throw std::invalid_argument("unknown seed label '" + s + "' (expected inside|outside|free)");
}

SeedMask::SeedMask(const GridSpec& spec) : spec_(spec), labels_(spec.nodeCount(), SeedLabel::Free) {}

SeedMask::SeedMask(const GridSpec& spec, std::vector<SeedLabel> labels) : spec_(spec), labels_(std::move(labels)) {
    if (labels_.size() != spec_.nodeCount()) throw ShapeError("seed mask size does not match grid");
    if (count(SeedLabel::Free) == 0) throw std::invalid_argument("seed mask leaves no free node");
}

std::size_t SeedMask::count(SeedLabel label) const noexcept {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

SeedMask unite(const SeedMask& a, const SeedMask& b) {
    if (!(a.spec() == b.spec())) throw ShapeError("cannot unite seed masks on different grids");
    std::vector<SeedLabel> out(a.labels_);
    for (std::size_t I = 0; I < out.size(); ++I) {
        const SeedLabel lb = b.labels_[I];
        if (lb == SeedLabel::Free) continue;
        if (out[I] != SeedLabel::Free && out[I] != lb) {
            const auto [i, j] = a.spec().unflatten(I);
            throw MaskConflictError("seed masks disagree at node (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        out[I] = lb;
    }
    return SeedMask(a.spec(), std::move(out));
}

SeedLabel classifySeedPixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    if (r > 128 && g < 64 && b < 64) return SeedLabel::Outside;
    if (b > 128 && r < 64 && g < 64) return SeedLabel::Inside;
    return SeedLabel::Free;
}

SeedMask seedMaskFromRgb(const RgbImage& img, const GridSpec& spec) {
    const bool nodeRes = img.width == spec.nodesX() && img.height == spec.nodesY();
    const bool pixelRes = img.width == spec.N1() && img.height == spec.N2();
    if (!nodeRes && !pixelRes)
        throw IngestError("seed mask is " + std::to_string(img.width) + "x" + std::to_string(img.height) +
                          ", expected " + std::to_string(spec.N1()) + "x" + std::to_string(spec.N2()) + " or " +
                          std::to_string(spec.nodesX()) + "x" + std::to_string(spec.nodesY()));
    std::vector<SeedLabel> labels(spec.nodeCount());
    for (int j = 0; j <= spec.N2(); ++j)
        for (int i = 0; i <= spec.N1(); ++i) {
            const auto* px = img.pixel(std::min(i, img.width - 1), std::min(j, img.height - 1));
            labels[spec.at(i, j)] = classifySeedPixel(px[0], px[1], px[2]);
        }
    return SeedMask(spec, std::move(labels));
}

SeedMask loadSeedMask(const std::filesystem::path& path, const GridSpec& spec) {
    return seedMaskFromRgb(loadRgbPng(path), spec);
}

SeedMask synthBarSeed(Point2 center, double width, double height, SeedLabel label, const GridSpec& spec) {
    if (!(width > 0.0) || !(height > 0.0)) throw SceneError("bar must have positive width and height");
    const double lo1 = center.x1 - width / 2, hi1 = center.x1 + width / 2;
    const double lo2 = center.x2 - height / 2, hi2 = center.x2 + height / 2;
    if (lo1 < 0.0 || hi1 > spec.L1() || lo2 < 0.0 || hi2 > spec.L2()) throw SceneError("bar leaves the image domain");
    std::vector<SeedLabel> labels(spec.nodeCount(), SeedLabel::Free);
    for (int j = 0; j <= spec.N2(); ++j)
        for (int i = 0; i <= spec.N1(); ++i)
            if (inClosedBox(i * spec.h1(), j * spec.h2(), lo1, hi1, lo2, hi2)) labels[spec.at(i, j)] = label;
    return SeedMask(spec, std::move(labels));
}

namespace {

double segmentDistance(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x1 - a.x1, dy = b.x2 - a.x2;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x1 - a.x1) * dx + (p.x2 - a.x2) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x1 - (a.x1 + t * dx), p.x2 - (a.x2 + t * dy));
}

}  // namespace

SeedMask rasterizeStrokes(const std::vector<SeedStroke>& strokes, int width, int height, const GridSpec& spec) {
    if (width <= 0 || height <= 0) throw std::invalid_argument("stroke canvas must have positive size");
    const double sx = width / spec.L1();
    const double sy = height / spec.L2();
    std::vector<SeedLabel> labels(spec.nodeCount(), SeedLabel::Free);
    for (std::size_t k = 0; k < strokes.size(); ++k) {
        const SeedStroke& st = strokes[k];
        if (st.polyline.empty()) throw std::invalid_argument("stroke " + std::to_string(k) + " has no points");
        if (!(st.radius > 0.0) || !std::isfinite(st.radius))
            throw std::invalid_argument("stroke " + std::to_string(k) + " needs a positive radius");
        for (int j = 0; j <= spec.N2(); ++j)
            for (int i = 0; i <= spec.N1(); ++i) {
                const Point2 p{i * spec.h1() * sx, j * spec.h2() * sy};
                double d = std::hypot(p.x1 - st.polyline[0].x1, p.x2 - st.polyline[0].x2);
                for (std::size_t m = 1; m < st.polyline.size(); ++m)
                    d = std::min(d, segmentDistance(p, st.polyline[m - 1], st.polyline[m]));
                if (d > st.radius) continue;
                SeedLabel& cur = labels[spec.at(i, j)];
                if (st.label != SeedLabel::Free && cur != SeedLabel::Free && cur != st.label)
                    throw MaskConflictError("stroke " + std::to_string(k) + " (" + toString(st.label) +
                                            ") overlaps an " + toString(cur) + " node at (" + std::to_string(i) +
                                            "," + std::to_string(j) + ")");
                cur = st.label;
            }
    }
    return SeedMask(spec, std::move(labels));
}

RgbImage renderSeedMask(const SeedMask& mask, int width, int height) {
    const GridSpec& spec = mask.spec();
    RgbImage img(width, height, 255);
    for (int b = 0; b < height; ++b)
        for (int a = 0; a < width; ++a) {
            const SeedLabel l = mask(std::min(a, spec.N1()), std::min(b, spec.N2()));
            auto* px = img.pixel(a, b);
            if (l == SeedLabel::Outside) {
                px[0] = 255, px[1] = 0, px[2] = 0;
            } else if (l == SeedLabel::Inside) {
                px[0] = 0, px[1] = 0, px[2] = 255;
            }
        }
    return img;
}

}  // namespace seedseg
