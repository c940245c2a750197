#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "seedseg/grid.hpp"

namespace seedseg {

/// Grayscale image, intensities in [0,1], row-major (x fastest).
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> intensities;

    double at(int x, int y) const { return intensities[static_cast<std::size_t>(y) * width + x]; }
};

/// 8-bit RGB raster used for seed masks and overlays.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // 3 bytes per pixel

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, fill) {}

    std::uint8_t* pixel(int x, int y) { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
    const std::uint8_t* pixel(int x, int y) const { return &rgb[(static_cast<std::size_t>(y) * width + x) * 3]; }
};

enum class ImageFormat { Auto, Pgm, Png };

Image loadImage(const std::filesystem::path& path, ImageFormat format = ImageFormat::Auto);
/// Decodes an in-memory PGM (P5) or PNG; format sniffed from the magic bytes.
Image decodeImage(std::span<const std::uint8_t> bytes, ImageFormat format = ImageFormat::Auto);

/// Writes a binary PGM with the given maxval (255 or 65535), rounding to nearest.
void savePgm(const std::filesystem::path& path, const Image& img, int maxval = 255);
std::vector<std::uint8_t> encodePgm(const Image& img, int maxval = 255);

RgbImage loadRgbPng(const std::filesystem::path& path);
RgbImage decodeRgbPng(std::span<const std::uint8_t> bytes);
void saveRgbPng(const std::filesystem::path& path, const RgbImage& img);
std::vector<std::uint8_t> encodeRgbPng(const RgbImage& img);

enum class Sampling { Nearest, Bilinear };

/// Pixel (a,b) sits at domain position (a*L1/W, b*L2/H); node positions are
/// mapped back through the same scale and clamped to the image.
GridField imageToField(const Image& img, const GridSpec& spec, Sampling method = Sampling::Nearest);

/// Grid used for an image: N1 = width, N2 = height, L2 = 1, L1 = width/height.
GridSpec gridForImage(int width, int height);

// --- synthetic two-rectangles scene -------------------------------------------------

struct Point2 {
    double x1 = 0.0;
    double x2 = 0.0;
};

struct SceneParams {
    Point2 leftCenter{0.4, 0.5};
    Point2 rightCenter{0.6, 0.5};
    double width = 0.1;
    double height = 0.4;
    double edgeThickness = 0.04;
    /// Gap in the inner vertical edge of each rectangle (the edge facing the
    /// other rectangle), centred vertically. 0 disables the holes.
    double holeHeight = 0.04;
};

/// Throws SceneError when geometry leaves [0,L1]x[0,L2] or thickness <= 0.
void validateScene(const SceneParams& p, double L1, double L2);
/// 0 on the dark outline strips, 1 elsewhere.
double sceneValue(const SceneParams& p, double x1, double x2);
GridField synthTwoRectangles(const SceneParams& p, const GridSpec& spec);
/// Same scene rasterised at pixel positions (a*L1/W, b*L2/H) on a W x H image over [0,1]^2 scaled.
Image synthTwoRectanglesImage(const SceneParams& p, int width, int height);

// --- seed masks ---------------------------------------------------------------------

enum class SeedLabel : std::uint8_t { Free = 0, Inside = 1, Outside = 2 };

const char* toString(SeedLabel label) noexcept;
/// "inside" / "outside" / "free" (case-insensitive). Throws std::invalid_argument.
SeedLabel parseSeedLabel(const std::string& s);

class SeedMask {
public:
    /// All nodes Free.
    explicit SeedMask(const GridSpec& spec);
    /// Throws ShapeError on size mismatch and std::invalid_argument if no node is Free.
    SeedMask(const GridSpec& spec, std::vector<SeedLabel> labels);

    const GridSpec& spec() const noexcept { return spec_; }
    SeedLabel operator()(int i, int j) const noexcept { return labels_[spec_.at(i, j)]; }
    SeedLabel operator[](std::size_t I) const noexcept { return labels_[I]; }
    std::span<const SeedLabel> labels() const noexcept { return labels_; }

    std::size_t count(SeedLabel label) const noexcept;

    /// Union of two masks on the same grid. Throws MaskConflictError where one
    /// says Inside and the other Outside.
    friend SeedMask unite(const SeedMask& a, const SeedMask& b);

private:
    GridSpec spec_;
    std::vector<SeedLabel> labels_;
};

/// Red-dominant pixel (R > 128, G < 64, B < 64) -> Outside, blue-dominant ->
/// Inside, anything else Free. Accepts W x H = N1 x N2 (pixel resolution,
/// nearest with clamping) or (N1+1) x (N2+1) (node resolution).
SeedMask seedMaskFromRgb(const RgbImage& img, const GridSpec& spec);
SeedMask loadSeedMask(const std::filesystem::path& path, const GridSpec& spec);
SeedLabel classifySeedPixel(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

/// Nodes inside the closed axis-aligned bar get `label`; everything else Free.
SeedMask synthBarSeed(Point2 center, double width, double height, SeedLabel label, const GridSpec& spec);

/// A painted brush stroke in pixel coordinates of a width x height image
/// (row index grows with x2). Label Free erases.
struct SeedStroke {
    SeedLabel label = SeedLabel::Free;
    std::vector<Point2> polyline;
    double radius = 1.0;
};

/// Strokes applied in order: every node within `radius` pixels of the polyline
/// takes the stroke label. Throws MaskConflictError when an Inside stroke covers
/// an Outside node or vice versa, and std::invalid_argument when nothing stays Free.
SeedMask rasterizeStrokes(const std::vector<SeedStroke>& strokes, int width, int height, const GridSpec& spec);

/// Pixel-resolution RGB rendering of a mask (red Outside, blue Inside, white Free).
RgbImage renderSeedMask(const SeedMask& mask, int width, int height);

}  // namespace seedseg
