#include "png_codec.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <string>

#include "seedseg/errors.hpp"

namespace seedseg::detail {

namespace {

struct ReadCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

struct ErrorSink {
    std::string message;
};

void onError(png_structp png, png_const_charp msg) {
    auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
    if (sink) sink->message = msg;
    png_longjmp(png, 1);
}

void onWarning(png_structp, png_const_charp) {}

void readBytes(png_structp png, png_bytep out, png_size_t n) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + n > cur->bytes.size()) png_error(png, "unexpected end of PNG data");
    std::memcpy(out, cur->bytes.data() + cur->pos, n);
    cur->pos += n;
}

void writeBytes(png_structp png, png_bytep data, png_size_t n) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + n);
}

void flushNothing(png_structp) {}

}  // namespace

bool looksLikePng(std::span<const std::uint8_t> bytes) noexcept {
    return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

PngRaster decodePng(std::span<const std::uint8_t> bytes) {
    if (!looksLikePng(bytes)) throw IngestError("not a PNG stream: bad signature", 0);

    ErrorSink sink;
    ReadCursor cursor{bytes, 0};
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, onError, onWarning);
    if (!png) throw IngestError("libpng: cannot allocate read struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IngestError("libpng: cannot allocate info struct");
    }

    PngRaster raster;
    std::vector<png_bytep> rows;
    std::vector<std::uint8_t> buffer;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IngestError("PNG decode failed: " + sink.message, cursor.pos);
    }

    png_set_read_fn(png, &cursor, readBytes);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int colorType = png_get_color_type(png, info);
    int bitDepth = png_get_bit_depth(png, info);

    if (colorType == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (colorType == PNG_COLOR_TYPE_GRAY && bitDepth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    if (bitDepth == 16) png_set_swap(png);  // host order (little-endian) samples
    png_read_update_info(png, info);

    const int channels = png_get_channels(png, info);
    bitDepth = png_get_bit_depth(png, info);
    const std::size_t rowBytes = png_get_rowbytes(png, info);

    buffer.resize(rowBytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = buffer.data() + y * rowBytes;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if (channels != 1 && channels != 3) throw IngestError("unsupported PNG channel count " + std::to_string(channels));

    raster.width = static_cast<int>(width);
    raster.height = static_cast<int>(height);
    raster.channels = channels;
    raster.bitDepth = bitDepth;
    const std::size_t n = static_cast<std::size_t>(width) * height * channels;
    raster.samples.resize(n);
    if (bitDepth == 16) {
        for (std::size_t k = 0; k < n; ++k) {
            std::uint16_t v;
            std::memcpy(&v, buffer.data() + 2 * k, 2);
            raster.samples[k] = v;
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) raster.samples[k] = buffer[k];
    }
    return raster;
}

std::vector<std::uint8_t> encodePng(const PngRaster& raster) {
    if (raster.channels != 1 && raster.channels != 3) throw std::invalid_argument("encodePng: channels must be 1 or 3");
    std::vector<std::uint8_t> out;
    ErrorSink sink;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, onError, onWarning);
    if (!png) throw std::runtime_error("libpng: cannot allocate write struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("libpng: cannot allocate info struct");
    }

    const std::size_t rowSamples = static_cast<std::size_t>(raster.width) * raster.channels;
    std::vector<std::uint8_t> buffer(rowSamples * raster.height);
    for (std::size_t k = 0; k < buffer.size(); ++k) buffer[k] = static_cast<std::uint8_t>(raster.samples[k]);
    std::vector<png_bytep> rows(raster.height);
    for (int y = 0; y < raster.height; ++y) rows[y] = buffer.data() + y * rowSamples;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("PNG encode failed: " + sink.message);
    }
    png_set_write_fn(png, &out, writeBytes, flushNothing);
    png_set_IHDR(png, info, raster.width, raster.height, 8,
                 raster.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace seedseg::detail
