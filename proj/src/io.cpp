#include "ctv/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "ctv/errors.hpp"

namespace ctv {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'F', 'I', '1'};
// Guard against absurd headers before allocating.
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 32;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) {
        out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xffU));
    }
}

void put_f64(std::vector<unsigned char>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffU));
    }
}

std::uint64_t get_le(const unsigned char* p, int bytes) {
    std::uint64_t v = 0;
    for (int b = bytes - 1; b >= 0; --b) {
        v = (v << 8U) | p[b];
    }
    return v;
}

std::uint32_t narrow_u32(std::size_t v, const char* what) {
    if (v > 0xffffffffU) {
        throw InvalidArgument(std::string("write_pfi: ") + what + " does not fit in 32 bits");
    }
    return static_cast<std::uint32_t>(v);
}

}  // namespace

void write_pfi(const std::filesystem::path& path, const ProductImage& img) {
    const Signature sig = img.signature();
    std::vector<unsigned char> bytes;
    bytes.reserve(20 + img.values().size() * 8);
    bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
    put_u32(bytes, narrow_u32(img.width(), "width"));
    put_u32(bytes, narrow_u32(img.height(), "height"));
    put_u32(bytes, narrow_u32(sig.cyclic, "m"));
    put_u32(bytes, narrow_u32(sig.linear, "n"));
    for (std::size_t c = 0; c < sig.size(); ++c) {
        for (std::size_t p = 0; p < img.pixel_count(); ++p) {
            put_f64(bytes, img.at(p)[c]);
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw DataError("write_pfi: cannot write " + path.string());
    }
}

ProductImage read_pfi(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("read_pfi: cannot open " + path.string());
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 20 || std::memcmp(bytes.data(), kMagic.data(), 4) != 0) {
        throw DataError("read_pfi: " + path.string() + " is not a PFI1 file");
    }
    const std::uint64_t width = get_le(bytes.data() + 4, 4);
    const std::uint64_t height = get_le(bytes.data() + 8, 4);
    const std::uint64_t m = get_le(bytes.data() + 12, 4);
    const std::uint64_t n = get_le(bytes.data() + 16, 4);
    if (width == 0 || height == 0 || m + n == 0) {
        throw DataError("read_pfi: empty image in " + path.string());
    }
    const std::uint64_t values = width * height * (m + n);
    if (width * height > kMaxValues || values > kMaxValues || bytes.size() != 20 + values * 8) {
        throw DataError("read_pfi: size of " + path.string() + " does not match its header");
    }
    const Signature sig{static_cast<std::size_t>(m), static_cast<std::size_t>(n)};
    const std::size_t pixels = static_cast<std::size_t>(width * height);
    std::vector<double> data(static_cast<std::size_t>(values));
    const unsigned char* src = bytes.data() + 20;
    for (std::size_t c = 0; c < sig.size(); ++c) {
        for (std::size_t p = 0; p < pixels; ++p) {
            const double v = std::bit_cast<double>(get_le(src, 8));
            src += 8;
            if (!std::isfinite(v)) {
                throw DataError("read_pfi: non-finite value in " + path.string());
            }
            data[p * sig.size() + c] = v;
        }
    }
    return {static_cast<std::size_t>(width), static_cast<std::size_t>(height), sig, std::move(data)};
}

// ---------------------------------------------------------------------------

namespace {

struct PngPixels {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<unsigned char> rgb;
};

PngPixels read_png(const std::filesystem::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&image, path.c_str()) == 0) {
        throw DataError("cannot read PNG " + path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    PngPixels out{image.width, image.height, std::vector<unsigned char>(PNG_IMAGE_SIZE(image))};
    if (png_image_finish_read(&image, nullptr, out.rgb.data(), 0, nullptr) == 0) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw DataError("cannot decode PNG " + path.string() + ": " + msg);
    }
    return out;
}

void write_png(const std::filesystem::path& path, std::size_t width, std::size_t height, std::uint32_t format,
               const std::vector<unsigned char>& pixels) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr) == 0) {
        throw DataError("cannot write PNG " + path.string() + ": " + image.message);
    }
}

}  // namespace

RgbImage read_png_rgb(const std::filesystem::path& path) {
    const PngPixels png = read_png(path);
    RgbImage out(png.width, png.height);
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = static_cast<double>(png.rgb[k]) / 255.0;
    }
    return out;
}

void write_png_rgb(const std::filesystem::path& path, const RgbImage& img) {
    std::vector<unsigned char> px(img.data.size());
    for (std::size_t k = 0; k < px.size(); ++k) {
        px[k] = static_cast<unsigned char>(std::lround(std::clamp(img.data[k], 0.0, 1.0) * 255.0));
    }
    write_png(path, img.width, img.height, PNG_FORMAT_RGB, px);
}

InpaintMask read_mask_png(const std::filesystem::path& path) {
    const PngPixels png = read_png(path);
    InpaintMask mask(png.width, png.height);
    for (std::size_t p = 0; p < png.width * png.height; ++p) {
        mask.set(p, png.rgb[3 * p] != 0 || png.rgb[3 * p + 1] != 0 || png.rgb[3 * p + 2] != 0);
    }
    return mask;
}

void write_mask_png(const std::filesystem::path& path, const InpaintMask& mask) {
    std::vector<unsigned char> px(mask.width() * mask.height());
    for (std::size_t p = 0; p < px.size(); ++p) {
        px[p] = mask.missing(p) ? 255 : 0;
    }
    write_png(path, mask.width(), mask.height(), PNG_FORMAT_GRAY, px);
}

}  // namespace ctv
