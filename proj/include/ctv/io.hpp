#pragma once

// File formats: the planar float image format for product images, and 8-bit PNG
// for color images and masks.
//
// Planar float layout (little-endian): "PFI1", u32 width, u32 height, u32 m, u32 n,
// then m + n planes of width*height float64 values in row-major order. Cyclic planes
// hold radians in [-pi, pi).

#include <filesystem>

#include "ctv/image.hpp"
#include "ctv/imaging.hpp"

namespace ctv {

/// Throws DataError when the file cannot be written.
void write_pfi(const std::filesystem::path& path, const ProductImage& img);
/// Throws DataError for missing, truncated or malformed files.
ProductImage read_pfi(const std::filesystem::path& path);

/// Any PNG color type is converted to 8-bit RGB; channels are scaled to [0, 1].
RgbImage read_png_rgb(const std::filesystem::path& path);
/// Channels are clamped and rounded to 8 bits.
void write_png_rgb(const std::filesystem::path& path, const RgbImage& img);

/// A pixel is missing when any channel is nonzero.
InpaintMask read_mask_png(const std::filesystem::path& path);
/// Missing pixels are written as 255, known ones as 0 (8-bit gray).
void write_mask_png(const std::filesystem::path& path, const InpaintMask& mask);

}  // namespace ctv
