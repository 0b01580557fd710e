#pragma once

// Color images, HSV conversion, noise, quality metrics, synthetic test data and
// frame stacking.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ctv/image.hpp"

namespace ctv {

/// Three interleaved channels per pixel, row-major.
struct ColorImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> data;

    ColorImage() = default;
    ColorImage(std::size_t w, std::size_t h) : width(w), height(h), data(w * h * 3, 0.0) {}

    [[nodiscard]] std::size_t pixel_count() const noexcept { return width * height; }
    [[nodiscard]] double& at(std::size_t p, std::size_t c) noexcept { return data[p * 3 + c]; }
    [[nodiscard]] double at(std::size_t p, std::size_t c) const noexcept { return data[p * 3 + c]; }

    friend bool operator==(const ColorImage&, const ColorImage&) = default;
};

/// Channels r, g, b in [0, 1].
struct RgbImage : ColorImage {
    using ColorImage::ColorImage;
};

/// Channels h in [0, 1) (cyclic), s and v in [0, 1].
struct HsvImage : ColorImage {
    using ColorImage::ColorImage;
};

struct Rgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};
struct Hsv {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;
};

/// Hexcone conversion; inputs are clamped to [0, 1], gray maps to h = 0.
Hsv rgb_to_hsv(Rgb c) noexcept;
/// Hue taken modulo 1; s and v clamped.
Rgb hsv_to_rgb(Hsv c) noexcept;

HsvImage rgb_to_hsv(const RgbImage& img);
RgbImage hsv_to_rgb(const HsvImage& img);

/// Scale between unit-interval channels and the internal radian circle.
inline constexpr double kUnitToRadians = kTwoPi;

/// Signature (1, 2): hue, saturation and value all multiplied by 2 pi, hue wrapped.
ProductImage hsv_to_product(const HsvImage& img);
/// Inverse of hsv_to_product; s and v are clamped back into [0, 1].
HsvImage product_to_hsv(const ProductImage& img);

/// Signature (0, 3), unscaled.
ProductImage rgb_to_product(const RgbImage& img);
/// Channels clamped into [0, 1].
RgbImage product_to_rgb(const ProductImage& img);

/// One real channel as a (0, 1) image, or a hue channel as (1, 0) after scaling by 2 pi.
ProductImage channel_to_product(const ColorImage& img, std::size_t c, bool cyclic);
/// Writes a (0, 1) or (1, 0) image back into channel c (undoing the 2 pi scale for hue).
void product_to_channel(const ProductImage& src, ColorImage& dst, std::size_t c, bool cyclic);

// --- noise --------------------------------------------------------------------

struct ChannelRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// Normal draws from a 64-bit Mersenne Twister through Box-Muller, so a seed gives the same
/// numbers with every standard library.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// Adds N(0, sigma^2) to every component: cyclic ones are wrapped, linear component c is
/// clamped into linear_bounds[c] when that entry is set. Draw order: pixel-major, then component.
ProductImage add_wrapped_gaussian(const ProductImage& img, double sigma, std::uint64_t seed,
                                  const std::vector<std::optional<ChannelRange>>& linear_bounds = {});

/// HSV noise with sigma in unit-interval units: hue wrapped modulo 1, s and v clamped to [0, 1].
HsvImage add_hsv_noise(const HsvImage& img, double sigma, std::uint64_t seed);

// --- metrics --------------------------------------------------------------------

/// 10 log10(peak^2 / MSE) over paired samples; +infinity when identical.
double psnr(const std::vector<double>& x, const std::vector<double>& ref, double peak);
/// Peak 1, MSE averaged over all channels and pixels.
double psnr(const RgbImage& x, const RgbImage& ref);
/// PSNR on product images from per-component distances, arc length for cyclic ones.
/// Angle data is compared with peak pi, the largest arc length.
double psnr_product(const ProductImage& x, const ProductImage& ref, double peak);

/// Mean SSIM of one plane over valid 11x11 Gaussian windows (sigma 1.5), peak 1.
double ssim_plane(const std::vector<double>& x, const std::vector<double>& ref, std::size_t width,
                  std::size_t height);
/// Channel average of ssim_plane. Throws InvalidArgument if a side is below 11.
double ssim(const RgbImage& x, const RgbImage& ref);

// --- synthetic data -------------------------------------------------------------

/// Cell-center coordinate in [-1/2, 1/2] of index i out of npix.
double grid_coordinate(std::size_t i, std::size_t npix) noexcept;

/// Hue atan2(x, y) / 2pi mod 1, saturation 1 - x^2, value 1 - |x + y|, with x along
/// columns and y along rows.
HsvImage make_synthetic(std::size_t npix);

/// True where x^2 + y^2 < radius^2. Throws for radius outside (0, sqrt(2)/2).
InpaintMask make_disc_mask(std::size_t npix, double radius);

/// Signature (1, 0) frames t = -(frames-1)/2 .. (frames-1)/2. Inside the disc of radius 1/2
/// the value is atan2 at input coordinates rotated by t pi/12; outside it is atan2 at
/// coordinates rotated by -t pi/12, plus pi/4.
std::vector<ProductImage> make_rotation_video(std::size_t npix, std::size_t frames = 13);

/// Per-pixel concatenation of frames k-l .. k+l: all cyclic components (frame by frame),
/// then all linear components.
ProductImage stack_frames(const std::vector<ProductImage>& video, std::size_t k, std::size_t l);
/// Splits a stacked image back into its 2l+1 frames.
std::vector<ProductImage> unstack_frames(const ProductImage& stacked, std::size_t l);

}  // namespace ctv
