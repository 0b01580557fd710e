#include "ctv/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ctv/errors.hpp"

namespace ctv {

namespace {

double clamp01(double v) noexcept { return std::clamp(v, 0.0, 1.0); }

double mod1(double v) noexcept {
    double r = v - std::floor(v);
    if (r >= 1.0) {
        r = 0.0;
    }
    return r;
}

void require_same_size(const ColorImage& a, const ColorImage& b, const char* what) {
    if (a.width != b.width || a.height != b.height || a.data.size() != b.data.size()) {
        throw DimensionMismatch(std::string(what) + ": image sizes differ");
    }
}

}  // namespace

Hsv rgb_to_hsv(Rgb c) noexcept {
    const double r = clamp01(c.r);
    const double g = clamp01(c.g);
    const double b = clamp01(c.b);
    const double hi = std::max({r, g, b});
    const double lo = std::min({r, g, b});
    const double delta = hi - lo;
    Hsv out;
    out.v = hi;
    out.s = hi > 0.0 ? delta / hi : 0.0;
    if (delta > 0.0) {
        double h = 0.0;
        if (hi == r) {
            h = (g - b) / delta;
            if (h < 0.0) {
                h += 6.0;
            }
        } else if (hi == g) {
            h = (b - r) / delta + 2.0;
        } else {
            h = (r - g) / delta + 4.0;
        }
        out.h = mod1(h / 6.0);
    }
    return out;
}

Rgb hsv_to_rgb(Hsv c) noexcept {
    const double h = mod1(c.h);
    const double s = clamp01(c.s);
    const double v = clamp01(c.v);
    const double h6 = h * 6.0;
    const double sector = std::floor(h6);
    const double f = h6 - sector;
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (static_cast<int>(sector) % 6) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

HsvImage rgb_to_hsv(const RgbImage& img) {
    HsvImage out(img.width, img.height);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const Hsv c = rgb_to_hsv(Rgb{img.at(p, 0), img.at(p, 1), img.at(p, 2)});
        out.at(p, 0) = c.h;
        out.at(p, 1) = c.s;
        out.at(p, 2) = c.v;
    }
    return out;
}

RgbImage hsv_to_rgb(const HsvImage& img) {
    RgbImage out(img.width, img.height);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const Rgb c = hsv_to_rgb(Hsv{img.at(p, 0), img.at(p, 1), img.at(p, 2)});
        out.at(p, 0) = c.r;
        out.at(p, 1) = c.g;
        out.at(p, 2) = c.b;
    }
    return out;
}

ProductImage hsv_to_product(const HsvImage& img) {
    ProductImage out(img.width, img.height, Signature{1, 2});
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        auto px = out.at(p);
        px[0] = wrap(kUnitToRadians * img.at(p, 0));
        px[1] = kUnitToRadians * img.at(p, 1);
        px[2] = kUnitToRadians * img.at(p, 2);
    }
    return out;
}

HsvImage product_to_hsv(const ProductImage& img) {
    if (img.signature() != Signature{1, 2}) {
        throw DimensionMismatch("product_to_hsv: expected signature (1, 2)");
    }
    HsvImage out(img.width(), img.height());
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        const auto px = img.at(p);
        out.at(p, 0) = mod1(px[0] / kUnitToRadians);
        out.at(p, 1) = clamp01(px[1] / kUnitToRadians);
        out.at(p, 2) = clamp01(px[2] / kUnitToRadians);
    }
    return out;
}

ProductImage rgb_to_product(const RgbImage& img) {
    return {img.width, img.height, Signature{0, 3}, img.data};
}

RgbImage product_to_rgb(const ProductImage& img) {
    if (img.signature() != Signature{0, 3}) {
        throw DimensionMismatch("product_to_rgb: expected signature (0, 3)");
    }
    RgbImage out(img.width(), img.height());
    for (std::size_t k = 0; k < out.data.size(); ++k) {
        out.data[k] = clamp01(img.values()[k]);
    }
    return out;
}

ProductImage channel_to_product(const ColorImage& img, std::size_t c, bool cyclic) {
    ProductImage out(img.width, img.height, cyclic ? Signature{1, 0} : Signature{0, 1});
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        out.at(p)[0] = cyclic ? wrap(kUnitToRadians * img.at(p, c)) : img.at(p, c);
    }
    return out;
}

void product_to_channel(const ProductImage& src, ColorImage& dst, std::size_t c, bool cyclic) {
    if (src.width() != dst.width || src.height() != dst.height || src.stride() != 1) {
        throw DimensionMismatch("product_to_channel: expected a single-component image of the same size");
    }
    for (std::size_t p = 0; p < src.pixel_count(); ++p) {
        const double v = src.at(p)[0];
        dst.at(p, c) = cyclic ? mod1(v / kUnitToRadians) : clamp01(v);
    }
}

// ---------------------------------------------------------------------------

GaussianSource::GaussianSource(std::uint64_t seed) : engine_(seed) {}

double GaussianSource::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    // Uniforms in (0, 1] from the top 53 bits.
    auto uniform = [this]() { return (static_cast<double>(engine_() >> 11U) + 1.0) * 0x1.0p-53; };
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

ProductImage add_wrapped_gaussian(const ProductImage& img, double sigma, std::uint64_t seed,
                                  const std::vector<std::optional<ChannelRange>>& linear_bounds) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("add_wrapped_gaussian: sigma must be finite and nonnegative");
    }
    const Signature sig = img.signature();
    if (!linear_bounds.empty() && linear_bounds.size() != sig.linear) {
        throw DimensionMismatch("add_wrapped_gaussian: one bound entry per linear component expected");
    }
    ProductImage out = img;
    if (sigma == 0.0) {
        return out;
    }
    GaussianSource noise(seed);
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        auto px = out.at(p);
        for (std::size_t c = 0; c < sig.size(); ++c) {
            const double v = px[c] + sigma * noise.next();
            if (c < sig.cyclic) {
                px[c] = wrap(v);
            } else if (!linear_bounds.empty() && linear_bounds[c - sig.cyclic]) {
                const auto& r = *linear_bounds[c - sig.cyclic];
                px[c] = std::clamp(v, r.lo, r.hi);
            } else {
                px[c] = v;
            }
        }
    }
    return out;
}

HsvImage add_hsv_noise(const HsvImage& img, double sigma, std::uint64_t seed) {
    const ChannelRange range{0.0, kUnitToRadians};
    const auto noisy = add_wrapped_gaussian(hsv_to_product(img), kUnitToRadians * sigma, seed, {range, range});
    return product_to_hsv(noisy);
}

// ---------------------------------------------------------------------------

double psnr(const std::vector<double>& x, const std::vector<double>& ref, double peak) {
    if (x.size() != ref.size() || x.empty()) {
        throw DimensionMismatch("psnr: sample counts differ or are zero");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - ref[k];
        sum += d * d;
    }
    if (sum == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double mse = sum / static_cast<double>(x.size());
    return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const RgbImage& x, const RgbImage& ref) {
    require_same_size(x, ref, "psnr");
    return psnr(x.data, ref.data, 1.0);
}

double psnr_product(const ProductImage& x, const ProductImage& ref, double peak) {
    if (!x.same_shape(ref)) {
        throw DimensionMismatch("psnr_product: shapes or signatures differ");
    }
    const Signature sig = x.signature();
    double sum = 0.0;
    for (std::size_t p = 0; p < x.pixel_count(); ++p) {
        sum += dist_product_sq_raw(sig, x.at(p).data(), ref.at(p).data());
    }
    if (sum == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double mse = sum / static_cast<double>(x.values().size());
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

constexpr std::size_t kWindow = 11;

std::array<double, kWindow * kWindow> gaussian_window() {
    std::array<double, kWindow> g{};
    double total = 0.0;
    for (std::size_t k = 0; k < kWindow; ++k) {
        const double d = static_cast<double>(k) - 5.0;
        g[k] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        total += g[k];
    }
    std::array<double, kWindow * kWindow> w{};
    for (std::size_t a = 0; a < kWindow; ++a) {
        for (std::size_t b = 0; b < kWindow; ++b) {
            w[a * kWindow + b] = g[a] * g[b] / (total * total);
        }
    }
    return w;
}

}  // namespace

double ssim_plane(const std::vector<double>& x, const std::vector<double>& ref, std::size_t width,
                  std::size_t height) {
    if (width < kWindow || height < kWindow) {
        throw InvalidArgument("ssim: both sides must be at least 11 pixels");
    }
    if (x.size() != width * height || ref.size() != x.size()) {
        throw DimensionMismatch("ssim: plane sizes differ");
    }
    static const auto w = gaussian_window();
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t j0 = 0; j0 + kWindow <= height; ++j0) {
        for (std::size_t i0 = 0; i0 + kWindow <= width; ++i0) {
            double mx = 0.0;
            double my = 0.0;
            double sxx = 0.0;
            double syy = 0.0;
            double sxy = 0.0;
            for (std::size_t a = 0; a < kWindow; ++a) {
                for (std::size_t b = 0; b < kWindow; ++b) {
                    const double wt = w[a * kWindow + b];
                    const std::size_t p = (j0 + a) * width + i0 + b;
                    mx += wt * x[p];
                    my += wt * ref[p];
                    sxx += wt * x[p] * x[p];
                    syy += wt * ref[p] * ref[p];
                    sxy += wt * x[p] * ref[p];
                }
            }
            const double vx = sxx - mx * mx;
            const double vy = syy - my * my;
            const double cov = sxy - mx * my;
            total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    }
    return total / static_cast<double>(count);
}

double ssim(const RgbImage& x, const RgbImage& ref) {
    require_same_size(x, ref, "ssim");
    double total = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<double> px(x.pixel_count());
        std::vector<double> pr(x.pixel_count());
        for (std::size_t p = 0; p < px.size(); ++p) {
            px[p] = x.at(p, c);
            pr[p] = ref.at(p, c);
        }
        total += ssim_plane(px, pr, x.width, x.height);
    }
    return total / 3.0;
}

// ---------------------------------------------------------------------------

double grid_coordinate(std::size_t i, std::size_t npix) noexcept {
    return -0.5 + (static_cast<double>(i) + 0.5) / static_cast<double>(npix);
}

HsvImage make_synthetic(std::size_t npix) {
    if (npix < 2) {
        throw InvalidArgument("make_synthetic: need at least 2 pixels per side");
    }
    HsvImage out(npix, npix);
    for (std::size_t j = 0; j < npix; ++j) {
        const double y = grid_coordinate(j, npix);
        for (std::size_t i = 0; i < npix; ++i) {
            const double x = grid_coordinate(i, npix);
            const std::size_t p = j * npix + i;
            out.at(p, 0) = mod1(std::atan2(x, y) / kTwoPi);
            out.at(p, 1) = 1.0 - x * x;
            out.at(p, 2) = 1.0 - std::abs(x + y);
        }
    }
    return out;
}

InpaintMask make_disc_mask(std::size_t npix, double radius) {
    if (!(radius > 0.0) || radius >= 0.5 * std::sqrt(2.0)) {
        throw InvalidArgument("make_disc_mask: radius must lie in (0, sqrt(2)/2)");
    }
    InpaintMask mask(npix, npix);
    for (std::size_t j = 0; j < npix; ++j) {
        const double y = grid_coordinate(j, npix);
        for (std::size_t i = 0; i < npix; ++i) {
            const double x = grid_coordinate(i, npix);
            mask.set(i, j, x * x + y * y < radius * radius);
        }
    }
    return mask;
}

std::vector<ProductImage> make_rotation_video(std::size_t npix, std::size_t frames) {
    if (frames % 2 == 0) {
        throw InvalidArgument("make_rotation_video: frame count must be odd");
    }
    if (npix < 1) {
        throw InvalidArgument("make_rotation_video: empty frame");
    }
    const auto half = static_cast<long>(frames / 2);
    std::vector<ProductImage> video;
    for (long t = -half; t <= half; ++t) {
        ProductImage frame(npix, npix, Signature{1, 0});
        const double step = static_cast<double>(t) * kPi / 12.0;
        for (std::size_t j = 0; j < npix; ++j) {
            const double y = grid_coordinate(j, npix);
            for (std::size_t i = 0; i < npix; ++i) {
                const double x = grid_coordinate(i, npix);
                const bool inside = x * x + y * y < 0.25;
                const double theta = inside ? step : -step;
                const double xr = std::cos(theta) * x - std::sin(theta) * y;
                const double yr = std::sin(theta) * x + std::cos(theta) * y;
                frame.at(i, j)[0] = wrap(std::atan2(xr, yr) + (inside ? 0.0 : kPi / 4.0));
            }
        }
        video.push_back(std::move(frame));
    }
    return video;
}

ProductImage stack_frames(const std::vector<ProductImage>& video, std::size_t k, std::size_t l) {
    if (k < l || k + l >= video.size()) {
        throw InvalidArgument("stack_frames: window " + std::to_string(k) + " +- " + std::to_string(l) +
                              " does not fit " + std::to_string(video.size()) + " frames");
    }
    const ProductImage& ref = video[k];
    for (std::size_t h = k - l; h <= k + l; ++h) {
        if (!video[h].same_shape(ref)) {
            throw DimensionMismatch("stack_frames: frames differ in shape or signature");
        }
    }
    const Signature sig = ref.signature();
    const std::size_t count = 2 * l + 1;
    const Signature stacked{sig.cyclic * count, sig.linear * count};
    ProductImage out(ref.width(), ref.height(), stacked);
    for (std::size_t p = 0; p < ref.pixel_count(); ++p) {
        auto dst = out.at(p);
        for (std::size_t f = 0; f < count; ++f) {
            const auto src = video[k - l + f].at(p);
            for (std::size_t c = 0; c < sig.cyclic; ++c) {
                dst[f * sig.cyclic + c] = src[c];
            }
            for (std::size_t c = 0; c < sig.linear; ++c) {
                dst[stacked.cyclic + f * sig.linear + c] = src[sig.cyclic + c];
            }
        }
    }
    return out;
}

std::vector<ProductImage> unstack_frames(const ProductImage& stacked, std::size_t l) {
    const std::size_t count = 2 * l + 1;
    const Signature s = stacked.signature();
    if (s.cyclic % count != 0 || s.linear % count != 0) {
        throw DimensionMismatch("unstack_frames: signature is not a multiple of the window length");
    }
    const Signature sig{s.cyclic / count, s.linear / count};
    std::vector<ProductImage> frames(count, ProductImage(stacked.width(), stacked.height(), sig));
    for (std::size_t p = 0; p < stacked.pixel_count(); ++p) {
        const auto src = stacked.at(p);
        for (std::size_t f = 0; f < count; ++f) {
            auto dst = frames[f].at(p);
            for (std::size_t c = 0; c < sig.cyclic; ++c) {
                dst[c] = src[f * sig.cyclic + c];
            }
            for (std::size_t c = 0; c < sig.linear; ++c) {
                dst[sig.cyclic + c] = src[s.cyclic + f * sig.linear + c];
            }
        }
    }
    return frames;
}

}  // namespace ctv
