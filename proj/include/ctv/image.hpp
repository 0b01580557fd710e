#pragma once

// Grids of product-space pixels and inpainting masks.
//
// Pixel (i, j) has column i in [0, width) and row j in [0, height); the flat
// index is j * width + i. Horizontal differences vary i, vertical ones vary j.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctv/geometry.hpp"

namespace ctv {

class ProductImage {
public:
    ProductImage() = default;

    /// Image with every component zero.
    ProductImage(std::size_t width, std::size_t height, Signature sig);

    /// Takes interleaved raw values (pixel-major, sig.size() per pixel); cyclic entries are wrapped.
    ProductImage(std::size_t width, std::size_t height, Signature sig, std::vector<double> values);

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }
    [[nodiscard]] std::size_t pixel_count() const noexcept { return width_ * height_; }
    [[nodiscard]] Signature signature() const noexcept { return sig_; }
    [[nodiscard]] std::size_t stride() const noexcept { return sig_.size(); }

    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * width_ + i; }

    [[nodiscard]] std::span<double> at(std::size_t p) noexcept {
        return {data_.data() + p * stride(), stride()};
    }
    [[nodiscard]] std::span<const double> at(std::size_t p) const noexcept {
        return {data_.data() + p * stride(), stride()};
    }
    [[nodiscard]] std::span<double> at(std::size_t i, std::size_t j) noexcept { return at(index(i, j)); }
    [[nodiscard]] std::span<const double> at(std::size_t i, std::size_t j) const noexcept {
        return at(index(i, j));
    }

    [[nodiscard]] PixelValue pixel(std::size_t i, std::size_t j) const;
    void set_pixel(std::size_t i, std::size_t j, const PixelValue& v);

    [[nodiscard]] double* raw_data() noexcept { return data_.data(); }
    [[nodiscard]] const double* raw_data() const noexcept { return data_.data(); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }

    /// Single component plane c as a width*height vector.
    [[nodiscard]] std::vector<double> plane(std::size_t c) const;

    [[nodiscard]] bool same_shape(const ProductImage& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_ && sig_ == other.sig_;
    }

    friend bool operator==(const ProductImage&, const ProductImage&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    Signature sig_{};
    std::vector<double> data_;
};

/// Marks the inpainting region: true = missing pixel.
class InpaintMask {
public:
    InpaintMask() = default;
    InpaintMask(std::size_t width, std::size_t height, bool value = false)
        : width_(width), height_(height), region_(width * height, value ? 1 : 0) {}

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t height() const noexcept { return height_; }

    [[nodiscard]] bool missing(std::size_t p) const noexcept { return region_[p] != 0; }
    [[nodiscard]] bool missing(std::size_t i, std::size_t j) const noexcept {
        return region_[j * width_ + i] != 0;
    }
    void set(std::size_t i, std::size_t j, bool value) noexcept { region_[j * width_ + i] = value ? 1 : 0; }
    void set(std::size_t p, bool value) noexcept { region_[p] = value ? 1 : 0; }

    [[nodiscard]] std::size_t missing_count() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return missing_count() == 0; }
    [[nodiscard]] bool matches(const ProductImage& img) const noexcept {
        return width_ == img.width() && height_ == img.height();
    }

    friend bool operator==(const InpaintMask&, const InpaintMask&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<std::uint8_t> region_;
};

}  // namespace ctv
