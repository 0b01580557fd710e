#include "ctv/image.hpp"

#include <algorithm>
#include <string>

#include "ctv/errors.hpp"

namespace ctv {

ProductImage::ProductImage(std::size_t width, std::size_t height, Signature sig)
    : width_(width), height_(height), sig_(sig), data_(width * height * sig.size(), 0.0) {
    if (width == 0 || height == 0) {
        throw InvalidArgument("ProductImage: width and height must be positive");
    }
    if (sig.size() == 0) {
        throw InvalidArgument("ProductImage: signature must have at least one component");
    }
}

ProductImage::ProductImage(std::size_t width, std::size_t height, Signature sig, std::vector<double> values)
    : ProductImage(width, height, sig) {
    if (values.size() != data_.size()) {
        throw DimensionMismatch("ProductImage: expected " + std::to_string(data_.size()) + " values, got " +
                                std::to_string(values.size()));
    }
    data_ = std::move(values);
    const std::size_t s = stride();
    for (std::size_t p = 0; p < pixel_count(); ++p) {
        for (std::size_t c = 0; c < sig_.cyclic; ++c) {
            data_[p * s + c] = wrap(data_[p * s + c]);
        }
    }
}

PixelValue ProductImage::pixel(std::size_t i, std::size_t j) const {
    return PixelValue::from_raw(sig_, at(i, j));
}

void ProductImage::set_pixel(std::size_t i, std::size_t j, const PixelValue& v) {
    if (v.signature() != sig_) {
        throw DimensionMismatch("ProductImage::set_pixel: signature mismatch");
    }
    const auto raw = v.raw();
    std::copy(raw.begin(), raw.end(), at(i, j).begin());
}

std::vector<double> ProductImage::plane(std::size_t c) const {
    std::vector<double> out(pixel_count());
    for (std::size_t p = 0; p < out.size(); ++p) {
        out[p] = data_[p * stride() + c];
    }
    return out;
}

std::size_t InpaintMask::missing_count() const noexcept {
    return static_cast<std::size_t>(std::count(region_.begin(), region_.end(), std::uint8_t{1}));
}

}  // namespace ctv
