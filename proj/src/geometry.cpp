#include "ctv/geometry.hpp"

#include <cmath>
#include <string>

#include "ctv/errors.hpp"

namespace ctv {

double wrap(double v) {
    if (!std::isfinite(v)) {
        throw InvalidArgument("wrap: non-finite input " + std::to_string(v));
    }
    return wrap_unchecked(v);
}

bool is_seam(double v) noexcept {
    if (!std::isfinite(v)) {
        return false;
    }
    return std::abs(std::abs(wrap_unchecked(v)) - kPi) <= kSeamTolerance;
}

std::vector<double> wrap_multi(double v) {
    const double r = wrap(v);
    if (is_seam(r)) {
        return {-kPi, kPi};
    }
    return {r};
}

double dist_circle(Angle p, Angle q) {
    return std::abs(wrap_unchecked(p.value() - q.value()));
}

PixelValue PixelValue::from_raw(Signature sig, std::span<const double> raw) {
    if (raw.size() != sig.size()) {
        throw DimensionMismatch("PixelValue::from_raw: expected " + std::to_string(sig.size()) +
                                " components, got " + std::to_string(raw.size()));
    }
    PixelValue p;
    p.cyclic.reserve(sig.cyclic);
    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        p.cyclic.emplace_back(raw[c]);
    }
    p.linear.assign(raw.begin() + static_cast<std::ptrdiff_t>(sig.cyclic), raw.end());
    return p;
}

std::vector<double> PixelValue::raw() const {
    std::vector<double> out;
    out.reserve(cyclic.size() + linear.size());
    for (const Angle a : cyclic) {
        out.push_back(a.value());
    }
    out.insert(out.end(), linear.begin(), linear.end());
    return out;
}

namespace {

void require_same_signature(const PixelValue& x, const PixelValue& y, const char* op) {
    if (x.signature() != y.signature()) {
        throw DimensionMismatch(std::string(op) + ": signature mismatch (" +
                                std::to_string(x.cyclic.size()) + "," + std::to_string(x.linear.size()) +
                                ") vs (" + std::to_string(y.cyclic.size()) + "," +
                                std::to_string(y.linear.size()) + ")");
    }
}

}  // namespace

double dist_product(const PixelValue& x, const PixelValue& y) {
    require_same_signature(x, y, "dist_product");
    double sum = 0.0;
    for (std::size_t c = 0; c < x.cyclic.size(); ++c) {
        const double d = dist_circle(x.cyclic[c], y.cyclic[c]);
        sum += d * d;
    }
    for (std::size_t c = 0; c < x.linear.size(); ++c) {
        const double d = x.linear[c] - y.linear[c];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double dist_cyclic_part(const PixelValue& x, const PixelValue& y) {
    require_same_signature(x, y, "dist_cyclic_part");
    double sum = 0.0;
    for (std::size_t c = 0; c < x.cyclic.size(); ++c) {
        const double d = dist_circle(x.cyclic[c], y.cyclic[c]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

double dist_product_sq_raw(Signature sig, const double* x, const double* y) noexcept {
    double sum = 0.0;
    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        const double d = wrap_unchecked(x[c] - y[c]);
        sum += d * d;
    }
    for (std::size_t c = sig.cyclic; c < sig.size(); ++c) {
        const double d = x[c] - y[c];
        sum += d * d;
    }
    return sum;
}

double dist_cyclic_raw(Signature sig, const double* x, const double* y) noexcept {
    double sum = 0.0;
    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        const double d = wrap_unchecked(x[c] - y[c]);
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace ctv
