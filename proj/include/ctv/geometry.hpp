#pragma once

// Circle arithmetic and distances on the product space (S^1)^m x R^n.
//
// Angles are represented in the half-open interval [-pi, pi). The seam
// convention maps +pi to -pi.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace ctv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Absolute tolerance used to detect odd multiples of pi.
inline constexpr double kSeamTolerance = 1e-12;

/// Returns the representative of v modulo 2*pi in [-pi, pi).
/// Throws InvalidArgument for non-finite v.
double wrap(double v);

/// Same as wrap() without the finiteness check, for inner loops.
inline double wrap_unchecked(double v) noexcept;

/// True when v is an odd multiple of pi up to kSeamTolerance.
bool is_seam(double v) noexcept;

/// Multivalued bracket: {wrap(v)} in the generic case, {-pi, +pi} when v sits
/// on the seam. The +pi entry is a branch label and not a valid Angle.
std::vector<double> wrap_multi(double v);

/// Angle in [-pi, pi); construction wraps.
class Angle {
public:
    constexpr Angle() = default;
    explicit Angle(double radians) : value_(wrap(radians)) {}

    [[nodiscard]] constexpr double value() const noexcept { return value_; }
    constexpr explicit operator double() const noexcept { return value_; }

    friend constexpr bool operator==(Angle, Angle) = default;

private:
    double value_ = 0.0;
};

/// Arc length distance |wrap(p - q)| in [0, pi].
double dist_circle(Angle p, Angle q);

/// Number of cyclic (m) and linear (n) components per pixel.
struct Signature {
    std::size_t cyclic = 0;
    std::size_t linear = 0;

    [[nodiscard]] constexpr std::size_t size() const noexcept { return cyclic + linear; }
    friend constexpr bool operator==(Signature, Signature) = default;
};

/// One point of (S^1)^m x R^n.
struct PixelValue {
    std::vector<Angle> cyclic;
    std::vector<double> linear;

    PixelValue() = default;
    PixelValue(std::vector<Angle> c, std::vector<double> l)
        : cyclic(std::move(c)), linear(std::move(l)) {}

    /// Builds a pixel from raw values; the first sig.cyclic entries are wrapped.
    static PixelValue from_raw(Signature sig, std::span<const double> raw);

    [[nodiscard]] Signature signature() const noexcept { return {cyclic.size(), linear.size()}; }

    /// Cyclic values followed by linear values.
    [[nodiscard]] std::vector<double> raw() const;

    friend bool operator==(const PixelValue&, const PixelValue&) = default;
};

/// Product-space distance sqrt(|x_R - y_R|^2 + d_{(S^1)^m}(x_S, y_S)^2).
double dist_product(const PixelValue& x, const PixelValue& y);

/// Distance restricted to the cyclic components; 0 when m = 0.
double dist_cyclic_part(const PixelValue& x, const PixelValue& y);

/// Squared product distance on raw component arrays laid out as [cyclic..., linear...].
double dist_product_sq_raw(Signature sig, const double* x, const double* y) noexcept;

/// Cyclic-part distance on raw component arrays.
double dist_cyclic_raw(Signature sig, const double* x, const double* y) noexcept;

// ---------------------------------------------------------------------------

inline double wrap_unchecked(double v) noexcept {
    if (v >= -kPi && v < kPi) {
        return v;
    }
    double r = v - kTwoPi * std::floor((v + kPi) / kTwoPi);
    // Rounding in the subtraction can land exactly on either end.
    if (r >= kPi) {
        r -= kTwoPi;
    }
    if (r < -kPi) {
        r += kTwoPi;
    }
    return r;
}

}  // namespace ctv
