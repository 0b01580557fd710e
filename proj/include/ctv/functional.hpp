#pragma once

// Model functionals on product-space images and the nearness diagnostics of
// the observed data.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ctv/image.hpp"

namespace ctv {

/// Regularization weights. alpha: horizontal, vertical, diagonal, antidiagonal first
/// differences; beta: horizontal, vertical second differences; gamma: mixed differences.
struct RegParams {
    std::array<double, 4> alpha{};
    std::array<double, 2> beta{};
    double gamma = 0.0;

    /// Throws InvalidArgument for negative or non-finite entries.
    void validate() const;
    [[nodiscard]] bool all_zero() const noexcept;

    friend bool operator==(const RegParams&, const RegParams&) = default;
};

enum class Mode { Denoise, InpaintNoiseless, InpaintNoisy };

const char* to_string(Mode mode) noexcept;
/// Accepts "denoise", "inpaint-noiseless", "inpaint-noisy".
Mode mode_from_string(const std::string& name);

double eval_tv1(const ProductImage& x, const std::array<double, 4>& alpha);
double eval_tv2(const ProductImage& x, const std::array<double, 2>& beta);
double eval_tv11(const ProductImage& x, double gamma);

/// 1/2 sum of squared distances over the pixels where `include` is true.
double eval_data(const ProductImage& x, const ProductImage& f, const std::vector<bool>& include);
/// Data term over every pixel.
double eval_data(const ProductImage& x, const ProductImage& f);
/// Data term over the known pixels of mask.
double eval_data_known(const ProductImage& x, const ProductImage& f, const InpaintMask& mask);

/// Denoise: data term over all pixels plus regularizers, mask ignored.
/// InpaintNoiseless: regularizers only; throws Infeasible if x differs from f on a known pixel.
/// InpaintNoisy: data term over the known pixels plus regularizers.
double eval_objective(const ProductImage& x, const ProductImage& f, const InpaintMask& mask,
                      const RegParams& params, Mode mode);

// --- grid metric ------------------------------------------------------------

/// Length a + b*sqrt(2) of a shortest eight-neighborhood path: a straight steps, b diagonal steps.
struct GridDistance {
    long straight = 0;
    long diagonal = 0;

    [[nodiscard]] double value() const noexcept;
    /// Exact comparison of a + b*sqrt(2) values.
    friend bool operator<(GridDistance x, GridDistance y) noexcept;
    friend bool operator==(GridDistance, GridDistance) = default;
    friend GridDistance operator+(GridDistance x, GridDistance y) noexcept {
        return {x.straight + y.straight, x.diagonal + y.diagonal};
    }
};

/// Closed form of the shortest-path distance between pixels (i1, j1) and (i2, j2).
GridDistance grid_distance(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) noexcept;

/// For every pixel, the known pixel nearest in grid distance; ties go to the smaller flat
/// index. Known pixels map to themselves. Throws DataError if every pixel is missing.
std::vector<std::size_t> nearest_known(const InpaintMask& mask);

/// Copies each missing pixel from its nearest known pixel.
ProductImage extend_nearest(const ProductImage& f, const InpaintMask& mask);

// --- nearness diagnostics -----------------------------------------------------

/// Default ball radii around known pixels: sqrt(2) + R_p + R, where R_p is the largest
/// grid distance from p to a missing pixel assigned to p by nearest_known and R the
/// maximum of R_p. The induced graph is then connected; with no missing pixels every
/// ball is the eight-neighborhood. Entries for missing pixels are 0.
std::vector<double> default_covering_radii(const InpaintMask& mask);

/// Max over known pixels p of the largest cyclic-part distance to known pixels in the
/// ball of radius radii[p]. Throws DataError if the induced graph is disconnected.
double diag_dinf(const ProductImage& f, const InpaintMask& mask, const std::vector<double>& radii);
double diag_dinf(const ProductImage& f, const InpaintMask& mask);

/// Sum over known pixels of the largest cyclic-part distance to a known eight-neighbor.
double diag_d1(const ProductImage& f, const InpaintMask& mask);

}  // namespace ctv
