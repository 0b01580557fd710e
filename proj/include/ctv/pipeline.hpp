#pragma once

// Restoration pipelines for color images and videos, and parameter grid search.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ctv/cppa.hpp"
#include "ctv/imaging.hpp"

namespace ctv {

enum class ColorModel { Rgb, RgbChannelwise, Hsv, HsvChannelwise };

const char* to_string(ColorModel model) noexcept;
/// Accepts "rgb", "rgb-channelwise", "hsv", "hsv-channelwise".
ColorModel color_model_from_string(const std::string& name);

/// An observation kept in the space it was produced in; the other one is derived, so noise
/// drawn in HSV reaches the HSV models untouched.
struct ColorObservation {
    RgbImage rgb;
    HsvImage hsv;

    static ColorObservation from_rgb(const RgbImage& rgb);
    static ColorObservation from_hsv(const HsvImage& hsv);
};

/// RegParams multiplied by c; used to move unit-interval parameters onto the radian scale.
RegParams scaled(const RegParams& params, double c);

/// Restores a color observation with one model; cfg.params are in unit-interval units. HSV
/// models run on radians (all channels times 2 pi, parameters likewise), which yields the
/// same minimizers as working modulo 1. Channelwise models run one solve per channel.
/// Reports of the individual solves are appended to `reports` when given.
RgbImage restore_color(const ColorObservation& obs, const InpaintMask& mask, ColorModel model,
                       const SolverConfig& cfg, std::vector<SolveReport>* reports = nullptr);

/// Denoises frame k of a video with the window k-l .. k+l stacked into one product image,
/// shrinking l symmetrically near either end. Returns the restored frame k.
ProductImage denoise_video_frame(const std::vector<ProductImage>& video, std::size_t k, std::size_t l,
                                 const SolverConfig& cfg, SolveReport* report = nullptr);

/// Grid over alpha = alpha1 = alpha2 and beta = beta1 = beta2 = gamma, multiples of the step
/// up to the maximum (inclusive, within 1e-9).
struct GridSpec {
    double alpha_step = 1.0 / 32.0;
    double alpha_max = 0.25;
    double beta_step = 1.0 / 32.0;
    double beta_max = 0.25;
    /// Also set alpha3 = alpha4 = alpha; off keeps the diagonal terms at zero.
    bool couple_diagonals = false;
    /// Skip the all-zero cell.
    bool skip_zero = true;
};

struct GridCell {
    double alpha = 0.0;
    double beta = 0.0;
    double score = 0.0;
};

struct GridResult {
    std::vector<GridCell> cells;  ///< in enumeration order: alpha outer, beta inner
    GridCell best;                ///< highest score; the first one on ties
};

/// Parameters of one grid cell.
RegParams grid_params(const GridSpec& spec, double alpha, double beta);

/// Enumerated (alpha, beta) pairs. Throws InvalidArgument for an empty grid.
std::vector<std::pair<double, double>> grid_points(const GridSpec& spec);

/// Scores every cell (higher is better); cells run in parallel and do not share state.
GridResult grid_search(const GridSpec& spec, const std::function<double(const RegParams&)>& score);

}  // namespace ctv
