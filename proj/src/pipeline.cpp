#include "ctv/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "ctv/errors.hpp"

namespace ctv {

const char* to_string(ColorModel model) noexcept {
    switch (model) {
        case ColorModel::Rgb: return "rgb";
        case ColorModel::RgbChannelwise: return "rgb-channelwise";
        case ColorModel::Hsv: return "hsv";
        case ColorModel::HsvChannelwise: return "hsv-channelwise";
    }
    return "?";
}

ColorModel color_model_from_string(const std::string& name) {
    for (const auto m : {ColorModel::Rgb, ColorModel::RgbChannelwise, ColorModel::Hsv, ColorModel::HsvChannelwise}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    throw InvalidArgument("unknown color model '" + name + "'");
}

ColorObservation ColorObservation::from_rgb(const RgbImage& rgb) { return {rgb, rgb_to_hsv(rgb)}; }

ColorObservation ColorObservation::from_hsv(const HsvImage& hsv) { return {hsv_to_rgb(hsv), hsv}; }

RegParams scaled(const RegParams& params, double c) {
    RegParams out = params;
    for (auto& a : out.alpha) {
        a *= c;
    }
    for (auto& b : out.beta) {
        b *= c;
    }
    out.gamma *= c;
    return out;
}

RgbImage restore_color(const ColorObservation& obs, const InpaintMask& mask, ColorModel model,
                       const SolverConfig& cfg, std::vector<SolveReport>* reports) {
    auto run = [&](const ProductImage& f, const SolverConfig& c) {
        SolveReport r = solve(f, mask, c);
        ProductImage out = r.result;
        if (reports != nullptr) {
            reports->push_back(std::move(r));
        }
        return out;
    };
    SolverConfig radian_cfg = cfg;
    radian_cfg.params = scaled(cfg.params, kUnitToRadians);

    switch (model) {
        case ColorModel::Rgb: return product_to_rgb(run(rgb_to_product(obs.rgb), cfg));
        case ColorModel::RgbChannelwise: {
            RgbImage out(obs.rgb.width, obs.rgb.height);
            for (std::size_t c = 0; c < 3; ++c) {
                product_to_channel(run(channel_to_product(obs.rgb, c, false), cfg), out, c, false);
            }
            return out;
        }
        case ColorModel::Hsv: return hsv_to_rgb(product_to_hsv(run(hsv_to_product(obs.hsv), radian_cfg)));
        case ColorModel::HsvChannelwise: {
            HsvImage out(obs.hsv.width, obs.hsv.height);
            for (std::size_t c = 0; c < 3; ++c) {
                // Saturation and value are scaled like the hue so one parameter set serves all three.
                ProductImage channel = channel_to_product(obs.hsv, c, c == 0);
                if (c > 0) {
                    for (std::size_t p = 0; p < channel.pixel_count(); ++p) {
                        channel.at(p)[0] *= kUnitToRadians;
                    }
                }
                ProductImage restored = run(channel, radian_cfg);
                if (c > 0) {
                    for (std::size_t p = 0; p < restored.pixel_count(); ++p) {
                        restored.at(p)[0] /= kUnitToRadians;
                    }
                }
                product_to_channel(restored, out, c, c == 0);
            }
            return hsv_to_rgb(out);
        }
    }
    throw InvalidArgument("restore_color: unknown model");
}

ProductImage denoise_video_frame(const std::vector<ProductImage>& video, std::size_t k, std::size_t l,
                                 const SolverConfig& cfg, SolveReport* report) {
    if (k >= video.size()) {
        throw InvalidArgument("denoise_video_frame: frame index out of range");
    }
    const std::size_t window = std::min({l, k, video.size() - 1 - k});
    const ProductImage stacked = stack_frames(video, k, window);
    SolverConfig c = cfg;
    c.mode = Mode::Denoise;
    SolveReport r = solve(stacked, InpaintMask{}, c);
    ProductImage center = unstack_frames(r.result, window)[window];
    if (report != nullptr) {
        *report = std::move(r);
    }
    return center;
}

RegParams grid_params(const GridSpec& spec, double alpha, double beta) {
    RegParams p;
    p.alpha = {alpha, alpha, spec.couple_diagonals ? alpha : 0.0, spec.couple_diagonals ? alpha : 0.0};
    p.beta = {beta, beta};
    p.gamma = beta;
    return p;
}

std::vector<std::pair<double, double>> grid_points(const GridSpec& spec) {
    if (!(spec.alpha_step > 0.0) || !(spec.beta_step > 0.0) || spec.alpha_max < 0.0 || spec.beta_max < 0.0) {
        throw InvalidArgument("grid: steps must be positive and maxima nonnegative");
    }
    const auto na = static_cast<std::size_t>(std::floor(spec.alpha_max / spec.alpha_step + 1e-9));
    const auto nb = static_cast<std::size_t>(std::floor(spec.beta_max / spec.beta_step + 1e-9));
    std::vector<std::pair<double, double>> points;
    for (std::size_t a = 0; a <= na; ++a) {
        for (std::size_t b = 0; b <= nb; ++b) {
            if (spec.skip_zero && a == 0 && b == 0) {
                continue;
            }
            points.emplace_back(static_cast<double>(a) * spec.alpha_step, static_cast<double>(b) * spec.beta_step);
        }
    }
    if (points.empty()) {
        throw InvalidArgument("grid: no cells to evaluate");
    }
    return points;
}

GridResult grid_search(const GridSpec& spec, const std::function<double(const RegParams&)>& score) {
    const auto points = grid_points(spec);
    GridResult result;
    result.cells.resize(points.size());
    const auto n = static_cast<long>(points.size());
    std::vector<std::exception_ptr> errors(points.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const auto [a, b] = points[idx];
        try {
            result.cells[idx] = {a, b, score(grid_params(spec, a, b))};
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    result.best = result.cells.front();
    for (const auto& cell : result.cells) {
        if (cell.score > result.best.score) {
            result.best = cell;
        }
    }
    return result;
}

}  // namespace ctv
