#include <gtest/gtest.h>

#include <cmath>

#include "ctv/errors.hpp"
#include "ctv/pipeline.hpp"
#include "test_support.hpp"

using namespace ctv;
using ctv::testing::Rng;

TEST(ColorModel, Names) {
    for (const auto m : {ColorModel::Rgb, ColorModel::RgbChannelwise, ColorModel::Hsv, ColorModel::HsvChannelwise}) {
        EXPECT_EQ(color_model_from_string(to_string(m)), m);
    }
    EXPECT_THROW(color_model_from_string("hsl"), InvalidArgument);
}

TEST(GridPoints, IncludesZeroButSkipsTheOrigin) {
    GridSpec spec;
    spec.alpha_step = 1.0 / 32.0;
    spec.alpha_max = 1.0 / 16.0;
    spec.beta_step = 1.0 / 32.0;
    spec.beta_max = 1.0 / 32.0;
    const auto pts = grid_points(spec);
    ASSERT_EQ(pts.size(), 5U);
    EXPECT_EQ(pts.front(), std::make_pair(0.0, 1.0 / 32.0));
    EXPECT_EQ(pts.back(), std::make_pair(1.0 / 16.0, 1.0 / 32.0));
    spec.skip_zero = false;
    EXPECT_EQ(grid_points(spec).size(), 6U);
}

TEST(GridPoints, Errors) {
    GridSpec spec;
    spec.alpha_max = 0.0;
    spec.beta_max = 0.0;
    EXPECT_THROW(grid_points(spec), InvalidArgument);
    spec.skip_zero = false;
    EXPECT_EQ(grid_points(spec).size(), 1U);
    spec.alpha_step = 0.0;
    EXPECT_THROW(grid_points(spec), InvalidArgument);
}

TEST(GridSearch, ParameterCouplingAndArgmax) {
    GridSpec spec;
    spec.alpha_step = 0.25;
    spec.alpha_max = 0.5;
    spec.beta_step = 0.25;
    spec.beta_max = 0.5;
    const auto p = grid_params(spec, 0.25, 0.5);
    EXPECT_EQ(p.alpha, (std::array<double, 4>{0.25, 0.25, 0.0, 0.0}));
    EXPECT_EQ(p.beta, (std::array<double, 2>{0.5, 0.5}));
    EXPECT_EQ(p.gamma, 0.5);
    spec.couple_diagonals = true;
    EXPECT_EQ(grid_params(spec, 0.25, 0.5).alpha[3], 0.25);

    const auto result = grid_search(spec, [](const RegParams& r) {
        return -std::abs(r.alpha[0] - 0.25) - std::abs(r.gamma - 0.5);
    });
    EXPECT_EQ(result.cells.size(), 8U);
    EXPECT_EQ(result.best.alpha, 0.25);
    EXPECT_EQ(result.best.beta, 0.5);

    // Constant score: the first cell in enumeration order wins.
    const auto flat = grid_search(spec, [](const RegParams&) { return 1.0; });
    EXPECT_EQ(flat.best.alpha, 0.0);
    EXPECT_EQ(flat.best.beta, 0.25);

    EXPECT_THROW(grid_search(spec, [](const RegParams&) -> double { throw DataError("x"); }), DataError);
}

TEST(GridSearch, SingleCell) {
    GridSpec spec;
    spec.alpha_step = 0.5;
    spec.alpha_max = 0.0;
    spec.beta_step = 0.5;
    spec.beta_max = 0.5;
    const auto result = grid_search(spec, [](const RegParams&) { return 3.0; });
    ASSERT_EQ(result.cells.size(), 1U);
    EXPECT_EQ(result.best.beta, 0.5);
}

TEST(RestoreColor, ZeroParametersReturnTheInput) {
    const auto clean = hsv_to_rgb(make_synthetic(12));
    const auto obs = ColorObservation::from_rgb(clean);
    SolverConfig cfg;
    cfg.iterations = 5;
    for (const auto m : {ColorModel::Rgb, ColorModel::RgbChannelwise}) {
        EXPECT_EQ(restore_color(obs, InpaintMask{}, m, cfg), clean);
    }
    for (const auto m : {ColorModel::Hsv, ColorModel::HsvChannelwise}) {
        const auto out = restore_color(obs, InpaintMask{}, m, cfg);
        for (std::size_t k = 0; k < out.data.size(); ++k) {
            ASSERT_NEAR(out.data[k], clean.data[k], 1e-12);
        }
    }
}

TEST(RestoreColor, DenoisingImprovesPsnr) {
    const HsvImage clean = make_synthetic(32);
    const auto clean_rgb = hsv_to_rgb(clean);
    const auto obs = ColorObservation::from_hsv(add_hsv_noise(clean, 0.1, 2));
    SolverConfig cfg;
    cfg.params.alpha = {0.125, 0.125, 0.0, 0.0};
    cfg.params.beta = {0.0625, 0.0625};
    cfg.params.gamma = 0.0625;
    cfg.iterations = 60;
    std::vector<SolveReport> reports;
    const auto out = restore_color(obs, InpaintMask{}, ColorModel::Hsv, cfg, &reports);
    EXPECT_EQ(reports.size(), 1U);
    EXPECT_GT(psnr(out, clean_rgb), psnr(obs.rgb, clean_rgb));
    reports.clear();
    restore_color(obs, InpaintMask{}, ColorModel::HsvChannelwise, cfg, &reports);
    EXPECT_EQ(reports.size(), 3U);
}

TEST(RestoreColor, NoiselessInpaintingKeepsKnownPixels) {
    const auto clean = hsv_to_rgb(make_synthetic(24));
    const auto mask = make_disc_mask(24, 0.25);
    SolverConfig cfg;
    cfg.params.alpha = {0.125, 0.125, 0.0, 0.0};
    cfg.params.beta = {0.125, 0.125};
    cfg.params.gamma = 0.125;
    cfg.mode = Mode::InpaintNoiseless;
    cfg.iterations = 30;
    const auto out = restore_color(ColorObservation::from_rgb(clean), mask, ColorModel::Rgb, cfg);
    for (std::size_t p = 0; p < clean.pixel_count(); ++p) {
        if (!mask.missing(p)) {
            for (std::size_t c = 0; c < 3; ++c) {
                ASSERT_EQ(out.at(p, c), clean.at(p, c));
            }
        }
    }
}

TEST(VideoFrame, WindowShrinksAtTheEnds) {
    const auto video = make_rotation_video(8, 5);
    SolverConfig cfg;
    cfg.params.alpha = {0.1, 0.1, 0.0, 0.0};
    cfg.iterations = 5;
    SolveReport report;
    denoise_video_frame(video, 0, 2, cfg, &report);
    EXPECT_EQ(report.result.signature(), (Signature{1, 0}));
    denoise_video_frame(video, 1, 2, cfg, &report);
    EXPECT_EQ(report.result.signature(), (Signature{3, 0}));
    const auto center = denoise_video_frame(video, 2, 2, cfg, &report);
    EXPECT_EQ(report.result.signature(), (Signature{5, 0}));
    EXPECT_EQ(center.signature(), (Signature{1, 0}));
    EXPECT_THROW(denoise_video_frame(video, 5, 1, cfg), InvalidArgument);

    // Window zero is frame-wise denoising.
    EXPECT_EQ(denoise_video_frame(video, 2, 0, cfg), solve(video[2], InpaintMask{}, cfg).result);
}
