// Acceptance checks. Usage: acceptance <A1..A9|all>. Prints one PASS/FAIL line per check
// and exits nonzero when any check fails. All tolerances and budgets are pinned below.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ctv/cppa.hpp"
#include "ctv/pipeline.hpp"
#include "ctv/prox.hpp"
#include "test_support.hpp"

using namespace ctv;
using ctv::testing::Rng;

namespace {

// Pinned tolerances and budgets.
constexpr double kA1EnergyTol = 1e-5;
constexpr double kA1Budget = 300.0;  // seconds
constexpr double kA2Tol = 1e-12;
constexpr double kA3Budget = 60.0;
constexpr double kA4Budget = 1800.0;
constexpr double kA5MinGap = 0.2;  // dB
constexpr double kA5Budget = 2700.0;
constexpr double kA6Budget = 60.0;
constexpr double kA7MinGain = 1.0;  // dB
constexpr double kA7Budget = 1800.0;
constexpr double kA8SettleRatio = 0.01;
constexpr double kA9Tol = 1e-3;

constexpr std::size_t kSide = 128;
constexpr double kSigmaColor = 0.2;
constexpr double kSigmaVideo = 0.4;
constexpr std::uint64_t kSeeds = 5;
const char* const kA5Cache = "a5_best_params.txt";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream s;
    s.precision(2);
    s << std::scientific << v;
    return s.str();
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream s;
    s.precision(prec);
    s << std::fixed << v;
    return s.str();
}

const Weight& weight_of(int k) {
    static const Weight ws[3] = {Weight::b1(), Weight::b2(), Weight::b11()};
    return ws[k];
}

ActiveSet random_active(Rng& rng, std::size_t d) {
    unsigned bits = 0;
    while (bits == 0) {
        bits = static_cast<unsigned>(rng.index(1U << d));
    }
    return ActiveSet::from_bits(bits, d);
}

// ---------------------------------------------------------------------------

Outcome a1() {
    const auto t0 = Clock::now();
    Rng rng(101);
    double worst = 0.0;
    std::size_t partial = 0;
    std::size_t count = 0;
    for (int k = 0; k < 3; ++k) {
        const Weight& w = weight_of(k);
        for (int trial = 0; trial < 1000; ++trial) {
            Signature sig{rng.index(3), rng.index(3)};
            while (sig.size() == 0) {
                sig = Signature{rng.index(3), rng.index(3)};
            }
            const auto active = random_active(rng, w.size());
            partial += active.size() < w.size() ? 1 : 0;
            const auto f = rng.tuple(sig, w.size(), 2.0);
            const double lambda = 1.0 - rng.uniform(0.0, 1.0);  // (0, 1]
            const auto closed = prox_difference_constrained(f, w, active, lambda);
            const auto oracle = prox_oracle(f, w, active, lambda);
            for (const auto& cand : closed.candidates) {
                const double e = prox_difference_energy(f, cand, w, active, lambda);
                worst = std::max(worst, std::abs(e - oracle.value));
            }
            ++count;
        }
    }
    const double t = seconds_since(t0);
    return {worst <= kA1EnergyTol && t <= kA1Budget,
            std::to_string(count) + " instances (" + std::to_string(partial) + " partial active sets), max |closed - oracle| = " +
                sci(worst) + ", " + fmt(t, 1) + " s"};
}

Outcome a2() {
    Rng rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 10'000; ++trial) {
        const Weight& w = weight_of(static_cast<int>(rng.index(3)));
        const std::size_t n = 1 + rng.index(3);
        const auto f = rng.tuple(Signature{0, n}, w.size(), 5.0);
        const auto active = random_active(rng, w.size());
        const double lambda = rng.uniform(0.0, 2.0);
        Columns fa;
        std::vector<double> wa;
        std::vector<double> offset(n, 0.0);
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (active.contains(j)) {
                fa.push_back(f[j].linear);
                wa.push_back(w[j]);
            } else {
                for (std::size_t c = 0; c < n; ++c) {
                    offset[c] -= w[j] * f[j].linear[c];
                }
            }
        }
        const auto lin = prox_linear_offset(fa, offset, wa, lambda);
        const auto r = prox_difference_constrained(f, w, active, lambda);
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t c = 0; c < n; ++c) {
                worst = std::max(worst, std::abs(r.candidates[0][a].linear[c] - lin.x[a][c]));
            }
        }
    }
    return {worst <= kA2Tol, "10000 cases, max deviation " + sci(worst)};
}

Outcome a3() {
    const auto t0 = Clock::now();
    const ProductImage f = hsv_to_product(make_synthetic(kSide));
    const InpaintMask mask = make_disc_mask(kSide, 0.25);
    SolverConfig cfg;
    cfg.params = scaled(grid_params(GridSpec{}, 0.25, 0.25), kUnitToRadians);
    cfg.mode = Mode::InpaintNoiseless;
    cfg.workers = 1;
    const ProductImage one = solve(f, mask, cfg).result;
    const int many = std::max(4, omp_get_max_threads());
    cfg.workers = many;
    const ProductImage other = solve(f, mask, cfg).result;
    std::size_t changed = 0;
    for (std::size_t p = 0; p < f.pixel_count(); ++p) {
        if (!mask.missing(p) && std::memcmp(one.at(p).data(), f.at(p).data(), sizeof(double) * 3) != 0) {
            ++changed;
        }
    }
    const bool identical = one.values().size() == other.values().size() &&
                           std::memcmp(one.values().data(), other.values().data(), sizeof(double) * one.values().size()) == 0;
    const double t = seconds_since(t0);
    return {changed == 0 && identical && t <= kA3Budget,
            std::to_string(changed) + " known pixels changed; 1 vs " + std::to_string(many) + " workers " +
                (identical ? "bit-identical" : "DIFFER") + ", " + fmt(t, 1) + " s"};
}

// Best PSNR of one color model over a grid.
GridResult search_color(const ColorObservation& obs, const RgbImage& clean, const InpaintMask& mask, ColorModel model,
                        const GridSpec& spec, Mode mode, std::size_t iterations) {
    return grid_search(spec, [&](const RegParams& p) {
        SolverConfig cfg;
        cfg.params = p;
        cfg.mode = mode;
        cfg.iterations = iterations;
        cfg.workers = 1;
        return psnr(restore_color(obs, mask, model, cfg), clean);
    });
}

Outcome a4() {
    const auto t0 = Clock::now();
    const HsvImage clean_hsv = make_synthetic(kSide);
    const RgbImage clean = hsv_to_rgb(clean_hsv);
    const InpaintMask mask = make_disc_mask(kSide, 0.25);
    const auto obs = ColorObservation::from_hsv(clean_hsv);
    GridSpec spec{0.125, 0.5, 0.125, 0.5, false, true};
    const auto hsv = search_color(obs, clean, mask, ColorModel::Hsv, spec, Mode::InpaintNoiseless, 800);
    const auto rgb = search_color(obs, clean, mask, ColorModel::Rgb, spec, Mode::InpaintNoiseless, 800);
    const double t = seconds_since(t0);
    std::ostringstream d;
    d << "HSV " << fmt(hsv.best.score) << " dB (alpha " << hsv.best.alpha << ", beta " << hsv.best.beta << ") vs RGB "
      << fmt(rgb.best.score) << " dB (alpha " << rgb.best.alpha << ", beta " << rgb.best.beta << "), " << fmt(t, 1) << " s";
    return {hsv.best.score > rgb.best.score && t <= kA4Budget, d.str()};
}

const ColorModel kModels[4] = {ColorModel::Hsv, ColorModel::HsvChannelwise, ColorModel::Rgb, ColorModel::RgbChannelwise};

GridSpec a5_grid() { return GridSpec{1.0 / 32.0, 0.25, 1.0 / 32.0, 0.25, false, true}; }

ColorObservation noisy_observation(const HsvImage& clean, std::uint64_t seed) {
    return ColorObservation::from_hsv(add_hsv_noise(clean, kSigmaColor, seed));
}

// Per-model best parameters on seed 0, cached for the energy check.
std::map<ColorModel, RegParams> tune_color_models(const HsvImage& clean_hsv, std::ostream& log) {
    const RgbImage clean = hsv_to_rgb(clean_hsv);
    const auto obs = noisy_observation(clean_hsv, 0);
    std::map<ColorModel, RegParams> best;
    std::ofstream cache(kA5Cache);
    for (const auto m : kModels) {
        const auto r = search_color(obs, clean, InpaintMask{}, m, a5_grid(), Mode::Denoise, 400);
        best[m] = grid_params(a5_grid(), r.best.alpha, r.best.beta);
        cache << to_string(m) << ' ' << r.best.alpha << ' ' << r.best.beta << '\n';
        log << to_string(m) << ": alpha " << r.best.alpha << " beta " << r.best.beta << " (seed 0: " << fmt(r.best.score)
            << " dB); ";
    }
    return best;
}

std::map<ColorModel, RegParams> cached_color_params() {
    std::map<ColorModel, RegParams> best;
    std::ifstream cache(kA5Cache);
    std::string name;
    double a = 0.0;
    double b = 0.0;
    while (cache >> name >> a >> b) {
        best[color_model_from_string(name)] = grid_params(a5_grid(), a, b);
    }
    return best;
}

Outcome a5() {
    const auto t0 = Clock::now();
    const HsvImage clean_hsv = make_synthetic(kSide);
    const RgbImage clean = hsv_to_rgb(clean_hsv);
    std::ostringstream d;
    const auto best = tune_color_models(clean_hsv, d);
    std::map<ColorModel, double> mean;
    double noisy_mean = 0.0;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        const auto obs = noisy_observation(clean_hsv, seed);
        noisy_mean += psnr(obs.rgb, clean) / kSeeds;
        for (const auto m : kModels) {
            SolverConfig cfg;
            cfg.params = best.at(m);
            mean[m] += psnr(restore_color(obs, InpaintMask{}, m, cfg), clean) / kSeeds;
        }
    }
    const double hsv = mean[ColorModel::Hsv];
    const double hsv_cw = mean[ColorModel::HsvChannelwise];
    const double rgb = std::max(mean[ColorModel::Rgb], mean[ColorModel::RgbChannelwise]);
    const double t = seconds_since(t0);
    d << "mean over " << kSeeds << " seeds: noisy " << fmt(noisy_mean) << ", hsv " << fmt(hsv) << ", hsv-channelwise "
      << fmt(hsv_cw) << ", rgb " << fmt(mean[ColorModel::Rgb]) << ", rgb-channelwise "
      << fmt(mean[ColorModel::RgbChannelwise]) << " dB; " << fmt(t, 1) << " s";
    return {hsv - hsv_cw >= kA5MinGap && hsv_cw - rgb >= kA5MinGap && t <= kA5Budget, d.str()};
}

Outcome a6() {
    const auto t0 = Clock::now();
    const HsvImage clean = make_synthetic(kSide);
    const ProductImage f = hsv_to_product(add_hsv_noise(clean, kSigmaColor, 7));
    SolverConfig cfg;
    cfg.params = scaled(grid_params(GridSpec{}, 1.0 / 16.0, 1.0 / 16.0), kUnitToRadians);
    const ProductImage denoised = solve(f, InpaintMask{}, cfg).result;
    cfg.mode = Mode::InpaintNoisy;
    const ProductImage joint = solve(f, InpaintMask(kSide, kSide), cfg).result;
    const bool same = std::memcmp(denoised.values().data(), joint.values().data(),
                                  sizeof(double) * denoised.values().size()) == 0;
    const double t = seconds_since(t0);
    return {same && t <= kA6Budget, std::string(same ? "bit-identical" : "DIFFER") + ", " + fmt(t, 1) + " s"};
}

Outcome a7() {
    const auto t0 = Clock::now();
    const auto clean = make_rotation_video(kSide, 13);
    std::vector<ProductImage> noisy;
    for (std::size_t k = 0; k < clean.size(); ++k) {
        noisy.push_back(add_wrapped_gaussian(clean[k], kSigmaVideo, 700 + k));
    }
    const std::size_t center = 6;
    const GridSpec spec{1.0 / 64.0, 0.125, 1.0 / 64.0, 0.125, false, true};
    auto search = [&](std::size_t l) {
        return grid_search(spec, [&](const RegParams& p) {
            SolverConfig cfg;
            cfg.params = p;
            cfg.workers = 1;
            return psnr_product(denoise_video_frame(noisy, center, l, cfg), clean[center], kPi);
        });
    };
    const auto stacked = search(6);
    const auto framewise = search(0);
    const double gain = stacked.best.score - framewise.best.score;
    const double t = seconds_since(t0);
    std::ostringstream d;
    d << "noisy " << fmt(psnr_product(noisy[center], clean[center], kPi)) << " dB; l=6 " << fmt(stacked.best.score)
      << " dB (alpha " << stacked.best.alpha << ", beta " << stacked.best.beta << "), l=0 " << fmt(framewise.best.score)
      << " dB (alpha " << framewise.best.alpha << ", beta " << framewise.best.beta << "); gain " << fmt(gain) << " dB, "
      << fmt(t, 1) << " s";
    return {gain >= kA7MinGain && t <= kA7Budget, d.str()};
}

Outcome a8() {
    const auto t0 = Clock::now();
    const HsvImage clean_hsv = make_synthetic(kSide);
    std::ostringstream d;
    auto best = cached_color_params();
    if (best.size() != 4) {
        d << "no cached tuning, re-tuning: ";
        best = tune_color_models(clean_hsv, d);
    }
    std::size_t runs = 0;
    std::size_t decreased = 0;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        const auto obs = noisy_observation(clean_hsv, seed);
        for (const auto m : kModels) {
            SolverConfig cfg;
            cfg.params = best.at(m);
            cfg.record_energy = true;
            std::vector<SolveReport> reports;
            restore_color(obs, InpaintMask{}, m, cfg, &reports);
            for (const auto& r : reports) {
                ++runs;
                decreased += r.energy_trace.at(399) < r.initial_energy ? 1 : 0;
            }
        }
    }
    // Spot check: vectorial HSV on seed 0 continued to 800 cycles.
    SolverConfig cfg;
    cfg.params = scaled(best.at(ColorModel::Hsv), kUnitToRadians);
    cfg.iterations = 800;
    cfg.record_energy = true;
    const auto report = solve(hsv_to_product(noisy_observation(clean_hsv, 0).hsv), InpaintMask{}, cfg);
    const double j0 = report.initial_energy;
    const double j400 = report.energy_trace.at(399);
    const double j800 = report.energy_trace.at(799);
    const double ratio = std::abs(j400 - j800) / (j0 - j400);
    d << decreased << "/" << runs << " runs end below their initial energy; spot check J(0) " << fmt(j0) << ", J(400) "
      << fmt(j400) << ", J(800) " << fmt(j800) << ", ratio " << fmt(ratio, 6) << "; " << fmt(seconds_since(t0), 1) << " s";
    return {decreased == runs && j0 > j400 && ratio < kA8SettleRatio, d.str()};
}

// Coarse grid then compass refinement; a direct minimizer for one or two unknowns.
template <typename F>
std::pair<double, double> minimize_2d(F&& energy, double lo, double hi, double h) {
    double bx = lo;
    double by = lo;
    double be = energy(bx, by);
    for (double x = lo; x <= hi; x += h) {
        for (double y = lo; y <= hi; y += h) {
            const double e = energy(x, y);
            if (e < be) {
                be = e;
                bx = x;
                by = y;
            }
        }
    }
    for (double step = h; step > 1e-9; step /= 2) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (const auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
                const double e = energy(bx + dx * step, by + dy * step);
                if (e < be) {
                    be = e;
                    bx += dx * step;
                    by += dy * step;
                    moved = true;
                }
            }
        }
    }
    return {bx, by};
}

double arc(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * kPi)); }

Outcome a9() {
    std::ostringstream d;
    bool ok = true;

    // 1x3 noiseless inpainting of the middle pixel under the second-order term.
    InpaintMask mid(3, 1);
    mid.set(1, 0, true);
    SolverConfig cfg;
    cfg.params.beta = {1.0, 1.0};
    cfg.mode = Mode::InpaintNoiseless;
    const double solved = solve(ProductImage(3, 1, Signature{0, 1}, {0.0, 0.0, 2.0}), mid, cfg).result.at(1, 0)[0];
    const auto [t_best, unused] =
        minimize_2d([](double t, double) { return std::abs(0.0 - 2.0 * t + 2.0); }, -5.0, 5.0, 1e-3);
    (void)unused;
    ok = ok && std::abs(solved - t_best) <= kA9Tol;
    d << "midpoint " << fmt(solved, 6) << " vs direct " << fmt(t_best, 6);

    // Two points across the seam.
    const double lambda = 0.05;
    const PixelTuple f{PixelValue({Angle(3.0)}, {}), PixelValue({Angle(-3.0)}, {})};
    const auto r = prox_difference_constrained(f, Weight::b1(), ActiveSet::all(2), lambda);
    const auto [bx, by] = minimize_2d(
        [&](double x, double y) {
            const double a = arc(x, 3.0);
            const double b = arc(y, -3.0);
            return 0.5 * (a * a + b * b) + lambda * arc(x, y);
        },
        -kPi, kPi, 1e-2);
    const double ex = arc(r.candidates[0][0].cyclic[0].value(), bx);
    const double ey = arc(r.candidates[0][1].cyclic[0].value(), by);
    ok = ok && ex <= kA9Tol && ey <= kA9Tol;
    d << "; seam prox (" << fmt(r.candidates[0][0].cyclic[0].value(), 6) << ", "
      << fmt(r.candidates[0][1].cyclic[0].value(), 6) << ") vs direct (" << fmt(bx, 6) << ", " << fmt(by, 6) << ")";
    return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
        {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
    const std::string which = argc > 1 ? argv[1] : "all";
    bool all_pass = true;
    bool found = false;
    for (const auto& [name, fn] : checks) {
        if (which != "all" && which != name) {
            continue;
        }
        found = true;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << name << (o.pass ? " PASS: " : " FAIL: ") << o.detail << std::endl;
        all_pass = all_pass && o.pass;
    }
    if (!found) {
        std::cerr << "unknown check '" << which << "'; expected A1..A9 or all\n";
        return 2;
    }
    return all_pass ? 0 : 1;
}
