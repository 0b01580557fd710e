// ctv: command-line front end for denoising, inpainting, video denoising, synthetic data,
// metrics and parameter search. Every command that writes an image also writes a JSON
// manifest next to it; `ctv replay` re-runs a manifest and compares the outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "ctv/errors.hpp"
#include "ctv/io.hpp"
#include "ctv/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ctv;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

struct SolverFlags {
    std::vector<double> alpha{0.0, 0.0, 0.0, 0.0};
    std::vector<double> beta{0.0, 0.0};
    double gamma = 0.0;
    double lambda0 = std::numbers::pi / 2.0;
    std::size_t iters = 400;
    std::uint64_t seed = 0;
    std::string tie_break = "plus-pi";
    int workers = 0;
    bool energy = false;
};

void add_solver_flags(CLI::App* app, SolverFlags& f) {
    app->add_option("--alpha", f.alpha, "first-order weights a1,a2,a3,a4")->delimiter(',')->expected(4);
    app->add_option("--beta", f.beta, "second-order weights b1,b2")->delimiter(',')->expected(2);
    app->add_option("--gamma", f.gamma, "mixed second-order weight");
    app->add_option("--lambda0", f.lambda0, "step size scale; lambda_k = lambda0 / k");
    app->add_option("--iters", f.iters, "number of cycles")->check(CLI::PositiveNumber);
    app->add_option("--seed", f.seed, "seed for the random tie-break");
    app->add_option("--tie-break", f.tie_break, "seam tie-break")->check(CLI::IsMember({"plus-pi", "random"}));
    app->add_option("--workers", f.workers, "threads for the sweeps (0: default)");
    app->add_flag("--energy", f.energy, "record the objective after every cycle");
}

SolverConfig to_config(const SolverFlags& f, Mode mode) {
    SolverConfig cfg;
    std::copy(f.alpha.begin(), f.alpha.end(), cfg.params.alpha.begin());
    std::copy(f.beta.begin(), f.beta.end(), cfg.params.beta.begin());
    cfg.params.gamma = f.gamma;
    cfg.params.validate();
    cfg.mode = mode;
    cfg.lambda0 = f.lambda0;
    cfg.iterations = f.iters;
    cfg.seed = f.seed;
    cfg.tie_break = f.tie_break == "random" ? TieBreak::SeededRandom : TieBreak::PlusPi;
    cfg.workers = f.workers;
    cfg.record_energy = f.energy;
    return cfg;
}

json config_json(const SolverConfig& cfg) {
    return {{"alpha", cfg.params.alpha},
            {"beta", cfg.params.beta},
            {"gamma", cfg.params.gamma},
            {"mode", to_string(cfg.mode)},
            {"lambda0", cfg.lambda0},
            {"iterations", cfg.iterations},
            {"tie_break", cfg.tie_break == TieBreak::PlusPi ? "plus-pi" : "random"},
            {"seed", cfg.seed}};
}

// JSON has no infinity; identical images report the string "inf".
json metric_value(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}

bool is_pfi(const fs::path& p) { return p.extension() == ".pfi"; }

fs::path manifest_path(const std::string& explicit_path, const fs::path& out) {
    return explicit_path.empty() ? fs::path(out.string() + ".json") : fs::path(explicit_path);
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

fs::path write_energy(const fs::path& out, const std::vector<SolveReport>& reports) {
    const fs::path path = out.string() + ".energy.txt";
    std::ofstream file(path);
    for (std::size_t r = 0; r < reports.size(); ++r) {
        file << "# solve " << r << "\n" << std::setprecision(17) << reports[r].initial_energy << '\n';
        for (const double e : reports[r].energy_trace) {
            file << e << '\n';
        }
    }
    return path;
}

// Color or raw restoration shared by denoise and inpaint.
json restore(const std::string& space, const fs::path& input, const InpaintMask& mask, const SolverConfig& cfg,
             const fs::path& out) {
    std::vector<SolveReport> reports;
    if (space == "raw") {
        if (!is_pfi(input) || !is_pfi(out)) {
            throw InvalidArgument("--space raw reads and writes .pfi files");
        }
        const ProductImage f = read_pfi(input);
        reports.push_back(solve(f, mask, cfg));
        write_pfi(out, reports.back().result);
    } else {
        const ColorModel model = color_model_from_string(space);
        const RgbImage img = read_png_rgb(input);
        write_png_rgb(out, restore_color(ColorObservation::from_rgb(img), mask, model, cfg, &reports));
    }
    json j = {{"wall_time", 0.0}, {"iterations_run", reports.front().iterations_run}};
    double t = 0.0;
    for (const auto& r : reports) {
        t += r.wall_time;
    }
    j["wall_time"] = t;
    if (cfg.record_energy) {
        j["energy_trace"] = write_energy(out, reports).string();
    }
    return j;
}

InpaintMask load_mask(const fs::path& path, std::size_t width, std::size_t height) {
    InpaintMask mask = read_mask_png(path);
    if (mask.width() != width || mask.height() != height) {
        throw DataError("mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                        ", image is " + std::to_string(width) + "x" + std::to_string(height));
    }
    return mask;
}

std::pair<std::size_t, std::size_t> image_size(const fs::path& p) {
    if (is_pfi(p)) {
        const auto img = read_pfi(p);
        return {img.width(), img.height()};
    }
    const auto img = read_png_rgb(p);
    return {img.width, img.height};
}

int run(const std::vector<std::string>& argv);

int run_replay(const fs::path& manifest, const fs::path& out) {
    std::ifstream in(manifest);
    if (!in) {
        throw DataError("cannot read manifest " + manifest.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("malformed manifest: " + std::string(e.what()));
    }
    if (!j.contains("argv") || !j.contains("output")) {
        throw DataError("manifest lacks argv or output");
    }
    auto args = j["argv"].get<std::vector<std::string>>();
    const fs::path original = j["output"].get<std::string>();
    for (std::size_t k = 0; k + 1 < args.size(); ++k) {
        if (args[k] == "--out") {
            args[k + 1] = out.string();
        } else if (args[k] == "--manifest") {
            args[k + 1] = out.string() + ".json";
        }
    }
    const int code = run(args);
    if (code != 0) {
        return code;
    }
    std::ifstream a(original, std::ios::binary);
    std::ifstream b(out, std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    const bool same = !sa.empty() && sa == sb;
    std::cout << json{{"original", original.string()}, {"replayed", out.string()}, {"identical", same}}.dump()
              << '\n';
    return same ? 0 : kExitData;
}

int run(const std::vector<std::string>& argv) {
    CLI::App app{"Total variation restoration of images with cyclic and linear components"};
    app.require_subcommand(1);

    SolverFlags sf;
    std::string space = "rgb";
    std::string input;
    std::string mask_path;
    std::string out;
    std::string manifest;
    bool noisy = false;

    auto* den = app.add_subcommand("denoise", "denoise a PNG (color spaces) or PFI (raw) image");
    den->add_option("input", input, "input image")->required();
    auto* inp = app.add_subcommand("inpaint", "fill the masked region of an image");
    inp->add_option("input", input, "input image")->required();
    inp->add_option("mask", mask_path, "mask PNG, nonzero = missing")->required();
    inp->add_flag("--noisy", noisy, "also denoise the known pixels");
    for (auto* sub : {den, inp}) {
        sub->add_option("--space", space, "model")
            ->check(CLI::IsMember({"rgb", "rgb-channelwise", "hsv", "hsv-channelwise", "raw"}));
        sub->add_option("--out", out, "output image")->required();
        sub->add_option("--manifest", manifest, "manifest path (default: <out>.json)");
        add_solver_flags(sub, sf);
    }

    std::vector<std::string> frames;
    std::vector<std::string> reference_frames;
    std::size_t window = 0;
    auto* vid = app.add_subcommand("video-denoise", "denoise PFI frames with stacked neighbor frames");
    vid->add_option("frames", frames, "frames in temporal order")->required();
    vid->add_option("--window", window, "half window l; 2l+1 frames are stacked");
    vid->add_option("--reference", reference_frames, "clean frames for per-frame PSNR");
    vid->add_option("--out", out, "output directory")->required();
    vid->add_option("--manifest", manifest, "manifest path (default: <out>/manifest.json)");
    add_solver_flags(vid, sf);

    std::string kind;
    std::size_t npix = 256;
    std::size_t frame_count = 13;
    double radius = 0.25;
    double sigma = 0.2;
    std::uint64_t noise_seed = 0;
    std::string noise_space = "rgb";
    auto* syn = app.add_subcommand("synth", "generate test images, videos, masks or noisy copies");
    syn->add_option("--kind", kind, "what to generate")
        ->required()
        ->check(CLI::IsMember({"image", "video", "mask", "noise"}));
    syn->add_option("--npix", npix, "side length")->check(CLI::Range(2, 1 << 14));
    syn->add_option("--frames", frame_count, "video frame count (odd)");
    syn->add_option("--radius", radius, "mask disc radius");
    syn->add_option("--sigma", sigma, "noise standard deviation (unit-interval units for PNG)");
    syn->add_option("--seed", noise_seed, "noise seed");
    syn->add_option("--space", noise_space, "noise space for PNG input")->check(CLI::IsMember({"rgb", "hsv"}));
    syn->add_option("--input", input, "image to corrupt (noise)");
    syn->add_option("--out", out, "output file, or directory for video")->required();

    std::string a_path;
    std::string b_path;
    double peak = 0.0;
    auto* met = app.add_subcommand("metrics", "PSNR (and SSIM for PNG) of an image against a reference");
    met->add_option("image", a_path)->required();
    met->add_option("reference", b_path)->required();
    met->add_option("--peak", peak, "PSNR peak for PFI (default: pi with cyclic components, else 1)");

    std::string reference;
    std::vector<double> alpha_grid{1.0 / 32.0, 0.25};
    std::vector<double> beta_grid{1.0 / 32.0, 0.25};
    std::string metric = "psnr";
    bool couple = false;
    bool include_zero = false;
    auto* grid = app.add_subcommand("grid-search", "best parameters over a grid of alpha and beta");
    grid->add_option("input", input, "observed image")->required();
    grid->add_option("reference", reference, "clean image")->required();
    grid->add_option("--mask", mask_path, "mask PNG for inpainting");
    grid->add_flag("--noisy", noisy, "noisy inpainting when a mask is given");
    grid->add_option("--space", space, "model")
        ->check(CLI::IsMember({"rgb", "rgb-channelwise", "hsv", "hsv-channelwise", "raw"}));
    grid->add_option("--alpha-grid", alpha_grid, "step,max")->delimiter(',')->expected(2);
    grid->add_option("--beta-grid", beta_grid, "step,max")->delimiter(',')->expected(2);
    grid->add_option("--metric", metric)->check(CLI::IsMember({"psnr", "ssim"}));
    grid->add_flag("--couple-diagonals", couple, "set a3 = a4 = alpha as well");
    grid->add_flag("--include-zero", include_zero, "also evaluate alpha = beta = 0");
    grid->add_option("--out", out, "report JSON")->required();
    add_solver_flags(grid, sf);

    std::string replay_manifest;
    auto* rep = app.add_subcommand("replay", "re-run a manifest and compare the output bytes");
    rep->add_option("manifest", replay_manifest)->required();
    rep->add_option("--out", out, "where to write the replayed output")->required();

    std::vector<std::string> reversed(argv.rbegin(), argv.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    json record = {{"command", app.get_subcommands().front()->get_name()}, {"argv", argv}};

    if (*den || *inp) {
        const Mode mode = *den ? Mode::Denoise : (noisy ? Mode::InpaintNoisy : Mode::InpaintNoiseless);
        const SolverConfig cfg = to_config(sf, mode);
        InpaintMask mask;
        if (*inp) {
            const auto [w, h] = image_size(input);
            mask = load_mask(mask_path, w, h);
            record["mask"] = mask_path;
        }
        record["space"] = space;
        record["config"] = config_json(cfg);
        record["input"] = input;
        record["output"] = out;
        record["run"] = restore(space, input, mask, cfg, out);
        write_json(manifest_path(manifest, out), record);
        return 0;
    }

    if (*vid) {
        const SolverConfig cfg = to_config(sf, Mode::Denoise);
        std::vector<ProductImage> video;
        for (const auto& f : frames) {
            video.push_back(read_pfi(f));
        }
        std::vector<ProductImage> clean;
        for (const auto& f : reference_frames) {
            clean.push_back(read_pfi(f));
        }
        if (!clean.empty() && clean.size() != video.size()) {
            throw DataError("reference frame count differs from input");
        }
        fs::create_directories(out);
        json per_frame = json::array();
        for (std::size_t k = 0; k < video.size(); ++k) {
            SolveReport report;
            const ProductImage result = denoise_video_frame(video, k, window, cfg, &report);
            const fs::path path = fs::path(out) / ("frame_" + std::to_string(k) + ".pfi");
            write_pfi(path, result);
            json entry = {{"frame", k}, {"output", path.string()}, {"wall_time", report.wall_time}};
            if (!clean.empty()) {
                const double pk = result.signature().cyclic > 0 ? kPi : 1.0;
                entry["psnr"] = metric_value(psnr_product(result, clean[k], pk));
                entry["psnr_input"] = metric_value(psnr_product(video[k], clean[k], pk));
            }
            per_frame.push_back(entry);
        }
        record["config"] = config_json(cfg);
        record["window"] = window;
        record["frames"] = per_frame;
        write_json(manifest.empty() ? fs::path(out) / "manifest.json" : fs::path(manifest), record);
        return 0;
    }

    if (*syn) {
        record["kind"] = kind;
        record["output"] = out;
        if (kind == "image") {
            const HsvImage img = make_synthetic(npix);
            if (is_pfi(out)) {
                write_pfi(out, hsv_to_product(img));
            } else {
                write_png_rgb(out, hsv_to_rgb(img));
            }
            record["npix"] = npix;
        } else if (kind == "video") {
            fs::create_directories(out);
            const auto video = make_rotation_video(npix, frame_count);
            for (std::size_t k = 0; k < video.size(); ++k) {
                write_pfi(fs::path(out) / ("frame_" + std::to_string(k) + ".pfi"), video[k]);
            }
            record["npix"] = npix;
            record["frames"] = frame_count;
        } else if (kind == "mask") {
            write_mask_png(out, make_disc_mask(npix, radius));
            record["npix"] = npix;
            record["radius"] = radius;
        } else {
            if (input.empty()) {
                throw InvalidArgument("synth --kind noise needs --input");
            }
            if (is_pfi(input)) {
                write_pfi(out, add_wrapped_gaussian(read_pfi(input), sigma, noise_seed));
            } else if (noise_space == "hsv") {
                write_png_rgb(out, hsv_to_rgb(add_hsv_noise(rgb_to_hsv(read_png_rgb(input)), sigma, noise_seed)));
            } else {
                const std::vector<std::optional<ChannelRange>> bounds(3, ChannelRange{});
                write_png_rgb(out, product_to_rgb(add_wrapped_gaussian(rgb_to_product(read_png_rgb(input)), sigma,
                                                                       noise_seed, bounds)));
            }
            record["input"] = input;
            record["sigma"] = sigma;
            record["seed"] = noise_seed;
            record["space"] = noise_space;
        }
        write_json(manifest_path("", out), record);
        return 0;
    }

    if (*met) {
        json result;
        if (is_pfi(a_path)) {
            const auto a = read_pfi(a_path);
            const auto b = read_pfi(b_path);
            const double pk = peak > 0.0 ? peak : (a.signature().cyclic > 0 ? kPi : 1.0);
            result = {{"psnr", metric_value(psnr_product(a, b, pk))}, {"peak", pk}};
        } else {
            const auto a = read_png_rgb(a_path);
            const auto b = read_png_rgb(b_path);
            result = {{"psnr", metric_value(psnr(a, b))}};
            if (a.width >= 11 && a.height >= 11) {
                result["ssim"] = ssim(a, b);
            }
        }
        std::cout << result.dump() << '\n';
        return 0;
    }

    if (*grid) {
        const bool masked = !mask_path.empty();
        const Mode mode = !masked ? Mode::Denoise : (noisy ? Mode::InpaintNoisy : Mode::InpaintNoiseless);
        const SolverConfig base = to_config(sf, mode);
        GridSpec spec;
        spec.alpha_step = alpha_grid[0];
        spec.alpha_max = alpha_grid[1];
        spec.beta_step = beta_grid[0];
        spec.beta_max = beta_grid[1];
        spec.couple_diagonals = couple;
        spec.skip_zero = !include_zero;
        const auto [w, h] = image_size(input);
        const InpaintMask mask = masked ? load_mask(mask_path, w, h) : InpaintMask{};

        std::function<double(const RegParams&)> score;
        if (space == "raw") {
            if (metric != "psnr") {
                throw InvalidArgument("raw images support --metric psnr only");
            }
            const auto f = read_pfi(input);
            const auto ref = read_pfi(reference);
            score = [=](const RegParams& p) {
                SolverConfig cfg = base;
                cfg.params = p;
                cfg.workers = 1;
                return psnr_product(solve(f, mask, cfg).result, ref, f.signature().cyclic > 0 ? kPi : 1.0);
            };
        } else {
            const auto obs = ColorObservation::from_rgb(read_png_rgb(input));
            const auto ref = read_png_rgb(reference);
            const ColorModel model = color_model_from_string(space);
            score = [=](const RegParams& p) {
                SolverConfig cfg = base;
                cfg.params = p;
                cfg.workers = 1;
                const RgbImage x = restore_color(obs, mask, model, cfg);
                return metric == "ssim" ? ssim(x, ref) : psnr(x, ref);
            };
        }
        const GridResult result = grid_search(spec, score);
        json cells = json::array();
        for (const auto& c : result.cells) {
            cells.push_back({{"alpha", c.alpha}, {"beta", c.beta}, {metric, metric_value(c.score)}});
        }
        record["config"] = config_json(base);
        record["space"] = space;
        record["metric"] = metric;
        record["cells"] = cells;
        record["best"] = {{"alpha", result.best.alpha},
                          {"beta", result.best.beta},
                          {metric, metric_value(result.best.score)},
                          {"params", config_json(SolverConfig{grid_params(spec, result.best.alpha, result.best.beta)})}};
        write_json(out, record);
        std::cout << record["best"].dump() << '\n';
        return 0;
    }

    if (*rep) {
        return run_replay(replay_manifest, out);
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    try {
        return run(args);
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const DimensionMismatch& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
