#include "ctv/cppa.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <string>

#include "ctv/errors.hpp"
#include "ctv/prox.hpp"

namespace ctv {

double lambda_seq(std::size_t k, double lambda0) {
    if (k == 0) {
        throw InvalidArgument("lambda_seq: k starts at 1");
    }
    return lambda0 / static_cast<double>(k);
}

const char* to_string(Orientation o) noexcept {
    switch (o) {
        case Orientation::Horizontal: return "horizontal";
        case Orientation::Vertical: return "vertical";
        case Orientation::Diagonal: return "diagonal";
        case Orientation::Antidiagonal: return "antidiagonal";
        case Orientation::Block: return "block";
        case Orientation::Pixel: return "pixel";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

SweepStep first_order(std::string label, Orientation o, unsigned phase, double multiplier, std::size_t n,
                      std::size_t m) {
    SweepStep s;
    s.label = std::move(label);
    s.weight = WeightKind::B1;
    s.orientation = o;
    s.phase_x = o == Orientation::Vertical ? 0 : phase;
    s.phase_y = o == Orientation::Vertical ? phase : 0;
    s.multiplier = multiplier;
    s.arity = 2;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = j * n + i;
            switch (o) {
                case Orientation::Horizontal:
                    if (i % 2 == phase && i + 1 < n) {
                        s.tuples.insert(s.tuples.end(), {p, p + 1});
                    }
                    break;
                case Orientation::Vertical:
                    if (j % 2 == phase && j + 1 < m) {
                        s.tuples.insert(s.tuples.end(), {p, p + n});
                    }
                    break;
                case Orientation::Diagonal:
                    if (i % 2 == phase && i + 1 < n && j + 1 < m) {
                        s.tuples.insert(s.tuples.end(), {p, p + n + 1});
                    }
                    break;
                case Orientation::Antidiagonal:
                    if (i % 2 == phase && i + 1 < n && j + 1 < m) {
                        s.tuples.insert(s.tuples.end(), {p + n, p + 1});
                    }
                    break;
                default: break;
            }
        }
    }
    return s;
}

SweepStep second_order(std::string label, bool horizontal, unsigned center_phase, double multiplier,
                       std::size_t n, std::size_t m) {
    SweepStep s;
    s.label = std::move(label);
    s.weight = WeightKind::B2;
    s.orientation = horizontal ? Orientation::Horizontal : Orientation::Vertical;
    s.phase_x = horizontal ? center_phase : 0;
    s.phase_y = horizontal ? 0 : center_phase;
    s.multiplier = multiplier;
    s.arity = 3;
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t p = j * n + i;
            if (horizontal && i % 3 == center_phase && i >= 1 && i + 1 < n) {
                s.tuples.insert(s.tuples.end(), {p - 1, p, p + 1});
            }
            if (!horizontal && j % 3 == center_phase && j >= 1 && j + 1 < m) {
                s.tuples.insert(s.tuples.end(), {p - n, p, p + n});
            }
        }
    }
    return s;
}

SweepStep mixed(std::string label, unsigned px, unsigned py, double multiplier, std::size_t n, std::size_t m) {
    SweepStep s;
    s.label = std::move(label);
    s.weight = WeightKind::B11;
    s.orientation = Orientation::Block;
    s.phase_x = px;
    s.phase_y = py;
    s.multiplier = multiplier;
    s.arity = 4;
    for (std::size_t j = py; j + 1 < m; j += 2) {
        for (std::size_t i = px; i + 1 < n; i += 2) {
            const std::size_t p = j * n + i;
            s.tuples.insert(s.tuples.end(), {p, p + 1, p + n, p + n + 1});
        }
    }
    return s;
}

}  // namespace

SweepPlan build_splitting(std::size_t width, std::size_t height, const RegParams& params, Mode mode) {
    if (width == 0 || height == 0) {
        throw InvalidArgument("build_splitting: empty image");
    }
    params.validate();
    const std::size_t n = width;
    const std::size_t m = height;
    const double diag = 1.0 / std::sqrt(2.0);
    const auto& a = params.alpha;
    const auto& b = params.beta;

    SweepPlan plan{width, height, {}};
    auto& st = plan.steps;
    // Pairs starting at odd, then even columns (rows); second-order centers at residues 2, 0, 1.
    st.push_back(first_order("J1", Orientation::Horizontal, 1, a[0], n, m));
    st.push_back(first_order("J2", Orientation::Horizontal, 0, a[0], n, m));
    st.push_back(first_order("J3", Orientation::Vertical, 1, a[1], n, m));
    st.push_back(first_order("J4", Orientation::Vertical, 0, a[1], n, m));
    st.push_back(first_order("J5", Orientation::Diagonal, 1, a[2] * diag, n, m));
    st.push_back(first_order("J6", Orientation::Diagonal, 0, a[2] * diag, n, m));
    st.push_back(first_order("J7", Orientation::Antidiagonal, 1, a[3] * diag, n, m));
    st.push_back(first_order("J8", Orientation::Antidiagonal, 0, a[3] * diag, n, m));
    st.push_back(second_order("J9", true, 2, b[0], n, m));
    st.push_back(second_order("J10", true, 0, b[0], n, m));
    st.push_back(second_order("J11", true, 1, b[0], n, m));
    st.push_back(second_order("J12", false, 2, b[1], n, m));
    st.push_back(second_order("J13", false, 0, b[1], n, m));
    st.push_back(second_order("J14", false, 1, b[1], n, m));
    st.push_back(mixed("J15", 1, 1, params.gamma, n, m));
    st.push_back(mixed("J16", 0, 1, params.gamma, n, m));
    st.push_back(mixed("J17", 1, 0, params.gamma, n, m));
    st.push_back(mixed("J18", 0, 0, params.gamma, n, m));
    if (mode != Mode::InpaintNoiseless) {
        SweepStep data;
        data.label = "J19";
        data.term = TermKind::Data;
        data.orientation = Orientation::Pixel;
        data.multiplier = 1.0;
        data.arity = 1;
        data.tuples.resize(n * m);
        for (std::size_t p = 0; p < n * m; ++p) {
            data.tuples[p] = p;
        }
        st.push_back(std::move(data));
    }
    return plan;
}

// ---------------------------------------------------------------------------
// Initialization

namespace {

class BoundaryFiller {
public:
    BoundaryFiller(const ProductImage& x, const std::vector<std::uint8_t>& known, const RegParams& params)
        : x_(x), known_(known), params_(params), n_(x.width()), m_(x.height()), sig_(x.signature()) {}

    bool fill(std::size_t p, std::vector<double>& out) const {
        out.assign(sig_.size(), 0.0);
        return fill_first_order(p, out) || fill_second_order(p, out) || fill_mixed(p, out);
    }

private:
    [[nodiscard]] bool known(long i, long j) const {
        return i >= 0 && j >= 0 && i < static_cast<long>(n_) && j < static_cast<long>(m_) &&
               known_[static_cast<std::size_t>(j) * n_ + static_cast<std::size_t>(i)] != 0;
    }
    [[nodiscard]] const double* at(long i, long j) const {
        return x_.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).data();
    }

    // Solves sum_k w_k y_k + w_u t = 0 for t, component-wise, wrapping cyclic parts.
    void solve_linear(std::initializer_list<std::pair<double, const double*>> terms, double w_unknown,
                      std::vector<double>& out) const {
        for (std::size_t c = 0; c < sig_.size(); ++c) {
            double acc = 0.0;
            for (const auto& [w, y] : terms) {
                acc += w * y[c];
            }
            const double t = -acc / w_unknown;
            out[c] = c < sig_.cyclic ? wrap_unchecked(t) : t;
        }
    }

    bool fill_first_order(std::size_t p, std::vector<double>& out) const {
        const auto i = static_cast<long>(p % n_);
        const auto j = static_cast<long>(p / n_);
        const auto& a = params_.alpha;
        for (long dj = -1; dj <= 1; ++dj) {
            for (long di = -1; di <= 1; ++di) {
                bool enabled = false;
                if (dj == 0 && di != 0) {
                    enabled = a[0] != 0.0;
                } else if (di == 0 && dj != 0) {
                    enabled = a[1] != 0.0;
                } else if (di == dj && di != 0) {
                    enabled = a[2] != 0.0;
                } else if (di == -dj && di != 0) {
                    enabled = a[3] != 0.0;
                }
                if (enabled && known(i + di, j + dj)) {
                    const double* y = at(i + di, j + dj);
                    std::copy(y, y + sig_.size(), out.begin());
                    return true;
                }
            }
        }
        return false;
    }

    // Second-order stencils holding p, ordered by their first member in row-major order.
    bool fill_second_order(std::size_t p, std::vector<double>& out) const {
        const auto i = static_cast<long>(p % n_);
        const auto j = static_cast<long>(p / n_);
        struct Stencil {
            long di;
            long dj;
            int pos;  // position of p in the triple
        };
        const bool h = params_.beta[0] != 0.0;
        const bool v = params_.beta[1] != 0.0;
        const std::array<std::pair<bool, Stencil>, 6> order{{
            {v, {0, 1, 2}},
            {v, {0, 1, 1}},
            {h, {1, 0, 2}},
            {h, {1, 0, 1}},
            {h, {1, 0, 0}},
            {v, {0, 1, 0}},
        }};
        for (const auto& [enabled, s] : order) {
            if (!enabled) {
                continue;
            }
            // Members at offsets (k - pos) * (di, dj), k = 0, 1, 2.
            std::array<std::pair<long, long>, 3> pts{};
            bool ok = true;
            for (int k = 0; k < 3; ++k) {
                pts[static_cast<std::size_t>(k)] = {i + (k - s.pos) * s.di, j + (k - s.pos) * s.dj};
                if (k != s.pos && !known(pts[static_cast<std::size_t>(k)].first, pts[static_cast<std::size_t>(k)].second)) {
                    ok = false;
                }
            }
            if (!ok) {
                continue;
            }
            if (s.pos == 1) {
                const double* y0 = at(pts[0].first, pts[0].second);
                const double* y2 = at(pts[2].first, pts[2].second);
                for (std::size_t c = 0; c < sig_.size(); ++c) {
                    out[c] = c < sig_.cyclic ? wrap_unchecked(y0[c] + 0.5 * wrap_unchecked(y2[c] - y0[c]))
                                             : 0.5 * (y0[c] + y2[c]);
                }
            } else {
                const std::size_t far = s.pos == 0 ? 2 : 0;
                solve_linear({{-2.0, at(pts[1].first, pts[1].second)}, {1.0, at(pts[far].first, pts[far].second)}},
                             1.0, out);
            }
            return true;
        }
        return false;
    }

    bool fill_mixed(std::size_t p, std::vector<double>& out) const {
        if (params_.gamma == 0.0) {
            return false;
        }
        const auto i = static_cast<long>(p % n_);
        const auto j = static_cast<long>(p / n_);
        constexpr std::array<double, 4> w{-1.0, 1.0, 1.0, -1.0};
        // Block anchors in row-major order; p's slot within the block is di + 2 dj.
        for (long dj = 1; dj >= 0; --dj) {
            for (long di = 1; di >= 0; --di) {
                const long ai = i - di;
                const long aj = j - dj;
                const std::array<std::pair<long, long>, 4> pts{
                    {{ai, aj}, {ai + 1, aj}, {ai, aj + 1}, {ai + 1, aj + 1}}};
                const auto slot = static_cast<std::size_t>(di + 2 * dj);
                bool ok = true;
                for (std::size_t k = 0; k < 4; ++k) {
                    if (k != slot && !known(pts[k].first, pts[k].second)) {
                        ok = false;
                    }
                }
                if (!ok) {
                    continue;
                }
                std::array<std::size_t, 3> others{};
                std::size_t o = 0;
                for (std::size_t k = 0; k < 4; ++k) {
                    if (k != slot) {
                        others[o++] = k;
                    }
                }
                solve_linear({{w[others[0]], at(pts[others[0]].first, pts[others[0]].second)},
                              {w[others[1]], at(pts[others[1]].first, pts[others[1]].second)},
                              {w[others[2]], at(pts[others[2]].first, pts[others[2]].second)}},
                             w[slot], out);
                return true;
            }
        }
        return false;
    }

    const ProductImage& x_;
    const std::vector<std::uint8_t>& known_;
    const RegParams& params_;
    std::size_t n_;
    std::size_t m_;
    Signature sig_;
};

}  // namespace

ProductImage init_unknown_boundary(const ProductImage& f, const InpaintMask& mask, const RegParams& params) {
    if (!mask.matches(f)) {
        throw DimensionMismatch("init_unknown_boundary: mask size differs from image");
    }
    const std::size_t count = f.pixel_count();
    if (mask.missing_count() == count) {
        throw DataError("init_unknown_boundary: every pixel is in the inpainting region");
    }
    params.validate();
    ProductImage x = f;
    std::vector<std::uint8_t> known(count);
    std::size_t unknown = 0;
    for (std::size_t p = 0; p < count; ++p) {
        known[p] = mask.missing(p) ? 0 : 1;
        unknown += known[p] == 0 ? 1 : 0;
    }

    std::vector<std::pair<std::size_t, std::vector<double>>> fills;
    std::vector<double> value;
    while (unknown > 0) {
        fills.clear();
        const BoundaryFiller filler(x, known, params);
        for (std::size_t p = 0; p < count; ++p) {
            if (known[p] == 0 && filler.fill(p, value)) {
                fills.emplace_back(p, value);
            }
        }
        if (fills.empty()) {
            break;
        }
        for (const auto& [p, v] : fills) {
            std::copy(v.begin(), v.end(), x.at(p).begin());
            known[p] = 1;
        }
        unknown -= fills.size();
    }
    if (unknown > 0) {
        InpaintMask rest(f.width(), f.height());
        for (std::size_t p = 0; p < count; ++p) {
            rest.set(p, known[p] == 0);
        }
        x = extend_nearest(x, rest);
    }
    return x;
}

ProductImage init_unknown_boundary(const ProductImage& f, const InpaintMask& mask) {
    RegParams all;
    all.alpha = {1.0, 1.0, 1.0, 1.0};
    all.beta = {1.0, 1.0};
    all.gamma = 1.0;
    return init_unknown_boundary(f, mask, all);
}

// ---------------------------------------------------------------------------
// Solver

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31U);
}

std::uint64_t seam_choice(std::uint64_t seed, std::size_t cycle, std::size_t step, std::size_t tuple) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ cycle);
    h = splitmix64(h ^ step);
    return splitmix64(h ^ tuple);
}

void validate_config(const ProductImage& f, const InpaintMask& mask, const SolverConfig& cfg) {
    cfg.params.validate();
    if (cfg.iterations == 0) {
        throw InvalidArgument("solve: iterations must be at least 1");
    }
    if (!(cfg.lambda0 > 0.0) || !std::isfinite(cfg.lambda0)) {
        throw InvalidArgument("solve: lambda0 must be positive and finite");
    }
    if (cfg.rel_tol < 0.0 || !std::isfinite(cfg.rel_tol)) {
        throw InvalidArgument("solve: rel_tol must be nonnegative");
    }
    if (cfg.workers < 0) {
        throw InvalidArgument("solve: workers must be nonnegative");
    }
    const bool no_mask = mask.width() == 0 && mask.height() == 0;
    if (!no_mask && !mask.matches(f)) {
        throw DimensionMismatch("solve: mask size differs from image");
    }
    if (cfg.mode == Mode::Denoise) {
        if (!no_mask && !mask.empty()) {
            throw Infeasible("solve: denoise mode takes no inpainting region");
        }
    } else {
        if (no_mask) {
            throw DimensionMismatch("solve: inpainting modes need a mask of the image size");
        }
        if (mask.missing_count() == f.pixel_count()) {
            throw DataError("solve: every pixel is in the inpainting region");
        }
    }
}

}  // namespace

SolveReport solve(const ProductImage& f, const InpaintMask& mask, const SolverConfig& cfg) {
    validate_config(f, mask, cfg);
    const auto start = std::chrono::steady_clock::now();
    const InpaintMask region = (mask.width() == 0 && mask.height() == 0) ? InpaintMask(f.width(), f.height()) : mask;
    const std::size_t count = f.pixel_count();
    const Signature sig = f.signature();
    const std::size_t stride = sig.size();

    SolveReport report;
    report.result = cfg.mode == Mode::Denoise ? f : init_unknown_boundary(f, region, cfg.params);
    ProductImage& x = report.result;

    const SweepPlan plan = build_splitting(f.width(), f.height(), cfg.params, cfg.mode);
    std::vector<Weight> weights;
    // Per-tuple active members; everything is active outside noiseless inpainting.
    std::vector<std::vector<std::uint8_t>> active(plan.steps.size());
    for (std::size_t s = 0; s < plan.steps.size(); ++s) {
        const auto& step = plan.steps[s];
        weights.push_back(step.term == TermKind::Difference ? Weight::of(step.weight) : Weight::b1());
        if (step.term != TermKind::Difference) {
            continue;
        }
        auto& bits = active[s];
        bits.resize(step.tuple_count());
        for (std::size_t t = 0; t < bits.size(); ++t) {
            unsigned b = 0;
            for (std::size_t a = 0; a < step.arity; ++a) {
                if (cfg.mode != Mode::InpaintNoiseless || region.missing(step.tuples[t * step.arity + a])) {
                    b |= 1U << a;
                }
            }
            bits[t] = static_cast<std::uint8_t>(b);
        }
    }
    std::vector<std::size_t> data_pixels;
    for (std::size_t p = 0; p < count; ++p) {
        if (!region.missing(p)) {
            data_pixels.push_back(p);
        }
    }

    const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
    auto energy = [&]() { return eval_objective(x, f, region, cfg.params, cfg.mode); };
    const bool need_energy = cfg.record_energy || cfg.rel_tol > 0.0;
    double previous = need_energy ? energy() : 0.0;
    report.initial_energy = previous;

    double* data = x.raw_data();
    const double* fdata = f.raw_data();
    for (std::size_t k = 1; k <= cfg.iterations; ++k) {
        const double lambda = lambda_seq(k, cfg.lambda0);
        for (std::size_t s = 0; s < plan.steps.size(); ++s) {
            const auto& step = plan.steps[s];
            if (step.multiplier == 0.0) {
                continue;
            }
            if (step.term == TermKind::Data) {
                const auto n = static_cast<long>(data_pixels.size());
#pragma omp parallel for schedule(static) num_threads(threads)
                for (long t = 0; t < n; ++t) {
                    const std::size_t p = data_pixels[static_cast<std::size_t>(t)];
                    apply_data_prox(sig, data + p * stride, fdata + p * stride, lambda * step.multiplier);
                }
                continue;
            }
            const auto w = weights[s].entries();
            const auto& bits = active[s];
            const double step_lambda = lambda * step.multiplier;
            const auto n = static_cast<long>(step.tuple_count());
#pragma omp parallel num_threads(threads)
            {
                std::vector<double> scratch(stride);
                std::array<double*, 4> cols{};
#pragma omp for schedule(static)
                for (long tl = 0; tl < n; ++tl) {
                    const auto t = static_cast<std::size_t>(tl);
                    if (bits[t] == 0) {
                        continue;
                    }
                    for (std::size_t a = 0; a < step.arity; ++a) {
                        cols[a] = data + step.tuples[t * step.arity + a] * stride;
                    }
                    const std::uint64_t seam = cfg.tie_break == TieBreak::PlusPi
                                                   ? ~std::uint64_t{0}
                                                   : seam_choice(cfg.seed, k, s, t);
                    apply_difference_prox(sig, cols.data(), w, bits[t], step_lambda, seam, scratch);
                }
            }
        }
        report.iterations_run = k;
        if (need_energy) {
            const double e = energy();
            if (cfg.record_energy) {
                report.energy_trace.push_back(e);
            }
            const bool settled = cfg.rel_tol > 0.0 && std::abs(previous - e) <= cfg.rel_tol * std::abs(previous);
            previous = e;
            if (settled) {
                break;
            }
        }
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace ctv
