#include "ctv/functional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>

#include "ctv/differences.hpp"
#include "ctv/errors.hpp"

namespace ctv {

void RegParams::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument(std::string("RegParams: ") + name + " must be finite and nonnegative");
        }
    };
    for (const double a : alpha) {
        check(a, "alpha");
    }
    for (const double b : beta) {
        check(b, "beta");
    }
    check(gamma, "gamma");
}

bool RegParams::all_zero() const noexcept {
    return std::all_of(alpha.begin(), alpha.end(), [](double v) { return v == 0.0; }) &&
           std::all_of(beta.begin(), beta.end(), [](double v) { return v == 0.0; }) && gamma == 0.0;
}

const char* to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::Denoise: return "denoise";
        case Mode::InpaintNoiseless: return "inpaint-noiseless";
        case Mode::InpaintNoisy: return "inpaint-noisy";
    }
    return "?";
}

Mode mode_from_string(const std::string& name) {
    if (name == "denoise") {
        return Mode::Denoise;
    }
    if (name == "inpaint-noiseless") {
        return Mode::InpaintNoiseless;
    }
    if (name == "inpaint-noisy") {
        return Mode::InpaintNoisy;
    }
    throw InvalidArgument("unknown mode '" + name + "'");
}

namespace {

// Row-wise partial sums computed in parallel, then added in row order so the
// result does not depend on the thread count.
template <typename RowFn>
double reduce_rows(std::size_t rows, RowFn&& row_sum) {
    std::vector<double> partial(rows, 0.0);
    const auto n = static_cast<long>(rows);
#pragma omp parallel for schedule(static)
    for (long j = 0; j < n; ++j) {
        partial[static_cast<std::size_t>(j)] = row_sum(static_cast<std::size_t>(j));
    }
    double total = 0.0;
    for (const double v : partial) {
        total += v;
    }
    return total;
}

const Weight& b1_weight() {
    static const Weight w = Weight::b1();
    return w;
}
const Weight& b2_weight() {
    static const Weight w = Weight::b2();
    return w;
}
const Weight& b11_weight() {
    static const Weight w = Weight::b11();
    return w;
}

double pair_term(const ProductImage& x, std::size_t p, std::size_t q) {
    const double* cols[2] = {x.at(p).data(), x.at(q).data()};
    return abs_diff_combined_raw(x.signature(), cols, b1_weight().entries());
}

}  // namespace

double eval_tv1(const ProductImage& x, const std::array<double, 4>& alpha) {
    const std::size_t n = x.width();
    const std::size_t m = x.height();
    const double diag = 1.0 / std::sqrt(2.0);
    return reduce_rows(m, [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (alpha[0] != 0.0) {
                s += alpha[0] * pair_term(x, x.index(i, j), x.index(i + 1, j));
            }
        }
        if (j + 1 < m) {
            for (std::size_t i = 0; i < n; ++i) {
                if (alpha[1] != 0.0) {
                    s += alpha[1] * pair_term(x, x.index(i, j), x.index(i, j + 1));
                }
            }
            for (std::size_t i = 0; i + 1 < n; ++i) {
                if (alpha[2] != 0.0) {
                    s += alpha[2] * diag * pair_term(x, x.index(i, j), x.index(i + 1, j + 1));
                }
                if (alpha[3] != 0.0) {
                    s += alpha[3] * diag * pair_term(x, x.index(i, j + 1), x.index(i + 1, j));
                }
            }
        }
        return s;
    });
}

double eval_tv2(const ProductImage& x, const std::array<double, 2>& beta) {
    const std::size_t n = x.width();
    const std::size_t m = x.height();
    const auto w = b2_weight().entries();
    const Signature sig = x.signature();
    return reduce_rows(m, [&](std::size_t j) {
        double s = 0.0;
        if (beta[0] != 0.0) {
            for (std::size_t i = 1; i + 1 < n; ++i) {
                const double* cols[3] = {x.at(i - 1, j).data(), x.at(i, j).data(), x.at(i + 1, j).data()};
                s += beta[0] * abs_diff_combined_raw(sig, cols, w);
            }
        }
        if (beta[1] != 0.0 && j >= 1 && j + 1 < m) {
            for (std::size_t i = 0; i < n; ++i) {
                const double* cols[3] = {x.at(i, j - 1).data(), x.at(i, j).data(), x.at(i, j + 1).data()};
                s += beta[1] * abs_diff_combined_raw(sig, cols, w);
            }
        }
        return s;
    });
}

double eval_tv11(const ProductImage& x, double gamma) {
    if (gamma == 0.0) {
        return 0.0;
    }
    const std::size_t n = x.width();
    const std::size_t m = x.height();
    const auto w = b11_weight().entries();
    const Signature sig = x.signature();
    return reduce_rows(m, [&](std::size_t j) {
        double s = 0.0;
        if (j + 1 < m) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double* cols[4] = {x.at(i, j).data(), x.at(i + 1, j).data(), x.at(i, j + 1).data(),
                                         x.at(i + 1, j + 1).data()};
                s += gamma * abs_diff_combined_raw(sig, cols, w);
            }
        }
        return s;
    });
}

double eval_data(const ProductImage& x, const ProductImage& f, const std::vector<bool>& include) {
    if (!x.same_shape(f)) {
        throw DimensionMismatch("eval_data: image shapes or signatures differ");
    }
    if (include.size() != x.pixel_count()) {
        throw DimensionMismatch("eval_data: pixel selection has the wrong size");
    }
    const Signature sig = x.signature();
    return 0.5 * reduce_rows(x.height(), [&](std::size_t j) {
               double s = 0.0;
               for (std::size_t i = 0; i < x.width(); ++i) {
                   const std::size_t p = x.index(i, j);
                   if (include[p]) {
                       s += dist_product_sq_raw(sig, x.at(p).data(), f.at(p).data());
                   }
               }
               return s;
           });
}

double eval_data(const ProductImage& x, const ProductImage& f) {
    return eval_data(x, f, std::vector<bool>(x.pixel_count(), true));
}

double eval_data_known(const ProductImage& x, const ProductImage& f, const InpaintMask& mask) {
    if (!mask.matches(x)) {
        throw DimensionMismatch("eval_data_known: mask size differs from image");
    }
    std::vector<bool> include(x.pixel_count());
    for (std::size_t p = 0; p < include.size(); ++p) {
        include[p] = !mask.missing(p);
    }
    return eval_data(x, f, include);
}

double eval_objective(const ProductImage& x, const ProductImage& f, const InpaintMask& mask,
                      const RegParams& params, Mode mode) {
    if (!x.same_shape(f)) {
        throw DimensionMismatch("eval_objective: image shapes or signatures differ");
    }
    if (mode != Mode::Denoise && !mask.matches(x)) {
        throw DimensionMismatch("eval_objective: mask size differs from image");
    }
    double data = 0.0;
    switch (mode) {
        case Mode::Denoise: data = eval_data(x, f); break;
        case Mode::InpaintNoisy: data = eval_data_known(x, f, mask); break;
        case Mode::InpaintNoiseless:
            for (std::size_t p = 0; p < x.pixel_count(); ++p) {
                if (mask.missing(p)) {
                    continue;
                }
                const auto a = x.at(p);
                const auto b = f.at(p);
                if (!std::equal(a.begin(), a.end(), b.begin())) {
                    throw Infeasible("eval_objective: x differs from f at known pixel (" +
                                     std::to_string(p % x.width()) + ", " + std::to_string(p / x.width()) + ")");
                }
            }
            break;
    }
    return data + eval_tv1(x, params.alpha) + eval_tv2(x, params.beta) + eval_tv11(x, params.gamma);
}

// ---------------------------------------------------------------------------

double GridDistance::value() const noexcept {
    return static_cast<double>(straight) + std::sqrt(2.0) * static_cast<double>(diagonal);
}

bool operator<(GridDistance x, GridDistance y) noexcept {
    // x < y  <=>  a < b sqrt(2) with a, b below.
    const long a = x.straight - y.straight;
    const long b = y.diagonal - x.diagonal;
    if (a < 0 && b >= 0) {
        return true;
    }
    if (a >= 0 && b <= 0) {
        return false;
    }
    if (a >= 0) {  // b > 0
        return a * a < 2 * b * b;
    }
    return a * a > 2 * b * b;  // a < 0, b < 0
}

GridDistance grid_distance(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) noexcept {
    const auto di = static_cast<long>(i1 > i2 ? i1 - i2 : i2 - i1);
    const auto dj = static_cast<long>(j1 > j2 ? j1 - j2 : j2 - j1);
    const long lo = std::min(di, dj);
    return {std::max(di, dj) - lo, lo};
}

std::vector<std::size_t> nearest_known(const InpaintMask& mask) {
    const std::size_t n = mask.width();
    const std::size_t m = mask.height();
    const std::size_t count = n * m;
    if (mask.missing_count() == count) {
        throw DataError("every pixel is in the inpainting region");
    }

    // Multi-source Dijkstra on lexicographic labels (distance, source index); the order is
    // compatible with adding an edge length, so it yields the smallest source among the nearest.
    struct Label {
        GridDistance dist;
        std::size_t source;
        bool operator<(const Label& o) const noexcept {
            if (dist < o.dist) {
                return true;
            }
            if (o.dist < dist) {
                return false;
            }
            return source < o.source;
        }
    };
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<Label> label(count, Label{{}, kNone});
    using Entry = std::pair<Label, std::size_t>;
    auto cmp = [](const Entry& a, const Entry& b) { return b.first < a.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
    for (std::size_t p = 0; p < count; ++p) {
        if (!mask.missing(p)) {
            label[p] = {{0, 0}, p};
            queue.push({label[p], p});
        }
    }
    while (!queue.empty()) {
        const auto [lab, p] = queue.top();
        queue.pop();
        if (label[p] < lab) {
            continue;
        }
        const std::size_t i = p % n;
        const std::size_t j = p / n;
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                if ((di == 0 && dj == 0) || (di < 0 && i == 0) || (dj < 0 && j == 0) || (di > 0 && i + 1 >= n) ||
                    (dj > 0 && j + 1 >= m)) {
                    continue;
                }
                const std::size_t q = (j + static_cast<std::size_t>(dj)) * n + i + static_cast<std::size_t>(di);
                const GridDistance step = (di != 0 && dj != 0) ? GridDistance{0, 1} : GridDistance{1, 0};
                const Label cand{lab.dist + step, lab.source};
                if (label[q].source == kNone || cand < label[q]) {
                    label[q] = cand;
                    queue.push({cand, q});
                }
            }
        }
    }
    std::vector<std::size_t> out(count);
    for (std::size_t p = 0; p < count; ++p) {
        out[p] = label[p].source;
    }
    return out;
}

ProductImage extend_nearest(const ProductImage& f, const InpaintMask& mask) {
    if (!mask.matches(f)) {
        throw DimensionMismatch("extend_nearest: mask size differs from image");
    }
    const auto nu = nearest_known(mask);
    ProductImage out = f;
    for (std::size_t p = 0; p < f.pixel_count(); ++p) {
        if (nu[p] != p) {
            const auto src = f.at(nu[p]);
            std::copy(src.begin(), src.end(), out.at(p).begin());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> default_covering_radii(const InpaintMask& mask) {
    const std::size_t n = mask.width();
    const auto nu = nearest_known(mask);
    std::vector<double> reach(nu.size(), 0.0);
    for (std::size_t p = 0; p < nu.size(); ++p) {
        const std::size_t q = nu[p];
        reach[q] = std::max(reach[q], grid_distance(p % n, p / n, q % n, q / n).value());
    }
    const double global = *std::max_element(reach.begin(), reach.end());
    std::vector<double> radii(nu.size(), 0.0);
    for (std::size_t p = 0; p < nu.size(); ++p) {
        if (!mask.missing(p)) {
            radii[p] = std::sqrt(2.0) + reach[p] + global;
        }
    }
    return radii;
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

private:
    std::vector<std::size_t> parent_;
};

// Visits every known q != p within grid distance radius of p (with slack for rounding).
template <typename Fn>
void for_each_in_ball(const InpaintMask& mask, std::size_t p, double radius, Fn&& fn) {
    const std::size_t n = mask.width();
    const std::size_t m = mask.height();
    const std::size_t i = p % n;
    const std::size_t j = p / n;
    const auto reach = static_cast<std::size_t>(std::floor(radius + 1e-9));
    const std::size_t i0 = i > reach ? i - reach : 0;
    const std::size_t j0 = j > reach ? j - reach : 0;
    const std::size_t i1 = std::min(n - 1, i + reach);
    const std::size_t j1 = std::min(m - 1, j + reach);
    for (std::size_t jj = j0; jj <= j1; ++jj) {
        for (std::size_t ii = i0; ii <= i1; ++ii) {
            const std::size_t q = jj * n + ii;
            if (q == p || mask.missing(q)) {
                continue;
            }
            if (grid_distance(i, j, ii, jj).value() <= radius + 1e-9) {
                fn(q);
            }
        }
    }
}

void check_diag_inputs(const ProductImage& f, const InpaintMask& mask) {
    if (!mask.matches(f)) {
        throw DimensionMismatch("diagnostic: mask size differs from image");
    }
    if (mask.missing_count() == f.pixel_count()) {
        throw DataError("diagnostic: every pixel is in the inpainting region");
    }
}

void require_connected(DisjointSets& sets, const InpaintMask& mask, std::size_t count) {
    std::size_t root = count;
    for (std::size_t p = 0; p < count; ++p) {
        if (mask.missing(p)) {
            continue;
        }
        const std::size_t r = sets.find(p);
        if (root == count) {
            root = r;
        } else if (r != root) {
            throw DataError("diagnostic: the neighborhood graph on known pixels is disconnected");
        }
    }
}

}  // namespace

double diag_dinf(const ProductImage& f, const InpaintMask& mask, const std::vector<double>& radii) {
    check_diag_inputs(f, mask);
    if (radii.size() != f.pixel_count()) {
        throw DimensionMismatch("diag_dinf: one radius per pixel expected");
    }
    const std::size_t count = f.pixel_count();
    const Signature sig = f.signature();
    DisjointSets sets(count);
    double worst = 0.0;
    for (std::size_t p = 0; p < count; ++p) {
        if (mask.missing(p)) {
            continue;
        }
        for_each_in_ball(mask, p, radii[p], [&](std::size_t q) {
            sets.unite(p, q);
            worst = std::max(worst, dist_cyclic_raw(sig, f.at(p).data(), f.at(q).data()));
        });
    }
    require_connected(sets, mask, count);
    return worst;
}

double diag_dinf(const ProductImage& f, const InpaintMask& mask) {
    check_diag_inputs(f, mask);
    return diag_dinf(f, mask, default_covering_radii(mask));
}

double diag_d1(const ProductImage& f, const InpaintMask& mask) {
    check_diag_inputs(f, mask);
    const std::size_t count = f.pixel_count();
    const Signature sig = f.signature();
    DisjointSets sets(count);
    double total = 0.0;
    for (std::size_t p = 0; p < count; ++p) {
        if (mask.missing(p)) {
            continue;
        }
        double local = 0.0;
        for_each_in_ball(mask, p, std::sqrt(2.0), [&](std::size_t q) {
            sets.unite(p, q);
            local = std::max(local, dist_cyclic_raw(sig, f.at(p).data(), f.at(q).data()));
        });
        total += local;
    }
    require_connected(sets, mask, count);
    return total;
}

}  // namespace ctv
