#include "ctv/prox.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "ctv/errors.hpp"

namespace ctv {

ActiveSet::ActiveSet(std::vector<std::size_t> indices, std::size_t d) : indices_(std::move(indices)) {
    if (indices_.empty()) {
        throw InvalidArgument("ActiveSet: empty active set");
    }
    std::sort(indices_.begin(), indices_.end());
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (indices_[k] >= d || (k > 0 && indices_[k] == indices_[k - 1])) {
            throw InvalidArgument("ActiveSet: index out of range or repeated");
        }
        bits_ |= 1U << indices_[k];
    }
}

ActiveSet ActiveSet::all(std::size_t d) {
    std::vector<std::size_t> idx(d);
    for (std::size_t j = 0; j < d; ++j) {
        idx[j] = j;
    }
    return {std::move(idx), d};
}

ActiveSet ActiveSet::from_bits(unsigned bits, std::size_t d) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < d; ++j) {
        if (((bits >> j) & 1U) != 0) {
            idx.push_back(j);
        }
    }
    return {std::move(idx), d};
}

// ---------------------------------------------------------------------------

LinearProxResult prox_linear_offset(const Columns& f, std::span<const double> a, std::span<const double> w,
                                    double lambda) {
    if (f.size() != w.size()) {
        throw DimensionMismatch("prox_linear_offset: column count differs from weight length");
    }
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        throw InvalidArgument("prox_linear_offset: lambda must be finite and nonnegative");
    }
    double w_sq = 0.0;
    for (const double wj : w) {
        w_sq += wj * wj;
    }
    if (w_sq == 0.0) {
        throw InvalidArgument("prox_linear_offset: zero weight vector");
    }
    const std::size_t n = a.size();
    for (const auto& col : f) {
        if (col.size() != n) {
            throw DimensionMismatch("prox_linear_offset: column length differs from offset length");
        }
    }

    std::vector<double> residual(n, 0.0);
    double res_sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double acc = -a[r];
        for (std::size_t j = 0; j < f.size(); ++j) {
            acc += w[j] * f[j][r];
        }
        residual[r] = acc;
        res_sq += acc * acc;
    }
    const double res_norm = std::sqrt(res_sq);

    LinearProxResult out{f, 0.0};
    if (res_norm == 0.0 || lambda == 0.0) {
        out.value = lambda * res_norm;
        return out;
    }
    const double amp = std::min(lambda, res_norm / w_sq);
    for (std::size_t j = 0; j < f.size(); ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            out.x[j][r] -= amp * (residual[r] / res_norm) * w[j];
        }
    }

    // Evaluate the energy at the minimizer directly.
    double fit = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        for (std::size_t r = 0; r < n; ++r) {
            const double d = f[j][r] - out.x[j][r];
            fit += d * d;
        }
    }
    double reg = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double acc = -a[r];
        for (std::size_t j = 0; j < f.size(); ++j) {
            acc += w[j] * out.x[j][r];
        }
        reg += acc * acc;
    }
    out.value = 0.5 * fit + lambda * std::sqrt(reg);
    return out;
}

// ---------------------------------------------------------------------------

void apply_difference_prox(Signature sig, double* const* cols, std::span<const double> w, unsigned active_bits,
                           double lambda, std::uint64_t seam_bits, std::span<double> scratch) noexcept {
    const std::size_t dim = sig.size();
    const std::size_t d = w.size();
    double norm_sq = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            acc += w[j] * cols[j][c];
        }
        if (c < sig.cyclic) {
            acc = wrap_unchecked(acc);
        }
        scratch[c] = acc;
        norm_sq += acc * acc;
    }
    if (norm_sq == 0.0 || lambda <= 0.0) {
        return;
    }
    double active_sq = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        if (((active_bits >> j) & 1U) != 0) {
            active_sq += w[j] * w[j];
        }
    }
    if (active_sq == 0.0) {
        return;
    }
    const double norm = std::sqrt(norm_sq);
    const double amp = std::min(lambda, norm / active_sq);

    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        if (std::abs(std::abs(scratch[c]) - kPi) <= kSeamTolerance) {
            scratch[c] = ((seam_bits >> (c % 64)) & 1U) != 0 ? kPi : -kPi;
        }
    }
    const double scale = amp / norm;
    for (std::size_t j = 0; j < d; ++j) {
        if (((active_bits >> j) & 1U) == 0) {
            continue;
        }
        double* x = cols[j];
        const double step = scale * w[j];
        for (std::size_t c = 0; c < sig.cyclic; ++c) {
            x[c] = wrap_unchecked(x[c] - step * scratch[c]);
        }
        for (std::size_t c = sig.cyclic; c < dim; ++c) {
            x[c] -= step * scratch[c];
        }
    }
}

void apply_data_prox(Signature sig, double* x, const double* f, double lambda) noexcept {
    // (x + lambda f) / (1 + lambda) written as a step toward f, so x = f stays put exactly.
    const double t = lambda / (1.0 + lambda);
    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        const double diff = x[c] - f[c];
        double v = 0.0;
        if (std::abs(diff) > kPi) {
            v = diff > 0.0 ? 1.0 : -1.0;
        }
        x[c] = wrap_unchecked(x[c] + t * (kTwoPi * v - diff));
    }
    for (std::size_t c = sig.cyclic; c < sig.size(); ++c) {
        x[c] += t * (f[c] - x[c]);
    }
}

// ---------------------------------------------------------------------------

namespace {

struct RawTuple {
    Signature sig;
    std::vector<std::vector<double>> data;
    std::vector<double*> cols;

    explicit RawTuple(const PixelTuple& t) : sig(t.front().signature()) {
        data.reserve(t.size());
        for (const auto& p : t) {
            data.push_back(p.raw());
        }
        for (auto& col : data) {
            cols.push_back(col.data());
        }
    }

    [[nodiscard]] PixelTuple active_part(const ActiveSet& active) const {
        PixelTuple out;
        for (const std::size_t j : active.indices()) {
            out.push_back(PixelValue::from_raw(sig, data[j]));
        }
        return out;
    }
};

void check_prox_inputs(const PixelTuple& f, const Weight& w, double lambda) {
    check_tuple(f, w);
    if (w.kind() == WeightKind::General) {
        throw InvalidArgument("prox_difference_constrained: closed form covers only B1, B2, B11");
    }
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        throw InvalidArgument("prox: lambda must be finite and nonnegative");
    }
}

}  // namespace

ProxResult prox_difference_constrained(const PixelTuple& f, const Weight& w, const ActiveSet& active,
                                       double lambda) {
    check_prox_inputs(f, w, lambda);
    const Signature sig = f.front().signature();
    if (active.indices().back() >= w.size()) {
        throw InvalidArgument("prox_difference_constrained: active index out of range");
    }
    const RawTuple base(f);

    // Locate seam rows of (f w)_X.
    std::vector<std::size_t> seam_rows;
    bool zero = true;
    for (std::size_t c = 0; c < sig.size(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            acc += w[j] * base.data[j][c];
        }
        if (c < sig.cyclic) {
            acc = wrap_unchecked(acc);
            if (std::abs(std::abs(acc) - kPi) <= kSeamTolerance) {
                seam_rows.push_back(c);
            }
        }
        zero = zero && acc == 0.0;
    }

    ProxResult result;
    std::vector<double> scratch(sig.size());
    if (lambda == 0.0 || zero || seam_rows.empty()) {
        RawTuple x = base;
        x.cols.clear();
        for (auto& col : x.data) {
            x.cols.push_back(col.data());
        }
        apply_difference_prox(sig, x.cols.data(), w.entries(), active.bits(), lambda, ~std::uint64_t{0}, scratch);
        result.candidates.push_back(x.active_part(active));
        return result;
    }

    const std::size_t combos = std::size_t{1} << seam_rows.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
        std::uint64_t bits = 0;
        for (std::size_t s = 0; s < seam_rows.size(); ++s) {
            if (((mask >> s) & 1U) != 0) {
                bits |= std::uint64_t{1} << (seam_rows[s] % 64);
            }
        }
        RawTuple x = base;
        x.cols.clear();
        for (auto& col : x.data) {
            x.cols.push_back(col.data());
        }
        apply_difference_prox(sig, x.cols.data(), w.entries(), active.bits(), lambda, bits, scratch);
        result.candidates.push_back(x.active_part(active));
    }
    result.multivalued = result.candidates.size() > 1;
    return result;
}

double prox_difference_energy(const PixelTuple& f, const PixelTuple& x_active, const Weight& w,
                              const ActiveSet& active, double lambda) {
    check_tuple(f, w);
    if (x_active.size() != active.size()) {
        throw DimensionMismatch("prox_difference_energy: candidate size differs from active set");
    }
    PixelTuple full = f;
    double fit = 0.0;
    for (std::size_t k = 0; k < active.size(); ++k) {
        const std::size_t j = active.indices()[k];
        const double d = dist_product(x_active[k], f[j]);
        fit += d * d;
        full[j] = x_active[k];
    }
    const double diff = w.kind() == WeightKind::General ? abs_diff_oracle(full, w) : abs_diff_combined(full, w);
    return 0.5 * fit + lambda * diff;
}

PixelValue prox_data(const PixelValue& g, const PixelValue& f, double lambda) {
    if (g.signature() != f.signature()) {
        throw DimensionMismatch("prox_data: signature mismatch");
    }
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        throw InvalidArgument("prox_data: lambda must be finite and nonnegative");
    }
    auto x = g.raw();
    const auto fr = f.raw();
    apply_data_prox(g.signature(), x.data(), fr.data(), lambda);
    return PixelValue::from_raw(g.signature(), x);
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

constexpr std::size_t kMaxCols = 4;
constexpr std::size_t kMaxDim = 4;

// Energy of the constrained difference functional with active columns taken from
// `free` (t * dim values, unwrapped allowed); D by shift enumeration.
class OracleEnergy {
public:
    OracleEnergy(const RawTuple& f, const Weight& w, const ActiveSet& active, double lambda)
        : f_(f), w_(w), active_(active), lambda_(lambda) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            for (std::size_t c = 0; c < f.sig.size(); ++c) {
                buf_[j][c] = f.data[j][c];
            }
            cols_[j] = buf_[j].data();
        }
    }

    double operator()(const double* free) {
        const Signature sig = f_.sig;
        const std::size_t dim = sig.size();
        double fit = 0.0;
        for (std::size_t k = 0; k < active_.size(); ++k) {
            const std::size_t j = active_.indices()[k];
            for (std::size_t c = 0; c < dim; ++c) {
                double v = free[k * dim + c];
                double d = v - f_.data[j][c];
                if (c < sig.cyclic) {
                    v = wrap_unchecked(v);
                    d = wrap_unchecked(d);
                }
                buf_[j][c] = v;
                fit += d * d;
            }
        }
        return 0.5 * fit + lambda_ * abs_diff_oracle_raw(sig, cols_.data(), w_.entries());
    }

private:
    const RawTuple& f_;
    const Weight& w_;
    const ActiveSet& active_;
    double lambda_;
    std::array<std::array<double, kMaxDim>, kMaxCols> buf_{};
    std::array<const double*, kMaxCols> cols_{};
};

// Projected gradient on the dual of min_x 1/2||x - f^a||^2 + lambda ||x w^a - c||, whose
// primal solution is x = f^a - p (w^a)^T for the dual maximizer p, ||p|| <= lambda.
std::vector<double> dual_projected_gradient(std::span<const double> residual, double active_sq, double lambda) {
    const std::size_t dim = residual.size();
    std::vector<double> p(dim, 0.0);
    std::vector<double> next(dim);
    const double step = 0.5 / active_sq;
    for (int it = 0; it < 20000; ++it) {
        double norm_sq = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            next[c] = p[c] + step * (residual[c] - active_sq * p[c]);
            norm_sq += next[c] * next[c];
        }
        const double norm = std::sqrt(norm_sq);
        if (norm > lambda) {
            for (auto& v : next) {
                v *= lambda / norm;
            }
        }
        double change = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            change = std::max(change, std::abs(next[c] - p[c]));
        }
        p.swap(next);
        if (change < 1e-16) {
            break;
        }
    }
    return p;
}

}  // namespace

OracleResult prox_oracle(const PixelTuple& f, const Weight& w, const ActiveSet& active, double lambda) {
    check_tuple(f, w);
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        throw InvalidArgument("prox_oracle: lambda must be finite and nonnegative");
    }
    const Signature sig = f.front().signature();
    const std::size_t dim = sig.size();
    const std::size_t t = active.size();
    if (w.size() > kMaxCols || t > kMaxCols || sig.cyclic > 3 || dim > kMaxDim) {
        throw InvalidArgument("prox_oracle: limited to |A| <= 4, m <= 3, m + n <= 4");
    }
    if (active.indices().back() >= w.size()) {
        throw InvalidArgument("prox_oracle: active index out of range");
    }
    const RawTuple raw(f);
    if (lambda == 0.0) {
        return {raw.active_part(active), 0.0};
    }

    OracleEnergy energy(raw, w, active, lambda);
    std::vector<double> best(t * dim);
    for (std::size_t k = 0; k < t; ++k) {
        for (std::size_t c = 0; c < dim; ++c) {
            best[k * dim + c] = raw.data[active.indices()[k]][c];
        }
    }
    double best_value = energy(best.data());

    // Route 1: every lifted branch sigma in {-2..2}^m of the cyclic rows is a convex problem.
    double active_sq = 0.0;
    for (const std::size_t j : active.indices()) {
        active_sq += w[j] * w[j];
    }
    std::vector<double> base_residual(dim, 0.0);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t j = 0; j < w.size(); ++j) {
            base_residual[c] += w[j] * raw.data[j][c];
        }
    }
    std::size_t branches = 1;
    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        branches *= 5;
    }
    std::vector<double> residual(dim);
    std::vector<double> candidate(t * dim);
    for (std::size_t code = 0; code < branches; ++code) {
        std::size_t rest = code;
        residual = base_residual;
        for (std::size_t c = 0; c < sig.cyclic; ++c) {
            const double sigma = static_cast<double>(rest % 5) - 2.0;
            rest /= 5;
            residual[c] -= kTwoPi * sigma;
        }
        const auto p = dual_projected_gradient(residual, active_sq, lambda);
        for (std::size_t k = 0; k < t; ++k) {
            const std::size_t j = active.indices()[k];
            for (std::size_t c = 0; c < dim; ++c) {
                candidate[k * dim + c] = raw.data[j][c] - p[c] * w[j];
            }
        }
        const double value = energy(candidate.data());
        if (value < best_value) {
            best_value = value;
            best = candidate;
        }
    }

    // Route 2: exhaustive grid in low dimension, then pattern search.
    const std::size_t free_dims = t * dim;
    if (free_dims <= 2) {
        double w_inf = 0.0;
        for (const double wj : w.entries()) {
            w_inf = std::max(w_inf, std::abs(wj));
        }
        const double h0 = 1e-2;
        std::array<double, 2> half{};
        std::array<double, 2> center{};
        std::array<long, 2> count{1, 1};
        for (std::size_t a = 0; a < free_dims; ++a) {
            const std::size_t c = a % dim;
            center[a] = raw.data[active.indices()[a / dim]][c];
            half[a] = 2.0 * lambda * w_inf * static_cast<double>(w.size());
            if (c < sig.cyclic) {
                half[a] = std::min(half[a], kPi);
            }
            count[a] = 2 * static_cast<long>(std::ceil(half[a] / h0)) + 1;
        }
        std::vector<double> grid_best = best;
        double grid_value = std::numeric_limits<double>::infinity();
        std::vector<double> point(free_dims);
        for (long i0 = 0; i0 < count[0]; ++i0) {
            for (long i1 = 0; i1 < count[1]; ++i1) {
                const long idx[2] = {i0, i1};
                for (std::size_t a = 0; a < free_dims; ++a) {
                    point[a] = center[a] - half[a] + h0 * static_cast<double>(idx[a]);
                }
                const double value = energy(point.data());
                if (value < grid_value) {
                    grid_value = value;
                    grid_best = point;
                }
            }
        }
        // Pattern search with axis and diagonal directions; diagonals let it slide along kinks.
        std::vector<std::array<double, 2>> dirs;
        for (std::size_t a = 0; a < free_dims; ++a) {
            std::array<double, 2> e{};
            e[a] = 1.0;
            dirs.push_back(e);
            e[a] = -1.0;
            dirs.push_back(e);
        }
        if (free_dims == 2) {
            dirs.push_back({1.0, 1.0});
            dirs.push_back({1.0, -1.0});
            dirs.push_back({-1.0, 1.0});
            dirs.push_back({-1.0, -1.0});
        }
        for (double h = h0; h >= 1e-6;) {
            bool improved = false;
            for (const auto& dir : dirs) {
                for (std::size_t a = 0; a < free_dims; ++a) {
                    point[a] = grid_best[a] + h * dir[a];
                }
                const double value = energy(point.data());
                if (value < grid_value) {
                    grid_value = value;
                    grid_best = point;
                    improved = true;
                }
            }
            if (!improved) {
                h *= 0.5;
            }
        }
        if (grid_value < best_value) {
            best_value = grid_value;
            best = grid_best;
        }
    }

    OracleResult out;
    out.value = best_value;
    for (std::size_t k = 0; k < t; ++k) {
        std::vector<double> px(best.begin() + static_cast<std::ptrdiff_t>(k * dim),
                               best.begin() + static_cast<std::ptrdiff_t>((k + 1) * dim));
        out.x.push_back(PixelValue::from_raw(sig, px));
    }
    return out;
}

}  // namespace ctv
