#include "ctv/differences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ctv/errors.hpp"

namespace ctv {

Weight Weight::b1() { return {{-1.0, 1.0}, WeightKind::B1}; }
Weight Weight::b2() { return {{1.0, -2.0, 1.0}, WeightKind::B2}; }
Weight Weight::b11() { return {{-1.0, 1.0, 1.0, -1.0}, WeightKind::B11}; }

Weight Weight::of(WeightKind kind) {
    switch (kind) {
        case WeightKind::B1: return b1();
        case WeightKind::B2: return b2();
        case WeightKind::B11: return b11();
        case WeightKind::General: break;
    }
    throw InvalidArgument("Weight::of: general weights need explicit entries");
}

Weight Weight::general(std::vector<double> entries) {
    if (entries.empty()) {
        throw InvalidArgument("Weight::general: empty weight");
    }
    const double sum = std::accumulate(entries.begin(), entries.end(), 0.0);
    const bool all_zero = std::all_of(entries.begin(), entries.end(), [](double v) { return v == 0.0; });
    if (all_zero || std::abs(sum) > 1e-12) {
        throw InvalidArgument("Weight::general: entries must be nonzero and sum to 0");
    }
    return {std::move(entries), WeightKind::General};
}

const char* to_string(WeightKind kind) noexcept {
    switch (kind) {
        case WeightKind::B1: return "B1";
        case WeightKind::B2: return "B2";
        case WeightKind::B11: return "B11";
        case WeightKind::General: return "general";
    }
    return "?";
}

double abs_diff_linear(const Columns& x, const Weight& w) {
    if (x.size() != w.size()) {
        throw DimensionMismatch("abs_diff_linear: " + std::to_string(x.size()) + " columns for a weight of length " +
                                std::to_string(w.size()));
    }
    const std::size_t n = x.empty() ? 0 : x.front().size();
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (x[j].size() != n) {
                throw DimensionMismatch("abs_diff_linear: ragged columns");
            }
            acc += w[j] * x[j][r];
        }
        sum += acc * acc;
    }
    return std::sqrt(sum);
}

Signature check_tuple(const PixelTuple& x, const Weight& w) {
    if (x.size() != w.size()) {
        throw DimensionMismatch("difference: " + std::to_string(x.size()) + " points for a weight of length " +
                                std::to_string(w.size()));
    }
    const Signature sig = x.front().signature();
    for (const auto& p : x) {
        if (p.signature() != sig) {
            throw DimensionMismatch("difference: points with different signatures");
        }
    }
    return sig;
}

double abs_diff_combined_raw(Signature sig, const double* const* cols, std::span<const double> w) noexcept {
    double sum = 0.0;
    for (std::size_t c = 0; c < sig.size(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            acc += w[j] * cols[j][c];
        }
        if (c < sig.cyclic) {
            acc = wrap_unchecked(acc);
        }
        sum += acc * acc;
    }
    return std::sqrt(sum);
}

double abs_diff_combined(const PixelTuple& x, const Weight& w) {
    if (w.kind() == WeightKind::General) {
        throw InvalidArgument("abs_diff_combined: closed form holds only for B1, B2, B11; use abs_diff_oracle");
    }
    const Signature sig = check_tuple(x, w);
    std::vector<std::vector<double>> raw;
    raw.reserve(x.size());
    std::vector<const double*> cols;
    for (const auto& p : x) {
        raw.push_back(p.raw());
        cols.push_back(raw.back().data());
    }
    return abs_diff_combined_raw(sig, cols.data(), w.entries());
}

namespace {

// Smallest |sum_j w_j [y_j]| over all seam branch choices of the bracketed values.
double min_over_branches(const double* y, std::span<const double> w) noexcept {
    std::size_t seam[4];
    std::size_t seam_count = 0;
    double base = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (is_seam(y[j])) {
            seam[seam_count++] = j;
        } else {
            base += w[j] * wrap_unchecked(y[j]);
        }
    }
    double best = std::numeric_limits<double>::infinity();
    const std::size_t combos = std::size_t{1} << seam_count;
    for (std::size_t mask = 0; mask < combos; ++mask) {
        double acc = base;
        for (std::size_t s = 0; s < seam_count; ++s) {
            acc += w[seam[s]] * (((mask >> s) & 1U) != 0 ? kPi : -kPi);
        }
        best = std::min(best, std::abs(acc));
    }
    return best;
}

}  // namespace

double abs_diff_oracle_raw(Signature sig, const double* const* cols, std::span<const double> w) noexcept {
    const std::size_t d = w.size();
    double linear_sq = 0.0;
    for (std::size_t c = sig.cyclic; c < sig.size(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            acc += w[j] * cols[j][c];
        }
        linear_sq += acc * acc;
    }

    // Enumerate k in {1..d}^m: component c is shifted so that point k_c sits on the seam.
    std::size_t combos = 1;
    for (std::size_t c = 0; c < sig.cyclic; ++c) {
        combos *= d;
    }
    double best = std::numeric_limits<double>::infinity();
    double y[4];
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rest = code;
        double cyclic_sq = 0.0;
        for (std::size_t c = 0; c < sig.cyclic; ++c) {
            const std::size_t k = rest % d;
            rest /= d;
            const double anchor = cols[k][c];
            for (std::size_t j = 0; j < d; ++j) {
                y[j] = cols[j][c] - anchor + kPi;
            }
            const double v = min_over_branches(y, w);
            cyclic_sq += v * v;
        }
        best = std::min(best, cyclic_sq);
    }
    return std::sqrt(best + linear_sq);
}

double abs_diff_oracle(const PixelTuple& x, const Weight& w) {
    const Signature sig = check_tuple(x, w);
    if (w.size() > 4 || sig.cyclic > 3) {
        throw InvalidArgument("abs_diff_oracle: enumeration limited to d <= 4 and m <= 3");
    }
    std::vector<std::vector<double>> raw;
    raw.reserve(x.size());
    std::vector<const double*> cols;
    for (const auto& p : x) {
        raw.push_back(p.raw());
        cols.push_back(raw.back().data());
    }
    return abs_diff_oracle_raw(sig, cols.data(), w.entries());
}

}  // namespace ctv
