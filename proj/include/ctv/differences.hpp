#pragma once

// Absolute finite differences D(x; w) for linear, cyclic and combined data.

#include <cstddef>
#include <span>
#include <vector>

#include "ctv/geometry.hpp"

namespace ctv {

enum class WeightKind { B1, B2, B11, General };

/// Finite-difference weight: nonzero entries summing to zero.
class Weight {
public:
    /// (-1, 1)
    static Weight b1();
    /// (1, -2, 1)
    static Weight b2();
    /// (-1, 1, 1, -1)
    static Weight b11();
    static Weight of(WeightKind kind);
    /// Any zero-sum, nonzero vector. Only the oracle accepts these.
    static Weight general(std::vector<double> entries);

    [[nodiscard]] WeightKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }
    [[nodiscard]] double operator[](std::size_t j) const noexcept { return entries_[j]; }

private:
    Weight(std::vector<double> e, WeightKind k) : entries_(std::move(e)), kind_(k) {}

    std::vector<double> entries_;
    WeightKind kind_;
};

const char* to_string(WeightKind kind) noexcept;

/// d points sharing one signature.
using PixelTuple = std::vector<PixelValue>;

/// Columns x^(1..d) of an n x d real matrix.
using Columns = std::vector<std::vector<double>>;

/// ||x w|| for real column vectors.
double abs_diff_linear(const Columns& x, const Weight& w);

/// Closed form for w in {B1, B2, B11}: sqrt(||(x_S w)_2pi||^2 + ||x_R w||^2).
double abs_diff_combined(const PixelTuple& x, const Weight& w);

/// Same closed form on raw pixel pointers (no checks), used by the solver and the functional.
double abs_diff_combined_raw(Signature sig, const double* const* cols, std::span<const double> w) noexcept;

/// Brute-force evaluation by minimizing over the finite shift set {1..d}^m with
/// the multivalued bracket at seam hits. Accepts general weights; d <= 4, m <= 3.
double abs_diff_oracle(const PixelTuple& x, const Weight& w);

/// Allocation-free shift-enumeration oracle on raw pixel pointers; d <= 4, m <= 3, unchecked.
double abs_diff_oracle_raw(Signature sig, const double* const* cols, std::span<const double> w) noexcept;

/// Throws DimensionMismatch unless all points share a signature and the count matches w.
Signature check_tuple(const PixelTuple& x, const Weight& w);

}  // namespace ctv
