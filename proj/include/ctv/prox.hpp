#pragma once

// Closed-form proximal mappings for difference terms and the data term, plus
// a direct-minimization oracle used to check them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ctv/differences.hpp"
#include "ctv/geometry.hpp"

namespace ctv {

/// Indices of the tuple members that may move; the others are pinned.
class ActiveSet {
public:
    /// Validates that indices are nonempty, distinct and below d.
    ActiveSet(std::vector<std::size_t> indices, std::size_t d);
    static ActiveSet all(std::size_t d);
    static ActiveSet from_bits(unsigned bits, std::size_t d);

    [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }
    [[nodiscard]] bool contains(std::size_t j) const noexcept { return ((bits_ >> j) & 1U) != 0; }
    [[nodiscard]] unsigned bits() const noexcept { return bits_; }
    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }

private:
    std::vector<std::size_t> indices_;
    unsigned bits_ = 0;
};

struct LinearProxResult {
    Columns x;
    double value = 0.0;
};

/// Minimizer of 1/2 ||f - x||_F^2 + lambda ||x w - a|| over real n x d matrices.
/// lambda = 0 returns f. Throws for w = 0 or lambda < 0.
LinearProxResult prox_linear_offset(const Columns& f, std::span<const double> a, std::span<const double> w,
                                    double lambda);

/// Set-valued prox result; candidates hold only the active columns, in index order.
struct ProxResult {
    std::vector<PixelTuple> candidates;
    bool multivalued = false;
};

/// Prox of x^a -> lambda D(x; w) with the inactive members of f held fixed.
/// One candidate generically, 2^l when l cyclic rows of f w sit on the seam.
ProxResult prox_difference_constrained(const PixelTuple& f, const Weight& w, const ActiveSet& active,
                                       double lambda);

/// 1/2 sum_{j in A} d(x_j, f_j)^2 + lambda D(x; w), where x takes x_active on A and f elsewhere.
double prox_difference_energy(const PixelTuple& f, const PixelTuple& x_active, const Weight& w,
                              const ActiveSet& active, double lambda);

/// Prox of x -> lambda/2 d(f, x)^2 evaluated at g.
PixelValue prox_data(const PixelValue& g, const PixelValue& f, double lambda);

struct OracleResult {
    PixelTuple x;  ///< active columns only
    double value = 0.0;
};

/// Direct minimization of the constrained difference energy, independent of the closed form.
/// Runs a dual projected-gradient solve on every lifted branch of the wrap and, when at most two
/// coordinates are free, an exhaustive grid search (step 1e-2) with pattern-search refinement
/// down to 1e-6. Limits: |A| <= 4, m <= 3, m + n <= 4.
OracleResult prox_oracle(const PixelTuple& f, const Weight& w, const ActiveSet& active, double lambda);

// --- raw kernels used by the solver ---------------------------------------

/// In-place closed-form difference prox on d pixel pointers. Bit c of seam_bits picks the +pi
/// branch (set) or -pi branch (clear) for seam component c. scratch needs sig.size() doubles.
void apply_difference_prox(Signature sig, double* const* cols, std::span<const double> w, unsigned active_bits,
                           double lambda, std::uint64_t seam_bits, std::span<double> scratch) noexcept;

/// In-place data prox on one pixel.
void apply_data_prox(Signature sig, double* x, const double* f, double lambda) noexcept;

}  // namespace ctv
