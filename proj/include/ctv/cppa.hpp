#pragma once

// Cyclic proximal point solver for the denoising and inpainting functionals.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ctv/differences.hpp"
#include "ctv/functional.hpp"
#include "ctv/image.hpp"

namespace ctv {

/// lambda0 / k. Throws InvalidArgument for k = 0.
double lambda_seq(std::size_t k, double lambda0);

enum class Orientation { Horizontal, Vertical, Diagonal, Antidiagonal, Block, Pixel };
enum class TermKind { Difference, Data };

const char* to_string(Orientation o) noexcept;

/// One inner step of a cycle. Tuples are stored flat, `arity` pixel indices each, and
/// never share a pixel within one step.
struct SweepStep {
    std::string label;  ///< "J1" ... "J19"
    TermKind term = TermKind::Difference;
    WeightKind weight = WeightKind::B1;
    Orientation orientation = Orientation::Horizontal;
    /// Residue of the first tuple member's column (and row, for blocks) selecting this step's
    /// tuples; second-order steps use the residue of the middle member modulo 3.
    unsigned phase_x = 0;
    unsigned phase_y = 0;
    double multiplier = 0.0;
    std::size_t arity = 1;
    std::vector<std::size_t> tuples;

    [[nodiscard]] std::size_t tuple_count() const noexcept { return tuples.size() / arity; }
};

struct SweepPlan {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<SweepStep> steps;
};

/// Eighteen difference steps, plus the data step unless mode is InpaintNoiseless.
/// Steps with a zero multiplier are kept; the solver skips them.
SweepPlan build_splitting(std::size_t width, std::size_t height, const RegParams& params, Mode mode);

/// Fills missing pixels wherever a first-order, second-order or mixed stencil enabled by
/// params has that pixel as its only unknown member, solving D = 0 for it. Stencil kinds
/// are tried in that order; within a kind the candidate met first in row-major order wins.
/// Passes repeat until nothing changes; leftovers are copied from the nearest known pixel.
ProductImage init_unknown_boundary(const ProductImage& f, const InpaintMask& mask, const RegParams& params);
/// Same with every stencil enabled.
ProductImage init_unknown_boundary(const ProductImage& f, const InpaintMask& mask);

enum class TieBreak { PlusPi, SeededRandom };

struct SolverConfig {
    RegParams params;
    Mode mode = Mode::Denoise;
    double lambda0 = std::numbers::pi / 2.0;
    std::size_t iterations = 400;
    TieBreak tie_break = TieBreak::PlusPi;
    std::uint64_t seed = 0;
    bool record_energy = false;
    /// Thread count for the sweeps; 0 keeps the OpenMP default. Results do not depend on it.
    int workers = 0;
    /// Stop once the relative change of the objective over one cycle falls below this; 0 disables.
    double rel_tol = 0.0;
};

struct SolveReport {
    ProductImage result;
    std::vector<double> energy_trace;  ///< objective after each cycle, when recorded
    double initial_energy = 0.0;       ///< objective of the initialization, when recorded
    std::size_t iterations_run = 0;
    double wall_time = 0.0;  ///< seconds
};

/// Runs the cyclic proximal point iteration. Denoise mode requires an empty mask; the
/// inpainting modes require at least one known pixel. In InpaintNoiseless mode the known
/// pixels of the result are copies of f.
SolveReport solve(const ProductImage& f, const InpaintMask& mask, const SolverConfig& cfg);

}  // namespace ctv
