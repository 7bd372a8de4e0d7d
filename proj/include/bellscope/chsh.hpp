// CHSH quantity evaluation, the brute-force classical bound, and grid +
// coordinate-descent optimization over measurement angles. The grid stage
// has an OpenMP kernel and a serial reference implementation that agree
// bit-exactly; the serial one is kept for testing and benchmarking.

#pragma once

#include <array>
#include <cstdint>

#include "bellscope/models.hpp"
#include "bellscope/settings.hpp"

namespace bellscope {

struct ChshReport {
    double value = 0.0;
    std::array<double, 4> per_pair{};  // E(a,b), E(a,b'), E(a',b), E(a',b')
    ChshSettings settings;
};

// E(a,b) + E(a,b') + E(a',b) - E(a',b') from the model's distributions.
ChshReport chsh_value(const CorrelationModel& model, const ChshSettings& settings);

// CHSH value of a single deterministic strategy; always +2 or -2.
double deterministic_chsh(const DeterministicStrategy& strategy);

// Enumerates all 16 deterministic strategies and returns max |CHSH|, which
// is exactly 2. Every individual value is verified to be +-2.
double classical_bound_bruteforce();

// Max |CHSH| over random LHV mixtures; by convexity it can never exceed the
// deterministic extreme of 2.
double lhv_mixture_bound_check(int draws, std::uint64_t seed);

enum class OptimizeMode { Minimize, Maximize };

// Coarse grid over [0, 2pi)^4 followed by deterministic coordinate descent.
// Deterministic given (grid_points, refine_iters): the grid winner is the
// lowest-index optimum and refinement is serial, so reports are bit-identical
// across runs and thread counts. Throws ModelError for models without
// angles, ConfigError for grid_points < 8 or refine_iters < 0.
ChshReport optimize_chsh(const CorrelationModel& model, OptimizeMode mode,
                         int grid_points, int refine_iters);

namespace detail {

struct GridBest {
    double value = 0.0;
    std::int64_t index = -1;  // linear grid index, ties resolved downward
};

// The two interchangeable grid kernels. Both scan grid_points^4 angle
// combinations and pick the best value with the lowest linear index.
GridBest chsh_grid_search_serial(const CorrelationModel& model, OptimizeMode mode,
                                 int grid_points);
GridBest chsh_grid_search_parallel(const CorrelationModel& model, OptimizeMode mode,
                                   int grid_points);

}  // namespace detail

struct BoundOrderingReport {
    double classical = 0.0;  // brute-force deterministic bound, exactly 2
    double quantum = 0.0;    // |optimized quantum CHSH|, 2 sqrt 2
    double pr = 0.0;         // PR box value, exactly 4
};

// Computes the three bounds and asserts the strict ordering 2 < 2sqrt2 < 4.
BoundOrderingReport bound_ordering_report();

}  // namespace bellscope
