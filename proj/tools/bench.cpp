// Benchmark comparing the OpenMP kernels against their serial reference
// implementations: ensemble generation and the CHSH grid search. Also
// verifies that both paths produce identical results.
//
// Usage: bellscope-bench [trials_per_pair] [grid_points]

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "bellscope/chsh.hpp"
#include "bellscope/ensemble.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    using namespace bellscope;
    const std::int64_t trials = argc > 1 ? std::atoll(argv[1]) : 2000000;
    const int grid = argc > 2 ? std::atoi(argv[2]) : 24;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("threads: %d\n\n", threads);

    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    const double pi = std::numbers::pi;
    const auto pairs = ChshSettings::angles(pi / 4, -pi / 4, 0.0, pi / 2).pairs();
    const std::vector<SettingPair> schedule(pairs.begin(), pairs.end());

    {
        auto t0 = std::chrono::steady_clock::now();
        const Ensemble serial = simulate_ensemble_serial(singlet, schedule, trials, 7);
        const double t_serial = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const Ensemble parallel = simulate_ensemble(singlet, schedule, trials, 7);
        const double t_parallel = seconds_since(t0);

        const bool identical = serial.cells() == parallel.cells();
        std::printf("ensemble generation, %lld trials x 4 pairs\n",
                    static_cast<long long>(trials));
        std::printf("  serial   %8.3f s\n", t_serial);
        std::printf("  openmp   %8.3f s   speedup %.2fx   identical: %s\n\n", t_parallel,
                    t_serial / t_parallel, identical ? "yes" : "NO");
        if (!identical) return 1;
    }

    {
        auto t0 = std::chrono::steady_clock::now();
        const auto serial =
            detail::chsh_grid_search_serial(singlet, OptimizeMode::Minimize, grid);
        const double t_serial = seconds_since(t0);

        t0 = std::chrono::steady_clock::now();
        const auto parallel =
            detail::chsh_grid_search_parallel(singlet, OptimizeMode::Minimize, grid);
        const double t_parallel = seconds_since(t0);

        const bool identical =
            serial.value == parallel.value && serial.index == parallel.index;
        std::printf("chsh grid search, %d^4 settings\n", grid);
        std::printf("  serial   %8.3f s\n", t_serial);
        std::printf("  openmp   %8.3f s   speedup %.2fx   identical: %s\n", t_parallel,
                    t_serial / t_parallel, identical ? "yes" : "NO");
        if (!identical) return 1;
    }
    return 0;
}
