#include "bellscope/chsh.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "bellscope/errors.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {

ChshReport chsh_value(const CorrelationModel& model, const ChshSettings& settings) {
    ChshReport report;
    report.settings = settings;
    for (int i = 0; i < 4; ++i) {
        const auto pair = settings.pair(i);
        report.per_pair[i] = correlation(model.joint(pair.alice, pair.bob));
    }
    report.value = report.per_pair[0] + report.per_pair[1] + report.per_pair[2] -
                   report.per_pair[3];
    return report;
}

double deterministic_chsh(const DeterministicStrategy& s) {
    return s.alice_unprimed * s.bob_unprimed + s.alice_unprimed * s.bob_primed +
           s.alice_primed * s.bob_unprimed - s.alice_primed * s.bob_primed;
}

double classical_bound_bruteforce() {
    double bound = 0.0;
    for (int k = 0; k < DeterministicStrategy::kCount; ++k) {
        const double value = deterministic_chsh(DeterministicStrategy::from_index(k));
        assert(std::abs(value) == 2.0 && "deterministic strategies only reach +-2");
        bound = std::max(bound, std::abs(value));
    }
    return bound;
}

double lhv_mixture_bound_check(int draws, std::uint64_t seed) {
    const ChshSettings slots = ChshSettings::slots();
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        const LhvModel model = LhvModel::random(seed + std::uint64_t(i));
        worst = std::max(worst, std::abs(chsh_value(model, slots).value));
    }
    return worst;
}

namespace {

double evaluate(const CorrelationModel& model, const std::array<double, 4>& x) {
    return chsh_value(model, ChshSettings::angles(x[0], x[1], x[2], x[3])).value;
}

std::array<double, 4> grid_point(std::int64_t index, int n, double step) {
    std::array<double, 4> x{};
    for (int k = 3; k >= 0; --k) {
        x[k] = step * double(index % n);
        index /= n;
    }
    return x;
}

bool better(OptimizeMode mode, double candidate, double incumbent) {
    return mode == OptimizeMode::Maximize ? candidate > incumbent
                                          : candidate < incumbent;
}

}  // namespace

namespace detail {

GridBest chsh_grid_search_serial(const CorrelationModel& model, OptimizeMode mode,
                                 int n) {
    const double step = 2.0 * std::numbers::pi / n;
    const std::int64_t total = std::int64_t(n) * n * n * n;
    GridBest best;
    for (std::int64_t i = 0; i < total; ++i) {
        const double value = evaluate(model, grid_point(i, n, step));
        if (best.index < 0 || better(mode, value, best.value)) {
            best = {value, i};
        }
    }
    return best;
}

GridBest chsh_grid_search_parallel(const CorrelationModel& model, OptimizeMode mode,
                                   int n) {
    const double step = 2.0 * std::numbers::pi / n;
    const std::int64_t total = std::int64_t(n) * n * n * n;
    GridBest best;
#ifdef _OPENMP
#pragma omp parallel
    {
        GridBest local;
#pragma omp for schedule(static) nowait
        for (std::int64_t i = 0; i < total; ++i) {
            const double value = evaluate(model, grid_point(i, n, step));
            if (local.index < 0 || better(mode, value, local.value)) {
                local = {value, i};
            }
        }
        // Merge with a total order on (value, index) so the winner does not
        // depend on thread count or merge order.
#pragma omp critical(bellscope_grid_merge)
        {
            if (local.index >= 0 &&
                (best.index < 0 || better(mode, local.value, best.value) ||
                 (local.value == best.value && local.index < best.index))) {
                best = local;
            }
        }
    }
    return best;
#else
    return chsh_grid_search_serial(model, mode, n);
#endif
}

}  // namespace detail

ChshReport optimize_chsh(const CorrelationModel& model, OptimizeMode mode,
                         int grid_points, int refine_iters) {
    if (!model.angle_parameterized())
        throw ModelError("optimize_chsh requires an angle-parameterized model");
    if (grid_points < 8) throw ConfigError("optimize_chsh needs grid_points >= 8");
    if (refine_iters < 0) throw ConfigError("optimize_chsh needs refine_iters >= 0");

    const double step0 = 2.0 * std::numbers::pi / grid_points;
    const auto grid = detail::chsh_grid_search_parallel(model, mode, grid_points);
    std::array<double, 4> x = grid_point(grid.index, grid_points, step0);
    double value = grid.value;

    // Coordinate descent with step halving; the objective is smooth
    // trigonometry, so this converges far below the 1e-6 optimizer tolerance.
    double step = step0;
    for (int sweep = 0; sweep < refine_iters && step > 1e-12; ++sweep) {
        double sweep_gain = 0.0;
        for (int k = 0; k < 4; ++k)
            for (double delta : {step, -step}) {
                auto trial = x;
                trial[k] += delta;
                const double v = evaluate(model, trial);
                if (better(mode, v, value)) {
                    sweep_gain += std::abs(v - value);
                    value = v;
                    x = trial;
                }
            }
        if (sweep_gain < 1e-9) step *= 0.5;
    }

    return chsh_value(model, ChshSettings::angles(x[0], x[1], x[2], x[3]));
}

BoundOrderingReport bound_ordering_report() {
    BoundOrderingReport report;
    report.classical = classical_bound_bruteforce();

    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    report.quantum =
        std::abs(optimize_chsh(singlet, OptimizeMode::Minimize, 16, 60).value);

    const PrBoxModel pr;
    report.pr = chsh_value(pr, ChshSettings::slots()).value;

    assert(report.classical < report.quantum && report.quantum < report.pr);
    return report;
}

}  // namespace bellscope
