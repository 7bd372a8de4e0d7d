#include "bellscope/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "bellscope/errors.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {

Ensemble::Ensemble(std::uint64_t seed, std::vector<SettingPair> schedule,
                   std::vector<std::int64_t> counts, std::vector<std::uint8_t> cells,
                   std::string model_descriptor)
    : seed_(seed),
      schedule_(std::move(schedule)),
      cells_(std::move(cells)),
      model_descriptor_(std::move(model_descriptor)) {
    if (counts.size() != schedule_.size())
        throw ConfigError("ensemble schedule and counts disagree");
    offsets_.resize(schedule_.size() + 1, 0);
    for (std::size_t p = 0; p < counts.size(); ++p) {
        if (counts[p] < 0) throw ConfigError("negative trial count");
        offsets_[p + 1] = offsets_[p] + counts[p];
    }
    if (offsets_.back() != std::int64_t(cells_.size()))
        throw ConfigError("ensemble cell data does not match the trial counts");
    for (std::uint8_t c : cells_)
        if (c > 3) throw ConfigError("ensemble cell out of range");
}

TrialRecord Ensemble::trial(std::int64_t trial_index) const {
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), trial_index);
    const std::size_t pair = std::size_t(it - offsets_.begin()) - 1;
    const int c = cell(trial_index);
    return {trial_index, schedule_[pair].alice, schedule_[pair].bob,
            alice_outcome_of_cell(c), bob_outcome_of_cell(c)};
}

std::vector<std::size_t> Ensemble::matching_blocks(const SettingPair& pair) const {
    std::vector<std::size_t> blocks;
    for (std::size_t p = 0; p < schedule_.size(); ++p)
        if (schedule_[p] == pair) blocks.push_back(p);
    return blocks;
}

namespace {

struct CellThresholds {
    double below_pp = 0.0;  // u < below_pp            -> (+1,+1)
    double below_pm = 0.0;  // u < below_pm            -> (+1,-1)
    double below_mp = 0.0;  // u < below_mp            -> (-1,+1)
                            // otherwise               -> (-1,-1)
};

CellThresholds thresholds_for(const JointDistribution& d) {
    CellThresholds t;
    t.below_pp = d.p_pp;
    t.below_pm = d.p_pp + d.p_pm;
    t.below_mp = d.p_pp + d.p_pm + d.p_mp;
    return t;
}

inline std::uint8_t draw_cell(const CellThresholds& t, double u) {
    if (u < t.below_pp) return 0;
    if (u < t.below_pm) return 1;
    if (u < t.below_mp) return 2;
    return 3;
}

std::vector<CellThresholds> schedule_thresholds(const CorrelationModel& model,
                                                const std::vector<SettingPair>& schedule) {
    std::vector<CellThresholds> t;
    t.reserve(schedule.size());
    for (const auto& pair : schedule)
        t.push_back(thresholds_for(model.joint(pair.alice, pair.bob)));
    return t;
}

}  // namespace

Ensemble simulate_ensemble(const CorrelationModel& model,
                           const std::vector<SettingPair>& schedule,
                           std::int64_t n_per_pair, std::uint64_t seed,
                           std::string model_descriptor) {
    if (n_per_pair < 1) throw ConfigError("n_per_pair must be at least 1");
    const auto thresholds = schedule_thresholds(model, schedule);

    const std::int64_t total = n_per_pair * std::int64_t(schedule.size());
    std::vector<std::uint8_t> cells(std::size_t(total));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t i = 0; i < total; ++i) {
        const std::int64_t pair = i / n_per_pair;
        const std::int64_t trial = i % n_per_pair;
        const double u = keyed_uniform(seed, std::uint64_t(pair), std::uint64_t(trial));
        cells[std::size_t(i)] = draw_cell(thresholds[std::size_t(pair)], u);
    }

    return Ensemble(seed, schedule,
                    std::vector<std::int64_t>(schedule.size(), n_per_pair),
                    std::move(cells), std::move(model_descriptor));
}

Ensemble simulate_ensemble_serial(const CorrelationModel& model,
                                  const std::vector<SettingPair>& schedule,
                                  std::int64_t n_per_pair, std::uint64_t seed,
                                  std::string model_descriptor) {
    if (n_per_pair < 1) throw ConfigError("n_per_pair must be at least 1");
    const auto thresholds = schedule_thresholds(model, schedule);

    std::vector<std::uint8_t> cells;
    cells.reserve(std::size_t(n_per_pair) * schedule.size());
    for (std::size_t pair = 0; pair < schedule.size(); ++pair)
        for (std::int64_t trial = 0; trial < n_per_pair; ++trial) {
            const double u = keyed_uniform(seed, std::uint64_t(pair), std::uint64_t(trial));
            cells.push_back(draw_cell(thresholds[pair], u));
        }

    return Ensemble(seed, schedule,
                    std::vector<std::int64_t>(schedule.size(), n_per_pair),
                    std::move(cells), std::move(model_descriptor));
}

namespace {

// Mean and standard error of a +-1 sample given the positive count. Exact
// integer counts keep the result independent of summation order.
void mean_and_stderr(std::int64_t n_plus, std::int64_t n, double& mean,
                     double& std_error) {
    mean = double(2 * n_plus - n) / double(n);
    if (n < 2) {
        std_error = 0.0;
        return;
    }
    const double variance = double(n) * (1.0 - mean * mean) / double(n - 1);
    std_error = std::sqrt(variance / double(n));
}

}  // namespace

CorrelationEstimate estimate_correlation(const Ensemble& ensemble, const SettingPair& pair) {
    const auto blocks = ensemble.matching_blocks(pair);
    if (blocks.empty()) throw ConfigError("setting pair does not occur in the ensemble");

    std::int64_t n = 0;
    std::int64_t n_same = 0;  // product +1, cells 0 and 3
    for (std::size_t p : blocks)
        for (std::int64_t i = ensemble.block_begin(p); i < ensemble.block_end(p); ++i) {
            const int c = ensemble.cell(i);
            n_same += (c == 0 || c == 3) ? 1 : 0;
            ++n;
        }
    if (n == 0) throw ConfigError("setting pair has no trials in the ensemble");

    CorrelationEstimate est;
    est.n = n;
    mean_and_stderr(n_same, n, est.estimate, est.std_error);
    return est;
}

PartitionReport partition_analysis(const Ensemble& ensemble, const CorrelationModel& model,
                                   const SettingPair& pair, Party by_party) {
    const auto blocks = ensemble.matching_blocks(pair);
    if (blocks.empty()) throw ConfigError("setting pair does not occur in the ensemble");

    // counts[partition outcome][other party outcome]
    std::int64_t counts[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t p : blocks)
        for (std::int64_t i = ensemble.block_begin(p); i < ensemble.block_end(p); ++i) {
            const int c = ensemble.cell(i);
            const int mine = by_party == Party::Alice ? alice_outcome_of_cell(c)
                                                      : bob_outcome_of_cell(c);
            const int theirs = by_party == Party::Alice ? bob_outcome_of_cell(c)
                                                        : alice_outcome_of_cell(c);
            ++counts[mine > 0 ? 0 : 1][theirs > 0 ? 0 : 1];
        }

    PartitionReport report;
    report.by_party = by_party;
    report.count_plus = counts[0][0] + counts[0][1];
    report.count_minus = counts[1][0] + counts[1][1];
    if (report.count_plus > 0)
        mean_and_stderr(counts[0][0], report.count_plus, report.avg_given_plus,
                        report.std_error_plus);
    if (report.count_minus > 0)
        mean_and_stderr(counts[1][0], report.count_minus, report.avg_given_minus,
                        report.std_error_minus);
    report.empty_cell = report.count_plus == 0 || report.count_minus == 0;

    const JointDistribution d = model.joint(pair.alice, pair.bob);
    const auto conditional = [&](int outcome) {
        if (by_party == Party::Alice)
            return d.alice_marginal(outcome) > 0.0 ? bob_average_given_alice(d, outcome) : 0.0;
        return d.bob_marginal(outcome) > 0.0 ? alice_average_given_bob(d, outcome) : 0.0;
    };
    report.expected_plus = conditional(+1);
    report.expected_minus = conditional(-1);
    return report;
}

ConservationScanReport conservation_violation_scan(const CorrelationModel& model,
                                                   const BellState& state,
                                                   const ChshSettings& settings,
                                                   std::int64_t n_per_pair,
                                                   std::uint64_t seed) {
    const auto pairs = settings.pairs();
    const std::vector<SettingPair> schedule(pairs.begin(), pairs.end());
    const Ensemble ensemble = simulate_ensemble(model, schedule, n_per_pair, seed);

    ConservationScanReport report;
    for (int i = 0; i < 4; ++i) {
        const SettingPair& pair = pairs[std::size_t(i)];
        if (!pair.alice.angle || !pair.bob.angle)
            throw ConfigError("conservation scan needs angles on all settings");
        const JointDistribution target_dist =
            joint_distribution(state, *pair.alice.angle, *pair.bob.angle);

        report.pair_estimates[std::size_t(i)] = estimate_correlation(ensemble, pair);
        const PartitionReport partition =
            partition_analysis(ensemble, model, pair, Party::Alice);

        for (int outcome : {+1, -1}) {
            const std::int64_t count =
                outcome > 0 ? partition.count_plus : partition.count_minus;
            if (count == 0) continue;
            ConservationScanCell cell;
            cell.pair_index = i;
            cell.alice_outcome = outcome;
            cell.empirical =
                outcome > 0 ? partition.avg_given_plus : partition.avg_given_minus;
            cell.std_error =
                outcome > 0 ? partition.std_error_plus : partition.std_error_minus;
            cell.target = bob_average_given_alice(target_dist, outcome);
            cell.deviation = std::abs(cell.empirical - cell.target);

            report.max_deviation = std::max(report.max_deviation, cell.deviation);
            if (cell.std_error > 0.0)
                report.max_z = std::max(report.max_z, cell.deviation / cell.std_error);
            else if (cell.deviation > 0.0)
                report.exact_violation = true;
            report.cells.push_back(cell);
        }
    }
    return report;
}

ChshEstimate estimate_chsh(const Ensemble& ensemble, const ChshSettings& settings) {
    ChshEstimate est;
    double variance = 0.0;
    for (int i = 0; i < 4; ++i) {
        est.per_pair[std::size_t(i)] = estimate_correlation(ensemble, settings.pair(i));
        const double se = est.per_pair[std::size_t(i)].std_error;
        variance += se * se;
    }
    est.value = est.per_pair[0].estimate + est.per_pair[1].estimate +
                est.per_pair[2].estimate - est.per_pair[3].estimate;
    est.std_error = std::sqrt(variance);
    return est;
}

}  // namespace bellscope
