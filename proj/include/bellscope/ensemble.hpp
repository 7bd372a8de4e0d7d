// Seeded Monte Carlo trial ensembles and their statistics: correlation
// estimates, outcome-partitioned conditional averages ("relativity of data
// partition"), and the conservation-violation scan. Generation has an OpenMP
// kernel plus a serial reference implementation; both are bit-identical for
// any thread count because every trial's draw is keyed by
// (seed, pair index, trial index).

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bellscope/models.hpp"
#include "bellscope/settings.hpp"

namespace bellscope {

struct TrialRecord {
    std::int64_t index = 0;
    SettingLabel alice_setting;
    SettingLabel bob_setting;
    int alice_outcome = +1;
    int bob_outcome = +1;
};

// Joint-outcome cell of a trial, in the JointDistribution order:
// 0 -> (+1,+1), 1 -> (+1,-1), 2 -> (-1,+1), 3 -> (-1,-1).
inline int alice_outcome_of_cell(int cell) { return cell < 2 ? +1 : -1; }
inline int bob_outcome_of_cell(int cell) { return (cell % 2 == 0) ? +1 : -1; }

class Ensemble {
  public:
    // counts[p] trials for schedule entry p; cells holds the per-trial
    // outcome cells for all entries back to back.
    Ensemble(std::uint64_t seed, std::vector<SettingPair> schedule,
             std::vector<std::int64_t> counts, std::vector<std::uint8_t> cells,
             std::string model_descriptor);

    std::int64_t size() const { return std::int64_t(cells_.size()); }
    std::uint64_t seed() const { return seed_; }
    const std::vector<SettingPair>& schedule() const { return schedule_; }
    const std::string& model_descriptor() const { return model_descriptor_; }
    const std::vector<std::uint8_t>& cells() const { return cells_; }

    std::int64_t block_begin(std::size_t pair_index) const { return offsets_[pair_index]; }
    std::int64_t block_end(std::size_t pair_index) const { return offsets_[pair_index + 1]; }

    int cell(std::int64_t trial_index) const { return cells_[std::size_t(trial_index)]; }
    TrialRecord trial(std::int64_t trial_index) const;

    // Schedule entries whose settings match the given pair.
    std::vector<std::size_t> matching_blocks(const SettingPair& pair) const;

  private:
    std::uint64_t seed_ = 0;
    std::vector<SettingPair> schedule_;
    std::vector<std::int64_t> offsets_;  // prefix sums, size schedule_.size() + 1
    std::vector<std::uint8_t> cells_;
    std::string model_descriptor_;
};

// Draws n_per_pair outcome pairs per scheduled setting pair by inverse-CDF
// sampling of the model's four-cell distribution. The model_descriptor is
// carried verbatim as provenance. Throws ConfigError for n_per_pair < 1 and
// propagates ModelError for schedule entries the model rejects.
Ensemble simulate_ensemble(const CorrelationModel& model,
                           const std::vector<SettingPair>& schedule,
                           std::int64_t n_per_pair, std::uint64_t seed,
                           std::string model_descriptor = {});

// Serial reference implementation, kept for testing the OpenMP kernel.
Ensemble simulate_ensemble_serial(const CorrelationModel& model,
                                  const std::vector<SettingPair>& schedule,
                                  std::int64_t n_per_pair, std::uint64_t seed,
                                  std::string model_descriptor = {});

struct CorrelationEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

// Sample mean of the outcome product over all trials matching the pair,
// with the unbiased-variance standard error. Throws ConfigError when the
// pair does not occur in the ensemble.
CorrelationEstimate estimate_correlation(const Ensemble& ensemble, const SettingPair& pair);

struct PartitionReport {
    Party by_party = Party::Alice;
    std::int64_t count_plus = 0;
    std::int64_t count_minus = 0;
    double avg_given_plus = 0.0;   // other party's mean over the +1 partition
    double avg_given_minus = 0.0;  // and over the -1 partition
    double expected_plus = 0.0;    // analytic conditional expectations
    double expected_minus = 0.0;
    double std_error_plus = 0.0;
    double std_error_minus = 0.0;
    bool empty_cell = false;  // one partition side had no trials
};

// Splits the pair's trials by one party's outcome and reports the other
// party's conditional averages next to the model's analytic expectations.
PartitionReport partition_analysis(const Ensemble& ensemble, const CorrelationModel& model,
                                   const SettingPair& pair, Party by_party);

struct ConservationScanCell {
    int pair_index = 0;
    int alice_outcome = +1;
    double empirical = 0.0;
    double target = 0.0;  // the state's conservation target at this pair
    double std_error = 0.0;
    double deviation = 0.0;
};

struct ConservationScanReport {
    std::array<CorrelationEstimate, 4> pair_estimates{};
    std::vector<ConservationScanCell> cells;
    double max_deviation = 0.0;
    double max_z = 0.0;          // over cells with a positive standard error
    bool exact_violation = false;  // a zero-variance cell missed its target
};

// Simulates the four CHSH setting pairs and compares the empirical
// partitioned conditional averages against the state's conservation
// targets. A quantum model is consistent with zero deviation; the PR box at
// the paper_pr_assignment settings misses by 2 at the first cell.
ConservationScanReport conservation_violation_scan(const CorrelationModel& model,
                                                   const BellState& state,
                                                   const ChshSettings& settings,
                                                   std::int64_t n_per_pair,
                                                   std::uint64_t seed);

struct ChshEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::array<CorrelationEstimate, 4> per_pair{};
};

// CHSH estimate from an ensemble containing the four setting pairs.
ChshEstimate estimate_chsh(const Ensemble& ensemble, const ChshSettings& settings);

}  // namespace bellscope
