// Uniform interface over the correlation models under comparison: classical
// LHV mixtures, quantum Bell states, the PR box and its generalized family,
// plus the marginal checkers (no-signaling, equal-frequency outcomes) and
// the conservation-deviation measure.

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>

#include "bellscope/quantum.hpp"
#include "bellscope/settings.hpp"

namespace bellscope {

class CorrelationModel {
  public:
    virtual ~CorrelationModel() = default;

    // Joint outcome distribution for one setting pair. Throws ModelError for
    // settings the model cannot interpret.
    virtual JointDistribution joint(const SettingLabel& a, const SettingLabel& b) const = 0;

    virtual bool angle_parameterized() const { return false; }
    virtual std::string kind() const = 0;
};

class QuantumModel final : public CorrelationModel {
  public:
    explicit QuantumModel(BellState state) : state_(state) {}

    JointDistribution joint(const SettingLabel& a, const SettingLabel& b) const override;
    bool angle_parameterized() const override { return true; }
    std::string kind() const override { return "quantum"; }

    const BellState& state() const { return state_; }

  private:
    BellState state_;
};

// A local deterministic strategy ("instruction set"): one fixed outcome for
// each slot of each party.
struct DeterministicStrategy {
    int alice_unprimed = +1;
    int alice_primed = +1;
    int bob_unprimed = +1;
    int bob_primed = +1;

    int alice(Slot s) const { return s == Slot::Unprimed ? alice_unprimed : alice_primed; }
    int bob(Slot s) const { return s == Slot::Unprimed ? bob_unprimed : bob_primed; }

    static constexpr int kCount = 16;

    // Lexicographic enumeration over (alice unprimed, alice primed,
    // bob unprimed, bob primed) with +1 before -1, so index 0 is all-plus
    // and index 15 is all-minus. index ^ 15 is the globally flipped strategy.
    static DeterministicStrategy from_index(int index);
};

// Convex mixture of the 16 deterministic strategies.
class LhvModel final : public CorrelationModel {
  public:
    explicit LhvModel(const std::array<double, 16>& weights);

    static LhvModel pure(int strategy_index);
    static LhvModel random(std::uint64_t seed);
    // Random mixture with weight[k] == weight[k ^ 15], so both single-party
    // marginals are exactly 1/2 at every setting.
    static LhvModel random_symmetric(std::uint64_t seed);

    JointDistribution joint(const SettingLabel& a, const SettingLabel& b) const override;
    std::string kind() const override { return "lhv"; }

    const std::array<double, 16>& weights() const { return weights_; }

  private:
    std::array<double, 16> weights_{};
};

// The Popescu-Rohrlich box: perfectly correlated outcomes at (a,b), (a,b')
// and (a',b), perfectly anti-correlated at (a',b').
class PrBoxModel final : public CorrelationModel {
  public:
    JointDistribution joint(const SettingLabel& a, const SettingLabel& b) const override;
    std::string kind() const override { return "pr"; }
};

enum class ReplacedCell { FirstCorrelation, FourthCorrelation };

// The PR box with one designated cell replaced by the no-signaling-
// constrained table p(1,1) = p(-1,-1) = c, p(1,-1) = p(-1,1) = e,
// 2c + 2e = 1. Sweeping c from 0 to 1/2 interpolates between the quantum
// (conservation-respecting) cell and the full PR cell.
class GeneralizedPrModel final : public CorrelationModel {
  public:
    GeneralizedPrModel(double c, double e, ReplacedCell replaced);

    JointDistribution joint(const SettingLabel& a, const SettingLabel& b) const override;
    std::string kind() const override { return "generalized_pr"; }

    double c() const { return c_; }
    double e() const { return e_; }
    ReplacedCell replaced() const { return replaced_; }

  private:
    double c_;
    double e_;
    ReplacedCell replaced_;
};

// Fixed table of four joint distributions indexed by slot pair. Used for
// hand-built fixtures, including intentionally signaling ones.
class TableModel final : public CorrelationModel {
  public:
    // Cell order matches ChshSettings::pair: (a,b), (a,b'), (a',b), (a',b').
    explicit TableModel(const std::array<JointDistribution, 4>& cells);

    JointDistribution joint(const SettingLabel& a, const SettingLabel& b) const override;
    std::string kind() const override { return "table"; }

    const std::array<JointDistribution, 4>& cells() const { return cells_; }

  private:
    std::array<JointDistribution, 4> cells_;
};

// Slot pair -> cell index in the fixed (a,b), (a,b'), (a',b), (a',b') order.
int cell_index(Slot alice, Slot bob);

struct MarginalCheckReport {
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string worst;  // human-readable description of the worst line
};

// Checks the four no-signaling equalities for both outcomes: each party's
// marginal must not depend on the other party's setting. Violations are
// reported, never thrown.
MarginalCheckReport no_signaling_check(const CorrelationModel& model,
                                       const ChshSettings& settings, double tol);

// Checks that every single-party marginal is 1/2 at all four setting pairs,
// i.e. both parties see +1 and -1 with equal frequency for every setting.
MarginalCheckReport nprf_marginal_check(const CorrelationModel& model,
                                        const ChshSettings& settings, double tol);

// Max over the four setting pairs and both Alice outcomes of the gap between
// the model's conditional average of Bob's outcome and the conservation
// target of the given state at the pair's angles. Zero for the matching
// quantum model; 2 for the PR box against the unlike state at the
// paper_pr_assignment settings.
double conservation_deviation(const CorrelationModel& model, const BellState& state,
                              const ChshSettings& settings);

// CHSH value of the generalized PR family in closed form:
// 3 + 2c - 2e when the first correlation is replaced, 3 - 2c + 2e for the
// fourth. Agrees with the generic evaluation of the model's distributions.
double generalized_pr_chsh(const GeneralizedPrModel& model);

// Numerical rendition of the eigenbasis-configuration argument: search for
// device angles under which the given state reproduces the last three PR
// cells, then report how the quantum first cell contradicts the PR box.
struct EigenbasisFitReport {
    ChshSettings settings;                 // best-fit angles, a' pinned at 0
    double fit_residual = 0.0;             // cells 2..4 mismatch after the fit
    double quantum_first_cell_like = 0.0;  // P(like outcomes) at (a,b), quantum
    double pr_first_cell_like = 0.0;       // P(like outcomes) the PR box demands
    double contradiction = 0.0;            // |difference| of the two
};

EigenbasisFitReport pr_eigenbasis_check(const BellState& state);

}  // namespace bellscope
