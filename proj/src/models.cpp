#include "bellscope/models.hpp"

#include <cmath>
#include <numbers>

#include "bellscope/errors.hpp"
#include "bellscope/rng.hpp"

namespace bellscope {

namespace {

Angle require_angle(const SettingLabel& label, const char* who) {
    if (!label.angle)
        throw ModelError(std::string("quantum model needs an angle on the ") + who +
                         " setting");
    return *label.angle;
}

constexpr JointDistribution kCorrelatedHalf{0.5, 0.0, 0.0, 0.5};
constexpr JointDistribution kAntiCorrelatedHalf{0.0, 0.5, 0.5, 0.0};

}  // namespace

JointDistribution QuantumModel::joint(const SettingLabel& a, const SettingLabel& b) const {
    return joint_distribution(state_, require_angle(a, "Alice"), require_angle(b, "Bob"));
}

DeterministicStrategy DeterministicStrategy::from_index(int index) {
    if (index < 0 || index >= kCount)
        throw ModelError("deterministic strategy index out of range");
    const auto outcome = [index](int bit) { return (index >> bit) & 1 ? -1 : +1; };
    return {outcome(3), outcome(2), outcome(1), outcome(0)};
}

LhvModel::LhvModel(const std::array<double, 16>& weights) : weights_(weights) {
    double sum = 0.0;
    for (double w : weights_) {
        if (w < -1e-12) throw ModelError("LHV weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ModelError("LHV weights must sum to 1");
}

LhvModel LhvModel::pure(int strategy_index) {
    std::array<double, 16> w{};
    if (strategy_index < 0 || strategy_index >= DeterministicStrategy::kCount)
        throw ModelError("deterministic strategy index out of range");
    w[strategy_index] = 1.0;
    return LhvModel(w);
}

LhvModel LhvModel::random(std::uint64_t seed) {
    CounterRng rng(seed, /*stream=*/0x1bf);
    std::array<double, 16> w{};
    double sum = 0.0;
    for (double& x : w) {
        x = rng.uniform();
        sum += x;
    }
    for (double& x : w) x /= sum;
    return LhvModel(w);
}

LhvModel LhvModel::random_symmetric(std::uint64_t seed) {
    CounterRng rng(seed, /*stream=*/0x2bf);
    std::array<double, 16> w{};
    double sum = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double x = rng.uniform();
        w[k] = x;
        w[k ^ 15] = x;
        sum += 2.0 * x;
    }
    for (double& x : w) x /= sum;
    return LhvModel(w);
}

JointDistribution LhvModel::joint(const SettingLabel& a, const SettingLabel& b) const {
    JointDistribution d;
    for (int k = 0; k < DeterministicStrategy::kCount; ++k) {
        const double w = weights_[k];
        if (w == 0.0) continue;
        const auto strat = DeterministicStrategy::from_index(k);
        const int ao = strat.alice(a.slot);
        const int bo = strat.bob(b.slot);
        if (ao > 0) {
            (bo > 0 ? d.p_pp : d.p_pm) += w;
        } else {
            (bo > 0 ? d.p_mp : d.p_mm) += w;
        }
    }
    return d;
}

int cell_index(Slot alice, Slot bob) {
    return (alice == Slot::Primed ? 2 : 0) + (bob == Slot::Primed ? 1 : 0);
}

JointDistribution PrBoxModel::joint(const SettingLabel& a, const SettingLabel& b) const {
    return cell_index(a.slot, b.slot) == 3 ? kAntiCorrelatedHalf : kCorrelatedHalf;
}

GeneralizedPrModel::GeneralizedPrModel(double c, double e, ReplacedCell replaced)
    : c_(c), e_(e), replaced_(replaced) {
    if (c < -1e-12 || e < -1e-12)
        throw ModelError("generalized PR cell entries must be nonnegative");
    if (std::abs(2.0 * c + 2.0 * e - 1.0) > 1e-12)
        throw ModelError("generalized PR cell must satisfy 2c + 2e = 1");
}

JointDistribution GeneralizedPrModel::joint(const SettingLabel& a,
                                            const SettingLabel& b) const {
    const int cell = cell_index(a.slot, b.slot);
    const int replaced_cell = replaced_ == ReplacedCell::FirstCorrelation ? 0 : 3;
    if (cell == replaced_cell) return {c_, e_, e_, c_};
    return cell == 3 ? kAntiCorrelatedHalf : kCorrelatedHalf;
}

TableModel::TableModel(const std::array<JointDistribution, 4>& cells) : cells_(cells) {
    for (const auto& cell : cells_)
        if (!cell.valid(1e-12))
            throw ModelError("table model cell is not a probability distribution");
}

JointDistribution TableModel::joint(const SettingLabel& a, const SettingLabel& b) const {
    return cells_[cell_index(a.slot, b.slot)];
}

namespace {

struct Violation {
    double value = 0.0;
    std::string what;
};

void track(Violation& worst, double value, const std::string& what) {
    if (value > worst.value) worst = {value, what};
}

const char* outcome_name(int o) { return o > 0 ? "+1" : "-1"; }

}  // namespace

MarginalCheckReport no_signaling_check(const CorrelationModel& model,
                                       const ChshSettings& settings, double tol) {
    const auto pairs = settings.pairs();
    std::array<JointDistribution, 4> d;
    for (int i = 0; i < 4; ++i) d[i] = model.joint(pairs[i].alice, pairs[i].bob);

    Violation worst;
    // Alice's marginal must not move when Bob switches settings, and the
    // other way round: pairs (0,1) and (2,3) share Alice's setting, pairs
    // (0,2) and (1,3) share Bob's.
    for (int outcome : {+1, -1}) {
        track(worst, std::abs(d[0].alice_marginal(outcome) - d[1].alice_marginal(outcome)),
              std::string("p(A=") + outcome_name(outcome) + "|a) depends on b vs b'");
        track(worst, std::abs(d[2].alice_marginal(outcome) - d[3].alice_marginal(outcome)),
              std::string("p(A=") + outcome_name(outcome) + "|a') depends on b vs b'");
        track(worst, std::abs(d[0].bob_marginal(outcome) - d[2].bob_marginal(outcome)),
              std::string("p(B=") + outcome_name(outcome) + "|b) depends on a vs a'");
        track(worst, std::abs(d[1].bob_marginal(outcome) - d[3].bob_marginal(outcome)),
              std::string("p(B=") + outcome_name(outcome) + "|b') depends on a vs a'");
    }
    return {worst.value, tol, worst.value <= tol, worst.what};
}

MarginalCheckReport nprf_marginal_check(const CorrelationModel& model,
                                        const ChshSettings& settings, double tol) {
    static const char* pair_names[4] = {"(a,b)", "(a,b')", "(a',b)", "(a',b')"};
    Violation worst;
    for (int i = 0; i < 4; ++i) {
        const auto pair = settings.pair(i);
        const JointDistribution d = model.joint(pair.alice, pair.bob);
        track(worst, std::abs(d.alice_marginal(+1) - 0.5),
              std::string("p(A=+1) at ") + pair_names[i]);
        track(worst, std::abs(d.bob_marginal(+1) - 0.5),
              std::string("p(B=+1) at ") + pair_names[i]);
    }
    return {worst.value, tol, worst.value <= tol, worst.what};
}

double conservation_deviation(const CorrelationModel& model, const BellState& state,
                              const ChshSettings& settings) {
    double max_gap = 0.0;
    for (int i = 0; i < 4; ++i) {
        const auto pair = settings.pair(i);
        const Angle alpha = require_angle(pair.alice, "Alice");
        const Angle beta = require_angle(pair.bob, "Bob");
        const JointDistribution target = joint_distribution(state, alpha, beta);
        const JointDistribution actual = model.joint(pair.alice, pair.bob);
        for (int outcome : {+1, -1}) {
            // Outcomes the model never produces contribute no data events.
            if (actual.alice_marginal(outcome) <= 0.0) continue;
            const double gap = std::abs(bob_average_given_alice(actual, outcome) -
                                        bob_average_given_alice(target, outcome));
            max_gap = std::max(max_gap, gap);
        }
    }
    return max_gap;
}

double generalized_pr_chsh(const GeneralizedPrModel& model) {
    const double swing = 2.0 * model.c() - 2.0 * model.e();
    return model.replaced() == ReplacedCell::FirstCorrelation ? 3.0 + swing : 3.0 - swing;
}

namespace {

double like_probability(const JointDistribution& d) { return d.p_pp + d.p_mm; }

// Squared mismatch of the quantum statistics against the last three PR
// cells, as a function of the free device angles (a' is pinned at zero).
double eigenbasis_fit_error(const BellState& state, double a, double b, double bp) {
    const double ap = 0.0;
    const double e1 = like_probability(joint_distribution(state, a, bp)) - 1.0;
    const double e2 = like_probability(joint_distribution(state, ap, b)) - 1.0;
    const double e3 = like_probability(joint_distribution(state, ap, bp)) - 0.0;
    return e1 * e1 + e2 * e2 + e3 * e3;
}

}  // namespace

EigenbasisFitReport pr_eigenbasis_check(const BellState& state) {
    // The objective is pi/angle_factor periodic in each angle.
    const double period = std::numbers::pi / state.angle_factor;
    constexpr int kSteps = 64;

    std::array<double, 3> best{};
    double best_err = eigenbasis_fit_error(state, 0.0, 0.0, 0.0);
    for (int ia = 0; ia < kSteps; ++ia)
        for (int ib = 0; ib < kSteps; ++ib)
            for (int ic = 0; ic < kSteps; ++ic) {
                const double a = period * ia / kSteps;
                const double b = period * ib / kSteps;
                const double bp = period * ic / kSteps;
                const double err = eigenbasis_fit_error(state, a, b, bp);
                if (err < best_err) {
                    best_err = err;
                    best = {a, b, bp};
                }
            }

    double step = period / kSteps;
    for (int sweep = 0; sweep < 80; ++sweep) {
        bool moved = false;
        for (int k = 0; k < 3; ++k)
            for (double delta : {step, -step}) {
                auto trial = best;
                trial[k] += delta;
                const double err = eigenbasis_fit_error(state, trial[0], trial[1], trial[2]);
                if (err < best_err) {
                    best_err = err;
                    best = trial;
                    moved = true;
                }
            }
        if (!moved) step *= 0.5;
    }

    EigenbasisFitReport report;
    report.settings = ChshSettings::angles(best[0], 0.0, best[1], best[2]);
    report.fit_residual = std::sqrt(best_err);
    report.quantum_first_cell_like =
        like_probability(joint_distribution(state, best[0], best[1]));
    report.pr_first_cell_like = 1.0;  // PR's first cell is perfectly correlated
    report.contradiction =
        std::abs(report.quantum_first_cell_like - report.pr_first_cell_like);
    return report;
}

}  // namespace bellscope
