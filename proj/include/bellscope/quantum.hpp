// Exact analytic machinery for the four Bell basis states: outcome
// amplitudes, joint distributions, correlation functions, conditional
// averages, and the linear solver that recovers the joint distribution from
// the conservation constraints alone.

#pragma once

#include <array>
#include <complex>

namespace bellscope {

// Plane angle in radians. All formulas here are trigonometric, so values are
// used as-is and everything is invariant under value -> value + 2*pi; no
// normalization pass.
struct Angle {
    double radians = 0.0;
    constexpr Angle() = default;
    constexpr Angle(double r) : radians(r) {}
};

enum class BellLabel { PsiMinus, PsiPlus, PhiPlus, PhiMinus };

// psi- yields unlike (opposite-sign) outcomes at equal settings; the other
// three states yield like outcomes.
enum class Parity { Unlike, Like };

// The physical realization fixes how a device angle difference maps to the
// angle between measurement eigenbases in Hilbert space: half of it for
// spin-1/2 (Stern-Gerlach magnets), all of it for photon polarizers.
enum class Realization { SpinHalf, Photon };

struct BellState {
    BellLabel label = BellLabel::PsiMinus;
    double angle_factor = 0.5;  // device angle -> Hilbert angle multiplier

    static BellState make(BellLabel label, Realization realization) {
        return BellState{label, realization == Realization::SpinHalf ? 0.5 : 1.0};
    }
    static BellState spin_half(BellLabel label) { return make(label, Realization::SpinHalf); }
    static BellState photon(BellLabel label) { return make(label, Realization::Photon); }

    Parity parity() const {
        return label == BellLabel::PsiMinus ? Parity::Unlike : Parity::Like;
    }
    double hilbert_angle(Angle alpha, Angle beta) const {
        return angle_factor * (alpha.radians - beta.radians);
    }
};

// The four outcome-pair probabilities for one setting pair, in the fixed
// order (+1,+1), (+1,-1), (-1,+1), (-1,-1). Valid instances are
// nonnegative and sum to 1.
struct JointDistribution {
    double p_pp = 0.0;
    double p_pm = 0.0;
    double p_mp = 0.0;
    double p_mm = 0.0;

    double sum() const { return p_pp + p_pm + p_mp + p_mm; }
    bool valid(double tol = 1e-12) const;

    double cell(int i) const;  // i in [0,4), same order as the fields

    // Single-party marginals, P(outcome) with outcome = +1 or -1.
    double alice_marginal(int outcome) const;
    double bob_marginal(int outcome) const;
};

// Expectation of the outcome product: p_pp - p_pm - p_mp + p_mm.
double correlation(const JointDistribution& d);

// Conditional expectation of the other party's outcome. Throws
// ModelError when the conditioning marginal vanishes.
double bob_average_given_alice(const JointDistribution& d, int alice_outcome);
double alice_average_given_bob(const JointDistribution& d, int bob_outcome);

// Path-integral outcome amplitudes for the spin singlet:
//   A_ud = -A_du = (e^{i alpha} + e^{i beta}) / (2 sqrt 2)
//   A_uu = -A_dd = (e^{i alpha} - e^{i beta}) / (2 sqrt 2)
// Squared moduli reproduce joint_distribution(psi- spin-1/2) entrywise. The
// overall signs are a phase convention; any other choice leaves all
// probabilities unchanged.
struct AmplitudeSet {
    std::complex<double> a_uu, a_ud, a_du, a_dd;
};

AmplitudeSet singlet_amplitudes(Angle alpha, Angle beta);

// Joint outcome distribution at device angles alpha (Alice) and beta (Bob).
// With theta = angle_factor * (alpha - beta) the unlike state puts
// probability cos^2(theta) on unlike outcome pairs (split evenly) and
// sin^2(theta) on like pairs; like states swap the two roles.
JointDistribution joint_distribution(const BellState& state, Angle alpha, Angle beta);

// Average of Bob's outcome over the trials where Alice saw alice_outcome,
// as conservation on average dictates:
//   unlike parity:  -cos(theta) * alice_outcome
//   like parity:    (cos^2(theta) - sin^2(theta)) * alice_outcome
// Convention carried over from the source formulas: for unlike parity theta
// is twice the Hilbert-space angle (the spin-1/2 singlet's device angle
// alpha - beta); for like parity theta is the Hilbert-space angle itself
// (the photon polarizer angle). Either way the value equals the conditional
// expectation computed from joint_distribution at the matching settings.
double conditional_average(const BellState& state, Angle theta, int alice_outcome);

// Recovers the joint distribution at Hilbert-space angle theta by solving
// the 4x4 linear system {normalization, the two conditional-average
// constraints, p_pm = p_mp} instead of using the closed form. The system is
// always nonsingular; the solver asserts a nonzero determinant.
JointDistribution solve_conservation_state(Angle theta, Parity parity);

// Two-qubit state vector in the sigma_z product eigenbasis
// (|++>, |+->, |-+>, |-->).
struct StateVector {
    std::array<std::complex<double>, 4> c{};
    double norm() const;
};

// The Bell basis vectors: psi-+ = (|+-> -+ |-+>)/sqrt2, phi+- = (|++> +- |-->)/sqrt2.
StateVector bell_state_vector(BellLabel label);

enum class PauliAxis { X, Y, Z };

// Applies e^{i theta sigma_axis} to both parties and returns
// 1 - |<original|transformed>|. Zero iff the state is invariant up to a
// global phase: psi- for every axis, psi+ for z, phi- for x, phi+ for y.
double su2_invariance_deviation(BellLabel label, PauliAxis axis, Angle theta);

}  // namespace bellscope
