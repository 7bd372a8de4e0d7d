#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "bellscope/quantum.hpp"
#include "bellscope/rng.hpp"

using namespace bellscope;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;

const BellState kSinglet = BellState::spin_half(BellLabel::PsiMinus);
const BellState kMermin = BellState::photon(BellLabel::PhiPlus);

}  // namespace

TEST_CASE("singlet amplitudes at the anchor angles") {
    SUBCASE("equal angles: pure anti-correlation amplitude") {
        const AmplitudeSet s = singlet_amplitudes(0.0, 0.0);
        CHECK(std::abs(s.a_ud - std::complex<double>(1.0 / std::sqrt(2.0), 0.0)) < kTol);
        CHECK(std::abs(s.a_uu) < kTol);
    }
    SUBCASE("opposite phases: anti-correlation amplitude vanishes") {
        const AmplitudeSet s = singlet_amplitudes(0.0, kPi);
        CHECK(std::abs(s.a_ud) < kTol);
        CHECK(std::abs(s.a_uu) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("alpha = pi/3: squared modulus equals the closed form") {
        // Direct complex arithmetic: |e^{i pi/3} + 1|^2 / 8 = cos^2(pi/6)/2 = 0.375.
        const AmplitudeSet s = singlet_amplitudes(kPi / 3.0, 0.0);
        CHECK(std::norm(s.a_ud) == doctest::Approx(0.375).epsilon(1e-12));
    }
    SUBCASE("sign relations hold everywhere") {
        CounterRng rng(11, 0);
        for (int i = 0; i < 200; ++i) {
            const AmplitudeSet s = singlet_amplitudes(rng.uniform(-7.0, 7.0),
                                                      rng.uniform(-7.0, 7.0));
            CHECK(std::abs(s.a_ud + s.a_du) < kTol);
            CHECK(std::abs(s.a_uu + s.a_dd) < kTol);
        }
    }
}

TEST_CASE("joint distributions at the anchor angles") {
    SUBCASE("singlet at equal settings is totally anti-correlated") {
        const JointDistribution d = joint_distribution(kSinglet, 1.3, 1.3);
        CHECK(d.p_pm == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_mp == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_pp == doctest::Approx(0.0));
        CHECK(d.p_mm == doctest::Approx(0.0));
    }
    SUBCASE("photon like state at co-aligned polarizers is totally correlated") {
        const JointDistribution d = joint_distribution(kMermin, 0.4, 0.4);
        CHECK(d.p_pp == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_mm == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_pm == doctest::Approx(0.0));
        CHECK(d.p_mp == doctest::Approx(0.0));
    }
    SUBCASE("singlet at orthogonal magnets is uniform") {
        const JointDistribution d = joint_distribution(kSinglet, kPi / 2.0, 0.0);
        for (int cell = 0; cell < 4; ++cell)
            CHECK(d.cell(cell) == doctest::Approx(0.25).epsilon(1e-12));
    }
}

TEST_CASE("amplitudes reproduce the singlet distribution for 1000 random angle pairs") {
    CounterRng rng(12, 0);
    for (int i = 0; i < 1000; ++i) {
        const Angle alpha{rng.uniform(-2.0 * kPi, 2.0 * kPi)};
        const Angle beta{rng.uniform(-2.0 * kPi, 2.0 * kPi)};
        const AmplitudeSet s = singlet_amplitudes(alpha, beta);
        const JointDistribution d = joint_distribution(kSinglet, alpha, beta);
        CHECK(d.valid(kTol));
        CHECK(std::abs(std::norm(s.a_uu) - d.p_pp) < kTol);
        CHECK(std::abs(std::norm(s.a_ud) - d.p_pm) < kTol);
        CHECK(std::abs(std::norm(s.a_du) - d.p_mp) < kTol);
        CHECK(std::abs(std::norm(s.a_dd) - d.p_mm) < kTol);
    }
}

TEST_CASE("correlation functions match the closed forms") {
    CounterRng rng(13, 0);
    for (int i = 0; i < 500; ++i) {
        const double alpha = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        const double beta = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        CHECK(correlation(joint_distribution(kSinglet, alpha, beta)) +
                  std::cos(alpha - beta) ==
              doctest::Approx(0.0).epsilon(kTol));
        CHECK(correlation(joint_distribution(kMermin, alpha, beta)) -
                  std::cos(2.0 * (alpha - beta)) ==
              doctest::Approx(0.0).epsilon(kTol));
    }
    const JointDistribution uniform{0.25, 0.25, 0.25, 0.25};
    CHECK(correlation(uniform) == doctest::Approx(0.0));
}

TEST_CASE("conditional averages") {
    CHECK(conditional_average(kSinglet, 0.0, +1) == doctest::Approx(-1.0));
    CHECK(conditional_average(kSinglet, kPi / 2.0, +1) == doctest::Approx(0.0));
    // cos^2 - sin^2 vanishes at pi/4; cross-checked against the conditional
    // sum of the joint distribution below.
    CHECK(conditional_average(kMermin, kPi / 4.0, -1) == doctest::Approx(0.0));
    CHECK(bob_average_given_alice(joint_distribution(kMermin, kPi / 4.0, 0.0), -1) ==
          doctest::Approx(0.0));

    SUBCASE("equals the conditional expectation from the joint distribution") {
        CounterRng rng(14, 0);
        for (BellLabel label : {BellLabel::PsiMinus, BellLabel::PsiPlus,
                                BellLabel::PhiPlus, BellLabel::PhiMinus})
            for (Realization realization : {Realization::SpinHalf, Realization::Photon}) {
                const BellState state = BellState::make(label, realization);
                for (int i = 0; i < 100; ++i) {
                    const double alpha = rng.uniform(-2.0 * kPi, 2.0 * kPi);
                    const double beta = rng.uniform(-2.0 * kPi, 2.0 * kPi);
                    const double hilbert = state.hilbert_angle(alpha, beta);
                    const double theta =
                        state.parity() == Parity::Unlike ? 2.0 * hilbert : hilbert;
                    const JointDistribution d = joint_distribution(state, alpha, beta);
                    for (int outcome : {+1, -1})
                        CHECK(conditional_average(state, theta, outcome) ==
                              doctest::Approx(bob_average_given_alice(d, outcome))
                                  .epsilon(kTol));
                }
            }
    }
}

TEST_CASE("conservation solver reproduces the closed-form state") {
    SUBCASE("theta = 0, unlike parity") {
        const JointDistribution d = solve_conservation_state(0.0, Parity::Unlike);
        CHECK(d.p_pp == doctest::Approx(0.0));
        CHECK(d.p_pm == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_mp == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_mm == doctest::Approx(0.0));
    }
    SUBCASE("theta = pi/3, unlike parity: p_pp = sin^2(pi/3)/2") {
        const JointDistribution d = solve_conservation_state(kPi / 3.0, Parity::Unlike);
        CHECK(d.p_pp == doctest::Approx(0.375).epsilon(1e-12));
    }
    SUBCASE("theta = 0, like parity") {
        const JointDistribution d = solve_conservation_state(0.0, Parity::Like);
        CHECK(d.p_pp == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(d.p_pm == doctest::Approx(0.0));
        CHECK(d.p_mp == doctest::Approx(0.0));
        CHECK(d.p_mm == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("721-point grid equivalence for both parities") {
        // Photon realization: the device angle is the Hilbert angle.
        const BellState unlike = BellState::photon(BellLabel::PsiMinus);
        const BellState like = BellState::photon(BellLabel::PhiPlus);
        double worst = 0.0;
        for (int k = 0; k <= 720; ++k) {
            const double theta = 2.0 * kPi * k / 720.0;
            const JointDistribution su = solve_conservation_state(theta, Parity::Unlike);
            const JointDistribution cu = joint_distribution(unlike, theta, 0.0);
            const JointDistribution sl = solve_conservation_state(theta, Parity::Like);
            const JointDistribution cl = joint_distribution(like, theta, 0.0);
            for (int cell = 0; cell < 4; ++cell) {
                worst = std::max(worst, std::abs(su.cell(cell) - cu.cell(cell)));
                worst = std::max(worst, std::abs(sl.cell(cell) - cl.cell(cell)));
            }
        }
        CHECK(worst < kTol);
    }
}

TEST_CASE("bell basis vectors") {
    const StateVector psi_minus = bell_state_vector(BellLabel::PsiMinus);
    CHECK(std::abs(psi_minus.c[0]) < kTol);
    CHECK(psi_minus.c[1].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(psi_minus.c[2].real() == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(psi_minus.c[3]) < kTol);

    const StateVector phi_plus = bell_state_vector(BellLabel::PhiPlus);
    CHECK(phi_plus.c[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(phi_plus.c[1]) < kTol);
    CHECK(std::abs(phi_plus.c[2]) < kTol);
    CHECK(phi_plus.c[3].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    for (BellLabel label : {BellLabel::PsiMinus, BellLabel::PsiPlus, BellLabel::PhiPlus,
                            BellLabel::PhiMinus})
        CHECK(bell_state_vector(label).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("su(2) invariance table") {
    SUBCASE("the stated invariances hold to machine precision") {
        for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z})
            CHECK(su2_invariance_deviation(BellLabel::PsiMinus, axis, 0.7) < kTol);
        CHECK(su2_invariance_deviation(BellLabel::PsiPlus, PauliAxis::Z, 0.3) < kTol);
        CHECK(su2_invariance_deviation(BellLabel::PhiMinus, PauliAxis::X, 0.9) < kTol);
        CHECK(su2_invariance_deviation(BellLabel::PhiPlus, PauliAxis::Y, 1.1) < kTol);
    }
    SUBCASE("phi+ under a z rotation by pi/4 is maximally rotated away") {
        // Analytic overlap is cos(2 theta), so the deviation is exactly 1.
        CHECK(su2_invariance_deviation(BellLabel::PhiPlus, PauliAxis::Z, kPi / 4.0) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("every non-invariant pair exceeds 1e-3 somewhere") {
        const auto invariant = [](BellLabel label, PauliAxis axis) {
            if (label == BellLabel::PsiMinus) return true;
            if (label == BellLabel::PsiPlus) return axis == PauliAxis::Z;
            if (label == BellLabel::PhiMinus) return axis == PauliAxis::X;
            return axis == PauliAxis::Y;  // PhiPlus
        };
        for (BellLabel label : {BellLabel::PsiMinus, BellLabel::PsiPlus,
                                BellLabel::PhiPlus, BellLabel::PhiMinus})
            for (PauliAxis axis : {PauliAxis::X, PauliAxis::Y, PauliAxis::Z}) {
                double peak = 0.0;
                for (int k = 0; k <= 36; ++k)
                    peak = std::max(peak,
                                    su2_invariance_deviation(label, axis, kPi * k / 36.0));
                if (invariant(label, axis)) {
                    CHECK(peak < kTol);
                } else {
                    CHECK(peak > 1e-3);
                }
            }
    }
}
