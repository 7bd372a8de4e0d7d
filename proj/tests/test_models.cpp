#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bellscope/errors.hpp"
#include "bellscope/models.hpp"
#include "bellscope/rng.hpp"

using namespace bellscope;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-12;

const ChshSettings kSlots = ChshSettings::slots();

TableModel signaling_fixture() {
    // All mass on (+1,+1) at (a,b) and on (-1,-1) at (a,b'): Alice's marginal
    // flips with Bob's setting choice.
    const JointDistribution uniform{0.25, 0.25, 0.25, 0.25};
    return TableModel({JointDistribution{1.0, 0.0, 0.0, 0.0},
                       JointDistribution{0.0, 0.0, 0.0, 1.0}, uniform, uniform});
}

}  // namespace

TEST_CASE("deterministic strategy enumeration order") {
    const auto all_plus = DeterministicStrategy::from_index(0);
    CHECK(all_plus.alice_unprimed == +1);
    CHECK(all_plus.alice_primed == +1);
    CHECK(all_plus.bob_unprimed == +1);
    CHECK(all_plus.bob_primed == +1);

    const auto all_minus = DeterministicStrategy::from_index(15);
    CHECK(all_minus.alice_unprimed == -1);
    CHECK(all_minus.bob_primed == -1);

    // Lexicographic over (alice unprimed, alice primed, bob unprimed,
    // bob primed): index 8 flips only the leading coordinate.
    const auto s8 = DeterministicStrategy::from_index(8);
    CHECK(s8.alice_unprimed == -1);
    CHECK(s8.alice_primed == +1);
    CHECK(s8.bob_unprimed == +1);
    CHECK(s8.bob_primed == +1);

    const auto s1 = DeterministicStrategy::from_index(1);
    CHECK(s1.alice_unprimed == +1);
    CHECK(s1.bob_primed == -1);
}

TEST_CASE("pr box distributions match the defining table") {
    const PrBoxModel pr;
    const JointDistribution ab = pr.joint(kSlots.a, kSlots.b);
    CHECK(ab.p_pp == doctest::Approx(0.5));
    CHECK(ab.p_mm == doctest::Approx(0.5));
    CHECK(ab.p_pm == doctest::Approx(0.0));

    const JointDistribution apbp = pr.joint(kSlots.a_prime, kSlots.b_prime);
    CHECK(apbp.p_pm == doctest::Approx(0.5));
    CHECK(apbp.p_mp == doctest::Approx(0.5));
    CHECK(apbp.p_pp == doctest::Approx(0.0));
}

TEST_CASE("lhv mixtures") {
    SUBCASE("pure all-plus strategy concentrates on (+1,+1) at every pair") {
        const LhvModel model = LhvModel::pure(0);
        for (int i = 0; i < 4; ++i) {
            const auto pair = kSlots.pair(i);
            CHECK(model.joint(pair.alice, pair.bob).p_pp == doctest::Approx(1.0));
        }
    }
    SUBCASE("weights must form a distribution") {
        std::array<double, 16> bad{};
        bad[0] = 0.7;  // sums to 0.7
        CHECK_THROWS_AS(LhvModel(bad), ModelError);
        bad[0] = 1.5;
        bad[1] = -0.5;
        CHECK_THROWS_AS(LhvModel(bad), ModelError);
    }
    SUBCASE("all mixtures are valid distributions and no-signaling") {
        for (int draw = 0; draw < 1000; ++draw) {
            const LhvModel model = LhvModel::random(std::uint64_t(draw));
            for (int i = 0; i < 4; ++i) {
                const auto pair = kSlots.pair(i);
                CHECK(model.joint(pair.alice, pair.bob).valid(kTol));
            }
            CHECK(no_signaling_check(model, kSlots, kTol).pass);
        }
    }
    SUBCASE("symmetric mixtures have exactly even marginals") {
        for (int draw = 0; draw < 200; ++draw) {
            const LhvModel model = LhvModel::random_symmetric(std::uint64_t(draw));
            CHECK(nprf_marginal_check(model, kSlots, kTol).pass);
        }
    }
}

TEST_CASE("quantum model requires angles") {
    const QuantumModel model(BellState::spin_half(BellLabel::PsiMinus));
    CHECK_THROWS_AS(model.joint(kSlots.a, kSlots.b), ModelError);
    const ChshSettings angled = ChshSettings::angles(0.0, 1.0, 2.0, 3.0);
    CHECK(model.joint(angled.a, angled.b).valid(kTol));
}

TEST_CASE("generalized pr model validation") {
    CHECK_THROWS_AS(GeneralizedPrModel(0.3, 0.3, ReplacedCell::FirstCorrelation),
                    ModelError);
    CHECK_THROWS_AS(GeneralizedPrModel(-0.1, 0.6, ReplacedCell::FirstCorrelation),
                    ModelError);
    CHECK_NOTHROW(GeneralizedPrModel(0.25, 0.25, ReplacedCell::FirstCorrelation));
}

TEST_CASE("no-signaling check") {
    SUBCASE("quantum marginals are setting-independent") {
        const QuantumModel model(BellState::spin_half(BellLabel::PsiMinus));
        CounterRng rng(21, 0);
        for (int i = 0; i < 100; ++i) {
            const ChshSettings s =
                ChshSettings::angles(rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi),
                                     rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
            CHECK(no_signaling_check(model, s, kTol).max_violation < kTol);
        }
    }
    SUBCASE("the pr box is no-signaling") {
        CHECK(no_signaling_check(PrBoxModel(), kSlots, kTol).max_violation < kTol);
    }
    SUBCASE("a hand-built signaling table is caught with violation 1") {
        const auto report = no_signaling_check(signaling_fixture(), kSlots, kTol);
        CHECK_FALSE(report.pass);
        CHECK(report.max_violation == doctest::Approx(1.0));
    }
}

TEST_CASE("equal-frequency marginal check") {
    SUBCASE("quantum and pr pass") {
        const QuantumModel quantum(BellState::photon(BellLabel::PhiPlus));
        const ChshSettings angled = ChshSettings::angles(0.1, 0.7, 1.9, 2.8);
        CHECK(nprf_marginal_check(quantum, angled, kTol).pass);
        CHECK(nprf_marginal_check(PrBoxModel(), kSlots, kTol).pass);
    }
    SUBCASE("a biased mixture fails with marginal 1") {
        const auto report = nprf_marginal_check(LhvModel::pure(0), kSlots, kTol);
        CHECK_FALSE(report.pass);
        CHECK(report.max_violation == doctest::Approx(0.5));
    }
}

TEST_CASE("conservation deviation") {
    const BellState singlet = BellState::spin_half(BellLabel::PsiMinus);
    const ChshSettings assignment = ChshSettings::paper_pr_assignment();

    SUBCASE("a quantum model deviates from its own state by nothing") {
        const QuantumModel model(singlet);
        CounterRng rng(22, 0);
        for (int i = 0; i < 50; ++i) {
            const ChshSettings s =
                ChshSettings::angles(rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi),
                                     rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
            CHECK(conservation_deviation(model, singlet, s) < kTol);
        }
    }
    SUBCASE("the pr box violates conservation maximally at the first cell") {
        CHECK(conservation_deviation(PrBoxModel(), singlet, assignment) ==
              doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("the conserving member of the generalized family deviates by nothing") {
        const GeneralizedPrModel model(0.0, 0.5, ReplacedCell::FirstCorrelation);
        CHECK(conservation_deviation(model, singlet, assignment) < kTol);
    }
    SUBCASE("deviation is 4c, strictly increasing across the family") {
        double previous = -1.0;
        for (int k = 0; k <= 100; ++k) {
            const double c = 0.5 * k / 100.0;
            const GeneralizedPrModel model(c, 0.5 - c, ReplacedCell::FirstCorrelation);
            const double deviation = conservation_deviation(model, singlet, assignment);
            CHECK(deviation == doctest::Approx(4.0 * c).epsilon(1e-10));
            CHECK(deviation > previous);
            previous = deviation;
        }
    }
}

TEST_CASE("generalized pr chsh closed form") {
    CHECK(generalized_pr_chsh(GeneralizedPrModel(0.5, 0.0, ReplacedCell::FirstCorrelation)) ==
          doctest::Approx(4.0));
    CHECK(generalized_pr_chsh(GeneralizedPrModel(0.0, 0.5, ReplacedCell::FirstCorrelation)) ==
          doctest::Approx(2.0));
    // Midpoint of the family; cross-checked against the generic evaluator in
    // the chsh tests.
    CHECK(generalized_pr_chsh(GeneralizedPrModel(0.25, 0.25, ReplacedCell::FirstCorrelation)) ==
          doctest::Approx(3.0));
    CHECK(generalized_pr_chsh(GeneralizedPrModel(0.5, 0.0, ReplacedCell::FourthCorrelation)) ==
          doctest::Approx(2.0));
    CHECK(generalized_pr_chsh(GeneralizedPrModel(0.0, 0.5, ReplacedCell::FourthCorrelation)) ==
          doctest::Approx(4.0));
}

TEST_CASE("eigenbasis configuration: three PR cells fit, the first contradicts") {
    for (const BellState& state : {BellState::spin_half(BellLabel::PsiMinus),
                                   BellState::photon(BellLabel::PhiPlus)}) {
        const EigenbasisFitReport report = pr_eigenbasis_check(state);
        CHECK(report.fit_residual < 1e-6);
        CHECK(report.pr_first_cell_like == doctest::Approx(1.0));
        CHECK(report.quantum_first_cell_like == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(report.contradiction == doctest::Approx(1.0).epsilon(1e-6));
    }
}
