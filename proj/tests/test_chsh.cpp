#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bellscope/chsh.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/rng.hpp"

using namespace bellscope;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoSqrt2 = 2.8284271247461902976;
constexpr double kTol = 1e-12;

const ChshSettings kSingletOptimal = ChshSettings::angles(kPi / 4, -kPi / 4, 0.0, kPi / 2);
const ChshSettings kMerminOptimal = ChshSettings::angles(kPi / 8, -kPi / 8, 0.0, kPi / 4);

}  // namespace

TEST_CASE("chsh at the stated optimal settings") {
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    const ChshReport low = chsh_value(singlet, kSingletOptimal);
    CHECK(low.value == doctest::Approx(-kTwoSqrt2).epsilon(kTol));

    const QuantumModel mermin(BellState::photon(BellLabel::PhiPlus));
    const ChshReport high = chsh_value(mermin, kMerminOptimal);
    CHECK(high.value == doctest::Approx(kTwoSqrt2).epsilon(kTol));

    const PrBoxModel pr;
    CHECK(chsh_value(pr, ChshSettings::slots()).value == doctest::Approx(4.0));
}

TEST_CASE("report value equals the combination of its own correlations") {
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    CounterRng rng(31, 0);
    for (int i = 0; i < 100; ++i) {
        const ChshSettings s =
            ChshSettings::angles(rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi),
                                 rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi));
        const ChshReport r = chsh_value(singlet, s);
        CHECK(r.value ==
              doctest::Approx(r.per_pair[0] + r.per_pair[1] + r.per_pair[2] - r.per_pair[3])
                  .epsilon(kTol));
    }
}

TEST_CASE("classical brute force") {
    CHECK(classical_bound_bruteforce() == doctest::Approx(2.0));
    for (int k = 0; k < DeterministicStrategy::kCount; ++k)
        CHECK(std::abs(deterministic_chsh(DeterministicStrategy::from_index(k))) ==
              doctest::Approx(2.0));
    CHECK(lhv_mixture_bound_check(1000, 77) <= 2.0 + kTol);
}

TEST_CASE("chsh is linear in lhv mixtures") {
    const ChshSettings slots = ChshSettings::slots();
    for (int draw = 0; draw < 100; ++draw) {
        const LhvModel model = LhvModel::random(std::uint64_t(1000 + draw));
        double expected = 0.0;
        for (int k = 0; k < DeterministicStrategy::kCount; ++k)
            expected += model.weights()[std::size_t(k)] *
                        deterministic_chsh(DeterministicStrategy::from_index(k));
        CHECK(chsh_value(model, slots).value == doctest::Approx(expected).epsilon(kTol));
    }
}

TEST_CASE("no-signaling models in this project stay within [-4, 4]") {
    const ChshSettings slots = ChshSettings::slots();
    CHECK(std::abs(chsh_value(PrBoxModel(), slots).value) <= 4.0 + kTol);
    for (double c : {0.0, 0.2, 0.5}) {
        const GeneralizedPrModel model(c, 0.5 - c, ReplacedCell::FirstCorrelation);
        CHECK(std::abs(chsh_value(model, slots).value) <= 4.0 + kTol);
    }
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    CHECK(std::abs(chsh_value(singlet, kSingletOptimal).value) <= 4.0 + kTol);
}

TEST_CASE("a common rotation of all four angles leaves the quantum value unchanged") {
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    CounterRng rng(32, 0);
    for (int i = 0; i < 100; ++i) {
        const double a = rng.uniform(0.0, 2.0 * kPi);
        const double ap = rng.uniform(0.0, 2.0 * kPi);
        const double b = rng.uniform(0.0, 2.0 * kPi);
        const double bp = rng.uniform(0.0, 2.0 * kPi);
        const double shift = rng.uniform(-kPi, kPi);
        const double base = chsh_value(singlet, ChshSettings::angles(a, ap, b, bp)).value;
        const double shifted =
            chsh_value(singlet,
                       ChshSettings::angles(a + shift, ap + shift, b + shift, bp + shift))
                .value;
        CHECK(shifted == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("optimizer reaches the quantum extremes") {
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    const ChshReport low = optimize_chsh(singlet, OptimizeMode::Minimize, 16, 60);
    CHECK(low.value == doctest::Approx(-kTwoSqrt2).epsilon(1e-6));

    const QuantumModel mermin(BellState::photon(BellLabel::PhiPlus));
    const ChshReport high = optimize_chsh(mermin, OptimizeMode::Maximize, 16, 60);
    CHECK(high.value == doctest::Approx(kTwoSqrt2).epsilon(1e-6));
}

TEST_CASE("optimizer rejects bad inputs") {
    CHECK_THROWS_AS(
        optimize_chsh(LhvModel::pure(0), OptimizeMode::Maximize, 16, 60), ModelError);
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));
    CHECK_THROWS_AS(optimize_chsh(singlet, OptimizeMode::Minimize, 4, 60), ConfigError);
    CHECK_THROWS_AS(optimize_chsh(singlet, OptimizeMode::Minimize, 16, -1), ConfigError);
}

TEST_CASE("optimizer is deterministic and its kernels agree") {
    const QuantumModel singlet(BellState::spin_half(BellLabel::PsiMinus));

    const ChshReport first = optimize_chsh(singlet, OptimizeMode::Minimize, 16, 60);
    const ChshReport second = optimize_chsh(singlet, OptimizeMode::Minimize, 16, 60);
    CHECK(first.value == second.value);  // bit-identical, not approximately
    CHECK(first.settings.a.angle->radians == second.settings.a.angle->radians);
    CHECK(first.settings.b_prime.angle->radians == second.settings.b_prime.angle->radians);

    for (OptimizeMode mode : {OptimizeMode::Minimize, OptimizeMode::Maximize}) {
        const auto serial = detail::chsh_grid_search_serial(singlet, mode, 12);
        const auto parallel = detail::chsh_grid_search_parallel(singlet, mode, 12);
        CHECK(serial.value == parallel.value);
        CHECK(serial.index == parallel.index);
    }
}

TEST_CASE("bound ordering") {
    const BoundOrderingReport report = bound_ordering_report();
    CHECK(report.classical == doctest::Approx(2.0));
    CHECK(report.quantum == doctest::Approx(kTwoSqrt2).epsilon(1e-6));
    CHECK(report.pr == doctest::Approx(4.0));
    CHECK(report.classical < report.quantum);
    CHECK(report.quantum < report.pr);
    CHECK(report.quantum / report.classical ==
          doctest::Approx(std::numbers::sqrt2).epsilon(1e-6));
}
