// Measurement setting labels shared by the correlation models, the CHSH
// evaluator and the ensemble simulator.

#pragma once

#include <array>
#include <numbers>
#include <optional>

#include "bellscope/quantum.hpp"

namespace bellscope {

enum class Party { Alice, Bob };
enum class Slot { Unprimed, Primed };

// One measurement setting: the discrete slot (a vs a', b vs b') plus the
// device angle when the model is angle-parameterized. Discrete models (PR
// box, LHV mixtures) look at the slot only.
struct SettingLabel {
    Party party = Party::Alice;
    Slot slot = Slot::Unprimed;
    std::optional<Angle> angle;

    static SettingLabel alice(Slot s, std::optional<Angle> a = std::nullopt) {
        return {Party::Alice, s, a};
    }
    static SettingLabel bob(Slot s, std::optional<Angle> a = std::nullopt) {
        return {Party::Bob, s, a};
    }

    friend bool operator==(const SettingLabel& lhs, const SettingLabel& rhs) {
        if (lhs.party != rhs.party || lhs.slot != rhs.slot) return false;
        if (lhs.angle.has_value() != rhs.angle.has_value()) return false;
        return !lhs.angle || lhs.angle->radians == rhs.angle->radians;
    }
};

struct SettingPair {
    SettingLabel alice;
    SettingLabel bob;

    friend bool operator==(const SettingPair& lhs, const SettingPair& rhs) {
        return lhs.alice == rhs.alice && lhs.bob == rhs.bob;
    }
};

// The four settings entering the CHSH quantity.
struct ChshSettings {
    SettingLabel a = SettingLabel::alice(Slot::Unprimed);
    SettingLabel a_prime = SettingLabel::alice(Slot::Primed);
    SettingLabel b = SettingLabel::bob(Slot::Unprimed);
    SettingLabel b_prime = SettingLabel::bob(Slot::Primed);

    static ChshSettings angles(Angle a, Angle a_prime, Angle b, Angle b_prime) {
        return {SettingLabel::alice(Slot::Unprimed, a),
                SettingLabel::alice(Slot::Primed, a_prime),
                SettingLabel::bob(Slot::Unprimed, b),
                SettingLabel::bob(Slot::Primed, b_prime)};
    }

    static ChshSettings slots() { return {}; }

    // The angle identification under which the last three PR correlations are
    // consistent with conservation for the unlike state: a' = b' = base,
    // b = pi + base, a = pi + base. The first PR correlation then contradicts
    // conservation maximally.
    static ChshSettings paper_pr_assignment(Angle base = Angle{0.0}) {
        const double pi = std::numbers::pi;
        return angles(Angle{pi + base.radians}, base, Angle{pi + base.radians}, base);
    }

    // Fixed evaluation order: (a,b), (a,b'), (a',b), (a',b').
    SettingPair pair(int i) const {
        switch (i) {
            case 0: return {a, b};
            case 1: return {a, b_prime};
            case 2: return {a_prime, b};
            default: return {a_prime, b_prime};
        }
    }

    std::array<SettingPair, 4> pairs() const {
        return {pair(0), pair(1), pair(2), pair(3)};
    }
};

}  // namespace bellscope
