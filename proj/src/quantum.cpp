#include "bellscope/quantum.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "bellscope/errors.hpp"

namespace bellscope {

namespace {

constexpr double kHalfInvSqrt2 = 0.35355339059327373;  // 1/(2 sqrt 2)

}  // namespace

bool JointDistribution::valid(double tol) const {
    for (int i = 0; i < 4; ++i) {
        const double p = cell(i);
        if (!(p >= -tol && p <= 1.0 + tol)) return false;
    }
    return std::abs(sum() - 1.0) <= tol;
}

double JointDistribution::cell(int i) const {
    switch (i) {
        case 0: return p_pp;
        case 1: return p_pm;
        case 2: return p_mp;
        case 3: return p_mm;
    }
    assert(false && "cell index out of range");
    return 0.0;
}

double JointDistribution::alice_marginal(int outcome) const {
    return outcome > 0 ? p_pp + p_pm : p_mp + p_mm;
}

double JointDistribution::bob_marginal(int outcome) const {
    return outcome > 0 ? p_pp + p_mp : p_pm + p_mm;
}

double correlation(const JointDistribution& d) {
    return d.p_pp - d.p_pm - d.p_mp + d.p_mm;
}

double bob_average_given_alice(const JointDistribution& d, int alice_outcome) {
    const double marginal = d.alice_marginal(alice_outcome);
    if (marginal <= 0.0)
        throw ModelError("conditioning on an Alice outcome of probability zero");
    return alice_outcome > 0 ? (d.p_pp - d.p_pm) / marginal
                             : (d.p_mp - d.p_mm) / marginal;
}

double alice_average_given_bob(const JointDistribution& d, int bob_outcome) {
    const double marginal = d.bob_marginal(bob_outcome);
    if (marginal <= 0.0)
        throw ModelError("conditioning on a Bob outcome of probability zero");
    return bob_outcome > 0 ? (d.p_pp - d.p_mp) / marginal
                           : (d.p_pm - d.p_mm) / marginal;
}

AmplitudeSet singlet_amplitudes(Angle alpha, Angle beta) {
    const std::complex<double> ea = std::polar(1.0, alpha.radians);
    const std::complex<double> eb = std::polar(1.0, beta.radians);
    AmplitudeSet s;
    s.a_ud = kHalfInvSqrt2 * (ea + eb);
    s.a_du = -s.a_ud;
    s.a_uu = kHalfInvSqrt2 * (ea - eb);
    s.a_dd = -s.a_uu;
    return s;
}

JointDistribution joint_distribution(const BellState& state, Angle alpha, Angle beta) {
    const double theta = state.hilbert_angle(alpha, beta);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double half_cos2 = 0.5 * c * c;
    const double half_sin2 = 0.5 * s * s;
    if (state.parity() == Parity::Unlike)
        return {half_sin2, half_cos2, half_cos2, half_sin2};
    return {half_cos2, half_sin2, half_sin2, half_cos2};
}

double conditional_average(const BellState& state, Angle theta, int alice_outcome) {
    const double t = theta.radians;
    const double sign = alice_outcome > 0 ? 1.0 : -1.0;
    if (state.parity() == Parity::Unlike) return -std::cos(t) * sign;
    const double c = std::cos(t);
    const double s = std::sin(t);
    return (c * c - s * s) * sign;
}

namespace {

// Solves a 4x4 dense system in place by Gaussian elimination with partial
// pivoting. The conservation system is far from singular for every theta.
std::array<double, 4> solve4(std::array<std::array<double, 5>, 4> m) {
    double det = 1.0;
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        assert(std::abs(m[col][col]) > 1e-9 && "conservation system is singular");
        for (int r = col + 1; r < 4; ++r) {
            const double f = m[r][col] / m[col][col];
            for (int k = col; k < 5; ++k) m[r][k] -= f * m[col][k];
        }
    }
    assert(std::abs(det) > 1e-9);
    std::array<double, 4> x{};
    for (int r = 3; r >= 0; --r) {
        double rhs = m[r][4];
        for (int k = r + 1; k < 4; ++k) rhs -= m[r][k] * x[k];
        x[r] = rhs / m[r][r];
    }
    return x;
}

}  // namespace

JointDistribution solve_conservation_state(Angle theta, Parity parity) {
    const double c = std::cos(theta.radians);
    const double s = std::sin(theta.radians);
    // Bob's required average over Alice's +1 partition, at Hilbert angle theta.
    const double avg_plus =
        parity == Parity::Unlike ? (s * s - c * c) : (c * c - s * s);

    // Unknowns (p_pp, p_pm, p_mp, p_mm). Rows: normalization; the two
    // partition constraints p_pp - p_pm = avg_plus/2 and
    // p_mp - p_mm = -avg_plus/2; the symmetric-frequency condition p_pm = p_mp.
    std::array<std::array<double, 5>, 4> system = {{
        {1.0, 1.0, 1.0, 1.0, 1.0},
        {1.0, -1.0, 0.0, 0.0, 0.5 * avg_plus},
        {0.0, 0.0, 1.0, -1.0, -0.5 * avg_plus},
        {0.0, 1.0, -1.0, 0.0, 0.0},
    }};
    const auto x = solve4(system);
    return {x[0], x[1], x[2], x[3]};
}

double StateVector::norm() const {
    double n2 = 0.0;
    for (const auto& a : c) n2 += std::norm(a);
    return std::sqrt(n2);
}

StateVector bell_state_vector(BellLabel label) {
    constexpr double r = std::numbers::sqrt2 / 2.0;
    StateVector v;
    switch (label) {
        case BellLabel::PsiMinus: v.c = {0.0, r, -r, 0.0}; break;
        case BellLabel::PsiPlus: v.c = {0.0, r, r, 0.0}; break;
        case BellLabel::PhiPlus: v.c = {r, 0.0, 0.0, r}; break;
        case BellLabel::PhiMinus: v.c = {r, 0.0, 0.0, -r}; break;
    }
    return v;
}

namespace {

using Mat2 = std::array<std::array<std::complex<double>, 2>, 2>;

Mat2 pauli_exponential(PauliAxis axis, double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const std::complex<double> i(0.0, 1.0);
    switch (axis) {
        case PauliAxis::X: return {{{c, i * s}, {i * s, c}}};
        case PauliAxis::Y: return {{{c, s}, {-s, c}}};
        case PauliAxis::Z: return {{{std::polar(1.0, theta), 0.0}, {0.0, std::polar(1.0, -theta)}}};
    }
    assert(false && "unknown axis");
    return {};
}

}  // namespace

double su2_invariance_deviation(BellLabel label, PauliAxis axis, Angle theta) {
    const StateVector psi = bell_state_vector(label);
    const Mat2 u = pauli_exponential(axis, theta.radians);

    // (U (x) U) |psi>, indexing c[2*a + b] by the two parties' basis states.
    StateVector out;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            std::complex<double> acc = 0.0;
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp)
                    acc += u[a][ap] * u[b][bp] * psi.c[2 * ap + bp];
            out.c[2 * a + b] = acc;
        }

    std::complex<double> overlap = 0.0;
    for (int k = 0; k < 4; ++k) overlap += std::conj(psi.c[k]) * out.c[k];
    return 1.0 - std::abs(overlap);
}

}  // namespace bellscope
