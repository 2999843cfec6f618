// The five penalization martingale families: evaluation, one-step martingale
// verification, stopped forms, and the induced h-transform kernels.
#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "penwalk/rational.hpp"
#include "penwalk/walk.hpp"
#include "penwalk/weight.hpp"

namespace penwalk::martingales {

enum class Tag {
    OneSidedMax,        // M_n = phi(S_n)(S_n - X_n) + Phi(S_n)
    LastZeroMax,        // M_n = phi(S_{g_n})|X_n|/2 + phi(S_n)(S_n - X_n^+) + Phi(S_n)
    NextZeroMax,        // identical to OneSidedMax (penalizing phi(S_{d_p}))
    BilateralLastZero,  // M*_n = phi(S*_{g_n})|X_n| + phi(S*_n)(S*_n - |X_n|) + Phi(S*_n)
    CorridorTrig,       // cos(pi/(a+b))^{-n} sin(pi(a-X_n)/(a+b)) / sin(pi a/(a+b)), stopped at the walls
    BarrierIndicator    // corridor with b = a; normalization sin(pi/2) = 1
};

struct MartingaleFamily {
    Tag tag;
    std::optional<PenaltyWeight> weight;
    long a = 0;
    long b = 0;

    static MartingaleFamily one_sided_max(PenaltyWeight w) { return {Tag::OneSidedMax, std::move(w), 0, 0}; }
    static MartingaleFamily last_zero_max(PenaltyWeight w) { return {Tag::LastZeroMax, std::move(w), 0, 0}; }
    static MartingaleFamily next_zero_max(PenaltyWeight w) { return {Tag::NextZeroMax, std::move(w), 0, 0}; }
    static MartingaleFamily bilateral_last_zero(PenaltyWeight w) {
        return {Tag::BilateralLastZero, std::move(w), 0, 0};
    }
    static MartingaleFamily corridor_trig(long a, long b) {
        if (a < 1 || b < 1) throw std::invalid_argument("corridor_trig: a, b >= 1");
        return {Tag::CorridorTrig, std::nullopt, a, b};
    }
    static MartingaleFamily barrier_indicator(long a) {
        if (a < 1) throw std::invalid_argument("barrier_indicator: a >= 1");
        return {Tag::BarrierIndicator, std::nullopt, a, a};
    }

    bool is_weighted() const { return tag != Tag::CorridorTrig && tag != Tag::BarrierIndicator; }

    std::string name() const {
        switch (tag) {
            case Tag::OneSidedMax: return "one-sided-max";
            case Tag::LastZeroMax: return "last-zero-max";
            case Tag::NextZeroMax: return "next-zero-max";
            case Tag::BilateralLastZero: return "bilateral-last-zero";
            case Tag::CorridorTrig: return "corridor-trig(" + std::to_string(a) + "," + std::to_string(b) + ")";
            case Tag::BarrierIndicator: return "barrier-indicator(" + std::to_string(a) + ")";
        }
        return "?";
    }
};

// Exact martingale value for the weighted tags.  Last-zero families are only
// defined on paths that have visited 0, so states without a zero (possible
// when the path starts away from 0) are rejected rather than defaulted.
inline Rational evaluate_exact(const MartingaleFamily& fam, const WalkState& st) {
    const PenaltyWeight& w = *fam.weight;
    switch (fam.tag) {
        case Tag::OneSidedMax:
        case Tag::NextZeroMax:
            return w.phi(st.s) * Rational(st.s - st.x) + w.tail(st.s);
        case Tag::LastZeroMax: {
            if (!st.has_zero()) throw std::domain_error("last-zero-max: S_{g_n} undefined on this state");
            const long xp = st.x > 0 ? st.x : 0;
            return w.phi(st.s_g) * Rational(std::labs(st.x)) / 2 + w.phi(st.s) * Rational(st.s - xp) +
                   w.tail(st.s);
        }
        case Tag::BilateralLastZero: {
            if (!st.has_zero()) throw std::domain_error("bilateral-last-zero: S*_{g_n} undefined on this state");
            const long ax = std::labs(st.x);
            return w.phi(st.s_star_g) * Rational(ax) + w.phi(st.s_star) * Rational(st.s_star - ax) +
                   w.tail(st.s_star);
        }
        default:
            throw std::invalid_argument("evaluate_exact: trig families have no exact rational value");
    }
}

// Trig-family value.  Aliveness (the corridor has not been exited) is read
// off the state's extrema, which already encode the whole history.
inline double evaluate_trig(const MartingaleFamily& fam, const WalkState& st) {
    if (fam.tag == Tag::CorridorTrig) {
        if (st.s >= fam.a || st.i <= -fam.b) return 0.0;
        const double L = static_cast<double>(fam.a + fam.b);
        return std::pow(std::cos(M_PI / L), -static_cast<double>(st.n)) *
               std::sin(M_PI * (fam.a - st.x) / L) / std::sin(M_PI * fam.a / L);
    }
    if (fam.tag == Tag::BarrierIndicator) {
        if (st.s_star >= fam.a) return 0.0;
        const double L = 2.0 * static_cast<double>(fam.a);
        return std::pow(std::cos(M_PI / L), -static_cast<double>(st.n)) *
               std::sin(M_PI * (fam.a - st.x) / L);
    }
    throw std::invalid_argument("evaluate_trig: weighted family");
}

inline double evaluate(const MartingaleFamily& fam, const WalkState& st) {
    return fam.is_weighted() ? to_double(evaluate_exact(fam, st)) : evaluate_trig(fam, st);
}

// (evaluate at state+1 + evaluate at state-1) / 2; the martingale property
// demands equality with evaluate at the state itself.
inline Rational one_step_mean_exact(const MartingaleFamily& fam, const WalkState& st) {
    return (evaluate_exact(fam, step_state(st, up())) + evaluate_exact(fam, step_state(st, down()))) / 2;
}

inline double one_step_mean_trig(const MartingaleFamily& fam, const WalkState& st) {
    return (evaluate_trig(fam, step_state(st, up())) + evaluate_trig(fam, step_state(st, down()))) / 2.0;
}

// h-transform one-step law: p_+- = evaluate(state+-) / (2 evaluate(state)).
inline std::pair<Rational, Rational> q_kernel_exact(const MartingaleFamily& fam, const WalkState& st) {
    const Rational m = evaluate_exact(fam, st);
    if (m <= 0) throw std::domain_error("q_kernel: martingale value is zero (kernel absorbed)");
    return {evaluate_exact(fam, step_state(st, up())) / (2 * m),
            evaluate_exact(fam, step_state(st, down())) / (2 * m)};
}

inline std::pair<double, double> q_kernel(const MartingaleFamily& fam, const WalkState& st) {
    if (fam.is_weighted()) {
        const auto [u, d] = q_kernel_exact(fam, st);
        return {to_double(u), to_double(d)};
    }
    const double m = evaluate_trig(fam, st);
    if (m <= 0.0) throw std::domain_error("q_kernel: martingale value is zero (kernel absorbed)");
    return {evaluate_trig(fam, step_state(st, up())) / (2.0 * m),
            evaluate_trig(fam, step_state(st, down())) / (2.0 * m)};
}

// Closed stopped forms used by the optional-stopping computations.
enum class StoppingRule {
    HitLevel,          // T_p, first hit of level p (one-sided)
    NextZero,          // d_a, first zero at or after a fixed time
    BilateralHitLevel  // T*_p, first time |X| = p
};

// stopped_value(family, rule, level, stat):
//   (LastZeroMax, HitLevel, p, k = S_{g_{T_p}})        -> phi(k) p / 2 + Phi(p)
//   (LastZeroMax, NextZero, -, m = S_{d_a})            -> phi(m) m + Phi(m)
//   (BilateralLastZero, NextZero, -, m = S*_{d_a})     -> phi(m) m + Phi(m)
//   (BilateralLastZero, BilateralHitLevel, p, k)       -> phi(k) p + Phi(p)
inline Rational stopped_value(const MartingaleFamily& fam, StoppingRule rule, long level, long stat) {
    const PenaltyWeight& w = *fam.weight;
    if (fam.tag == Tag::LastZeroMax && rule == StoppingRule::HitLevel) {
        return w.phi(stat) * Rational(level) / 2 + w.tail(level);
    }
    if ((fam.tag == Tag::LastZeroMax || fam.tag == Tag::BilateralLastZero) && rule == StoppingRule::NextZero) {
        return w.phi(stat) * Rational(stat) + w.tail(stat);
    }
    if (fam.tag == Tag::BilateralLastZero && rule == StoppingRule::BilateralHitLevel) {
        return w.phi(stat) * Rational(level) + w.tail(level);
    }
    throw std::invalid_argument("stopped_value: unsupported (family, stopping rule) pair");
}

// Q(S_infty >= p) under the last-zero-max measure, from optional stopping at
// T_p: phi-average over the uniform pre-max law plus the tail term.  Equals
// 1/2 exactly once p clears the support of a finite weight.
inline Rational q_mass_sinfty_at_least(const PenaltyWeight& w, long p) {
    if (p < 1) throw std::invalid_argument("q_mass_sinfty_at_least: p >= 1");
    Rational acc(0);
    for (long k = 0; k < p; ++k) acc += w.phi(k);
    return acc / 2 + w.tail(p);
}

}  // namespace penwalk::martingales
