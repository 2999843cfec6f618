// Independent ground truth: exhaustive path enumeration, exact state-space
// dynamic programming over dyadic rationals, and absorbing-chain linear
// solves.  Everything here is mechanical; closed forms live in laws.hpp and
// are tested against this module, not the other way around.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "penwalk/exact_dist.hpp"
#include "penwalk/laws.hpp"
#include "penwalk/rational.hpp"
#include "penwalk/walk.hpp"
#include "penwalk/weight.hpp"

namespace penwalk::oracle {

// ---------------------------------------------------------------------------
// Events and penalty functionals
// ---------------------------------------------------------------------------

// A predicate on the time-n state; F_n-measurable by construction since the
// state is a function of the path prefix.
struct EventSpec {
    std::string name;
    std::function<bool(const WalkState&)> pred;

    static EventSpec all() {
        return {"all", [](const WalkState&) { return true; }};
    }
};

// One of the five penalization functionals G_p.
struct PenaltyFunctional {
    enum class Tag {
        MaxWeight,               // phi(S_p)
        LastZeroMaxWeight,       // phi(S_{g_p})
        NextZeroMaxWeight,       // phi(S_{d_p})
        BilateralLastZeroWeight, // phi(S*_{g_p})
        BilateralIndicator,      // 1{S*_p < a}
        CorridorIndicator        // 1{S_p < a, I_p > -b}
    };

    Tag tag;
    std::optional<PenaltyWeight> weight;
    long a = 0;
    long b = 0;

    static PenaltyFunctional max_weight(PenaltyWeight w) {
        return {Tag::MaxWeight, std::move(w), 0, 0};
    }
    static PenaltyFunctional last_zero_max_weight(PenaltyWeight w) {
        return {Tag::LastZeroMaxWeight, std::move(w), 0, 0};
    }
    static PenaltyFunctional next_zero_max_weight(PenaltyWeight w) {
        return {Tag::NextZeroMaxWeight, std::move(w), 0, 0};
    }
    static PenaltyFunctional bilateral_last_zero_weight(PenaltyWeight w) {
        return {Tag::BilateralLastZeroWeight, std::move(w), 0, 0};
    }
    static PenaltyFunctional bilateral_indicator(long a) {
        if (a < 1) throw std::invalid_argument("BilateralIndicator: a >= 1 required");
        return {Tag::BilateralIndicator, std::nullopt, a, a};
    }
    static PenaltyFunctional corridor_indicator(long a, long b) {
        if (a < 1 || b < 1) throw std::invalid_argument("CorridorIndicator: a,b >= 1 required");
        return {Tag::CorridorIndicator, std::nullopt, a, b};
    }

    bool is_weighted() const {
        return tag != Tag::BilateralIndicator && tag != Tag::CorridorIndicator;
    }

    std::string name() const {
        switch (tag) {
            case Tag::MaxWeight: return "max-weight";
            case Tag::LastZeroMaxWeight: return "last-zero-max-weight";
            case Tag::NextZeroMaxWeight: return "next-zero-max-weight";
            case Tag::BilateralLastZeroWeight: return "bilateral-last-zero-weight";
            case Tag::BilateralIndicator: return "bilateral-indicator(" + std::to_string(a) + ")";
            case Tag::CorridorIndicator:
                return "corridor-indicator(" + std::to_string(a) + "," + std::to_string(b) + ")";
        }
        return "?";
    }
};

// ---------------------------------------------------------------------------
// Brute-force enumeration (the trust anchor)
// ---------------------------------------------------------------------------

inline constexpr int kEnumerationCap = 24;

// Exact E[f(path)] over all 2^p equally likely step sequences.
inline Rational enumerate_expect(int p, long start, const std::function<Rational(const Path&)>& f,
                                 int hard_cap = kEnumerationCap) {
    if (p < 0) throw std::invalid_argument("enumerate_expect: negative horizon");
    if (p > hard_cap) {
        throw std::invalid_argument("enumerate_expect: horizon " + std::to_string(p) +
                                    " above cap " + std::to_string(hard_cap));
    }
    Path path;
    path.start = start;
    path.steps.reserve(p);
    Rational sum(0);
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == p) {
            sum += f(path);
            return;
        }
        for (int v : {+1, -1}) {
            path.steps.push_back(Step(v));
            self(self, depth + 1);
            path.steps.pop_back();
        }
    };
    rec(rec, 0);
    return sum / Rational(pow2(static_cast<unsigned long>(p)));
}

// Visits the final WalkState of every length-p path; far cheaper than the
// Path-based overload when only the sufficient statistics matter.
inline void enumerate_final_states(int p, long start, const std::function<void(const WalkState&)>& visit,
                                   int hard_cap = kEnumerationCap) {
    if (p < 0) throw std::invalid_argument("enumerate_final_states: negative horizon");
    if (p > hard_cap) throw std::invalid_argument("enumerate_final_states: horizon above cap");
    auto rec = [&](auto&& self, const WalkState& st, int depth) -> void {
        if (depth == p) {
            visit(st);
            return;
        }
        self(self, step_state(st, up()), depth + 1);
        self(self, step_state(st, down()), depth + 1);
    };
    rec(rec, initial_state(start), 0);
}

// ---------------------------------------------------------------------------
// Exact state-space DP
//
// Masses are kept as big-integer numerators over the implicit denominator
// 2^layer, so a layer advance is pure integer work; rationals appear only at
// readout.  Layers are sorted (key, numerator) vectors merged after each
// step, which keeps results bit-identical regardless of insertion order.
// ---------------------------------------------------------------------------

enum class Field : int { X = 0, S = 1, I = 2, SStar = 3, SG = 4, SStarG = 5, Gamma = 6, G = 7, R = 8 };

namespace detail {

inline constexpr int kCoordCount = 8;
using Key = std::array<int16_t, kCoordCount>;

inline constexpr unsigned kBitX = 1u << 0;
inline constexpr unsigned kBitS = 1u << 1;
inline constexpr unsigned kBitI = 1u << 2;
inline constexpr unsigned kBitSS = 1u << 3;
inline constexpr unsigned kBitSG = 1u << 4;
inline constexpr unsigned kBitSSG = 1u << 5;
inline constexpr unsigned kBitGamma = 1u << 6;
inline constexpr unsigned kBitG = 1u << 7;

inline unsigned field_bit(Field f) {
    switch (f) {
        case Field::X: return kBitX;
        case Field::S: return kBitS;
        case Field::I: return kBitI;
        case Field::SStar: return kBitSS;
        case Field::SG: return kBitSG;
        case Field::SStarG: return kBitSSG;
        case Field::Gamma: return kBitGamma;
        case Field::G: return kBitG;
        case Field::R: return kBitS;  // derived from (x, s)
    }
    return 0;
}

// Dependencies needed to evolve the requested statistics.
inline unsigned closure(unsigned mask) {
    mask |= kBitX;
    if (mask & kBitSG) mask |= kBitS;
    if (mask & kBitSSG) mask |= kBitSS;
    return mask;
}

inline unsigned mask_of(const std::vector<Field>& fields) {
    unsigned m = 0;
    for (Field f : fields) m |= field_bit(f);
    return closure(m);
}

inline Key key_from_state(const WalkState& st, unsigned mask) {
    Key k{};
    k.fill(0);
    k[0] = static_cast<int16_t>(st.x);
    if (mask & kBitS) k[1] = static_cast<int16_t>(st.s);
    if (mask & kBitI) k[2] = static_cast<int16_t>(st.i);
    if (mask & kBitSS) k[3] = static_cast<int16_t>(st.s_star);
    if (mask & kBitSG) k[4] = static_cast<int16_t>(st.has_zero() ? st.s_g : -1);
    if (mask & kBitSSG) k[5] = static_cast<int16_t>(st.has_zero() ? st.s_star_g : -1);
    if (mask & kBitGamma) k[6] = static_cast<int16_t>(st.gamma);
    if (mask & kBitG) k[7] = static_cast<int16_t>(st.g);
    return k;
}

inline void advance_key(Key& k, int step, int layer_after, unsigned mask) {
    const int x = k[0] + step;
    k[0] = static_cast<int16_t>(x);
    if ((mask & kBitS) && x > k[1]) k[1] = static_cast<int16_t>(x);
    if ((mask & kBitI) && x < k[2]) k[2] = static_cast<int16_t>(x);
    const int ax = x < 0 ? -x : x;
    if ((mask & kBitSS) && ax > k[3]) k[3] = static_cast<int16_t>(ax);
    if (x == 0) {
        if (mask & kBitGamma) k[6] = static_cast<int16_t>(k[6] + 1);
        if (mask & kBitG) k[7] = static_cast<int16_t>(layer_after);
        if (mask & kBitSG) k[4] = k[1];
        if (mask & kBitSSG) k[5] = k[3];
    }
}

using Layer = std::vector<std::pair<Key, BigInt>>;

inline void combine_sorted(Layer& layer) {
    std::sort(layer.begin(), layer.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    std::size_t w = 0;
    for (std::size_t i = 0; i < layer.size(); ++i) {
        if (w > 0 && layer[w - 1].first == layer[i].first) {
            layer[w - 1].second += layer[i].second;
        } else {
            if (w != i) layer[w] = std::move(layer[i]);
            ++w;
        }
    }
    layer.resize(w);
}

// Evolves `steps` layers; optional prune predicate kills states after each
// step, with the killed mass accumulated (as a numerator over 2^steps).
inline Layer dp_evolve(const WalkState& start, unsigned mask, int steps,
                       const std::function<bool(const Key&)>& prune = nullptr,
                       BigInt* killed_out = nullptr) {
    if (steps < 0) throw std::invalid_argument("dp_evolve: negative step count");
    if (steps > 16000) throw std::invalid_argument("dp_evolve: horizon too large for int16 coords");
    Layer layer;
    layer.emplace_back(key_from_state(start, mask), BigInt(1));
    BigInt killed(0);
    if (prune && prune(layer[0].first)) {
        killed = 1;
        layer.clear();
    }
    for (int t = 0; t < steps; ++t) {
        Layer next;
        next.reserve(layer.size() * 2);
        killed *= 2;
        const int layer_after = static_cast<int>(start.n) + t + 1;
        for (auto& [key, num] : layer) {
            for (int v : {+1, -1}) {
                Key nk = key;
                advance_key(nk, v, layer_after, mask);
                if (prune && prune(nk)) {
                    killed += num;
                } else {
                    next.emplace_back(nk, num);
                }
            }
        }
        combine_sorted(next);
        layer = std::move(next);
    }
    if (killed_out) *killed_out = killed;
    return layer;
}

}  // namespace detail

// Joint law at time p of the projected statistics, exact.  Untracked
// statistics never split states, so the projection also fixes the DP's state
// space.  Last-zero statistics render as -1 while the path has not visited 0.
inline ExactDist dp_joint_law(int p, long start, const std::vector<Field>& projection) {
    if (projection.empty()) throw std::invalid_argument("dp_joint_law: empty projection");
    const unsigned mask = detail::mask_of(projection);
    const auto layer = detail::dp_evolve(initial_state(start), mask, p);
    const BigInt den = pow2(static_cast<unsigned long>(p));
    ExactDist dist;
    for (const auto& [key, num] : layer) {
        ExactDist::Outcome out;
        out.reserve(projection.size());
        for (Field f : projection) {
            if (f == Field::R) {
                out.push_back(2L * key[1] - key[0]);
            } else {
                out.push_back(key[static_cast<int>(f)]);
            }
        }
        dist.add(out, rat(BigInt(num), den));
    }
    return dist;
}

// Full-statistics law at time n: every reachable WalkState with its exact
// probability, sorted deterministically.
inline std::vector<std::pair<WalkState, Rational>> state_law(int n, long start) {
    const unsigned mask = 0xFFu;
    const auto layer = detail::dp_evolve(initial_state(start), mask, n);
    const BigInt den = pow2(static_cast<unsigned long>(n));
    std::vector<std::pair<WalkState, Rational>> out;
    out.reserve(layer.size());
    for (const auto& [key, num] : layer) {
        WalkState st;
        st.n = n;
        st.x = key[0];
        st.s = key[1];
        st.i = key[2];
        st.s_star = key[3];
        st.gamma = key[6];
        st.g = key[7];
        if (st.g != kNoZero) {
            st.s_g = key[4];
            st.s_star_g = key[5];
        }
        out.emplace_back(st, rat(BigInt(num), den));
    }
    return out;
}

// P(S_m = 0) computed mechanically by DP; the normalizer of the penalized
// ratios.  The closed form lives in laws.hpp.
inline Rational prob_max_zero(int m) {
    const auto dist = dp_joint_law(m, 0, {Field::S});
    return dist.at(0);
}

// ---------------------------------------------------------------------------
// Penalized ratios
// ---------------------------------------------------------------------------

namespace detail {

inline unsigned functional_mask(const PenaltyFunctional& G) {
    using Tag = PenaltyFunctional::Tag;
    switch (G.tag) {
        case Tag::MaxWeight:
        case Tag::NextZeroMaxWeight: return closure(kBitX | kBitS);
        case Tag::LastZeroMaxWeight: return closure(kBitX | kBitS | kBitSG);
        case Tag::BilateralLastZeroWeight: return closure(kBitX | kBitSS | kBitSSG);
        case Tag::BilateralIndicator:
        case Tag::CorridorIndicator: return kBitX;
    }
    return kBitX;
}

inline Rational functional_readout(const PenaltyFunctional& G, const Key& key) {
    using Tag = PenaltyFunctional::Tag;
    switch (G.tag) {
        case Tag::MaxWeight: return G.weight->phi(key[1]);
        case Tag::LastZeroMaxWeight:
            if (key[4] < 0) throw std::domain_error("LastZeroMaxWeight: S_{g_p} undefined (no zero visited)");
            return G.weight->phi(key[4]);
        case Tag::NextZeroMaxWeight:
            // F_p-reduction through the conditional law of S_{d_p}; exact, so
            // the phi(S_{d_p}) ratio and the f(S_p, X_p) ratio coincide.
            return laws::cond_next_zero_max(*G.weight, key[1], key[0]);
        case Tag::BilateralLastZeroWeight:
            if (key[5] < 0) throw std::domain_error("BilateralLastZeroWeight: S*_{g_p} undefined");
            return G.weight->phi(key[5]);
        case Tag::BilateralIndicator:
        case Tag::CorridorIndicator:
            return Rational(1);  // pruned DP: surviving states are inside the corridor
    }
    return Rational(0);
}

}  // namespace detail

// E[G over m further steps | state at time n], exact.
inline Rational functional_expectation_from_state(const WalkState& st, const PenaltyFunctional& G, int m) {
    using Tag = PenaltyFunctional::Tag;
    if (G.tag == Tag::CorridorIndicator || G.tag == Tag::BilateralIndicator) {
        const long a = G.a;
        const long b = G.b;
        const bool exited = (G.tag == Tag::CorridorIndicator) ? (st.s >= a || st.i <= -b)
                                                              : (st.s_star >= a);
        if (exited) return Rational(0);
        BigInt killed(0);
        auto prune = [a, b](const detail::Key& k) { return k[0] >= a || k[0] <= -b; };
        const auto layer = detail::dp_evolve(st, detail::kBitX, m, prune, &killed);
        BigInt alive(0);
        for (const auto& [key, num] : layer) alive += num;
        return rat(alive, pow2(static_cast<unsigned long>(m)));
    }
    if (G.tag == Tag::LastZeroMaxWeight && !st.has_zero()) {
        throw std::domain_error("functional_expectation_from_state: path has no zero yet");
    }
    if (G.tag == Tag::BilateralLastZeroWeight && !st.has_zero()) {
        throw std::domain_error("functional_expectation_from_state: path has no zero yet");
    }
    const unsigned mask = detail::functional_mask(G);
    const auto layer = detail::dp_evolve(st, mask, m);
    Rational sum(0);
    for (const auto& [key, num] : layer) {
        const Rational w = detail::functional_readout(G, key);
        if (w != 0) sum += Rational(num) * w;
    }
    return sum / Rational(pow2(static_cast<unsigned long>(m)));
}

// E[1_event(state at n) * G_p] for the walk from 0, exact.
inline Rational penalized_mass(int n, const EventSpec& event, const PenaltyFunctional& G, int p) {
    if (n > p) throw std::invalid_argument("penalized_mass: n must not exceed p");
    Rational total(0);
    std::map<detail::Key, Rational> memo;
    for (const auto& [st, prob] : state_law(n, 0)) {
        if (!event.pred(st)) continue;
        const detail::Key sig = detail::key_from_state(st, detail::functional_mask(G) | detail::kBitI | detail::kBitSS);
        auto it = memo.find(sig);
        Rational v;
        if (it != memo.end()) {
            v = it->second;
        } else {
            v = functional_expectation_from_state(st, G, p - n);
            memo.emplace(sig, v);
        }
        total += prob * v;
    }
    return total;
}

// The master ratio E[1_Lambda G_p] / E[G_p].
inline Rational penalized_ratio(int n, const EventSpec& event, const PenaltyFunctional& G, int p) {
    const Rational den = penalized_mass(n, EventSpec::all(), G, p);
    if (den == 0) {
        throw std::domain_error("penalized_ratio: E[G_p] = 0 for " + G.name());
    }
    return penalized_mass(n, event, G, p) / den;
}

// E[1_Lambda G_p] normalized the way the convergence proofs normalize it:
// P(S_{p-n}=0) for the one-sided-max functionals, 2 P(S_{p-n}=0) for the
// last-zero family.  This is the quantity dominated by E[1_Lambda M_n].
inline Rational normalized_penalized_mass(int n, const EventSpec& event, const PenaltyFunctional& G, int p) {
    using Tag = PenaltyFunctional::Tag;
    Rational norm = prob_max_zero(p - n);
    if (G.tag == Tag::LastZeroMaxWeight) norm *= 2;
    return penalized_mass(n, event, G, p) / norm;
}

// ---------------------------------------------------------------------------
// F_n atoms
// ---------------------------------------------------------------------------

struct Atom {
    std::string name;       // e.g. "+-+"
    std::vector<int> steps;
    WalkState state;
};

inline std::vector<Atom> atoms(int n) {
    std::vector<Atom> out;
    out.reserve(1u << n);
    for (unsigned long bits = 0; bits < (1ul << n); ++bits) {
        Atom a;
        WalkState st = initial_state(0);
        for (int j = 0; j < n; ++j) {
            const int v = (bits >> j) & 1ul ? +1 : -1;
            a.steps.push_back(v);
            a.name += (v > 0 ? '+' : '-');
            st = step_state(st, Step(v));
        }
        a.state = st;
        out.push_back(std::move(a));
    }
    return out;
}

// E[1_atom G_p] = 2^-n E[G_p | prefix], exact.
inline Rational atom_penalized_mass(const Atom& atom, const PenaltyFunctional& G, int p) {
    const int n = static_cast<int>(atom.state.n);
    if (n > p) throw std::invalid_argument("atom_penalized_mass: n must not exceed p");
    return functional_expectation_from_state(atom.state, G, p - n) /
           Rational(pow2(static_cast<unsigned long>(n)));
}

// ---------------------------------------------------------------------------
// Absorbing-chain solves
// ---------------------------------------------------------------------------

// P_a(T_k < T_0): exact tridiagonal solve of the harmonic system on {0..k}.
inline Rational ruin_probability(long a, long k) {
    if (k < 1 || a < 0 || a > k) throw std::invalid_argument("ruin_probability: need 0 <= a <= k, k >= 1");
    if (a == 0) return Rational(0);
    if (a == k) return Rational(1);
    // h(x) = (h(x-1) + h(x+1))/2 on 1..k-1 with h(0)=0, h(k)=1.
    const long m = k - 1;
    std::vector<Rational> diag(m, Rational(1)), rhs(m, Rational(0));
    rhs[m - 1] = rat(1, 2);
    std::vector<Rational> upper(m, rat(-1, 2)), lower(m, rat(-1, 2));
    for (long i = 1; i < m; ++i) {
        const Rational f = lower[i] / diag[i - 1];
        diag[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    std::vector<Rational> h(m);
    h[m - 1] = rhs[m - 1] / diag[m - 1];
    for (long i = m - 2; i >= 0; --i) {
        h[i] = (rhs[i] - upper[i] * h[i + 1]) / diag[i];
    }
    return h[a - 1];
}

// Law of S_{tau_a} (max at the time the walk completes its (a-1)-th return
// to 0), truncated at K with explicit residual.  Built from the mechanically
// solved per-excursion exit probabilities, not from the closed form.
inline ExactDist tau_max_law(long a, long K) {
    if (a < 1 || K < 0) throw std::invalid_argument("tau_max_law: need a >= 1, K >= 0");
    auto below = [&](long c) -> Rational {  // P(S_{tau_a} < c)
        if (c <= 0) return Rational(0);
        const Rational survive = 1 - ruin_probability(1, c) / 2;
        return pow_rat(survive, static_cast<unsigned long>(a - 1));
    };
    ExactDist dist;
    Rational prev = below(0);
    for (long c = 0; c <= K; ++c) {
        const Rational next = below(c + 1);
        dist.add(c, next - prev);
        prev = next;
    }
    dist.residual = 1 - prev;
    return dist;
}

// Law of S*_{tau_a}, truncated at K.
inline ExactDist tau_bimax_law(long a, long K) {
    if (a < 1 || K < 0) throw std::invalid_argument("tau_bimax_law: need a >= 1, K >= 0");
    auto below = [&](long k) -> Rational {  // P(S*_{tau_a} < k)
        if (k <= 0) return Rational(0);
        const Rational survive = 1 - ruin_probability(1, k);
        return pow_rat(survive, static_cast<unsigned long>(a - 1));
    };
    ExactDist dist;
    Rational prev = below(0);
    for (long k = 0; k <= K; ++k) {
        const Rational next = below(k + 1);
        dist.add(k, next - prev);
        prev = next;
    }
    dist.residual = 1 - prev;
    return dist;
}

// Law of gamma_{T_c} (zero count, time-0 visit included, when level c is
// first hit), truncated at M.
inline ExactDist gamma_hit_law(long c, long M) {
    if (c < 1 || M < 1) throw std::invalid_argument("gamma_hit_law: need c >= 1, M >= 1");
    const Rational pi = ruin_probability(1, c) / 2;  // per-zero-visit absorption
    ExactDist dist;
    Rational alive(1);
    for (long m = 1; m <= M; ++m) {
        dist.add(m, alive * pi);
        alive *= (1 - pi);
    }
    dist.residual = alive;
    return dist;
}

// Generic exact absorption distribution of a finite transient chain.  The
// step function returns (probability, next-state-or-label); labels are
// absorbing.  Solved densely by Gaussian elimination over rationals.
template <typename State>
ExactDist absorbing_distribution(
    const State& start,
    const std::function<std::vector<std::pair<Rational, std::variant<State, long>>>(const State&)>& step) {
    // Enumerate the transient states reachable from start.
    std::map<State, int> index;
    std::vector<State> states;
    std::vector<long> labels;
    std::map<long, int> label_index;
    states.push_back(start);
    index[start] = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const State s = states[i];
        for (const auto& [prob, next] : step(s)) {
            if (std::holds_alternative<State>(next)) {
                const State& ns = std::get<State>(next);
                if (!index.count(ns)) {
                    index[ns] = static_cast<int>(states.size());
                    states.push_back(ns);
                }
            } else {
                const long lab = std::get<long>(next);
                if (!label_index.count(lab)) {
                    label_index[lab] = static_cast<int>(labels.size());
                    labels.push_back(lab);
                }
            }
        }
    }
    std::sort(labels.begin(), labels.end());
    for (std::size_t i = 0; i < labels.size(); ++i) label_index[labels[i]] = static_cast<int>(i);

    const int n = static_cast<int>(states.size());
    const int L = static_cast<int>(labels.size());
    // (I - T) H = A, where H(s, l) = P(absorbed at label l | s).
    std::vector<std::vector<Rational>> M(n, std::vector<Rational>(n + L, Rational(0)));
    for (int i = 0; i < n; ++i) {
        M[i][i] = 1;
        for (const auto& [prob, next] : step(states[i])) {
            if (std::holds_alternative<State>(next)) {
                M[i][index.at(std::get<State>(next))] -= prob;
            } else {
                M[i][n + label_index.at(std::get<long>(next))] += prob;
            }
        }
    }
    // Forward elimination with nonzero pivots (exact arithmetic, no pivoting
    // for magnitude needed).
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            if (M[r][col] != 0) {
                piv = r;
                break;
            }
        }
        if (piv < 0) throw std::logic_error("absorbing_distribution: singular system (chain not absorbing?)");
        std::swap(M[col], M[piv]);
        for (int r = col + 1; r < n; ++r) {
            if (M[r][col] == 0) continue;
            const Rational f = M[r][col] / M[col][col];
            M[r][col] = 0;
            for (int c = col + 1; c < n + L; ++c) M[r][c] -= f * M[col][c];
        }
    }
    std::vector<std::vector<Rational>> H(n, std::vector<Rational>(L));
    for (int r = n - 1; r >= 0; --r) {
        for (int l = 0; l < L; ++l) {
            Rational v = M[r][n + l];
            for (int c = r + 1; c < n; ++c) v -= M[r][c] * H[c][l];
            H[r][l] = v / M[r][r];
        }
    }
    ExactDist dist;
    Rational mass(0);
    for (int l = 0; l < L; ++l) {
        dist.add(labels[l], H[0][l]);
        mass += H[0][l];
    }
    dist.residual = 1 - mass;
    return dist;
}

// Law of S_{g_{T_p}} under P (max up to the last zero before the walk first
// hits p).  States are (x, m, cur): position in [0, p), max over completed
// excursions, max of the excursion in progress.  The one-step law of the
// negative excursion is collapsed to an immediate return to 0, which is exact
// for hitting probabilities because absorption can only happen at p > 0.
inline ExactDist pre_max_at_first_hit_law(long p) {
    if (p < 1) throw std::invalid_argument("pre_max_at_first_hit_law: p >= 1");
    using S = std::array<long, 3>;
    std::function<std::vector<std::pair<Rational, std::variant<S, long>>>(const S&)> step =
        [p](const S& s) -> std::vector<std::pair<Rational, std::variant<S, long>>> {
        const long x = s[0], m = s[1], cur = s[2];
        std::vector<std::pair<Rational, std::variant<S, long>>> out;
        if (x == 0) {
            out.emplace_back(rat(1, 2), S{0, m, 0});  // negative excursion, collapsed
            out.emplace_back(rat(1, 2), S{1, m, 1});
        } else {
            const long xu = x + 1;
            if (xu == p) {
                out.emplace_back(rat(1, 2), m);  // absorbed at p; S_g = m
            } else {
                out.emplace_back(rat(1, 2), S{xu, m, std::max(cur, xu)});
            }
            const long xd = x - 1;
            if (xd == 0) {
                out.emplace_back(rat(1, 2), S{0, std::max(m, cur), 0});
            } else {
                out.emplace_back(rat(1, 2), S{xd, m, cur});
            }
        }
        return out;
    };
    return absorbing_distribution<S>(S{0, 0, 0}, step);
}

// Law of S*_{g_{T*_a}} under P: bilateral max at the last zero before |X|
// first hits a.  States are (x, s_star, s_star_g) inside the corridor.
inline ExactDist bilateral_pre_max_at_first_hit_law(long a) {
    if (a < 1) throw std::invalid_argument("bilateral_pre_max_at_first_hit_law: a >= 1");
    using S = std::array<long, 3>;
    std::function<std::vector<std::pair<Rational, std::variant<S, long>>>(const S&)> step =
        [a](const S& s) -> std::vector<std::pair<Rational, std::variant<S, long>>> {
        std::vector<std::pair<Rational, std::variant<S, long>>> out;
        for (int v : {+1, -1}) {
            const long x = s[0] + v;
            if (std::labs(x) == a) {
                out.emplace_back(rat(1, 2), s[2]);  // absorbed; record s_star_g
                continue;
            }
            const long ss = std::max(s[1], std::labs(x));
            const long ssg = (x == 0) ? ss : s[2];
            out.emplace_back(rat(1, 2), S{x, ss, ssg});
        }
        return out;
    };
    return absorbing_distribution<S>(S{0, 0, 0}, step);
}

// ---------------------------------------------------------------------------
// Conditional next-zero oracles (absorbing solves for Lemmas that laws.hpp
// states in closed form)
// ---------------------------------------------------------------------------

// E[psi(S_p v S_{[p,d_p]}) | S_p = s, X_p = x] by a layered tridiagonal solve
// over (position, running max of the completion).  psi is a finite table,
// zero beyond its length.
inline Rational cond_next_zero_absorbing(const std::vector<Rational>& psi, long s, long x) {
    const long L = static_cast<long>(psi.size()) - 1;
    auto Psi = [&](long v) -> Rational { return (v >= 0 && v <= L) ? psi[v] : Rational(0); };
    if (x > s) throw std::invalid_argument("cond_next_zero_absorbing: inconsistent state (x > s)");
    if (x <= 0) {
        // The completion stays nonpositive until it hits 0, so the max is s.
        return Psi(s);
    }
    if (x > L) return Rational(0);  // running max already beyond psi's support
    // V(y, m) = E[psi(s v final max) | at y, running max m], solved from the
    // top layer down; layer m couples only to the known layer m+1.
    std::vector<std::vector<Rational>> V(L + 2);  // V[m] indexed by y in 0..m
    for (long m = L; m >= x; --m) {
        // Tridiagonal system over y = 1..m:
        //   V(y) = (V(y-1) + V(y+1))/2, V(0) = Psi(s v m),
        //   top exit: from y = m the up-step goes to (m+1, m+1).
        const Rational top = (m + 1 <= L) ? V[m + 1][m + 1] : Rational(0);
        const Rational bottom = Psi(std::max(s, m));
        const long n = m;
        std::vector<Rational> diag(n, Rational(1)), rhs(n, Rational(0));
        rhs[0] += bottom / 2;
        rhs[n - 1] += top / 2;
        // lower/upper coefficients are all -1/2
        for (long i = 1; i < n; ++i) {
            const Rational f = rat(-1, 2) / diag[i - 1];
            diag[i] -= f * rat(-1, 2);
            rhs[i] -= f * rhs[i - 1];
        }
        std::vector<Rational> sol(n);
        sol[n - 1] = rhs[n - 1] / diag[n - 1];
        for (long i = n - 2; i >= 0; --i) {
            sol[i] = (rhs[i] - rat(-1, 2) * sol[i + 1]) / diag[i];
        }
        V[m].assign(m + 1, Rational(0));
        V[m][0] = bottom;
        for (long y = 1; y <= m; ++y) V[m][y] = sol[y - 1];
    }
    return V[x][x];
}

// E[psi(S*_a v S*_{[a,d_a]}) | S*_a = s_star, X_a = x].  The completion keeps
// the sign of x until it hits 0, so its bilateral max runs on |position| and
// the unilateral solve applies verbatim.
inline Rational bilateral_cond_next_zero_absorbing(const std::vector<Rational>& psi, long s_star, long x) {
    if (std::labs(x) > s_star) {
        throw std::invalid_argument("bilateral_cond_next_zero_absorbing: inconsistent state (|x| > s*)");
    }
    const long L = static_cast<long>(psi.size()) - 1;
    if (x == 0) return (s_star >= 0 && s_star <= L) ? psi[s_star] : Rational(0);
    return cond_next_zero_absorbing(psi, s_star, std::labs(x));
}

}  // namespace penwalk::oracle
