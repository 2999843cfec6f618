// Nearest-neighbour walk paths on Z and the sufficient statistics every
// penalization formula is evaluated on.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace penwalk {

// One +/-1 step.
struct Step {
    int value;

    explicit Step(int v) : value(v) {
        if (v != 1 && v != -1) throw std::invalid_argument("Step: value must be +1 or -1");
    }
};

inline Step up() { return Step(+1); }
inline Step down() { return Step(-1); }

// A finite path: start position plus its step sequence.
struct Path {
    long start = 0;
    std::vector<Step> steps;

    std::size_t length() const { return steps.size(); }

    long position(std::size_t k) const {
        long x = start;
        for (std::size_t i = 0; i < k; ++i) x += steps[i].value;
        return x;
    }

    std::vector<long> positions() const {
        std::vector<long> pos;
        pos.reserve(steps.size() + 1);
        long x = start;
        pos.push_back(x);
        for (const Step& s : steps) {
            x += s.value;
            pos.push_back(x);
        }
        return pos;
    }
};

constexpr long kNoZero = -1;

// Running statistics of a path prefix:
//   x   current position            s   one-sided max      i     one-sided min
//   s_star bilateral max            gamma  zero count      g     time of last zero
//   s_g  max up to last zero        s_star_g  bilateral max up to last zero
// gamma counts the time-0 visit when the path starts at 0, so tau_1 = 0 and
// tau_a is the (a-1)-th return time.  g, s_g, s_star_g stay undefined
// (has_zero() false) until the walk first visits 0.
struct WalkState {
    long n = 0;
    long x = 0;
    long s = 0;
    long i = 0;
    long s_star = 0;
    long s_g = 0;
    long s_star_g = 0;
    long gamma = 0;
    long g = kNoZero;

    bool has_zero() const { return g != kNoZero; }

    // Pitman statistic R_n = 2 S_n - X_n.
    long r() const { return 2 * s - x; }
};

inline WalkState initial_state(long start = 0) {
    WalkState st;
    st.x = start;
    st.s = start;
    st.i = start;
    st.s_star = std::labs(start);
    if (start == 0) {
        st.gamma = 1;
        st.g = 0;
        st.s_g = 0;
        st.s_star_g = 0;
    }
    return st;
}

inline WalkState step_state(const WalkState& state, Step step) {
    WalkState next = state;
    next.n = state.n + 1;
    next.x = state.x + step.value;
    if (next.x > next.s) next.s = next.x;
    if (next.x < next.i) next.i = next.x;
    const long ax = std::labs(next.x);
    if (ax > next.s_star) next.s_star = ax;
    if (next.x == 0) {
        next.gamma = state.gamma + 1;
        next.g = next.n;
        next.s_g = next.s;
        next.s_star_g = next.s_star;
    }
    return next;
}

// Statistics of a whole path recomputed from scratch; the from-scratch
// counterpart of step_state used as its correctness oracle.
inline WalkState replay(const Path& path) {
    WalkState st = initial_state(path.start);
    for (const Step& s : path.steps) st = step_state(st, s);
    return st;
}

}  // namespace penwalk
