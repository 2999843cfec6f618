// Closed-form laws, identities, generating functions and asymptotic rates of
// the penalized walk, directly evaluable.  The oracle module re-derives the
// same quantities mechanically; the two must agree.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "penwalk/rational.hpp"
#include "penwalk/weight.hpp"

namespace penwalk::laws {

struct AsymptoticEstimate {
    double value = 0.0;
    std::string leading_term;
    long n = 0;
};

// P(X_n = j) for the simple walk from 0.
inline Rational srw_endpoint_pmf(long n, long j) {
    if (n < 0) throw std::invalid_argument("srw_endpoint_pmf: n >= 0");
    if (j < -n || j > n || ((n + j) & 1L)) return Rational(0);
    return rat(binomial(n, (n + j) / 2), pow2(static_cast<unsigned long>(n)));
}

// P(S_n = k) = P(X_n = k) + P(X_n = k+1); exactly one term survives parity.
inline Rational srw_max_pmf(long n, long k) {
    if (n < 0) throw std::invalid_argument("srw_max_pmf: n >= 0");
    if (k < 0) return Rational(0);
    return srw_endpoint_pmf(n, k) + srw_endpoint_pmf(n, k + 1);
}

// The telescoping product expansion of P(S_n=k)/P(S_n=0): for even n and
// even k >= 2 the factors are (n-k+2j)/(n+2j); for odd n and odd k >= 1 they
// are (n-k+2j)/(n-1+2j), j = 1..k/2 resp. (k+1)/2.
inline Rational srw_max_ratio_product(long n, long k) {
    if (k == 0) return Rational(1);
    const bool even = (n % 2 == 0);
    if (even && (k % 2 != 0)) throw std::invalid_argument("srw_max_ratio_product: even n needs even k");
    if (!even && (k % 2 == 0)) throw std::invalid_argument("srw_max_ratio_product: odd n needs odd k");
    Rational prod(1);
    const long terms = even ? k / 2 : (k + 1) / 2;
    for (long j = 1; j <= terms; ++j) {
        const long num = n - k + 2 * j;
        const long den = even ? n + 2 * j : n - 1 + 2 * j;
        if (num <= 0) return Rational(0);
        prod *= rat(num, den);
    }
    return prod;
}

// P(S_p = b, X_p = a) by the reflection principle (difference of endpoint
// probabilities); 0 on parity mismatch or unreachable (b, a).
inline Rational joint_max_endpoint_pmf(long p, long b, long a) {
    if (b < 0 || a > b) throw std::invalid_argument("joint_max_endpoint_pmf: need 0 <= b, a <= b");
    return srw_endpoint_pmf(p, 2 * b - a) - srw_endpoint_pmf(p, 2 * b - a + 2);
}

// The equivalent product form P(X_p = 2b-a) (4b-2a+2)/(p+2b-a+2).
inline Rational joint_max_endpoint_pmf_product_form(long p, long b, long a) {
    if (b < 0 || a > b) throw std::invalid_argument("joint_max_endpoint_pmf_product_form: need 0 <= b, a <= b");
    return srw_endpoint_pmf(p, 2 * b - a) * rat(4 * b - 2 * a + 2, p + 2 * b - a + 2);
}

// P_a(T_k < T_0) = a/k.
inline Rational hit_before_zero(long a, long k) {
    if (k < 1 || a < 0 || a > k) throw std::invalid_argument("hit_before_zero: need 0 <= a <= k, k >= 1");
    return rat(a, k);
}

// P_a(S_{T_0} = k) = a/(k(k+1)) for k >= a > 0; 0 for unreachable k < a.
inline Rational first_passage_max_law(long a, long k) {
    if (a < 1) throw std::invalid_argument("first_passage_max_law: a >= 1");
    if (k < a) return Rational(0);
    return rat(a, 1) / (Rational(k) * (k + 1));
}

// E[psi(S_p v S_{[p,d_p]}) | S_p = s, X_p = x] for a finite psi table
// (implicitly 0 beyond its length).
inline Rational cond_next_zero_max(const std::vector<Rational>& psi, long s, long x) {
    auto Psi = [&](long v) -> Rational {
        return (v >= 0 && v < static_cast<long>(psi.size())) ? psi[v] : Rational(0);
    };
    const long xp = x > 0 ? x : 0;
    if (s < 0 || xp > s) throw std::invalid_argument("cond_next_zero_max: inconsistent (s, x)");
    if (s == 0) return Psi(0);
    Rational series(0);
    for (long k = std::max(s, 1L); k < static_cast<long>(psi.size()); ++k) {
        series += psi[k] / (Rational(k) * (k + 1));
    }
    return Psi(s) * (1 - rat(xp, s)) + Rational(xp) * series;
}

// Same with psi = phi of a finite-support weight.
inline Rational cond_next_zero_max(const PenaltyWeight& w, long s, long x) {
    if (!w.is_finite()) {
        throw std::invalid_argument("cond_next_zero_max: exact evaluation needs a finite-support weight");
    }
    std::vector<Rational> psi(static_cast<std::size_t>(w.max_support()) + 1);
    for (long k = 0; k <= w.max_support(); ++k) psi[k] = w.phi(k);
    return cond_next_zero_max(psi, s, x);
}

// E[psi(S*_a v S*_{[a,d_a]}) | S*_a = s_star, X_a = x].
inline Rational bilateral_cond_next_zero(const std::vector<Rational>& psi, long s_star, long x) {
    auto Psi = [&](long v) -> Rational {
        return (v >= 0 && v < static_cast<long>(psi.size())) ? psi[v] : Rational(0);
    };
    const long ax = std::labs(x);
    if (s_star < 0 || ax > s_star) throw std::invalid_argument("bilateral_cond_next_zero: inconsistent (s*, x)");
    if (x == 0) return Psi(s_star);
    Rational series(0);
    for (long k = std::max(s_star, 1L); k < static_cast<long>(psi.size()); ++k) {
        series += psi[k] / (Rational(k) * (k + 1));
    }
    return Psi(s_star) * (1 - rat(ax, s_star)) + Rational(ax) * series;
}

inline Rational bilateral_cond_next_zero(const PenaltyWeight& w, long s_star, long x) {
    if (!w.is_finite()) {
        throw std::invalid_argument("bilateral_cond_next_zero: exact evaluation needs a finite-support weight");
    }
    std::vector<Rational> psi(static_cast<std::size_t>(w.max_support()) + 1);
    for (long k = 0; k <= w.max_support(); ++k) psi[k] = w.phi(k);
    return bilateral_cond_next_zero(psi, s_star, x);
}

// P(S_{tau_a} = c): (1/2)^{a-1} at c = 0, else the a-1 exponent difference.
// The exponent follows the lemma's statement, not its proof's final line;
// the oracle confirms the statement under the gamma_0 = 1 convention.
inline Rational tau_max_pmf(long a, long c) {
    if (a < 1 || c < 0) throw std::invalid_argument("tau_max_pmf: need a >= 1, c >= 0");
    const auto e = static_cast<unsigned long>(a - 1);
    if (c == 0) return pow_rat(rat(1, 2), e);
    return pow_rat(1 - rat(1, 2 * (c + 1)), e) - pow_rat(1 - rat(1, 2 * c), e);
}

// P(S*_{tau_a} = k): 0 at k = 0, else the a-1 exponent difference.
inline Rational tau_bimax_pmf(long a, long k) {
    if (a < 2 || k < 0) throw std::invalid_argument("tau_bimax_pmf: need a > 1, k >= 0");
    if (k == 0) return Rational(0);
    const auto e = static_cast<unsigned long>(a - 1);
    return pow_rat(1 - rat(1, k + 1), e) - pow_rat(1 - rat(1, k), e);
}

// P(gamma_{T_c} = m): geometric with parameter 1/(2c).
inline Rational gamma_hit_pmf(long c, long m) {
    if (c < 1 || m < 1) throw std::invalid_argument("gamma_hit_pmf: need c >= 1, m >= 1");
    return pow_rat(1 - rat(1, 2 * c), static_cast<unsigned long>(m - 1)) * rat(1, 2 * c);
}

// P(S_n < a, X_n = c, I_n > -b): the two-barrier reflection sum.
inline Rational corridor_pmf(long n, long a, long b, long c) {
    if (a < 1 || b < 1) throw std::invalid_argument("corridor_pmf: need a, b >= 1");
    if (c <= -b || c >= a) return Rational(0);  // endpoint outside the corridor
    if ((n + c) & 1L) return Rational(0);
    const long period = a + b;
    BigInt total(0);
    for (long k = -(n / period) - 1; k <= n / period + 1; ++k) {
        total += binomial(n, (n + c) / 2 + k * period);
        total -= binomial(n, (n - c) / 2 + a + k * period);
    }
    return rat(total, pow2(static_cast<unsigned long>(n)));
}

// The same probability through the finite trigonometric expansion
// (2/(a+b)) sum_l cos^n(pi l/(a+b)) sin(pi l a/(a+b)) sin(pi l (a-c)/(a+b));
// an exact identity, evaluated in floating point.
inline double corridor_pmf_trig(long n, long a, long b, long c) {
    if (a < 1 || b < 1) throw std::invalid_argument("corridor_pmf_trig: need a, b >= 1");
    if (c <= -b || c >= a) return 0.0;
    const double L = static_cast<double>(a + b);
    double sum = 0.0;
    for (long l = 1; l <= a + b - 1; ++l) {
        sum += std::pow(std::cos(M_PI * l / L), static_cast<double>(n)) *
               std::sin(M_PI * l * a / L) * std::sin(M_PI * l * (a - c) / L);
    }
    return 2.0 / L * sum;
}

// Leading term of P(S_n < a, I_n > -b) as n grows: the l = 1 and l = a+b-1
// modes of the trig expansion combine into
//   (4/(a+b)) cos^n(pi/(a+b)) sin(a pi/(a+b)) sum_{c = n mod 2} sin((a-c)pi/(a+b)).
inline AsymptoticEstimate corridor_survival_asym(long n, long a, long b) {
    if (a < 1 || b < 1 || n < 1) throw std::invalid_argument("corridor_survival_asym: need a, b, n >= 1");
    const double L = static_cast<double>(a + b);
    double sine_sum = 0.0;
    for (long c = -b + 1; c <= a - 1; ++c) {
        if (((n + c) & 1L) == 0) sine_sum += std::sin(M_PI * (a - c) / L);
    }
    const double value =
        4.0 / L * std::pow(std::cos(M_PI / L), static_cast<double>(n)) * std::sin(M_PI * a / L) * sine_sum;
    return {value, "4/(a+b) cos^n(pi/(a+b)) sin(a pi/(a+b)) sum sin((a-c)pi/(a+b))", n};
}

// log of the same leading term; usable where cos^n underflows.
inline double corridor_survival_asym_log(long n, long a, long b) {
    if (a < 1 || b < 1 || n < 1) throw std::invalid_argument("corridor_survival_asym_log: need a, b, n >= 1");
    const double L = static_cast<double>(a + b);
    const double cosv = std::cos(M_PI / L);
    if (cosv <= 0.0) return -HUGE_VAL;
    double sine_sum = 0.0;
    for (long c = -b + 1; c <= a - 1; ++c) {
        if (((n + c) & 1L) == 0) sine_sum += std::sin(M_PI * (a - c) / L);
    }
    if (sine_sum <= 0.0) return -HUGE_VAL;
    return std::log(4.0 / L) + n * std::log(cosv) + std::log(std::sin(M_PI * a / L)) + std::log(sine_sum);
}

// Residue-filtered binomial sum: left side sum_{k>=0} C(n, kp+u) exactly,
// right side the roots-of-unity formula (1/p) sum_l (1+w^l)^n w^{-lu}.
// The formula also holds at u = 0 by the same cancellation.
inline std::pair<BigInt, double> binomial_filter(long n, long p, long u) {
    if (n < 0 || p < 1 || u < 0 || u >= p) {
        throw std::invalid_argument("binomial_filter: need n >= 0, p >= 1, 0 <= u < p");
    }
    BigInt left(0);
    for (long k = 0; u + k * p <= n; ++k) left += binomial(n, u + k * p);
    std::complex<double> acc(0.0, 0.0);
    for (long l = 0; l < p; ++l) {
        const double th = 2.0 * M_PI * l / static_cast<double>(p);
        const std::complex<double> w(std::cos(th), std::sin(th));
        acc += std::pow(1.0 + w, static_cast<double>(n)) *
               std::exp(std::complex<double>(0.0, -th * static_cast<double>(u)));
    }
    return {left, acc.real() / static_cast<double>(p)};
}

// E[(cosh lambda)^{-T_a ^ T_b}] = cosh(lambda (a+b)/2) / cosh(lambda (a-b)/2)
// for a < 0 < b.
inline double cosh_pgf(long a, long b, double lambda) {
    if (!(a < 0 && b > 0)) throw std::invalid_argument("cosh_pgf: need a < 0 < b");
    return std::cosh(lambda * (a + b) / 2.0) / std::cosh(lambda * (a - b) / 2.0);
}

// E[(1-beta)^{T_alpha}] = ((1 + sqrt(2 beta - beta^2)) / (1-beta))^{-alpha}.
inline double geometric_time_hit_pgf(long alpha, double beta) {
    if (alpha < 1 || !(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("geometric_time_hit_pgf: need alpha >= 1, beta in (0,1)");
    }
    return std::pow((1.0 + std::sqrt(2.0 * beta - beta * beta)) / (1.0 - beta),
                    -static_cast<double>(alpha));
}

// Tauberian rate: P_a(S*_{g_p} <= alpha) ~ alpha sqrt(2/(pi p)).
inline AsymptoticEstimate bilateral_gzero_asym(long alpha, long p) {
    if (alpha < 1 || p < 1) throw std::invalid_argument("bilateral_gzero_asym: need alpha, p >= 1");
    return {static_cast<double>(alpha) * std::sqrt(2.0 / (M_PI * static_cast<double>(p))),
            "alpha sqrt(2/(pi p))", p};
}

// P(S_{g_{T_p}} = k) = 1/p on {0,...,p-1}.
inline Rational uniform_pre_max_pmf(long p, long k) {
    if (p < 1) throw std::invalid_argument("uniform_pre_max_pmf: p >= 1");
    if (k < 0 || k >= p) return Rational(0);
    return rat(1, p);
}

// P(S_p = 0) = 2^-p C(p, ceil(p/2)) through log-gamma; usable at p = 10^6.
inline double stay_nonpositive_prob(long p) {
    if (p < 0) throw std::invalid_argument("stay_nonpositive_prob: p >= 0");
    const double n = static_cast<double>(p);
    const double m = static_cast<double>((p + 1) / 2);
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0) -
                    n * std::log(2.0));
}

// log P(S_n < a, I_n > -b) by float DP over the corridor interior, with
// per-layer rescaling so arbitrarily small survival masses stay representable.
inline double corridor_survival_dp_log(long n, long a, long b) {
    if (a < 1 || b < 1 || n < 0) throw std::invalid_argument("corridor_survival_dp_log: need a, b >= 1, n >= 0");
    const long lo = -b + 1, hi = a - 1;
    const long width = hi - lo + 1;
    if (width < 1) return n == 0 ? 0.0 : -HUGE_VAL;
    std::vector<double> cur(width, 0.0), nxt(width, 0.0);
    cur[0 - lo] = 1.0;
    double logscale = 0.0;
    for (long t = 0; t < n; ++t) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (long j = 0; j < width; ++j) {
            const double m = cur[j] * 0.5;
            if (m == 0.0) continue;
            if (j > 0) nxt[j - 1] += m;
            if (j + 1 < width) nxt[j + 1] += m;
        }
        std::swap(cur, nxt);
        double total = 0.0;
        for (double v : cur) total += v;
        if (total == 0.0) return -HUGE_VAL;
        if (total < 1e-200) {
            for (double& v : cur) v /= total;
            logscale += std::log(total);
        }
    }
    double total = 0.0;
    for (double v : cur) total += v;
    return std::log(total) + logscale;
}

// P(S*_{g_p} <= alpha) by float DP: phase one lives inside [-alpha, alpha];
// leaving it moves mass to phase two, where any return to zero kills.
inline double bilateral_gzero_dp(long alpha, long p, long start = 0) {
    if (alpha < 1 || p < 0) throw std::invalid_argument("bilateral_gzero_dp: need alpha >= 1, p >= 0");
    if (std::labs(start) > alpha) throw std::invalid_argument("bilateral_gzero_dp: |start| <= alpha required");
    const long R = alpha + p + 2;  // phase-two positions in [-R, R]
    std::vector<double> in_cur(2 * alpha + 1, 0.0), in_nxt(2 * alpha + 1, 0.0);
    std::vector<double> out_cur(2 * R + 1, 0.0), out_nxt(2 * R + 1, 0.0);
    in_cur[start + alpha] = 1.0;
    for (long t = 0; t < p; ++t) {
        std::fill(in_nxt.begin(), in_nxt.end(), 0.0);
        std::fill(out_nxt.begin(), out_nxt.end(), 0.0);
        for (long j = 0; j <= 2 * alpha; ++j) {
            const double m = in_cur[j] * 0.5;
            if (m == 0.0) continue;
            const long x = j - alpha;
            if (x + 1 <= alpha) in_nxt[j + 1] += m; else out_nxt[x + 1 + R] += m;
            if (x - 1 >= -alpha) in_nxt[j - 1] += m; else out_nxt[x - 1 + R] += m;
        }
        for (long j = 0; j <= 2 * R; ++j) {
            const double m = out_cur[j] * 0.5;
            if (m == 0.0) continue;
            const long x = j - R;
            if (x + 1 != 0 && x + 1 <= R) out_nxt[j + 1] += m;
            if (x - 1 != 0 && x - 1 >= -R) out_nxt[j - 1] += m;
        }
        std::swap(in_cur, in_nxt);
        std::swap(out_cur, out_nxt);
    }
    double total = 0.0;
    for (double v : in_cur) total += v;
    for (double v : out_cur) total += v;
    return total;
}

// Left side of the corrected Lemma 5.8 identity
// sum_{k>=n} [k phi(k) + Phi(k)] / (k(k+1)), a finite sum for finite support.
inline Rational lemma58_lhs(const PenaltyWeight& w, long n) {
    if (n < 1) throw std::invalid_argument("lemma58_lhs: n >= 1");
    if (!w.is_finite()) throw std::invalid_argument("lemma58_lhs: finite-support weight required");
    Rational sum(0);
    for (long k = n; k <= w.max_support(); ++k) {
        sum += (Rational(k) * w.phi(k) + w.tail(k)) / (Rational(k) * (k + 1));
    }
    return sum;
}

}  // namespace penwalk::laws
