// Penalty weights: exact probability weights phi on N with tail Phi and the
// derived series the closed-form laws need.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "penwalk/rational.hpp"

namespace penwalk {

enum class WeightKind { FiniteSupport, Geometric };

// A probability weight phi on {0,1,2,...} with sum exactly 1.
//
// FiniteSupport keeps the explicit (k, phi(k)) table; Geometric(q) is
// phi(k) = (1-q) q^k.  Construction rejects deficient or excessive mass.
class PenaltyWeight {
  public:
    static PenaltyWeight finite_support(std::vector<std::pair<long, Rational>> weights) {
        PenaltyWeight w;
        w.kind_ = WeightKind::FiniteSupport;
        Rational mass(0);
        for (auto& [k, p] : weights) {
            if (k < 0) throw std::invalid_argument("PenaltyWeight: support must lie in N");
            if (p < 0) throw std::invalid_argument("PenaltyWeight: negative weight");
            if (p == 0) continue;
            if (w.table_.count(k)) throw std::invalid_argument("PenaltyWeight: duplicate support point");
            w.table_[k] = p;
            mass += p;
        }
        if (mass != 1) {
            throw std::invalid_argument("PenaltyWeight: mass sums to " + to_string(mass) + ", not 1");
        }
        return w;
    }

    static PenaltyWeight geometric(const Rational& q) {
        if (!(q > 0 && q < 1)) throw std::invalid_argument("PenaltyWeight: geometric q must be in (0,1)");
        PenaltyWeight w;
        w.kind_ = WeightKind::Geometric;
        w.q_ = q;
        return w;
    }

    static PenaltyWeight uniform(long lo, long hi) {
        if (lo < 0 || hi < lo) throw std::invalid_argument("PenaltyWeight: bad uniform range");
        std::vector<std::pair<long, Rational>> t;
        for (long k = lo; k <= hi; ++k) t.emplace_back(k, rat(1, hi - lo + 1));
        return finite_support(std::move(t));
    }

    static PenaltyWeight point_mass(long k) { return finite_support({{k, rat(1)}}); }

    // Geometric(q) restricted to {0..k_max} and renormalized; finite support,
    // so every downstream identity stays exact.
    static PenaltyWeight geometric_truncated(const Rational& q, long k_max) {
        if (!(q > 0 && q < 1)) throw std::invalid_argument("PenaltyWeight: geometric q must be in (0,1)");
        if (k_max < 0) throw std::invalid_argument("PenaltyWeight: bad truncation");
        const Rational norm = 1 - pow_rat(q, static_cast<unsigned long>(k_max + 1));
        std::vector<std::pair<long, Rational>> t;
        Rational qk(1);
        for (long k = 0; k <= k_max; ++k) {
            t.emplace_back(k, (1 - q) * qk / norm);
            qk *= q;
        }
        return finite_support(std::move(t));
    }

    WeightKind kind() const { return kind_; }
    bool is_finite() const { return kind_ == WeightKind::FiniteSupport; }
    const Rational& q() const { return q_; }

    // Largest support point of a finite-support weight.
    long max_support() const {
        if (!is_finite()) throw std::logic_error("PenaltyWeight: max_support on geometric weight");
        return table_.empty() ? 0 : table_.rbegin()->first;
    }

    // phi(k)
    Rational phi(long k) const {
        if (k < 0) return Rational(0);
        if (kind_ == WeightKind::Geometric) {
            return (1 - q_) * pow_rat(q_, static_cast<unsigned long>(k));
        }
        auto it = table_.find(k);
        return it == table_.end() ? Rational(0) : it->second;
    }

    // Tail Phi(x) = sum_{k>=x} phi(k); geometric tail is q^x.
    Rational tail(long x) const {
        if (x <= 0) return Rational(1);
        if (kind_ == WeightKind::Geometric) return pow_rat(q_, static_cast<unsigned long>(x));
        Rational t(0);
        for (auto it = table_.lower_bound(x); it != table_.end(); ++it) t += it->second;
        return t;
    }

    // sum_k k^r phi(k) for r in {1,2}; closed form for the geometric kind.
    Rational moment(int r) const {
        if (r != 1 && r != 2) throw std::invalid_argument("PenaltyWeight: moment order must be 1 or 2");
        if (kind_ == WeightKind::Geometric) {
            const Rational one_minus = 1 - q_;
            if (r == 1) return q_ / one_minus;
            return q_ * (1 + q_) / (one_minus * one_minus);
        }
        Rational m(0);
        for (const auto& [k, p] : table_) {
            m += (r == 1 ? Rational(k) : Rational(k) * k) * p;
        }
        return m;
    }

    // h(x) = sum_{k>=x} phi(k)/k, x >= 1.  Exact for finite support; for the
    // geometric kind a rational enclosure of width <= hi*2^-50 (< 1e-15)
    // around the true value, since the series has no elementary closed form.
    RationalInterval aux_series_h(long x) const {
        if (x < 1) throw std::invalid_argument("aux_series_h: x must be >= 1");
        if (kind_ == WeightKind::FiniteSupport) {
            Rational v(0);
            for (auto it = table_.lower_bound(x); it != table_.end(); ++it) {
                v += it->second / it->first;
            }
            return {v, v};
        }
        // Partial sums; the tail obeys (1-q) sum_{k>=N} q^k/k <= q^N/N.
        Rational lo(0);
        Rational qk = pow_rat(q_, static_cast<unsigned long>(x));
        const Rational eps = rat(1, 1) / Rational(pow2(50));
        long k = x;
        while (true) {
            lo += (1 - q_) * qk / k;
            qk *= q_;
            ++k;
            const Rational tail_bound = qk / k;
            if (tail_bound <= lo * eps) {
                return {lo, lo + tail_bound};
            }
        }
    }

    // Support points carrying positive mass (finite kind only).
    std::vector<long> support() const {
        if (!is_finite()) throw std::logic_error("PenaltyWeight: support on geometric weight");
        std::vector<long> ks;
        ks.reserve(table_.size());
        for (const auto& [k, p] : table_) ks.push_back(k);
        return ks;
    }

    std::string describe() const {
        if (kind_ == WeightKind::Geometric) return "geometric q=" + to_string(q_);
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, p] : table_) {
            if (!first) os << " ";
            os << k << ":" << to_string(p);
            first = false;
        }
        return os.str();
    }

  private:
    PenaltyWeight() = default;

    WeightKind kind_ = WeightKind::FiniteSupport;
    std::map<long, Rational> table_;
    Rational q_ = 0;
};

// Parses a weight spec.  Accepted forms:
//   "0:1/4 1:1/4 2:1/4 3:1/4"   explicit k:p/q list (commas also allowed)
//   "geometric q=1/2"
//   "uniform:0..3"              sugar for a uniform table
//   "delta:2"                   point mass
//   "geomtrunc q=1/2 k=12"      truncated-renormalized geometric
inline PenaltyWeight parse_weight(const std::string& spec) {
    std::string s = spec;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream is(s);
    std::vector<std::string> tok;
    for (std::string t; is >> t;) tok.push_back(t);
    if (tok.empty()) throw std::runtime_error("parse_weight: empty spec");

    auto keyval = [](const std::string& t, const std::string& key) -> std::string {
        if (t.rfind(key + "=", 0) != 0) {
            throw std::runtime_error("parse_weight: expected " + key + "=..., got '" + t + "'");
        }
        return t.substr(key.size() + 1);
    };

    if (tok[0] == "geometric") {
        if (tok.size() != 2) throw std::runtime_error("parse_weight: usage 'geometric q=p/q'");
        return PenaltyWeight::geometric(parse_rational(keyval(tok[1], "q")));
    }
    if (tok[0] == "geomtrunc") {
        if (tok.size() != 3) throw std::runtime_error("parse_weight: usage 'geomtrunc q=p/q k=K'");
        const Rational q = parse_rational(keyval(tok[1], "q"));
        const long k = std::stol(keyval(tok[2], "k"));
        return PenaltyWeight::geometric_truncated(q, k);
    }
    if (tok.size() == 1 && tok[0].rfind("uniform:", 0) == 0) {
        const std::string range = tok[0].substr(8);
        const auto dots = range.find("..");
        if (dots == std::string::npos) throw std::runtime_error("parse_weight: usage 'uniform:lo..hi'");
        return PenaltyWeight::uniform(std::stol(range.substr(0, dots)), std::stol(range.substr(dots + 2)));
    }
    if (tok.size() == 1 && tok[0].rfind("delta:", 0) == 0) {
        return PenaltyWeight::point_mass(std::stol(tok[0].substr(6)));
    }

    std::vector<std::pair<long, Rational>> table;
    for (const std::string& t : tok) {
        const auto colon = t.find(':');
        if (colon == std::string::npos) {
            throw std::runtime_error("parse_weight: expected k:p/q pair, got '" + t + "'");
        }
        table.emplace_back(std::stol(t.substr(0, colon)), parse_rational(t.substr(colon + 1)));
    }
    return PenaltyWeight::finite_support(std::move(table));
}

}  // namespace penwalk
