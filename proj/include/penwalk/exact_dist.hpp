// Finite exact-rational distributions: the oracle's output form.
#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "penwalk/rational.hpp"

namespace penwalk {

// Finite map outcome -> exact probability.  `residual` carries mass beyond a
// truncation level (or killed mass), so entries + residual always account for
// the declared total; nothing is silently dropped.
struct ExactDist {
    using Outcome = std::vector<long>;

    std::map<Outcome, Rational> entries;
    Rational residual = Rational(0);

    Rational mass() const {
        Rational m(0);
        for (const auto& [o, p] : entries) m += p;
        return m;
    }

    Rational total() const { return mass() + residual; }

    Rational at(const Outcome& o) const {
        auto it = entries.find(o);
        return it == entries.end() ? Rational(0) : it->second;
    }

    Rational at(long k) const { return at(Outcome{k}); }

    void add(const Outcome& o, const Rational& p) {
        if (p == 0) return;
        entries[o] += p;
    }

    void add(long k, const Rational& p) { add(Outcome{k}, p); }

    std::string to_json() const {
        nlohmann::ordered_json j;
        j["mass"] = to_string(mass());
        j["residual"] = to_string(residual);
        auto arr = nlohmann::ordered_json::array();
        for (const auto& [o, p] : entries) {
            nlohmann::ordered_json e;
            e["outcome"] = o;
            e["p"] = to_string(p);
            arr.push_back(e);
        }
        j["entries"] = arr;
        return j.dump();
    }

    // CSV with one row per outcome and exact numerator/denominator columns.
    std::string to_csv(const std::vector<std::string>& outcome_columns) const {
        std::ostringstream os;
        for (const auto& c : outcome_columns) os << c << ",";
        os << "numerator,denominator\n";
        for (const auto& [o, p] : entries) {
            for (long v : o) os << v << ",";
            os << p.get_num().get_str() << "," << p.get_den().get_str() << "\n";
        }
        os << "# residual=" << to_string(residual) << "\n";
        os << "# mass=" << to_string(mass()) << "\n";
        return os.str();
    }
};

}  // namespace penwalk
