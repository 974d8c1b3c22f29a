// One-dimensional non-degeneracy counterexample: u'' = chi_Omega for a union
// of disjoint intervals accumulating at 0. When the density of Omega near 0
// vanishes, u(r)/r^2 does too, all in exact rational arithmetic.
#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "fbreg/rational.hpp"

namespace fbreg {

struct IntervalFamily {
    // (a_j, b_j) with 0 < a_j < b_j, pairwise disjoint, ordered toward 0:
    // b_{j+1} <= a_j.
    std::vector<std::pair<Rational, Rational>> intervals;

    void validate() const {
        const Rational zero(0);
        for (std::size_t j = 0; j < intervals.size(); ++j) {
            const auto& [a, b] = intervals[j];
            if (!(zero < a && a < b))
                throw std::invalid_argument("IntervalFamily: need 0 < a_j < b_j");
            if (j + 1 < intervals.size() && !(intervals[j + 1].second <= a))
                throw std::invalid_argument(
                    "IntervalFamily: intervals must be disjoint and decreasing toward 0");
        }
    }

    // default construction (4^-j, 4^-j + 8^-j), j = 1..J
    static IntervalFamily geometric(int J = 12) {
        if (J < 1) throw std::invalid_argument("IntervalFamily: J must be >= 1");
        IntervalFamily fam;
        for (int j = 1; j <= J; ++j) {
            const Rational a(BigInt(1), BigInt::pow(BigInt(4), static_cast<unsigned>(j)));
            const Rational w(BigInt(1), BigInt::pow(BigInt(8), static_cast<unsigned>(j)));
            fam.intervals.emplace_back(a, a + w);
        }
        fam.validate();
        return fam;
    }
};

// |Omega intersect (0, r)| / r, exactly.
inline Rational density(const IntervalFamily& family, const Rational& r) {
    if (!(Rational(0) < r)) throw std::invalid_argument("density: r must be positive");
    Rational measure(0);
    for (const auto& [a, b] : family.intervals) {
        const Rational hi = Rational::min(b, r);
        if (a < hi) measure = measure + (hi - a);
    }
    return measure / r;
}

// u(t) = int_0^t int_0^s chi_Omega = int over Omega intersect (0,t) of (t - tau):
// each interval contributes ((t-a)^2 - (t-c)^2)/2 with c = min(b, t).
inline Rational u_value(const IntervalFamily& family, const Rational& t) {
    if (t < Rational(0)) throw std::invalid_argument("u_value: t must be >= 0");
    Rational sum(0);
    const Rational half(1, 2);
    for (const auto& [a, b] : family.intervals) {
        if (!(a < t)) continue;
        const Rational c = Rational::min(b, t);
        const Rational da = t - a, dc = t - c;
        sum = sum + half * (da * da - dc * dc);
    }
    return sum;
}

struct DecayRow {
    Rational r;
    Rational ratio;    // u(r) / r^2
    Rational density;  // |Omega intersect (0, r)| / r
};

struct DecayReport {
    std::vector<DecayRow> rows;
    bool ratio_strictly_decreasing = true;
    bool density_strictly_decreasing = true;
};

// Tabulates u(r)/r^2 against the density along decreasing radii. The bound
// u(r)/r^2 <= density(r) is structural ((t - tau) <= t under the integral);
// a violation means broken arithmetic, hence logic_error.
inline DecayReport verify_o_r2(const IntervalFamily& family, const std::vector<Rational>& radii) {
    family.validate();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(Rational(0) < radii[i]))
            throw std::invalid_argument("verify_o_r2: radii must be positive");
        if (i + 1 < radii.size() && !(radii[i + 1] < radii[i]))
            throw std::invalid_argument("verify_o_r2: radii must be strictly decreasing");
    }
    DecayReport rep;
    for (const Rational& r : radii) {
        DecayRow row;
        row.r = r;
        row.ratio = u_value(family, r) / (r * r);
        row.density = density(family, r);
        if (row.density < row.ratio)
            throw std::logic_error("verify_o_r2: bound u(r)/r^2 <= density(r) violated");
        rep.rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
        if (!(rep.rows[i + 1].ratio < rep.rows[i].ratio)) rep.ratio_strictly_decreasing = false;
        if (!(rep.rows[i + 1].density < rep.rows[i].density))
            rep.density_strictly_decreasing = false;
    }
    return rep;
}

}  // namespace fbreg
