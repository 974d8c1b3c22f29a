// Seeded randomized property suite for the operator catalog: the Pucci
// sandwich on increments, exact duality, positive homogeneity, the Lipschitz
// bound, the gamma range, and agreement of the algebraic solves with their
// closed forms.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fbreg/operators.hpp"
#include "fbreg/symmat.hpp"

namespace fbreg {

struct PropertyStat {
    std::string name;
    long trials = 0;
    long failures = 0;
    double worst_violation = 0.0;
};

struct PropsResult {
    std::vector<PropertyStat> stats;
    bool pass = true;
};

namespace detail {

inline SymMat random_symmat(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    return SymMat(dist(rng), dist(rng), dist(rng));
}

inline OperatorSpec random_operator(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 3);
    std::uniform_real_distribution<double> l0d(0.5, 2.0), ratio(1.0, 3.0), mu(0.0, 1.0),
        ang(0.0, 2.0 * M_PI);
    const double l0 = l0d(rng), l1 = l0 * ratio(rng);
    switch (pick(rng)) {
        case 0: return OperatorSpec::laplace();
        case 1: return OperatorSpec::pucci_plus_op(l0, l1);
        case 2: return OperatorSpec::pucci_minus_op(l0, l1);
        default: {
            std::uniform_int_distribution<int> nmem(1, 4);
            std::vector<SymMat> family;
            const int m = nmem(rng);
            for (int i = 0; i < m; ++i) {
                const double m1 = l0 + (l1 - l0) * mu(rng);
                const double m2 = l0 + (l1 - l0) * mu(rng);
                family.push_back(rotated_diag(m1, m2, ang(rng)));
            }
            return OperatorSpec::bellman(std::move(family), l0, l1);
        }
    }
}

inline void record(PropertyStat& st, bool ok, double violation) {
    ++st.trials;
    if (!ok) ++st.failures;
    st.worst_violation = std::max(st.worst_violation, violation);
}

}  // namespace detail

inline PropsResult run_operator_property_suite(std::uint64_t seed = 20240801, long n_trials = 10000,
                                               double tol = 1e-10) {
    std::mt19937_64 rng(seed);
    PropertyStat sandwich{"pucci_sandwich_on_increments"};
    PropertyStat duality{"pucci_duality_exact"};
    PropertyStat homogeneity{"pucci_positive_homogeneity"};
    PropertyStat lipschitz{"lipschitz_bound"};
    PropertyStat gamma_range{"gamma_in_inverse_lambda_range"};

    std::uniform_real_distribution<double> tdist(0.0, 3.0), ang(0.0, 2.0 * M_PI);
    for (long i = 0; i < n_trials; ++i) {
        const SymMat p = detail::random_symmat(rng);
        const SymMat q = detail::random_symmat(rng);
        const OperatorSpec op = detail::random_operator(rng);
        const EllipticityPair& ell = op.ellipticity;

        const double inc = eval_operator(op, q) - eval_operator(op, p);
        const double lo = pucci_minus(q - p, ell);
        const double hi = pucci_plus(q - p, ell);
        const double sandwich_violation = std::max(lo - inc, inc - hi);
        detail::record(sandwich, sandwich_violation <= tol, sandwich_violation);

        const double dual_gap = pucci_minus(-p, ell) == -pucci_plus(p, ell) ? 0.0 : 1.0;
        detail::record(duality, dual_gap == 0.0, dual_gap);

        const double t = tdist(rng);
        const double hom_violation =
            std::abs(pucci_plus(p * t, ell) - t * pucci_plus(p, ell));
        detail::record(homogeneity, hom_violation <= 1e-12, hom_violation);

        const double lip_bound = ell.lambda1 * std::sqrt(2.0) * (q - p).frobenius_norm();
        const double lip_violation = std::abs(inc) - lip_bound;
        detail::record(lipschitz, lip_violation <= tol, lip_violation);

        const double phi = ang(rng);
        const double gamma = gamma_for_direction(op, std::cos(phi), std::sin(phi));
        const double range_violation =
            std::max(1.0 / ell.lambda1 - gamma, gamma - 1.0 / ell.lambda0);
        detail::record(gamma_range, range_violation <= 1e-12, range_violation);
    }

    // worked cases with closed-form answers
    PropertyStat closed{"closed_form_agreement"};
    const OperatorSpec lap = OperatorSpec::laplace();
    const OperatorSpec pp12 = OperatorSpec::pucci_plus_op(1.0, 2.0);
    const double s = std::sqrt(0.5);
    struct GammaCase {
        const OperatorSpec* op;
        double ex, ey, expected;
    } gamma_cases[] = {{&lap, 1.0, 0.0, 1.0}, {&pp12, 1.0, 0.0, 0.5}, {&pp12, s, s, 0.5}};
    for (const auto& c : gamma_cases) {
        const double got = gamma_for_direction(*c.op, c.ex, c.ey);
        detail::record(closed, std::abs(got - c.expected) <= tol, std::abs(got - c.expected));
    }
    struct BetaCase {
        const OperatorSpec* op;
        SymMat q;
        double expected;
    } beta_cases[] = {{&lap, SymMat::zero(2), 0.5},
                      {&lap, SymMat::diag(3.0, 0.0), -1.0},
                      {&pp12, SymMat::zero(2), 0.25}};
    for (const auto& c : beta_cases) {
        const double got = project_to_level_set(*c.op, c.q).beta;
        detail::record(closed, std::abs(got - c.expected) <= tol, std::abs(got - c.expected));
    }

    PropsResult result;
    result.stats = {sandwich, duality, homogeneity, lipschitz, gamma_range, closed};
    for (const PropertyStat& st : result.stats)
        if (st.failures > 0) result.pass = false;
    return result;
}

}  // namespace fbreg
