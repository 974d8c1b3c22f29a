// Catalog of uniformly elliptic operators F with F(0) = 0 and the algebraic
// solves on the level set {F = 1}: the direction coefficient gamma with
// F(gamma e(x)e) = 1 and the identity shift beta with F(Q + beta Id) = 1.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbreg/symmat.hpp"

namespace fbreg {

struct EllipticityPair {
    double lambda0 = 1.0;
    double lambda1 = 1.0;

    bool valid() const { return lambda0 > 0.0 && lambda1 >= lambda0; }
    void validate() const {
        if (!valid()) throw std::invalid_argument("EllipticityPair: need 0 < lambda0 <= lambda1");
    }
};

enum class OperatorKind { Laplace, PucciPlus, PucciMinus, BellmanFamily };

inline std::string to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::Laplace: return "laplace";
        case OperatorKind::PucciPlus: return "pucci_plus";
        case OperatorKind::PucciMinus: return "pucci_minus";
        case OperatorKind::BellmanFamily: return "bellman";
    }
    return "unknown";
}

// inf over lambda0 Id <= N <= lambda1 Id of trace(N M): the heavy weight goes
// to the negative part of the spectrum.
inline double pucci_minus(const SymMat& m, const EllipticityPair& ell) {
    const auto eig = m.eigenvalues();
    double pos = 0.0, neg = 0.0;
    for (int k = 0; k < m.dim; ++k) {
        pos += std::max(eig[k], 0.0);
        neg += std::min(eig[k], 0.0);
    }
    return ell.lambda0 * pos + ell.lambda1 * neg;
}

// sup over lambda0 Id <= N <= lambda1 Id of trace(N M).
inline double pucci_plus(const SymMat& m, const EllipticityPair& ell) {
    const auto eig = m.eigenvalues();
    double pos = 0.0, neg = 0.0;
    for (int k = 0; k < m.dim; ++k) {
        pos += std::max(eig[k], 0.0);
        neg += std::min(eig[k], 0.0);
    }
    return ell.lambda1 * pos + ell.lambda0 * neg;
}

struct OperatorSpec {
    OperatorKind kind = OperatorKind::Laplace;
    EllipticityPair ellipticity;
    std::vector<SymMat> family;  // BellmanFamily members only

    static OperatorSpec laplace() { return OperatorSpec{OperatorKind::Laplace, {1.0, 1.0}, {}}; }

    static OperatorSpec pucci_plus_op(double l0, double l1) {
        return OperatorSpec{OperatorKind::PucciPlus, {l0, l1}, {}};
    }

    static OperatorSpec pucci_minus_op(double l0, double l1) {
        return OperatorSpec{OperatorKind::PucciMinus, {l0, l1}, {}};
    }

    static OperatorSpec bellman(std::vector<SymMat> members, double l0, double l1) {
        return OperatorSpec{OperatorKind::BellmanFamily, {l0, l1}, std::move(members)};
    }

    void validate() const {
        ellipticity.validate();
        if (kind == OperatorKind::BellmanFamily) {
            if (family.empty())
                throw std::invalid_argument("OperatorSpec: BellmanFamily needs at least one member");
            const double tol = 1e-12;
            for (const SymMat& n : family) {
                const auto eig = n.eigenvalues();
                for (int k = 0; k < n.dim; ++k) {
                    if (eig[k] < ellipticity.lambda0 - tol || eig[k] > ellipticity.lambda1 + tol)
                        throw std::invalid_argument(
                            "OperatorSpec: Bellman member spectrum outside [lambda0, lambda1]");
                }
            }
        } else if (!family.empty()) {
            throw std::invalid_argument("OperatorSpec: family only allowed for BellmanFamily");
        }
        if (kind == OperatorKind::Laplace &&
            (ellipticity.lambda0 != 1.0 || ellipticity.lambda1 != 1.0)) {
            // trace has ellipticity constants exactly (1, 1); anything else is a config error
            throw std::invalid_argument("OperatorSpec: Laplace requires lambda0 = lambda1 = 1");
        }
    }
};

inline double eval_operator(const OperatorSpec& spec, const SymMat& m) {
    switch (spec.kind) {
        case OperatorKind::Laplace: return m.trace();
        case OperatorKind::PucciPlus: return pucci_plus(m, spec.ellipticity);
        case OperatorKind::PucciMinus: return pucci_minus(m, spec.ellipticity);
        case OperatorKind::BellmanFamily: {
            if (spec.family.empty())
                throw std::invalid_argument("eval_operator: empty Bellman family");
            double best = spec.family.front().inner(m);
            for (std::size_t i = 1; i < spec.family.size(); ++i)
                best = std::max(best, spec.family[i].inner(m));
            return best;
        }
    }
    throw std::logic_error("eval_operator: unreachable");
}

namespace detail {

// Bisects g(t) = eval(spec, base + t * step_dir...) through a strictly
// monotone one-parameter slice until |g - 1| <= tol.
template <typename Eval>
double bisect_to_level_one(Eval&& g, double lo, double hi, double tol, const char* what) {
    double glo = g(lo), ghi = g(hi);
    if (!(glo <= 1.0 && ghi >= 1.0))
        throw std::domain_error(std::string(what) + ": bracket does not straddle the level set");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        // resolve the argument too, not just the residual: callers rely on
        // the root itself landing inside its theoretical range
        if (std::abs(gm - 1.0) <= tol && hi - lo <= 1e-13 * (1.0 + std::abs(mid))) return mid;
        if (gm < 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// gamma > 0 with F(gamma e(x)e) = 1, |g - 1| resolved to 1e-12. Monotone in
// gamma with slope >= lambda0, so bisection on [1/(2 lambda1), 2/lambda0]
// always lands in [1/lambda1, 1/lambda0].
inline double gamma_for_direction(const OperatorSpec& spec, double ex, double ey) {
    spec.validate();
    const double norm = std::hypot(ex, ey);
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("gamma_for_direction: direction must be a unit vector");
    const SymMat e_outer = SymMat::outer(ex, ey);
    const double lo = 1.0 / (2.0 * spec.ellipticity.lambda1);
    const double hi = 2.0 / spec.ellipticity.lambda0;
    return detail::bisect_to_level_one(
        [&](double t) { return eval_operator(spec, e_outer * t); }, lo, hi, 1e-12,
        "gamma_for_direction");
}

struct LevelSetProjection {
    double beta = 0.0;
    SymMat P;
};

// Identity-shift projection onto the level set: beta with F(Q + beta Id) = 1.
// g(beta) = F(Q + beta Id) is strictly increasing with slope in
// [n lambda0, n lambda1], so the root is unique and easy to bracket.
inline LevelSetProjection project_to_level_set(const OperatorSpec& spec, const SymMat& q) {
    spec.validate();
    const double n = static_cast<double>(q.dim);
    const double f0 = eval_operator(spec, q);
    const double gap = 1.0 - f0;
    double lo = std::min(gap / (n * spec.ellipticity.lambda1), gap / (n * spec.ellipticity.lambda0));
    double hi = std::max(gap / (n * spec.ellipticity.lambda1), gap / (n * spec.ellipticity.lambda0));
    // pad against roundoff; slope bounds make the bracket valid up to machine eps
    const double pad = 1e-9 * (1.0 + std::abs(gap)) / (n * spec.ellipticity.lambda0);
    lo -= pad;
    hi += pad;
    auto g = [&](double b) { return eval_operator(spec, q.add_scaled_identity(b)); };
    for (int grow = 0; grow < 8 && g(lo) > 1.0; ++grow) lo -= (hi - lo) + 1.0;
    for (int grow = 0; grow < 8 && g(hi) < 1.0; ++grow) hi += (hi - lo) + 1.0;
    const double beta = detail::bisect_to_level_one(g, lo, hi, 1e-12, "project_to_level_set");
    return {beta, q.add_scaled_identity(beta)};
}

}  // namespace fbreg
