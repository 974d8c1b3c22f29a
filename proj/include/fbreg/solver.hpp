// Finite-difference solver for the complementarity form of the free boundary
// problem: max(F(D^2 u) - 1, -u) = 0 with u >= 0, Dirichlet data on the two
// outer node rings. Outer loop reassigns the per-node policy (PDE row vs
// obstacle row); inner sweeps are projected nonlinear Gauss-Seidel.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fbreg/grid.hpp"
#include "fbreg/operators.hpp"

namespace fbreg {

struct ObstacleProblemSpec {
    OperatorSpec operator_spec;
    Grid2 grid;
    // Full-grid field: the two outer node rings are the Dirichlet data, the
    // rest only seeds the initial iterate.
    ScalarField boundary;
    // The problem's bound on |D^2 u| off the active set. With u = 0 there the
    // discrete Hessian vanishes, so the value is recorded for reporting only.
    double hessian_bound_K = 0.0;

    void validate() const {
        operator_spec.validate();
        grid.validate();
        if (!(boundary.grid == grid))
            throw std::invalid_argument("ObstacleProblemSpec: boundary field grid mismatch");
    }
};

struct Solution {
    ScalarField u;
    std::vector<std::uint8_t> active_mask;  // u > activation_threshold
    int iterations = 0;                     // total Gauss-Seidel sweeps
    double residual = 0.0;
    bool converged = false;
    double activation_threshold = 0.0;

    bool active_at(int ix, int iy) const { return active_mask[u.grid.index(ix, iy)] != 0; }

    BoolField complement_mask() const {
        BoolField m(u.grid);
        for (std::size_t i = 0; i < m.values.size(); ++i) m.values[i] = active_mask[i] ? 0 : 1;
        return m;
    }
};

namespace detail {

// First free (non-clamped) index along one side; rings 0 and 1 carry data.
constexpr int kFreeLow = 2;

inline bool is_free_node(const Grid2& g, int ix, int iy) {
    return ix >= kFreeLow && iy >= kFreeLow && ix <= g.n_cells - kFreeLow &&
           iy <= g.n_cells - kFreeLow;
}

// Solves F(H - t Id) = 1 for t. H is the frozen-neighbor discrete Hessian;
// the Gauss-Seidel update is then u_c + t h^2 / 2 because raising the center
// value by d lowers both diagonal Hessian entries by 2 d / h^2.
inline double level_shift(const OperatorSpec& op, const SymMat& hess) {
    const double l0 = op.ellipticity.lambda0, l1 = op.ellipticity.lambda1;
    switch (op.kind) {
        case OperatorKind::Laplace:
            return (hess.trace() - 1.0) / 2.0;
        case OperatorKind::PucciPlus:
        case OperatorKind::PucciMinus: {
            // F(H - t Id) is piecewise linear and strictly decreasing in t with
            // kinks where a shifted eigenvalue crosses zero; the root lies on
            // exactly one of the three segments. Try each segment's linear
            // solve and keep the one that actually hits the level set.
            const auto e = hess.eigenvalues();  // e[0] >= e[1]
            const bool plus = op.kind == OperatorKind::PucciPlus;
            const double w_pos = plus ? l1 : l0;  // weight on positive eigenvalues
            const double w_neg = plus ? l0 : l1;
            const double cand[3] = {
                (w_pos * (e[0] + e[1]) - 1.0) / (2.0 * w_pos),          // t <= e[1]
                (w_pos * e[0] + w_neg * e[1] - 1.0) / (w_pos + w_neg),  // e[1] <= t <= e[0]
                (w_neg * (e[0] + e[1]) - 1.0) / (2.0 * w_neg)};         // t >= e[0]
            double best_t = cand[0];
            double best_err = std::numeric_limits<double>::infinity();
            for (double t : cand) {
                const double f = plus ? pucci_plus(hess.add_scaled_identity(-t), op.ellipticity)
                                      : pucci_minus(hess.add_scaled_identity(-t), op.ellipticity);
                const double err = std::abs(f - 1.0);
                if (err < best_err) {
                    best_err = err;
                    best_t = t;
                }
            }
            return best_t;
        }
        case OperatorKind::BellmanFamily: {
            // row of the maximizing member: t_N = (N:H - 1)/trace(N); the max
            // over members solves max_N (N:H - t trace(N)) = 1 exactly
            double best = -std::numeric_limits<double>::infinity();
            for (const SymMat& n : op.family)
                best = std::max(best, (n.inner(hess) - 1.0) / n.trace());
            return best;
        }
    }
    throw std::logic_error("level_shift: unreachable");
}

inline double pde_candidate(const OperatorSpec& op, const ScalarField& u, int ix, int iy) {
    const SymMat hess = discrete_hessian(u, ix, iy);
    const double h = u.grid.h();
    return u.at(ix, iy) + 0.5 * level_shift(op, hess) * h * h;
}

enum class Policy : std::uint8_t { Obstacle = 0, Pde = 1 };

}  // namespace detail

// max(F_h(u) - 1, -u) at one interior node.
inline double complementarity_value(const OperatorSpec& op, const ScalarField& u, int ix, int iy) {
    const double a = eval_operator(op, discrete_hessian(u, ix, iy)) - 1.0;
    return std::max(a, -u.at(ix, iy));
}

// Max complementarity residual over the free interior nodes (the two clamped
// rings are excluded; they carry Dirichlet data).
inline double residual(const ObstacleProblemSpec& spec, const ScalarField& u) {
    if (!(u.grid == spec.grid)) throw std::invalid_argument("residual: grid mismatch");
    const Grid2& g = spec.grid;
    double worst = 0.0;
    for (int iy = detail::kFreeLow; iy <= g.n_cells - detail::kFreeLow; ++iy)
        for (int ix = detail::kFreeLow; ix <= g.n_cells - detail::kFreeLow; ++ix)
            worst = std::max(worst, std::abs(complementarity_value(spec.operator_spec, u, ix, iy)));
    return worst;
}

inline Solution solve(const ObstacleProblemSpec& spec, double tol = 1e-10, int max_iters = 20000) {
    spec.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    const Grid2& g = spec.grid;
    const int n = g.n_cells;
    const double h = g.h();

    // InvalidBoundary: the Dirichlet rings must be compatible with u >= 0
    for (int iy = 0; iy <= n; ++iy)
        for (int ix = 0; ix <= n; ++ix) {
            if (detail::is_free_node(g, ix, iy)) continue;
            if (spec.boundary.at(ix, iy) < 0.0)
                throw std::invalid_argument("solve: negative boundary value");
        }

    ScalarField u = spec.boundary;
    const bool is_laplace = spec.operator_spec.kind == OperatorKind::Laplace;
    // optimal SOR factor for the Laplace row; plain sweeps otherwise
    const double omega = is_laplace ? 2.0 / (1.0 + std::sin(M_PI / (n - 2))) : 1.0;

    int sweeps = 0;
    // Projected relaxation: the nodewise solve of F_h = 1 runs the PDE row,
    // clamping at zero runs the obstacle row. Obstacle-policy nodes are not
    // pinned between policy updates; the projection realizes the row switch
    // pointwise and keeps the sweep globally convergent.
    auto sweep = [&](bool project) {
        for (int iy = detail::kFreeLow; iy <= n - detail::kFreeLow; ++iy)
            for (int ix = detail::kFreeLow; ix <= n - detail::kFreeLow; ++ix) {
                const double old = u.at(ix, iy);
                double next = old + omega * (detail::pde_candidate(spec.operator_spec, u, ix, iy) - old);
                if (project) next = std::max(next, 0.0);
                u.at(ix, iy) = next;
            }
        ++sweeps;
    };

    // One unconstrained solve of F_h(u) = 1 extends the boundary data inward;
    // its positive part seeds the active set.
    {
        const double init_tol = std::max(tol, 1e-8);
        const int init_cap = std::min(max_iters, 20 * n);
        for (int round = 0; sweeps < init_cap; ++round) {
            for (int s = 0; s < 20 && sweeps < init_cap; ++s) sweep(false);
            double pde_res = 0.0;
            for (int iy = detail::kFreeLow; iy <= n - detail::kFreeLow; ++iy)
                for (int ix = detail::kFreeLow; ix <= n - detail::kFreeLow; ++ix)
                    pde_res = std::max(
                        pde_res,
                        std::abs(eval_operator(spec.operator_spec, discrete_hessian(u, ix, iy)) - 1.0));
            if (pde_res <= init_tol) break;
        }
    }

    std::vector<std::uint8_t> policy(static_cast<std::size_t>(g.node_count()),
                                     static_cast<std::uint8_t>(detail::Policy::Obstacle));
    auto assign_policy = [&](std::vector<std::uint8_t>& out) {
        bool changed = false;
        for (int iy = detail::kFreeLow; iy <= n - detail::kFreeLow; ++iy)
            for (int ix = detail::kFreeLow; ix <= n - detail::kFreeLow; ++ix) {
                const double a =
                    eval_operator(spec.operator_spec, discrete_hessian(u, ix, iy)) - 1.0;
                const double b = -u.at(ix, iy);
                // ties go to the PDE row, keeping the active set maximal
                const auto next = (a >= b - tol) ? detail::Policy::Pde : detail::Policy::Obstacle;
                const std::size_t idx = g.index(ix, iy);
                if (out[idx] != static_cast<std::uint8_t>(next)) changed = true;
                out[idx] = static_cast<std::uint8_t>(next);
            }
        return changed;
    };

    for (int iy = detail::kFreeLow; iy <= n - detail::kFreeLow; ++iy)
        for (int ix = detail::kFreeLow; ix <= n - detail::kFreeLow; ++ix)
            policy[g.index(ix, iy)] = static_cast<std::uint8_t>(
                u.at(ix, iy) > 0.0 ? detail::Policy::Pde : detail::Policy::Obstacle);

    ScalarField best_u = u;
    double best_res = std::numeric_limits<double>::infinity();
    bool converged = false;
    const int sweeps_per_round = 50;
    while (true) {
        for (int s = 0; s < sweeps_per_round && sweeps < max_iters; ++s) sweep(true);
        const double res = residual(spec, u);
        if (res < best_res) {
            best_res = res;
            best_u = u;
        }
        const bool policy_changed = assign_policy(policy);
        if (!policy_changed && res <= tol) {
            converged = true;
            break;
        }
        if (sweeps >= max_iters) break;
    }

    Solution sol;
    sol.u = converged ? u : best_u;
    sol.residual = converged ? residual(spec, sol.u) : best_res;
    sol.iterations = sweeps;
    sol.converged = converged;
    sol.activation_threshold = h * h;
    sol.active_mask.assign(static_cast<std::size_t>(g.node_count()), 0);
    for (int iy = 0; iy <= n; ++iy)
        for (int ix = 0; ix <= n; ++ix)
            sol.active_mask[g.index(ix, iy)] = sol.u.at(ix, iy) > sol.activation_threshold ? 1 : 0;
    return sol;
}

// Midpoints of grid edges whose endpoints sit on opposite sides of the active
// mask: the discrete free boundary.
inline std::vector<Point> extract_free_boundary(const Solution& sol) {
    const Grid2& g = sol.u.grid;
    std::vector<Point> pts;
    for (int iy = 0; iy <= g.n_cells; ++iy)
        for (int ix = 0; ix <= g.n_cells; ++ix) {
            const bool a = sol.active_at(ix, iy);
            if (ix < g.n_cells && a != sol.active_at(ix + 1, iy))
                pts.push_back({g.coord(ix) + 0.5 * g.h(), g.coord(iy)});
            if (iy < g.n_cells && a != sol.active_at(ix, iy + 1))
                pts.push_back({g.coord(ix), g.coord(iy) + 0.5 * g.h()});
        }
    return pts;
}

// Exact solution of the Laplace problem with a circular coincidence set of
// radius r0: u = r^2/4 - r0^2/4 - (r0^2/2) log(r/r0) outside, 0 inside.
inline double radial_oracle(double r0, double x, double y) {
    if (!(r0 > 0.0)) throw std::invalid_argument("radial_oracle: r0 must be positive");
    const double r = std::hypot(x, y);
    if (r <= r0) return 0.0;
    return r * r / 4.0 - r0 * r0 / 4.0 - (r0 * r0 / 2.0) * std::log(r / r0);
}

// Half-space solution gamma [(x . e)_+]^2 / 2 with e = (cos angle, sin angle).
inline double halfspace_oracle(double gamma, double angle, double x, double y) {
    const double s = std::max(x * std::cos(angle) + y * std::sin(angle), 0.0);
    return 0.5 * gamma * s * s;
}

}  // namespace fbreg
