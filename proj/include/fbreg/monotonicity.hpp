// Directional almost-monotonicity checks: the quantity C0 d_e u - u (or
// C0 d_e u - |grad u|^2) must stay above -eps0 in B_1 to force nonnegativity
// in B_{1/2}; the admissible eps0 thresholds are 1/(8 n lambda1) and
// lambda0 / (4 n^2 lambda1^3). Also the monotonicity cone around the fitted
// half-space axis, whose aperture bounds the Lipschitz slope of the free
// boundary.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fbreg/geometry.hpp"
#include "fbreg/grid.hpp"
#include "fbreg/operators.hpp"

namespace fbreg {

enum class MonotonicityVariant { u, grad_sq };

struct MonotonicityCheck {
    double ex = 1.0, ey = 0.0;
    double C0 = 1.0;
    MonotonicityVariant variant = MonotonicityVariant::u;
    double eps0 = 0.0;      // -(min over B_1), clamped at 0
    double min_half = 0.0;  // min over B_{1/2}
    double threshold = 0.0;
    bool hypothesis_met = false;  // eps0 <= threshold
    bool conclusion_met = false;  // min_half >= -10h
    bool pass = false;            // hypothesis implies conclusion
};

inline double monotonicity_threshold(MonotonicityVariant v, const EllipticityPair& ell) {
    const double n = 2.0;
    if (v == MonotonicityVariant::u) return 1.0 / (8.0 * n * ell.lambda1);
    return ell.lambda0 / (4.0 * n * n * ell.lambda1 * ell.lambda1 * ell.lambda1);
}

inline MonotonicityCheck directional_monotonicity(const ScalarField& u, double ex, double ey,
                                                  double C0, MonotonicityVariant variant,
                                                  const EllipticityPair& ell) {
    const Grid2& g = u.grid;
    const double h = g.h();
    MonotonicityCheck chk;
    chk.ex = ex;
    chk.ey = ey;
    chk.C0 = C0;
    chk.variant = variant;
    chk.threshold = monotonicity_threshold(variant, ell);

    double min_b1 = std::numeric_limits<double>::infinity();
    double min_half = std::numeric_limits<double>::infinity();
    for (int iy = 1; iy <= g.n_cells - 1; ++iy)
        for (int ix = 1; ix <= g.n_cells - 1; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            const double rho2 = x * x + y * y;
            if (rho2 > 1.0 + 1e-12) continue;
            const Point grad = discrete_gradient(u, ix, iy);
            double q = C0 * (grad.x * ex + grad.y * ey);
            if (variant == MonotonicityVariant::u)
                q -= u.at(ix, iy);
            else
                q -= grad.x * grad.x + grad.y * grad.y;
            min_b1 = std::min(min_b1, q);
            if (rho2 <= 0.25 + 1e-12) min_half = std::min(min_half, q);
        }
    if (!std::isfinite(min_b1))
        throw std::invalid_argument("directional_monotonicity: no interior nodes in B_1");
    chk.eps0 = std::max(0.0, -min_b1);
    chk.min_half = min_half;
    chk.hypothesis_met = chk.eps0 <= chk.threshold;
    chk.conclusion_met = chk.min_half >= -10.0 * h;
    chk.pass = !chk.hypothesis_met || chk.conclusion_met;
    return chk;
}

struct MonotonicityCone {
    bool fit_ok = false;
    HalfspaceFit fit;
    double C0 = 1.0;
    double aperture_s = std::numeric_limits<double>::quiet_NaN();  // smallest passing s
    bool cone_found = false;
};

// Blow up at x, fit a half-space axis, then find the smallest s in
// {1.0, 0.9, ..., 0.1} such that d_e u >= -10h on B_{r/2}(x) for every tested
// direction with e . e_axis >= s.
inline MonotonicityCone monotonicity_cone(const ScalarField& u, double cx, double cy, double r,
                                          double C0, const EllipticityPair& ell,
                                          int out_resolution = 64, double fit_threshold = 0.2,
                                          int n_dirs = 64) {
    MonotonicityCone cone;
    cone.C0 = C0;
    const ScalarField resc = rescale(u, cx, cy, r, out_resolution);
    cone.fit = halfspace_fit(resc, ell);
    if (cone.fit.sup_err > fit_threshold) return cone;  // unfit
    cone.fit_ok = true;

    const Grid2& g = u.grid;
    const double h = g.h();
    std::vector<double> dir_min(n_dirs, std::numeric_limits<double>::infinity());
    std::vector<double> dir_x(n_dirs), dir_y(n_dirs);
    for (int k = 0; k < n_dirs; ++k) {
        const double th = 2.0 * M_PI * k / n_dirs;
        dir_x[k] = std::cos(th);
        dir_y[k] = std::sin(th);
    }
    for_each_node_in_ball(g, cx, cy, r / 2.0, [&](int ix, int iy, double, double) {
        if (ix < 1 || iy < 1 || ix > g.n_cells - 1 || iy > g.n_cells - 1) return;
        const Point grad = discrete_gradient(u, ix, iy);
        for (int k = 0; k < n_dirs; ++k)
            dir_min[k] = std::min(dir_min[k], grad.x * dir_x[k] + grad.y * dir_y[k]);
    });

    auto cone_ok = [&](double s) {
        for (int k = 0; k < n_dirs; ++k) {
            const double along = dir_x[k] * cone.fit.ex + dir_y[k] * cone.fit.ey;
            if (along >= s && dir_min[k] < -10.0 * h) return false;
        }
        return true;
    };
    for (int i = 10; i >= 1; --i) {
        const double s = i / 10.0;
        if (!cone_ok(s)) break;
        cone.aperture_s = s;
        cone.cone_found = true;
    }
    return cone;
}

}  // namespace fbreg
