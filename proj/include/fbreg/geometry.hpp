// Thickness of the coincidence set (minimal diameter over projected widths),
// quadratic rescaling of fields to the unit ball, and the best half-space
// model gamma [(y . e)_+]^2 / 2 in sup norm.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fbreg/grid.hpp"
#include "fbreg/operators.hpp"

namespace fbreg {

// MD(E intersect B_r(x)) / r where E is the node set flagged true and MD is
// the smallest width between two parallel lines containing the set. Widths
// are scanned over n_dirs normal directions theta_k = k pi / n_dirs.
inline double min_diameter(const BoolField& lambda_mask, double cx, double cy, double r,
                           int n_dirs = 64) {
    if (n_dirs < 64) throw std::invalid_argument("min_diameter: need n_dirs >= 64");
    std::vector<Point> pts;
    for_each_node_in_ball(lambda_mask.grid, cx, cy, r, [&](int ix, int iy, double x, double y) {
        if (lambda_mask.at(ix, iy)) pts.push_back({x, y});
    });
    if (pts.empty()) return 0.0;
    double md = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n_dirs; ++k) {
        const double th = M_PI * k / n_dirs;
        const double dx = std::cos(th), dy = std::sin(th);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const Point& p : pts) {
            const double proj = p.x * dx + p.y * dy;
            lo = std::min(lo, proj);
            hi = std::max(hi, proj);
        }
        md = std::min(md, hi - lo);
    }
    return md / r;
}

struct ThicknessRecord {
    Point x;
    double r = 0.0;
    double delta = 0.0;  // MD(complement intersect B_r(x)) / r, in [0, 2]
    int n_dirs = 64;
};

inline ThicknessRecord thickness_record(const BoolField& lambda_mask, double cx, double cy,
                                        double r, int n_dirs = 64) {
    ThicknessRecord rec;
    rec.x = {cx, cy};
    rec.r = r;
    rec.n_dirs = n_dirs;
    rec.delta = min_diameter(lambda_mask, cx, cy, r, n_dirs);
    return rec;
}

// Complement mask of a rescaled field: nodes with value <= threshold. The
// image of the source threshold under y = (x - c)/r is threshold / r^2.
inline BoolField threshold_complement_mask(const ScalarField& u, double threshold) {
    BoolField m(u.grid);
    for (int iy = 0; iy <= u.grid.n_cells; ++iy)
        for (int ix = 0; ix <= u.grid.n_cells; ++ix) m.set(ix, iy, u.at(ix, iy) <= threshold);
    return m;
}

// y -> [u(x + r y) - u(x)] / r^2 sampled bilinearly onto a unit-ball grid
// with out_resolution cells per side. Nodes of the square outside the source
// domain (the corners, |y| > 1) are filled with clamped samples; consumers
// restrict to |y| <= 1.
inline ScalarField rescale(const ScalarField& u, double cx, double cy, double r,
                           int out_resolution = 64) {
    const Grid2& g = u.grid;
    if (r < 4.0 * g.h() - 1e-12)
        throw std::invalid_argument("rescale: r below interpolation scale (4h)");
    if (std::max(std::abs(cx), std::abs(cy)) + r > g.half_width + 1e-12)
        throw std::invalid_argument("rescale: ball B_r(x) not inside grid");
    Grid2 out_grid{1.0, out_resolution};
    out_grid.validate();
    ScalarField out(out_grid);
    const double u0 = u.sample(cx, cy);
    for (int iy = 0; iy <= out_grid.n_cells; ++iy)
        for (int ix = 0; ix <= out_grid.n_cells; ++ix) {
            const double yx = out_grid.coord(ix), yy = out_grid.coord(iy);
            double px = cx + r * yx, py = cy + r * yy;
            px = std::min(std::max(px, -g.half_width), g.half_width);
            py = std::min(std::max(py, -g.half_width), g.half_width);
            out.at(ix, iy) = (u.sample(px, py) - u0) / (r * r);
        }
    return out;
}

struct HalfspaceFit {
    double gamma = 0.0;
    double ex = 1.0;
    double ey = 0.0;
    double sup_err = std::numeric_limits<double>::infinity();
};

inline double halfspace_model(double gamma, double ex, double ey, double yx, double yy) {
    const double s = std::max(yx * ex + yy * ey, 0.0);
    return 0.5 * gamma * s * s;
}

// Best half-space model over the unit ball of the field's grid: coarse scan
// of 256 directions and 33 gamma samples in [1/lambda1, 1/lambda0], then
// local bisection refinement around the best cell.
inline HalfspaceFit halfspace_fit(const ScalarField& field, const EllipticityPair& ell) {
    ell.validate();
    const Grid2& g = field.grid;
    std::vector<Point> nodes;
    std::vector<double> vals;
    for (int iy = 0; iy <= g.n_cells; ++iy)
        for (int ix = 0; ix <= g.n_cells; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            if (x * x + y * y <= 1.0 + 1e-12) {
                nodes.push_back({x, y});
                vals.push_back(field.at(ix, iy));
            }
        }
    auto sup_err = [&](double gamma, double phi) {
        const double ex = std::cos(phi), ey = std::sin(phi);
        double worst = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            worst = std::max(worst,
                             std::abs(vals[i] - halfspace_model(gamma, ex, ey, nodes[i].x, nodes[i].y)));
        return worst;
    };

    const double g_lo = 1.0 / ell.lambda1, g_hi = 1.0 / ell.lambda0;
    const int n_gamma = g_hi > g_lo ? 33 : 1;
    double best_gamma = g_lo, best_phi = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < 256; ++j) {
        const double phi = 2.0 * M_PI * j / 256.0;
        for (int k = 0; k < n_gamma; ++k) {
            const double gamma = n_gamma == 1 ? g_lo : g_lo + (g_hi - g_lo) * k / (n_gamma - 1);
            const double e = sup_err(gamma, phi);
            if (e < best) {
                best = e;
                best_gamma = gamma;
                best_phi = phi;
            }
        }
    }
    double step_phi = 2.0 * M_PI / 256.0;
    double step_gamma = n_gamma == 1 ? 0.0 : (g_hi - g_lo) / 32.0;
    for (int round = 0; round < 30; ++round) {
        step_phi *= 0.5;
        step_gamma *= 0.5;
        for (int dp = -1; dp <= 1; ++dp)
            for (int dg = -1; dg <= 1; ++dg) {
                const double gamma =
                    std::min(std::max(best_gamma + dg * step_gamma, g_lo), g_hi);
                const double phi = best_phi + dp * step_phi;
                const double e = sup_err(gamma, phi);
                if (e < best) {
                    best = e;
                    best_gamma = gamma;
                    best_phi = phi;
                }
            }
    }
    HalfspaceFit fit;
    fit.gamma = best_gamma;
    fit.ex = std::cos(best_phi);
    fit.ey = std::sin(best_phi);
    fit.sup_err = best;
    return fit;
}

}  // namespace fbreg
