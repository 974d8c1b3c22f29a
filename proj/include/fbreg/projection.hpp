// Quantitative regularity checks built from ball averages of the discrete
// Hessian: the level-set projection track across dyadic radii, growth and
// deviation statistics, complement volume decay, and the quadratic
// non-degeneracy bound on circles.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbreg/grid.hpp"
#include "fbreg/operators.hpp"
#include "fbreg/solver.hpp"

namespace fbreg {

struct ProjectionRecord {
    double r = 0.0;
    SymMat Q_r;           // ball average of the discrete Hessian
    double beta = 0.0;    // identity shift with F(Q_r + beta Id) = 1
    SymMat P_r;           // Q_r + beta Id
    double deviation = 0.0;  // L2 ball average of |D^2 u - P_r|_F
    double growth = 0.0;     // sup_{B_r} |u - <P_r y, y>/2| / r^2
    double gap_to_coarser = std::numeric_limits<double>::quiet_NaN();  // |P_{2r} - P_r|_F
};

namespace detail {

inline void locate_node(const Grid2& g, double cx, double cy, int& ix, int& iy, const char* what) {
    g.nearest_node(cx, cy, ix, iy);
    if (std::abs(g.coord(ix) - cx) > 1e-9 * std::max(1.0, g.h()) ||
        std::abs(g.coord(iy) - cy) > 1e-9 * std::max(1.0, g.h()))
        throw std::invalid_argument(std::string(what) + ": center is not a grid node");
}

}  // namespace detail

// Max Frobenius norm of the discrete Hessian over nodes of B_radius(center).
inline double hessian_sup(const ScalarField& u, double radius, double cx = 0.0, double cy = 0.0) {
    const Grid2& g = u.grid;
    if (std::max(std::abs(cx), std::abs(cy)) + radius + 2.0 * g.h() > g.half_width + 1e-12)
        throw std::invalid_argument("hessian_sup: radius too large for grid");
    double sup = 0.0;
    for_each_node_in_ball(g, cx, cy, radius, [&](int ix, int iy, double, double) {
        sup = std::max(sup, discrete_hessian(u, ix, iy).frobenius_norm());
    });
    return sup;
}

// Dyadic track of level-set projections around a free-boundary node. The
// field is normalized by subtracting u(center) and the central-difference
// gradient there before any growth statistic is computed.
inline std::vector<ProjectionRecord> dyadic_projection_track(const OperatorSpec& op,
                                                             const ScalarField& u, double cx,
                                                             double cy, double r_max,
                                                             double r_min = -1.0) {
    const Grid2& g = u.grid;
    int cix = 0, ciy = 0;
    detail::locate_node(g, cx, cy, cix, ciy, "dyadic_projection_track");
    if (!(r_max > 0.0) || r_max > 0.25 + 1e-12)
        throw std::invalid_argument("dyadic_projection_track: radii live in (0, 1/4]");
    if (r_min <= 0.0) r_min = 8.0 * g.h();

    std::vector<double> radii;
    for (double r = r_max; r >= r_min * (1.0 - 1e-12); r /= 2.0) radii.push_back(r);
    if (radii.size() < 2)
        throw std::invalid_argument("dyadic_projection_track: fewer than 2 dyadic levels");

    const double u0 = u.at(cix, ciy);
    const Point g0 = discrete_gradient(u, cix, ciy);

    std::vector<ProjectionRecord> out;
    for (double r : radii) {
        ProjectionRecord rec;
        rec.r = r;
        SymMat sum = SymMat::zero(2);
        long count = 0;
        for_each_node_in_ball(g, cx, cy, r, [&](int ix, int iy, double, double) {
            if (ix < 1 || iy < 1 || ix > g.n_cells - 1 || iy > g.n_cells - 1) return;
            sum = sum + discrete_hessian(u, ix, iy);
            ++count;
        });
        if (count == 0) throw std::invalid_argument("dyadic_projection_track: empty ball");
        rec.Q_r = sum * (1.0 / static_cast<double>(count));
        const LevelSetProjection proj = project_to_level_set(op, rec.Q_r);
        rec.beta = proj.beta;
        rec.P_r = proj.P;

        double dev2 = 0.0, grow = 0.0;
        for_each_node_in_ball(g, cx, cy, r, [&](int ix, int iy, double x, double y) {
            const double yx = x - cx, yy = y - cy;
            if (ix >= 1 && iy >= 1 && ix <= g.n_cells - 1 && iy <= g.n_cells - 1) {
                const SymMat d = discrete_hessian(u, ix, iy) - rec.P_r;
                dev2 += d.a11 * d.a11 + 2.0 * d.a12 * d.a12 + d.a22 * d.a22;
            }
            const double normalized = u.at(ix, iy) - u0 - g0.x * yx - g0.y * yy;
            const double model =
                0.5 * (rec.P_r.a11 * yx * yx + 2.0 * rec.P_r.a12 * yx * yy + rec.P_r.a22 * yy * yy);
            grow = std::max(grow, std::abs(normalized - model));
        });
        rec.deviation = std::sqrt(dev2 / static_cast<double>(count));
        rec.growth = grow / (r * r);
        out.push_back(rec);
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        out[i].gap_to_coarser = (out[i - 1].P_r - out[i].P_r).frobenius_norm();
    return out;
}

struct VolumeDecayRecord {
    double r = 0.0;
    double complement_measure = 0.0;  // |A_r| = |B_r \ Omega| / r^2
    double p_norm = 0.0;              // |P_r|_F from the projection track
    bool above_threshold = false;     // |P_r|_F > M
    bool decay_checked = false;       // a level at r/2 exists
    bool decay_holds = false;         // |A_{r/2}| <= |A_r| / 2^n
};

// Rescaled complement measure across dyadic radii, paired with |P_r| so the
// geometric-decay alternative can be read off where |P_r| is large.
inline std::vector<VolumeDecayRecord> volume_decay(const OperatorSpec& op, const Solution& sol,
                                                   double cx, double cy, double r_max,
                                                   double p_threshold_M) {
    const Grid2& g = sol.u.grid;
    const double h = g.h();
    const auto track = dyadic_projection_track(op, sol.u, cx, cy, r_max);
    std::vector<VolumeDecayRecord> out;
    for (const ProjectionRecord& rec : track) {
        VolumeDecayRecord v;
        v.r = rec.r;
        long count = 0;
        for_each_node_in_ball(g, cx, cy, rec.r, [&](int ix, int iy, double, double) {
            if (!sol.active_at(ix, iy)) ++count;
        });
        v.complement_measure = static_cast<double>(count) * h * h / (rec.r * rec.r);
        v.p_norm = rec.P_r.frobenius_norm();
        v.above_threshold = v.p_norm > p_threshold_M;
        out.push_back(v);
    }
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        out[i].decay_checked = true;
        out[i].decay_holds = out[i + 1].complement_measure <= out[i].complement_measure / 4.0;
    }
    return out;
}

struct NondegeneracyRecord {
    double r = 0.0;
    double lhs = 0.0;  // max of u over the circle of radius r
    double rhs = 0.0;  // u(x0) + r^2 / (2 n lambda1)
    bool pass = false;
};

// Quadratic lower growth on circles: max_{dB_r(x0)} u >= u(x0) + r^2/(2 n l1),
// sampled on 256 interpolated circle points with 10 h r of discrete slack.
inline std::vector<NondegeneracyRecord> nondegeneracy_check(const ScalarField& u, double x0,
                                                            double y0,
                                                            const std::vector<double>& radii,
                                                            double lambda1) {
    const Grid2& g = u.grid;
    const double h = g.h();
    const double n_dim = 2.0;
    std::vector<NondegeneracyRecord> out;
    const double u_center = u.sample(x0, y0);
    for (double r : radii) {
        if (std::max(std::abs(x0), std::abs(y0)) + r > g.half_width + 1e-12)
            throw std::invalid_argument("nondegeneracy_check: radius exceeds grid");
        NondegeneracyRecord rec;
        rec.r = r;
        double lhs = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < 256; ++k) {
            const double th = 2.0 * M_PI * k / 256.0;
            lhs = std::max(lhs, u.sample(x0 + r * std::cos(th), y0 + r * std::sin(th)));
        }
        rec.lhs = lhs;
        rec.rhs = u_center + r * r / (2.0 * n_dim * lambda1);
        rec.pass = rec.lhs >= rec.rhs - 10.0 * h * r;
        out.push_back(rec);
    }
    return out;
}

}  // namespace fbreg
