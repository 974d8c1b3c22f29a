// Cone barrier v = r^alpha (exp(-beta sin(alpha theta)) - exp(-beta)) used in
// the half-space classification argument. The exponent convention is
// ambiguous between alpha = pi / theta1 and alpha = pi / (2 theta1); this
// module evaluates both and reports numbers, it does not pick a winner.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fbreg/grid.hpp"
#include "fbreg/operators.hpp"

namespace fbreg {

struct ConeBarrierSpec {
    double theta1 = 0.0;  // cone half-opening, in (pi/2, pi)
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const {
        if (!(theta1 > M_PI / 2.0 && theta1 < M_PI))
            throw std::invalid_argument("ConeBarrierSpec: theta1 must lie in (pi/2, pi)");
        if (beta < 0.0) throw std::invalid_argument("ConeBarrierSpec: beta must be >= 0");
    }
};

inline double cone_barrier_value(const ConeBarrierSpec& spec, double x, double y) {
    const double r = std::hypot(x, y);
    if (r == 0.0) return 0.0;
    const double theta = std::atan2(y, x);
    return std::pow(r, spec.alpha) *
           (std::exp(-spec.beta * std::sin(spec.alpha * theta)) - std::exp(-spec.beta));
}

struct AnnulusSpec {
    double r_inner = 0.25;
    double r_outer = 0.9;
    int n_cells = 128;  // cells per side of the sampling grid (half-width fits r_outer)

    void validate() const {
        if (!(r_inner > 0.0 && r_outer > r_inner))
            throw std::invalid_argument("AnnulusSpec: need 0 < r_inner < r_outer");
        if (n_cells < 16 || n_cells % 2 != 0)
            throw std::invalid_argument("AnnulusSpec: n_cells must be even and >= 16");
    }
};

struct ConeBarrierEval {
    double min_subsolution_value = 0.0;  // min over annulus cap of P^-(D^2 v)
    double vanishing_check = 0.0;        // max |v| over both rays theta = +-theta1
    double vanish_upper = 0.0;           // max |v| on theta = +theta1
    double vanish_lower = 0.0;           // max |v| on theta = -theta1
};

// Samples v on a cartesian grid covering the annulus, takes the discrete
// Hessian on nodes with r_inner <= |x| <= r_outer and |theta| <= theta1, and
// reports the worst Pucci-minus value plus edge residuals from the formula.
inline ConeBarrierEval cone_barrier_eval(const ConeBarrierSpec& spec, const AnnulusSpec& annulus,
                                         const EllipticityPair& ell) {
    spec.validate();
    annulus.validate();
    ell.validate();
    Grid2 g;
    g.n_cells = annulus.n_cells;
    g.half_width = annulus.r_outer * (1.0 + 4.0 / annulus.n_cells);
    const ScalarField v = make_field(g, [&](double x, double y) {
        return cone_barrier_value(spec, x, y);
    });

    ConeBarrierEval ev;
    double worst = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int iy = 1; iy <= g.n_cells - 1; ++iy)
        for (int ix = 1; ix <= g.n_cells - 1; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            const double r = std::hypot(x, y);
            if (r < annulus.r_inner || r > annulus.r_outer) continue;
            if (std::abs(std::atan2(y, x)) > spec.theta1) continue;
            worst = std::min(worst, pucci_minus(discrete_hessian(v, ix, iy), ell));
            any = true;
        }
    ev.min_subsolution_value = any ? worst : 0.0;

    auto edge_max = [&](double sign) {
        double m = 0.0;
        for (int k = 0; k <= 128; ++k) {
            const double r = annulus.r_inner + (annulus.r_outer - annulus.r_inner) * k / 128.0;
            m = std::max(m, std::abs(cone_barrier_value(
                                spec, r * std::cos(sign * spec.theta1),
                                r * std::sin(sign * spec.theta1))));
        }
        return m;
    };
    ev.vanish_upper = edge_max(1.0);
    ev.vanish_lower = edge_max(-1.0);
    ev.vanishing_check = std::max(ev.vanish_upper, ev.vanish_lower);
    return ev;
}

struct ConeBarrierScan {
    double alpha = 0.0;
    std::vector<std::pair<int, double>> beta_to_min;  // (beta, min subsolution value)
    int first_passing_beta = -1;                      // first beta with min >= -1e-4, -1 if none
    ConeBarrierEval representative;                   // eval at the passing beta (or beta = 50)
};

struct ConeBarrierReport {
    double theta1 = 0.0;
    ConeBarrierScan full_angle;  // alpha = pi / theta1
    ConeBarrierScan half_angle;  // alpha = pi / (2 theta1)
};

namespace detail {

inline ConeBarrierScan scan_convention(double theta1, double alpha, const AnnulusSpec& annulus,
                                       const EllipticityPair& ell) {
    ConeBarrierScan scan;
    scan.alpha = alpha;
    for (int beta = 1; beta <= 50; ++beta) {
        ConeBarrierSpec spec{theta1, alpha, static_cast<double>(beta)};
        const ConeBarrierEval ev = cone_barrier_eval(spec, annulus, ell);
        scan.beta_to_min.emplace_back(beta, ev.min_subsolution_value);
        if (scan.first_passing_beta < 0 && ev.min_subsolution_value >= -1e-4) {
            scan.first_passing_beta = beta;
            scan.representative = ev;
        }
        if (beta == 50 && scan.first_passing_beta < 0) scan.representative = ev;
    }
    return scan;
}

}  // namespace detail

inline ConeBarrierReport cone_barrier_report(double theta1, const AnnulusSpec& annulus,
                                             const EllipticityPair& ell) {
    ConeBarrierReport rep;
    rep.theta1 = theta1;
    rep.full_angle = detail::scan_convention(theta1, M_PI / theta1, annulus, ell);
    rep.half_angle = detail::scan_convention(theta1, M_PI / (2.0 * theta1), annulus, ell);
    return rep;
}

}  // namespace fbreg
