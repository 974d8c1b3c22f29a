// Acceptance suite: end-to-end checks of the solver and the regularity
// harness against closed-form solutions and exact arithmetic. Prints one
// PASS/FAIL line per criterion and exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fbreg/fbreg.hpp"

using namespace fbreg;

namespace {

struct Criterion {
    int id;
    std::string name;
    std::function<bool(std::string&)> run;
};

Solution solve_radial(int n_cells, double& seconds) {
    ObstacleProblemSpec spec;
    spec.operator_spec = OperatorSpec::laplace();
    spec.grid = Grid2{1.0, n_cells};
    spec.boundary =
        make_field(spec.grid, [](double x, double y) { return radial_oracle(0.5, x, y); });
    const auto t0 = std::chrono::steady_clock::now();
    Solution sol = solve(spec, 1e-10, 60000);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

Solution solve_halfspace(int n_cells) {
    ObstacleProblemSpec spec;
    spec.operator_spec = OperatorSpec::laplace();
    spec.grid = Grid2{1.0, n_cells};
    spec.boundary =
        make_field(spec.grid, [](double x, double y) { return halfspace_oracle(1.0, 0.0, x, y); });
    return solve(spec, 1e-10, 60000);
}

double sup_error(const Solution& sol, const std::function<double(double, double)>& exact) {
    const Grid2& g = sol.u.grid;
    double worst = 0.0;
    for (int iy = 0; iy <= g.n_cells; ++iy)
        for (int ix = 0; ix <= g.n_cells; ++ix)
            worst = std::max(worst, std::abs(sol.u.at(ix, iy) - exact(g.coord(ix), g.coord(iy))));
    return worst;
}

// free-boundary edge midpoints snapped to nodes, deduplicated, keeping only
// centers whose checks of radius r_max stay inside the grid
std::vector<Point> snapped_centers(const Solution& sol, double r_max) {
    const Grid2& g = sol.u.grid;
    std::vector<Point> centers;
    for (const Point& p : extract_free_boundary(sol)) {
        int ix = 0, iy = 0;
        g.nearest_node(p.x, p.y, ix, iy);
        const double x = g.coord(ix), y = g.coord(iy);
        if (std::max(std::abs(x), std::abs(y)) + r_max + 2.0 * g.h() > g.half_width) continue;
        centers.push_back({x, y});
    }
    std::sort(centers.begin(), centers.end(),
              [](const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    centers.erase(std::unique(centers.begin(), centers.end(),
                              [](const Point& a, const Point& b) {
                                  return a.x == b.x && a.y == b.y;
                              }),
                  centers.end());
    return centers;
}

std::vector<double> dyadic_radii(double r_max, double r_min) {
    std::vector<double> radii;
    for (double r = r_max; r >= r_min * (1.0 - 1e-12); r /= 2.0) radii.push_back(r);
    return radii;
}

struct Cache {
    std::map<int, Solution> radial;  // key: n_cells
    Solution halfspace128;
    double radial_seconds = 0.0;
} cache;

bool criterion1(std::string& detail) {
    double errs[3], secs[3];
    const int cells[3] = {64, 128, 256};
    for (int k = 0; k < 3; ++k) {
        cache.radial[cells[k]] = solve_radial(cells[k], secs[k]);
        if (!cache.radial[cells[k]].converged) {
            detail = "solver failed to converge at n=" + std::to_string(cells[k]);
            return false;
        }
        errs[k] = sup_error(cache.radial[cells[k]],
                            [](double x, double y) { return radial_oracle(0.5, x, y); });
    }
    cache.radial_seconds = secs[0] + secs[1] + secs[2];
    std::ostringstream ss;
    ss << "sup errors";
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
        const double h = 2.0 / cells[k];
        ss << " " << errs[k] << " (5h=" << 5.0 * h << ")";
        if (!(errs[k] <= 5.0 * h)) ok = false;
    }
    const double ratio1 = errs[0] / errs[1], ratio2 = errs[1] / errs[2];
    ss << "; ratios " << ratio1 << ", " << ratio2 << "; " << cache.radial_seconds << " s";
    if (!(ratio1 >= 1.5 && ratio2 >= 1.5)) ok = false;
    if (!(cache.radial_seconds <= 60.0)) ok = false;
    detail = ss.str();
    return ok;
}

bool criterion2(std::string& detail) {
    cache.halfspace128 = solve_halfspace(128);
    const Solution& sol = cache.halfspace128;
    const double h = sol.u.grid.h();
    bool ok = sol.converged;
    const double err =
        sup_error(sol, [](double x, double y) { return halfspace_oracle(1.0, 0.0, x, y); });
    if (!(err <= 5.0 * h)) ok = false;

    double worst_fb = 0.0;
    for (const Point& p : extract_free_boundary(sol)) worst_fb = std::max(worst_fb, std::abs(p.x));
    if (!(worst_fb <= 2.0 * h)) ok = false;

    const ScalarField resc = rescale(sol.u, 0.0, 0.0, 0.25, 64);
    const HalfspaceFit fit = halfspace_fit(resc, EllipticityPair{1.0, 1.0});
    const double angle_err = std::abs(std::atan2(fit.ey, fit.ex));
    if (!(fit.gamma >= 0.9 && fit.gamma <= 1.1)) ok = false;
    if (!(angle_err <= M_PI / 128.0)) ok = false;

    std::ostringstream ss;
    ss << "sup err " << err << " (5h=" << 5.0 * h << "); fb max |x1| " << worst_fb
       << " (2h=" << 2.0 * h << "); fit gamma " << fit.gamma << ", angle err " << angle_err
       << " (pi/128=" << M_PI / 128.0 << ")";
    detail = ss.str();
    return ok;
}

bool criterion3(std::string& detail) {
    const double v64 = hessian_sup(cache.radial[128].u, 0.45, 0.5, 0.0);
    const double v128 = hessian_sup(cache.radial[256].u, 0.45, 0.5, 0.0);
    // continuum sup of |D^2 u|_F over B_0.45((0.5, 0)): eigenvalues of the
    // radial closed form are u_rr = 1/2 + r0^2/(2 r^2) and u_r / r
    double continuum = 0.0;
    for (int k = 0; k <= 20000; ++k) {
        const double r = 0.05 + (0.95 - 0.05) * k / 20000.0;
        if (r <= 0.5) continue;
        const double urr = 0.5 + 0.125 / (r * r);
        const double utt = 0.5 - 0.125 / (r * r);
        continuum = std::max(continuum, std::hypot(urr, utt));
    }
    const double rel_change = std::abs(v64 - v128) / v128;
    const bool ok = rel_change <= 0.10 && v64 <= 3.0 * continuum && v128 <= 3.0 * continuum;
    std::ostringstream ss;
    ss << "sup_h " << v64 << " (h=1/64), " << v128 << " (h=1/128); change " << 100.0 * rel_change
       << "%; continuum sup " << continuum;
    detail = ss.str();
    return ok;
}

bool criterion4(std::string& detail) {
    const Solution* runs[2] = {&cache.radial[128], &cache.halfspace128};
    const char* names[2] = {"radial", "halfspace"};
    long checked = 0, failures = 0;
    for (int k = 0; k < 2; ++k) {
        const Solution& sol = *runs[k];
        const double h = sol.u.grid.h();
        const std::vector<double> radii = dyadic_radii(0.25, 8.0 * h);
        for (const Point& c : snapped_centers(sol, 0.25)) {
            for (const auto& rec : nondegeneracy_check(sol.u, c.x, c.y, radii, 1.0)) {
                ++checked;
                if (!rec.pass) ++failures;
            }
        }
        (void)names[k];
    }
    std::ostringstream ss;
    ss << checked << " (point, radius) pairs over both runs, " << failures << " failures";
    detail = ss.str();
    return failures == 0 && checked > 0;
}

bool criterion5(std::string& detail) {
    const OperatorSpec lap = OperatorSpec::laplace();
    // common dyadic levels r in {1/4, 1/8} exist at both resolutions
    const auto track64 =
        dyadic_projection_track(lap, cache.radial[128].u, 0.5, 0.0, 0.25, 0.125);
    const auto track128 =
        dyadic_projection_track(lap, cache.radial[256].u, 0.5, 0.0, 0.25, 0.125);
    double gap64 = 0.0, gap128 = 0.0, growth64 = 0.0, growth128 = 0.0;
    for (const auto& rec : track64) {
        if (!std::isnan(rec.gap_to_coarser)) gap64 = std::max(gap64, rec.gap_to_coarser);
        growth64 = std::max(growth64, rec.growth);
    }
    for (const auto& rec : track128) {
        if (!std::isnan(rec.gap_to_coarser)) gap128 = std::max(gap128, rec.gap_to_coarser);
        growth128 = std::max(growth128, rec.growth);
    }
    const double gap_change = std::abs(gap64 - gap128) / gap128;
    const double growth_change = std::abs(growth64 - growth128) / growth128;
    const bool ok = gap_change < 0.10 && growth_change < 0.10;
    std::ostringstream ss;
    ss << "max |P_2r - P_r| " << gap64 << " -> " << gap128 << " (" << 100.0 * gap_change
       << "%); max growth " << growth64 << " -> " << growth128 << " (" << 100.0 * growth_change
       << "%)";
    detail = ss.str();
    return ok;
}

bool criterion6(std::string& detail) {
    const ScalarField field = make_field(
        Grid2{1.0, 128}, [](double x, double y) { return halfspace_oracle(1.0, 0.0, x, y); });
    const EllipticityPair ell{1.0, 1.0};
    const MonotonicityCheck cu =
        directional_monotonicity(field, 1.0, 0.0, 1.0, MonotonicityVariant::u, ell);
    const MonotonicityCheck cg =
        directional_monotonicity(field, 1.0, 0.0, 1.0, MonotonicityVariant::grad_sq, ell);
    const bool ok = cu.pass && cg.pass && cu.eps0 == 0.0 && cg.eps0 == 0.0 &&
                    cu.threshold == 0.0625 && cg.threshold == 0.0625;
    std::ostringstream ss;
    ss << "variant u: eps0=" << cu.eps0 << " threshold=" << cu.threshold
       << " pass=" << cu.pass << "; variant grad_sq: eps0=" << cg.eps0
       << " threshold=" << cg.threshold << " pass=" << cg.pass;
    detail = ss.str();
    return ok;
}

bool criterion7(std::string& detail) {
    const Solution& sol = cache.halfspace128;
    const Grid2& g = sol.u.grid;
    const double h = g.h();
    const int n_dirs = 64;
    const BoolField complement = sol.complement_mask();
    long checked = 0, failures = 0;
    double worst_dev = 0.0, worst_identity = 0.0;
    for (const Point& c : snapped_centers(sol, 0.25)) {
        for (double r : {0.25, 0.125}) {
            const double slack = 2.0 / n_dirs + h / r;
            const double delta = min_diameter(complement, c.x, c.y, r, n_dirs);
            ++checked;
            worst_dev = std::max(worst_dev, std::abs(delta - 1.0));
            if (!(std::abs(delta - 1.0) <= slack)) ++failures;

            // scaling identity at mask level; the blow-up subtracts u(x0),
            // so the image of the activation threshold shifts by it as well
            const double u0 = sol.u.sample(c.x, c.y);
            const ScalarField resc = rescale(sol.u, c.x, c.y, r, 64);
            const BoolField mask =
                threshold_complement_mask(resc, (sol.activation_threshold - u0) / (r * r));
            const double delta1 = min_diameter(mask, 0.0, 0.0, 1.0, n_dirs);
            worst_identity = std::max(worst_identity, std::abs(delta - delta1));
            if (!(std::abs(delta - delta1) <= slack)) ++failures;
        }
    }
    std::ostringstream ss;
    ss << checked << " (x, r) pairs; worst |delta - 1| " << worst_dev
       << "; worst rescale identity deviation " << worst_identity << "; " << failures
       << " failures";
    detail = ss.str();
    return failures == 0 && checked > 0;
}

bool criterion8(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const PropsResult res = run_operator_property_suite(20240801, 10000, 1e-10);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = res.pass && secs <= 5.0;
    std::ostringstream ss;
    long total_failures = 0;
    for (const auto& st : res.stats) total_failures += st.failures;
    ss << res.stats.size() << " properties, " << total_failures << " failures, " << secs << " s";
    detail = ss.str();
    return ok;
}

bool criterion9(std::string& detail) {
    const IntervalFamily geo = IntervalFamily::geometric(12);
    std::vector<Rational> radii;
    for (int k = 2; k <= 6; ++k) radii.emplace_back(BigInt(1), BigInt::pow(BigInt(4), k));
    DecayReport rep;
    try {
        rep = verify_o_r2(geo, radii);  // throws if the bound u/r^2 <= density breaks
    } catch (const std::exception& e) {
        detail = e.what();
        return false;
    }
    bool ok = rep.ratio_strictly_decreasing && rep.density_strictly_decreasing;

    // upper bound precomputed by the trapezoid double-integration oracle plus
    // its kink-cell error bound; the exact ratio must sit below it
    const Rational oracle_bound = Rational::from_string("0.0017261645");
    if (!(rep.rows.back().ratio <= oracle_bound)) ok = false;

    // rerun the numeric oracle here and confirm the frozen bound is sound
    auto measure = [&](long double s) {
        long double m = 0.0L;
        for (const auto& [a, b] : geo.intervals) {
            const long double lo = static_cast<long double>(a.to_double());
            const long double hi = std::min(static_cast<long double>(b.to_double()), s);
            if (hi > lo) m += hi - lo;
        }
        return m;
    };
    const long double t = 1.0L / 4096.0L;
    const int n_panels = 1 << 18;
    const long double hp = t / n_panels;
    long double total = 0.5L * (measure(0.0L) + measure(t));
    for (int i = 1; i < n_panels; ++i) total += measure(i * hp);
    const long double numeric_ratio = (total * hp) / (t * t);
    const long double oracle_err = 3.0L * hp * hp / (t * t);
    const long double frozen = 0.0017261645L;
    if (!(numeric_ratio <= frozen && frozen <= numeric_ratio + 2.0L * oracle_err + 1e-12L))
        ok = false;

    std::ostringstream ss;
    ss << "u(r)/r^2 at 4^-6 = " << rep.rows.back().ratio.to_string() << " <= "
       << "0.0017261645 (oracle " << static_cast<double>(numeric_ratio)
       << "); both sequences strictly decreasing: "
       << (rep.ratio_strictly_decreasing && rep.density_strictly_decreasing ? "yes" : "no");
    detail = ss.str();
    return ok;
}

bool criterion10(std::string& detail) {
    const EllipticityPair ell{1.0, 1.0};
    const double theta1 = 3.0 * M_PI / 5.0;
    const AnnulusSpec annulus{0.25, 0.9, 128};
    const ConeBarrierReport rep1 = cone_barrier_report(theta1, annulus, ell);
    const ConeBarrierReport rep2 = cone_barrier_report(theta1, annulus, ell);
    bool ok = true;
    if (rep1.full_angle.beta_to_min.size() != 50 ||
        rep1.half_angle.beta_to_min.size() != 50)
        ok = false;  // the beta search must have terminated after a full scan
    if (std::abs(rep1.full_angle.alpha - M_PI / theta1) > 1e-15) ok = false;
    if (std::abs(rep1.half_angle.alpha - M_PI / (2.0 * theta1)) > 1e-15) ok = false;
    for (std::size_t i = 0; i < 50; ++i) {
        if (rep1.full_angle.beta_to_min[i].second !=
            rep2.full_angle.beta_to_min[i].second)
            ok = false;
        if (rep1.half_angle.beta_to_min[i].second !=
            rep2.half_angle.beta_to_min[i].second)
            ok = false;
    }
    std::ostringstream ss;
    ss << "alpha conventions " << rep1.full_angle.alpha << " / "
       << rep1.half_angle.alpha << "; first passing beta "
       << rep1.full_angle.first_passing_beta << " / "
       << rep1.half_angle.first_passing_beta << "; vanishing residuals "
       << rep1.full_angle.representative.vanishing_check << " / "
       << rep1.half_angle.representative.vanishing_check << "; deterministic: "
       << (ok ? "yes" : "no");
    detail = ss.str();
    return ok;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "radial oracle convergence", criterion1},
        {2, "half-space exactness", criterion2},
        {3, "C11 boundedness", criterion3},
        {4, "non-degeneracy at free boundary points", criterion4},
        {5, "dyadic projection stability", criterion5},
        {6, "monotonicity thresholds", criterion6},
        {7, "thickness and scaling", criterion7},
        {8, "operator property suite", criterion8},
        {9, "one-dimensional counterexample", criterion9},
        {10, "cone barrier report", criterion10},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failures;
        std::printf("[%s] criterion %2d (%s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                    detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
