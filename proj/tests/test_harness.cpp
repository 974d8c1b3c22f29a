#include <doctest.h>

#include <cmath>

#include "fbreg/barrier.hpp"
#include "fbreg/geometry.hpp"
#include "fbreg/grid.hpp"
#include "fbreg/monotonicity.hpp"
#include "fbreg/projection.hpp"
#include "fbreg/solver.hpp"

using namespace fbreg;

namespace {

ScalarField halfspace_field(int n_cells) {
    return make_field(Grid2{1.0, n_cells},
                      [](double x, double y) { return halfspace_oracle(1.0, 0.0, x, y); });
}

ScalarField radial_field(int n_cells, double r0 = 0.5) {
    return make_field(Grid2{1.0, n_cells},
                      [r0](double x, double y) { return radial_oracle(r0, x, y); });
}

Solution synthetic_solution(const ScalarField& u) {
    Solution sol;
    sol.u = u;
    sol.activation_threshold = u.grid.h() * u.grid.h();
    sol.active_mask.assign(static_cast<std::size_t>(u.grid.node_count()), 0);
    for (int iy = 0; iy <= u.grid.n_cells; ++iy)
        for (int ix = 0; ix <= u.grid.n_cells; ++ix)
            sol.active_mask[u.grid.index(ix, iy)] = u.at(ix, iy) > sol.activation_threshold ? 1 : 0;
    sol.converged = true;
    return sol;
}

// Frobenius norm of D^2 of the radial closed form at radius r (diagonal in
// the radial frame: u_rr and u_r / r).
double radial_hessian_frob(double r0, double r) {
    if (r <= r0) return 0.0;
    const double urr = 0.5 + r0 * r0 / (2.0 * r * r);
    const double utt = 0.5 - r0 * r0 / (2.0 * r * r);
    return std::hypot(urr, utt);
}

}  // namespace

TEST_CASE("hessian_sup: quadratic, half-space and radial fields") {
    const Grid2 g{1.0, 64};
    const ScalarField q =
        make_field(g, [](double x, double y) { return 0.5 * (x * x + y * y); });
    CHECK(hessian_sup(q, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    CHECK_THROWS_AS(hessian_sup(q, 0.999), std::invalid_argument);

    const ScalarField hs = halfspace_field(64);
    const double s = hessian_sup(hs, 0.5);
    CHECK(s >= 0.9);
    CHECK(s <= 1.1);

    const ScalarField rad = radial_field(64);
    double continuum_sup = 0.0;
    for (int k = 0; k <= 2000; ++k)
        continuum_sup = std::max(continuum_sup, radial_hessian_frob(0.5, 0.9 * k / 2000.0));
    CHECK(hessian_sup(rad, 0.9) <= 3.0 * continuum_sup);
}

TEST_CASE("dyadic projection track: quadratic model is a fixed point") {
    const Grid2 g{1.0, 128};
    const ScalarField u = make_field(g, [](double x, double) { return 0.5 * x * x; });
    const auto track = dyadic_projection_track(OperatorSpec::laplace(), u, 0.0, 0.0, 0.25);
    REQUIRE(track.size() == 2);
    for (const auto& rec : track) {
        CHECK(rec.beta == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK((rec.P_r - SymMat::diag(1.0, 0.0)).frobenius_norm() <= 1e-9);
        CHECK(rec.growth <= 1e-9);
        CHECK(rec.deviation <= 1e-9);
        CHECK(std::abs(eval_operator(OperatorSpec::laplace(), rec.P_r) - 1.0) <= 1e-10);
    }
    CHECK(track[1].gap_to_coarser <= 1e-9);
}

TEST_CASE("dyadic projection track: half-space symmetry pins P_r at every scale") {
    const ScalarField u = halfspace_field(128);
    const auto track = dyadic_projection_track(OperatorSpec::laplace(), u, 0.0, 0.0, 0.25);
    REQUIRE(track.size() >= 2);
    for (const auto& rec : track) {
        CHECK((rec.Q_r - SymMat::diag(0.5, 0.0)).frobenius_norm() <= 1e-12);
        CHECK(rec.beta == doctest::Approx(0.25).epsilon(1e-9));
        CHECK((rec.P_r - SymMat::diag(0.75, 0.25)).frobenius_norm() <= 1e-9);
        CHECK(rec.growth == doctest::Approx(0.375).epsilon(0.05));
        CHECK(std::abs(eval_operator(OperatorSpec::laplace(), rec.P_r) - 1.0) <= 1e-10);
    }
    for (std::size_t i = 1; i < track.size(); ++i) CHECK(track[i].gap_to_coarser <= 1e-9);
}

TEST_CASE("dyadic projection track: radial field gaps stay bounded") {
    const ScalarField u = radial_field(256);
    const auto track = dyadic_projection_track(OperatorSpec::laplace(), u, 0.5, 0.0, 0.25);
    REQUIRE(track.size() >= 3);
    for (const auto& rec : track)
        CHECK(std::abs(eval_operator(OperatorSpec::laplace(), rec.P_r) - 1.0) <= 1e-10);
    for (std::size_t i = 1; i < track.size(); ++i) CHECK(track[i].gap_to_coarser <= 2.0);
}

TEST_CASE("dyadic projection track: guards") {
    const ScalarField u = radial_field(64);
    // center off the node lattice
    CHECK_THROWS_AS(dyadic_projection_track(OperatorSpec::laplace(), u, 0.501, 0.0, 0.25),
                    std::invalid_argument);
    // fewer than two dyadic levels above 8h
    CHECK_THROWS_AS(dyadic_projection_track(OperatorSpec::laplace(), u, 0.5, 0.0, 8.0 * u.grid.h()),
                    std::invalid_argument);
    // projection records live at radii in (0, 1/4]
    CHECK_THROWS_AS(dyadic_projection_track(OperatorSpec::laplace(), u, 0.0, 0.0, 0.5),
                    std::invalid_argument);
}

TEST_CASE("volume decay: zero, half-space and all-active complements") {
    const Grid2 g{1.0, 128};
    const auto lap = OperatorSpec::laplace();

    const Solution zero = synthetic_solution(ScalarField(g, 0.0));
    const auto vz = volume_decay(lap, zero, 0.0, 0.0, 0.25, 10.0);
    REQUIRE(vz.size() == 2);
    for (const auto& rec : vz) CHECK(rec.complement_measure == doctest::Approx(M_PI).epsilon(0.05));

    const Solution hs = synthetic_solution(halfspace_field(128));
    const auto vh = volume_decay(lap, hs, 0.0, 0.0, 0.25, 10.0);
    for (const auto& rec : vh)
        CHECK(rec.complement_measure == doctest::Approx(M_PI / 2.0).epsilon(0.15));

    const Solution quad = synthetic_solution(
        make_field(g, [](double x, double y) { return 0.25 * (x * x + y * y) + 0.3; }));
    const auto vq = volume_decay(lap, quad, 0.0, 0.0, 0.25, 10.0);
    for (const auto& rec : vq) CHECK(rec.complement_measure == 0.0);
}

TEST_CASE("nondegeneracy check: worked instances") {
    const ScalarField hs = halfspace_field(64);
    const auto rh = nondegeneracy_check(hs, 0.0, 0.0, {0.5}, 1.0);
    REQUIRE(rh.size() == 1);
    CHECK(rh[0].lhs == doctest::Approx(0.125).epsilon(1e-6));
    CHECK(rh[0].rhs == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(rh[0].pass);

    const ScalarField rad = radial_field(64);
    const auto rr = nondegeneracy_check(rad, 0.5, 0.0, {0.25}, 1.0);
    CHECK(rr[0].lhs == doctest::Approx(0.02744186148647944).epsilon(1e-3));
    CHECK(rr[0].rhs == doctest::Approx(0.015625).epsilon(1e-9));
    CHECK(rr[0].pass);

    // discrete slack must sit below the bound for the negative instance, so
    // use a grid fine enough that 10 h r < r^2 / (2 n lambda1)
    const ScalarField zero(Grid2{1.0, 256}, 0.0);
    const auto rz = nondegeneracy_check(zero, 0.0, 0.0, {0.5}, 1.0);
    CHECK(!rz[0].pass);
    CHECK(rz[0].lhs == 0.0);

    CHECK_THROWS_AS(nondegeneracy_check(zero, 0.9, 0.0, {0.25}, 1.0), std::invalid_argument);
}

TEST_CASE("min_diameter: segment, full ball, half ball") {
    const Grid2 g{1.0, 128};
    const double h = g.h();

    BoolField segment(g);
    for (int ix = 0; ix <= g.n_cells; ++ix) segment.set(ix, g.n_cells / 2, true);
    CHECK(min_diameter(segment, 0.0, 0.0, 0.5, 64) <= h / 0.5);

    BoolField ball(g, true);
    const double d_ball = min_diameter(ball, 0.0, 0.0, 0.5, 64);
    CHECK(std::abs(d_ball - 2.0) <= 2.0 / 64 + 2.0 * h / 0.5);

    BoolField half(g);
    for (int iy = 0; iy <= g.n_cells; ++iy)
        for (int ix = 0; ix <= g.n_cells; ++ix) half.set(ix, iy, g.coord(ix) <= 0.0);
    const double d_half = min_diameter(half, 0.0, 0.0, 0.5, 64);
    CHECK(std::abs(d_half - 1.0) <= 2.0 / 64 + 2.0 * h / 0.5);

    BoolField empty(g);
    CHECK(min_diameter(empty, 0.0, 0.0, 0.5, 64) == 0.0);
    CHECK_THROWS_AS(min_diameter(empty, 0.0, 0.0, 0.5, 32), std::invalid_argument);

    const ThicknessRecord rec = thickness_record(half, 0.0, 0.0, 0.5, 64);
    CHECK(rec.delta == d_half);
    CHECK(rec.r == 0.5);
    CHECK(rec.delta >= 0.0);
    CHECK(rec.delta <= 2.0);
}

TEST_CASE("rescale: half-space is a fixed point of the quadratic blow-up") {
    const ScalarField u = halfspace_field(64);
    const double h = u.grid.h();
    for (double r : {0.25, 0.5}) {
        const ScalarField resc = rescale(u, 0.0, 0.0, r, 64);
        double worst = 0.0;
        for (int iy = 0; iy <= resc.grid.n_cells; ++iy)
            for (int ix = 0; ix <= resc.grid.n_cells; ++ix) {
                const double yx = resc.grid.coord(ix), yy = resc.grid.coord(iy);
                if (yx * yx + yy * yy > 1.0) continue;
                worst = std::max(worst,
                                 std::abs(resc.at(ix, iy) - halfspace_oracle(1.0, 0.0, yx, yy)));
            }
        CHECK(worst <= h);
    }
    CHECK_THROWS_AS(rescale(u, 0.0, 0.0, 3.0 * h, 64), std::invalid_argument);
    CHECK_THROWS_AS(rescale(u, 0.9, 0.0, 0.25, 64), std::invalid_argument);
}

TEST_CASE("rescale: radial blow-up approaches the half-space solution") {
    const ScalarField u = radial_field(256);
    const EllipticityPair ell{1.0, 1.0};
    const HalfspaceFit coarse = halfspace_fit(rescale(u, 0.5, 0.0, 0.1, 64), ell);
    const HalfspaceFit fine = halfspace_fit(rescale(u, 0.5, 0.0, 0.05, 64), ell);
    CHECK(fine.sup_err <= coarse.sup_err + 1e-12);
    CHECK(fine.sup_err <= 0.05);
    CHECK(fine.ex >= 0.99);
    CHECK(std::abs(fine.ey) <= 0.1);
}

TEST_CASE("min_diameter scaling identity at mask level") {
    const ScalarField u = halfspace_field(128);
    const Solution sol = synthetic_solution(u);
    const double h = u.grid.h();
    const int n_dirs = 64;
    for (double r : {0.25, 0.5}) {
        const double before = min_diameter(sol.complement_mask(), 0.0, 0.0, r, n_dirs);
        const ScalarField resc = rescale(u, 0.0, 0.0, r, 128);
        const BoolField mask =
            threshold_complement_mask(resc, sol.activation_threshold / (r * r));
        const double after = min_diameter(mask, 0.0, 0.0, 1.0, n_dirs);
        CHECK(std::abs(before - after) <= 2.0 / n_dirs + h / r);
    }
}

TEST_CASE("halfspace_fit: exact, even quadratic, rotated") {
    Grid2 unit{1.0, 64};
    const EllipticityPair ell{1.0, 1.0};

    const ScalarField exact =
        make_field(unit, [](double x, double y) { return halfspace_oracle(1.0, 0.0, x, y); });
    const HalfspaceFit f1 = halfspace_fit(exact, ell);
    CHECK(f1.gamma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f1.sup_err <= 1e-10);
    CHECK(f1.ex == doctest::Approx(1.0).epsilon(1e-9));

    const ScalarField even = make_field(unit, [](double x, double) { return 0.5 * x * x; });
    CHECK(halfspace_fit(even, ell).sup_err >= 0.125);

    const double a = M_PI / 4.0;
    const ScalarField rot =
        make_field(unit, [a](double x, double y) { return halfspace_oracle(1.0, a, x, y); });
    const HalfspaceFit f3 = halfspace_fit(rot, ell);
    CHECK(std::abs(std::atan2(f3.ey, f3.ex) - a) <= M_PI / 256.0);
}

TEST_CASE("directional monotonicity on the half-space field") {
    // h = 1/128 keeps the 10h slack below the -1/8 dip of the orthogonal case
    const ScalarField u = halfspace_field(256);
    const EllipticityPair ell{1.0, 1.0};

    const MonotonicityCheck along =
        directional_monotonicity(u, 1.0, 0.0, 1.0, MonotonicityVariant::u, ell);
    CHECK(along.eps0 == 0.0);
    CHECK(along.min_half == 0.0);
    CHECK(along.threshold == 0.0625);
    CHECK(along.hypothesis_met);
    CHECK(along.conclusion_met);
    CHECK(along.pass);

    const MonotonicityCheck across =
        directional_monotonicity(u, 0.0, 1.0, 1.0, MonotonicityVariant::u, ell);
    CHECK(across.min_half == doctest::Approx(-0.125).epsilon(1e-12));
    CHECK(!across.hypothesis_met);  // eps0 is O(1) in the orthogonal direction
    CHECK(!across.conclusion_met);

    const MonotonicityCheck grad =
        directional_monotonicity(u, 1.0, 0.0, 1.0, MonotonicityVariant::grad_sq, ell);
    CHECK(grad.eps0 == 0.0);
    CHECK(grad.threshold == 0.0625);
    CHECK(grad.pass);
}

TEST_CASE("monotonicity cone: half-space, radial, degenerate") {
    const EllipticityPair ell{1.0, 1.0};

    const ScalarField hs = halfspace_field(64);
    const MonotonicityCone ch = monotonicity_cone(hs, 0.0, 0.0, 0.5, 1.0, ell);
    CHECK(ch.fit_ok);
    CHECK(ch.cone_found);
    CHECK(ch.aperture_s == doctest::Approx(0.1));
    CHECK(ch.fit.ex >= 0.999);

    const ScalarField rad = radial_field(128);
    const MonotonicityCone cr = monotonicity_cone(rad, 0.5, 0.0, 0.2, 1.0, ell);
    CHECK(cr.fit_ok);
    CHECK(cr.cone_found);
    CHECK(cr.aperture_s <= 0.5 + 1e-12);
    CHECK(cr.fit.ex >= 0.9);

    const ScalarField zero(Grid2{1.0, 64}, 0.0);
    const MonotonicityCone cz = monotonicity_cone(zero, 0.0, 0.0, 0.5, 1.0, ell);
    CHECK(!cz.fit_ok);
}

TEST_CASE("cone barrier: degenerate beta, homogeneity, report") {
    const EllipticityPair ell{1.0, 1.0};
    const double theta1 = 3.0 * M_PI / 5.0;

    ConeBarrierSpec flat{theta1, M_PI / theta1, 0.0};
    const AnnulusSpec annulus{0.25, 0.9, 96};
    const ConeBarrierEval ev = cone_barrier_eval(flat, annulus, ell);
    CHECK(ev.min_subsolution_value == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(ev.vanishing_check == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    ConeBarrierSpec spec{theta1, M_PI / (2.0 * theta1), 3.0};
    for (double phi : {0.3, -0.8, 1.2}) {
        const double x = 0.3 * std::cos(phi), y = 0.3 * std::sin(phi);
        const double v1 = cone_barrier_value(spec, x, y);
        const double v2 = cone_barrier_value(spec, 2.0 * x, 2.0 * y);
        CHECK(v2 == doctest::Approx(std::pow(2.0, spec.alpha) * v1).epsilon(1e-12));
    }

    CHECK_THROWS_AS((ConeBarrierSpec{M_PI / 3.0, 1.0, 1.0}.validate()), std::invalid_argument);

    const ConeBarrierReport rep = cone_barrier_report(theta1, AnnulusSpec{0.25, 0.9, 64}, ell);
    CHECK(rep.full_angle.alpha == doctest::Approx(M_PI / theta1));
    CHECK(rep.half_angle.alpha == doctest::Approx(M_PI / (2.0 * theta1)));
    CHECK(rep.full_angle.beta_to_min.size() == 50);
    CHECK(rep.half_angle.beta_to_min.size() == 50);
    // the half-angle convention vanishes on the upper edge; the full-angle one does not
    CHECK(rep.half_angle.representative.vanish_upper <= 1e-9);
    CHECK(rep.full_angle.representative.vanish_upper > 1e-3);

    const ConeBarrierReport rep2 = cone_barrier_report(theta1, AnnulusSpec{0.25, 0.9, 64}, ell);
    for (std::size_t i = 0; i < rep.full_angle.beta_to_min.size(); ++i)
        CHECK(rep.full_angle.beta_to_min[i].second ==
              rep2.full_angle.beta_to_min[i].second);
}
