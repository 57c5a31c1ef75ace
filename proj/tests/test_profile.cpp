#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vfl/profile.hpp"
#include "vfl/quadrature.hpp"
#include "vfl/sampling.hpp"

using namespace vfl;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("gauss-legendre and tanh-sinh agree on a smooth integral") {
    auto f = [](double x) { return std::exp(x) * std::cos(3.0 * x); };
    double gl = integrate_gl(f, -1.0, 2.0, 32, 2);
    double de = integrate_de(f, -1.0, 2.0);
    CHECK(gl == doctest::Approx(de).epsilon(1e-12));
}

TEST_CASE("tanh-sinh handles fractional-power endpoints") {
    // integral of x^0.5 over [0,1] = 2/3
    double v = integrate_de([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    CHECK(v == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // x^2.125: 1/3.125
    double w = integrate_de([](double x) { return std::pow(x, 2.125); }, 0.0, 1.0);
    CHECK(w == doctest::Approx(1.0 / 3.125).epsilon(1e-12));
}

TEST_CASE("profile values on plateau, rim and arc") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto mid = profile_eval(geom, 0.0);
    CHECK(mid.f == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(mid.f_prime == 0.0);
    CHECK(mid.curvature == 0.0);

    auto rim = profile_eval(geom, 0.5);
    CHECK(rim.f == doctest::Approx(0.0625).epsilon(1e-8));

    // curvature on the arc is 1/(tau/4) = 16 everywhere
    auto arc = profile_eval(geom, 0.47);
    CHECK(arc.curvature == doctest::Approx(16.0).epsilon(1e-12));

    CHECK_THROWS_AS(profile_eval(geom, -0.1), std::domain_error);
    CHECK_THROWS_AS(profile_eval(geom, 0.6), std::domain_error);
}

TEST_CASE("finite differences reproduce f' and the arc curvature") {
    ProfileGeometry geom{0.3, 2, 0.0};
    const double h = 1e-6;
    Rng rng = Rng::at(17, 0, 0);
    int checked = 0;
    while (checked < 100) {
        double s = 0.49 * rng.uniform();
        // keep clear of the endpoints, the plateau/arc joint and the
        // vertical tangent
        double plateau = 0.5 - geom.tau / 4.0;
        if (s < 1e-3 || std::fabs(s - plateau) < 2e-3 || s > 0.495) continue;
        auto p = profile_eval(geom, s);
        ++checked;
        auto pl = profile_eval(geom, s - h), pr = profile_eval(geom, s + h);
        double fd1 = (pr.f - pl.f) / (2.0 * h);
        CHECK(fd1 == doctest::Approx(p.f_prime).epsilon(1e-4).scale(1.0));
        double fd2 = (pr.f - 2.0 * p.f + pl.f) / (h * h);
        double kappa_fd = std::fabs(fd2) / std::pow(1.0 + fd1 * fd1, 1.5);
        CHECK(kappa_fd == doctest::Approx(p.curvature).epsilon(5e-3).scale(1.0));
    }
}

TEST_CASE("unit integrals: mass limits and closed forms") {
    // tau -> 0: double flat disk of radius 1/2
    ProfileGeometry thin{1e-4, 2, 0.0};
    auto u = unit_integrals(thin, 1.0, 2.0);
    CHECK(u.mass == doctest::Approx(kPi / 2.0).epsilon(2e-3));

    // superlevel at threshold 1 contains at least the cylinder, 0.125*pi
    ProfileGeometry geom{0.25, 2, 0.0};
    auto v = unit_integrals(geom, 1.0, 2.0);
    double cyl_area = 2.0 * kPi * 0.5 * (0.25 / 2.0);
    CHECK(cyl_area == doctest::Approx(0.125 * kPi).epsilon(1e-14));
    CHECK(v.tilt_superlevel >= cyl_area - 1e-12);
    CHECK(v.tilt_superlevel <= v.nonflat_mass + 1e-12);

    // the nonflat set is the arcs plus the cylinder, O(tau)
    CHECK(v.nonflat_mass <= 4.0 * 2.0 * kPi * 0.25);
    CHECK(v.nonflat_mass >= cyl_area);
}

TEST_CASE("quadrature halving leaves the integrals unchanged") {
    for (double tau : {0.5, 0.25, 0.05}) {
        ProfileGeometry geom{tau, 2, 0.0};
        QuadratureOptions lo;
        lo.de_max_level = 8;
        lo.de_rel_tol = 1e-11;
        QuadratureOptions hi;
        hi.de_max_level = 12;
        hi.de_rel_tol = 1e-14;
        auto a = unit_integrals(geom, 1.5, 2.5, PlaneNorm::frobenius, 1.0, lo);
        auto b = unit_integrals(geom, 1.5, 2.5, PlaneNorm::frobenius, 1.0, hi);
        CHECK(a.mass == doctest::Approx(b.mass).epsilon(1e-8));
        CHECK(a.curvature_moment == doctest::Approx(b.curvature_moment).epsilon(1e-8));
        CHECK(a.tilt_moment == doctest::Approx(b.tilt_moment).epsilon(1e-8));
    }
}

TEST_CASE("tilt values: plateau zero, cylinder sqrt(2) resp. 1") {
    ProfileGeometry geom{0.25, 2, 0.0};
    // q = 1 moments under both norms stand in the exact ratio sqrt(2)
    auto f = unit_integrals(geom, 1.0, 1.0, PlaneNorm::frobenius);
    auto o = unit_integrals(geom, 1.0, 1.0, PlaneNorm::operator_norm);
    CHECK(f.tilt_moment == doctest::Approx(std::sqrt(2.0) * o.tilt_moment).epsilon(1e-12));

    // superlevel at threshold just above sqrt(2) is empty, at 0 the full mass
    auto over = unit_integrals(geom, 1.0, 1.0, PlaneNorm::frobenius, std::sqrt(2.0) + 1e-9);
    CHECK(over.tilt_superlevel == 0.0);
    auto all = unit_integrals(geom, 1.0, 1.0, PlaneNorm::frobenius, 0.0);
    CHECK(all.tilt_superlevel == doctest::Approx(all.mass).epsilon(1e-12));
}

TEST_CASE("mass stays inside the explicit implementation bounds") {
    for (int n : {2, 3}) {
        for (double tau : {1.0, 0.5, 0.1, 0.01}) {
            ProfileGeometry geom{tau, n, 0.0};
            auto u = unit_integrals(geom, 1.0, 2.0);
            double lower = 2.0 * unit_ball_volume(n) * std::pow(0.25, n);
            double upper = (2.0 + 2.0 * n) * unit_ball_volume(n);
            CHECK(u.mass >= lower);
            CHECK(u.mass <= upper);
        }
    }
}

TEST_CASE("height moment: zeroth moment is the mass") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto u = unit_integrals(geom, 1.0, 2.0);
    double h0 = height_moment(geom, 0.0, 0.75, 0.5);
    CHECK(h0 == doctest::Approx(u.mass).epsilon(1e-10));
}

TEST_CASE("height moment: dominated-offset limit") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto u = unit_integrals(geom, 1.0, 2.0);
    double q = 3.0, scale = 0.01, y_c = 100.0 * scale * geom.tau;
    double hm = height_moment(geom, q, y_c, scale);
    CHECK(hm == doctest::Approx(std::pow(y_c, q) * u.mass).epsilon(0.01));
}

TEST_CASE("height moment: odd terms cancel by the y -> -y symmetry") {
    // with q = 2 the cross term vanishes, so the moment is y_c^2 A + s^2 M2
    // and differences at fixed scale depend only on y_c^2
    ProfileGeometry geom{0.5, 2, 0.0};
    auto u = unit_integrals(geom, 1.0, 2.0);
    double s = 0.5;
    double h1 = height_moment(geom, 2.0, 0.30, s);
    double h2 = height_moment(geom, 2.0, 0.45, s);
    double expect = (0.45 * 0.45 - 0.30 * 0.30) * u.mass;
    CHECK(h2 - h1 == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("height moment rejects centers below the surface top") {
    ProfileGeometry geom{0.5, 2, 0.0};
    CHECK_THROWS_AS(height_moment(geom, 2.0, 0.1, 1.0), contract_error);
}

TEST_CASE("curvature bound 4/tau + 4(n-1) holds on samples") {
    for (double tau : {1.0, 0.25, 0.05}) {
        ProfileGeometry geom{tau, 2, 0.0};
        double bound = 4.0 / tau + 4.0;
        CHECK(curvature_bound(geom) == doctest::Approx(bound));
        for (const auto& smp : sample_surface(geom, 2000, 7))
            CHECK(norm(smp.mean_curvature) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("smoothing knob: curvature ramps, limits recover the arc") {
    ProfileGeometry sharp{0.25, 2, 0.0};
    ProfileGeometry smooth{0.25, 2, 1e-3};
    auto us = unit_integrals(sharp, 1.0, 2.0);
    auto uw = unit_integrals(smooth, 1.0, 2.0);
    CHECK(uw.mass == doctest::Approx(us.mass).epsilon(1e-3));
    CHECK(uw.tilt_moment == doctest::Approx(us.tilt_moment).epsilon(2e-2));

    // curvature is continuous: it vanishes at the arc ends
    auto rim = RimCurve::get(0.25, 1e-3);
    CHECK(rim->at(0.0).kappa == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(rim->at(rim->length()).kappa == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(rim->peak_curvature() > 16.0); // slightly above 4/tau
    CHECK(rim->at(rim->length()).theta == doctest::Approx(kPi / 2.0).epsilon(1e-12));
    // endpoint lands on the rim: s = 1/2, y = tau/4
    CHECK(rim->at(rim->length()).s == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rim->at(rim->length()).y == doctest::Approx(0.0625).epsilon(1e-9));
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(profile_eval({0.0, 2, 0.0}, 0.1), contract_error);
    CHECK_THROWS_AS(profile_eval({1.5, 2, 0.0}, 0.1), contract_error);
    CHECK_THROWS_AS(profile_eval({0.5, 1, 0.0}, 0.1), contract_error);
    CHECK_THROWS_AS(unit_integrals({0.5, 2, 0.0}, 0.5, 2.0), contract_error);
}

TEST_CASE("quadrature non-convergence raises a tolerance error") {
    // a level cap far below what the tolerance needs
    auto f = [](double x) { return std::pow(std::fabs(x - 0.3141), 0.1); };
    CHECK_THROWS_AS(integrate_de(f, 0.0, 1.0, 2, 1e-15), quadrature_error);
}
