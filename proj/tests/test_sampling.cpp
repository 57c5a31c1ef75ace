#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vfl/profile.hpp"
#include "vfl/sampling.hpp"

using namespace vfl;

TEST_CASE("weights sum to the area within Monte-Carlo error") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto u = unit_integrals(geom, 1.0, 2.0);
    auto rc = mc_surface_integrals(geom, 100000, 42, 1.0, 2.0, PlaneNorm::frobenius);
    CHECK(std::fabs(rc.mass.value - u.mass) <= 3.0 * rc.mass.std_error + 1e-9);
}

TEST_CASE("every sample lies in the half-width 1/2 cube, on the surface") {
    ProfileGeometry geom{0.4, 2, 0.0};
    for (const auto& s : sample_surface(geom, 5000, 9)) {
        for (int t = 0; t < 3; ++t) CHECK(std::fabs(s.position[t]) <= 0.5 + 1e-12);
        CHECK(norm(s.normal) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.weight > 0.0);
        // mean curvature vector is parallel to the normal
        double h = norm(s.mean_curvature);
        if (h > 0.0) {
            double c = dot(s.mean_curvature, s.normal) / h;
            CHECK(std::fabs(c) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("mean of the first coordinate vanishes within 3 sigma") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto rc = mc_surface_integrals(geom, 200000, 11, 1.0, 2.0, PlaneNorm::frobenius);
    CHECK(std::fabs(rc.mean_height.value) <= 3.0 * rc.mean_height.std_error);
}

TEST_CASE("oracle matches quadrature for mass, curvature and tilt moments") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto u = unit_integrals(geom, 1.0, 2.0, PlaneNorm::frobenius);
    auto rc = mc_surface_integrals(geom, 400000, 2024, 1.0, 2.0, PlaneNorm::frobenius);
    CHECK(rc.mass.value == doctest::Approx(u.mass).epsilon(0.01));
    CHECK(rc.curvature_moment.value == doctest::Approx(u.curvature_moment).epsilon(0.01));
    CHECK(rc.tilt_moment.value == doctest::Approx(u.tilt_moment).epsilon(0.01));
}

TEST_CASE("sampling is deterministic in the seed") {
    ProfileGeometry geom{0.3, 2, 0.0};
    auto a = sample_surface(geom, 1000, 77);
    auto b = sample_surface(geom, 1000, 77);
    auto c = sample_surface(geom, 1000, 78);
    REQUIRE(a.size() == b.size());
    REQUIRE(a.size() == c.size());
    bool all_equal = true, any_diff = false;
    for (std::size_t t = 0; t < a.size(); ++t) {
        all_equal = all_equal && a[t].position[0] == b[t].position[0] &&
                    a[t].weight == b[t].weight;
        any_diff = any_diff || a[t].position[0] != c[t].position[0];
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("parallel and serial accumulation agree bitwise") {
    ProfileGeometry geom{0.25, 2, 0.0};
    auto par = mc_surface_integrals(geom, 123457, 5, 1.5, 2.5, PlaneNorm::frobenius, true);
    auto ser = mc_surface_integrals(geom, 123457, 5, 1.5, 2.5, PlaneNorm::frobenius, false);
    CHECK(par.mass.value == ser.mass.value);
    CHECK(par.curvature_moment.value == ser.curvature_moment.value);
    CHECK(par.tilt_moment.value == ser.tilt_moment.value);
    CHECK(par.mean_height.value == ser.mean_height.value);
}

TEST_CASE("per-stratum mean curvature and tilt values") {
    ProfileGeometry geom{0.25, 2, 0.0};
    for (const auto& s : sample_surface(geom, 3000, 3)) {
        double h = norm(s.mean_curvature);
        double sin_t = std::sqrt(std::max(0.0, 1.0 - s.normal[0] * s.normal[0]));
        double tilt_frob = std::sqrt(2.0) * sin_t;
        if (s.stratum == 0) {
            CHECK(h == 0.0);
            CHECK(tilt_frob == 0.0); // plateau tangent plane is T itself
        }
        if (s.stratum == 2) {
            CHECK(h == doctest::Approx(2.0).epsilon(1e-12));
            CHECK(tilt_frob == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
            CHECK(sin_t == doctest::Approx(1.0).epsilon(1e-12)); // operator norm value
        }
        if (s.stratum == 1) {
            CHECK(h >= 16.0 - 1e-9); // at least the profile curvature 4/tau
            CHECK(h <= 16.0 + 4.0 + 1e-9);
        }
    }
}
