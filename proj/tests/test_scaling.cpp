#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vfl/example.hpp"
#include "vfl/scaling.hpp"

using namespace vfl;

namespace {

ExampleConfig default_config(int max_level = 14) {
    ExampleConfig cfg;
    cfg.n = 2;
    cfg.p = 1.0;
    cfg.alpha1 = cfg.alpha2 = 1.0;
    cfg.q1 = cfg.q2 = 3.0;
    cfg.max_level = max_level;
    cfg.weight_s = 6.0;
    cfg.weight_r = 1.5;
    return cfg;
}

const ExampleVarifold& shared_example() {
    static ExampleVarifold ex = build_example(default_config());
    return ex;
}

} // namespace

TEST_CASE("fit_slope on exact and degenerate data") {
    std::vector<ProfileRow> rows;
    for (int i = 2; i <= 8; ++i)
        rows.push_back({i, std::exp2(-i), std::exp2(-5.0 * i), 2.0 * std::exp2(-5.0 * i)});
    SlopeFit fit = fit_slope(rows);
    CHECK(fit.slope_lower == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.slope_upper == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.residual_lower <= 1e-10);
    CHECK(fit.residual_upper <= 1e-10);

    for (auto& r : rows) r.lower = r.upper = 0.75; // constant data
    SlopeFit flat = fit_slope(rows);
    CHECK(flat.slope_lower == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    rows.resize(2);
    CHECK_THROWS_AS(fit_slope(rows), fit_error);
    rows.resize(7, {5, 0.03125, 1.0, 1.0});
    rows[3].lower = 0.0;
    CHECK_THROWS_AS(fit_slope(rows), fit_error);
}

TEST_CASE("fit_slope under bounded bracket wobble") {
    // multiplying values by factors within [1, 2] moves the slope by at most
    // log2(2)/(i_max - i_min) plus fitting slack
    std::vector<ProfileRow> rows;
    for (int i = 2; i <= 8; ++i) {
        double f = 1.0 + ((i * 2654435761u) % 97) / 96.0; // deterministic in [1,2]
        double base = std::exp2(-5.0 * i);
        rows.push_back({i, std::exp2(-i), base, base * f});
    }
    SlopeFit fit = fit_slope(rows);
    CHECK(std::fabs(fit.slope_upper - fit.slope_lower) <= 2.0 / 6.0 + 1e-9);
}

TEST_CASE("profile slopes match the predicted exponents") {
    const ExampleVarifold& ex = shared_example();
    ProfileOptions opts;
    opts.i_min = 2;
    opts.i_max = 6; // J = 14 keeps the tail below tolerance here

    struct Want {
        QuantityKind kind;
        double expo;
        double tol;
    };
    for (auto want : {Want{QuantityKind::mass_minus_plane, 5.0, 0.15},
                      Want{QuantityKind::height, 8.0, 0.2},
                      Want{QuantityKind::tilt, 5.0, 0.2},
                      Want{QuantityKind::weighted_mass, 6.0, 0.15}}) {
        QuantitySpec spec = QuantitySpec::from_config(want.kind, ex.config());
        ScalingReport r = dyadic_profile(ex, spec, opts);
        CHECK(r.predicted == doctest::Approx(want.expo).epsilon(1e-12));
        CHECK(std::fabs(r.fit.slope_lower - want.expo) <= want.tol);
        CHECK(std::fabs(r.fit.slope_upper - want.expo) <= want.tol);
        CHECK(r.pass);
        for (const auto& row : r.rows) CHECK(row.lower <= row.upper);
    }
}

TEST_CASE("bracket slopes agree within the wobble bound") {
    const ExampleVarifold& ex = shared_example();
    ProfileOptions opts;
    opts.i_min = 2;
    opts.i_max = 6;
    for (auto kind : {QuantityKind::mass_minus_plane, QuantityKind::height,
                      QuantityKind::tilt, QuantityKind::curvature_mass}) {
        QuantitySpec spec = QuantitySpec::from_config(kind, ex.config());
        ScalingReport r = dyadic_profile(ex, spec, opts);
        CHECK(std::fabs(r.fit.slope_upper - r.fit.slope_lower) <= 2.0 / (opts.i_max - opts.i_min));
    }
}

TEST_CASE("tilt slope is norm independent") {
    const ExampleVarifold& ex = shared_example();
    ProfileOptions opts;
    opts.i_min = 2;
    opts.i_max = 6;
    QuantitySpec frob = QuantitySpec::from_config(QuantityKind::tilt, ex.config());
    QuantitySpec oper = frob;
    oper.norm = PlaneNorm::operator_norm;
    ScalingReport rf = dyadic_profile(ex, frob, opts);
    ScalingReport ro = dyadic_profile(ex, oper, opts);
    CHECK(rf.fit.slope_lower == doctest::Approx(ro.fit.slope_lower).epsilon(1e-9));
    CHECK(rf.fit.slope_upper == doctest::Approx(ro.fit.slope_upper).epsilon(1e-9));
}

TEST_CASE("per-level curvature ratios equal the closed form") {
    const ExampleVarifold& ex = shared_example();
    QuantitySpec spec = QuantitySpec::from_config(QuantityKind::curvature_mass, ex.config());
    double closed = closed_form_level_ratio(ex, spec);
    CHECK(closed == doctest::Approx(std::exp2(-0.5)).epsilon(1e-14));
    CHECK(closed < 1.0);
    for (double r : level_contribution_ratios(ex, spec))
        CHECK(r == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("per-level weighted-power ratios converge geometrically") {
    const ExampleVarifold& ex = shared_example();
    QuantitySpec spec = QuantitySpec::from_config(QuantityKind::weighted_power_mass, ex.config());
    double closed = closed_form_level_ratio(ex, spec);
    CHECK(closed == doctest::Approx(std::exp2(-4.5)).epsilon(1e-14));
    for (double r : level_contribution_ratios(ex, spec)) {
        CHECK(r < 1.0);
        CHECK(r == doctest::Approx(closed).epsilon(1e-9));
    }
}

TEST_CASE("profile guards: tail, margin, range") {
    const ExampleVarifold& ex = shared_example();
    QuantitySpec spec = QuantitySpec::from_config(QuantityKind::mass_minus_plane, ex.config());
    ProfileOptions deep;
    deep.i_min = 2;
    deep.i_max = 13; // tail at J = 14 too fat
    CHECK_THROWS_AS(dyadic_profile(ex, spec, deep), tail_error);

    ProfileOptions off;
    off.i_min = 1;
    off.i_max = 5;
    off.center = {Dyadic(3, 2), Dyadic()}; // 0.75 + cube reach 0.5 leaves the window
    CHECK_THROWS_AS(dyadic_profile(ex, spec, off), margin_error);
}

TEST_CASE("profile at an off-origin dyadic center keeps the exponent") {
    const ExampleVarifold& ex = shared_example();
    QuantitySpec spec = QuantitySpec::from_config(QuantityKind::mass_minus_plane, ex.config());
    ProfileOptions opts;
    opts.i_min = 3;
    opts.i_max = 6;
    opts.center = {Dyadic(1, 2), Dyadic(-1, 3)}; // (0.25, -0.125)
    ScalingReport r = dyadic_profile(ex, spec, opts);
    CHECK(std::fabs(r.fit.slope_lower - 5.0) <= 0.25);
    CHECK(std::fabs(r.fit.slope_upper - 5.0) <= 0.25);
}

TEST_CASE("split exponents: level-dependent neck ratios keep the slopes") {
    // kappa2 = 2.25 < kappa1 = 3 gives b > 1, so every level carries its own
    // tau; mass decays at n + kappa2, tilt at n + kappa1
    ExampleConfig cfg;
    cfg.n = 2;
    cfg.p = 1.0;
    cfg.alpha1 = cfg.alpha2 = 1.0;
    cfg.q1 = 3.0;
    cfg.q2 = 2.25;
    cfg.max_level = 16;
    ExampleVarifold ex = build_example(cfg);
    CHECK(ex.scales().b > 1.0);

    ProfileOptions opts;
    opts.i_min = 2;
    opts.i_max = 7;
    {
        QuantitySpec spec = QuantitySpec::from_config(QuantityKind::mass_minus_plane, cfg);
        ScalingReport r = dyadic_profile(ex, spec, opts);
        CHECK(r.predicted == doctest::Approx(4.25).epsilon(1e-12));
        CHECK(std::fabs(r.fit.slope_lower - 4.25) <= 0.15);
        CHECK(std::fabs(r.fit.slope_upper - 4.25) <= 0.15);
    }
    {
        QuantitySpec spec = QuantitySpec::from_config(QuantityKind::tilt, cfg);
        ScalingReport r = dyadic_profile(ex, spec, opts);
        CHECK(r.predicted == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(std::fabs(r.fit.slope_lower - 5.0) <= 0.2);
        CHECK(std::fabs(r.fit.slope_upper - 5.0) <= 0.2);
    }
    {
        QuantitySpec spec = QuantitySpec::from_config(QuantityKind::height, cfg);
        ScalingReport r = dyadic_profile(ex, spec, opts);
        CHECK(r.predicted == doctest::Approx(2.25 + 4.25).epsilon(1e-12));
        CHECK(std::fabs(r.fit.slope_lower - 6.5) <= 0.2);
        CHECK(std::fabs(r.fit.slope_upper - 6.5) <= 0.2);
    }
    {
        // computed curvature ratios stay below 1 and approach the closed
        // form as the neck ratio shrinks
        QuantitySpec spec = QuantitySpec::from_config(QuantityKind::curvature_mass, cfg);
        auto ratios = level_contribution_ratios(ex, spec);
        double closed = closed_form_level_ratio(ex, spec);
        CHECK(closed < 1.0);
        for (double r : ratios) CHECK(r < 1.0);
        CHECK(ratios.back() == doctest::Approx(closed).epsilon(0.05));
    }
}

TEST_CASE("ball aggregation brackets the estimate") {
    const ExampleVarifold& ex = shared_example();
    QuantitySpec spec{QuantityKind::mass_minus_plane};
    Vec center{0.0, 0.0, 0.0};
    for (int i : {2, 3, 4, 5}) {
        BallValue bv = ball_aggregate(ex, center, std::exp2(-i), spec);
        CHECK(bv.lower <= bv.estimate + 1e-18);
        CHECK(bv.estimate <= bv.upper + 1e-18);
        CHECK(bv.lower > 0.0);
    }
}

TEST_CASE("ball and cube masses sandwich correctly") {
    // ball of radius R sits inside the cube of half-width R, and contains the
    // cube of half-width R/sqrt(n+1)
    const ExampleVarifold& ex = shared_example();
    QuantitySpec spec{QuantityKind::mass_minus_plane};
    std::vector<Dyadic> origin(2, Dyadic());
    for (int i : {3, 4, 5}) {
        double ball_upper =
            ball_aggregate(ex, Vec{0.0, 0.0, 0.0}, std::exp2(-i), spec).upper;
        double cube_upper = 0.0;
        for (int j = i; j <= ex.max_level(); ++j)
            cube_upper += count_cells(i, j, origin, CountMode::intersecting) *
                          cell_value(ex, j, spec);
        CHECK(ball_upper <= cube_upper * (1.0 + 1e-12));
    }
}

TEST_CASE("dichotomy: sharp exponent is bounded positive") {
    ExampleConfig cfg;
    cfg.n = 2;
    cfg.p = 1.0;
    cfg.alpha1 = cfg.alpha2 = 1.0;
    cfg.q1 = cfg.q2 = 2.25;
    cfg.max_level = 16;
    ExampleVarifold ex = build_example(cfg);

    DichotomyConfig dc;
    dc.q = 2.125; // 1 + kappa/n
    dc.i_min = 2;
    dc.i_max = 7;
    DichotomyResult res = dichotomy_ratio(ex, dc);
    CHECK(res.verdict == DichotomyVerdict::bounded_positive);
    CHECK(res.ratio_max / res.ratio_min <= 10.0);
    for (const auto& row : res.rows) {
        CHECK(row.nu_lower <= row.nu_ball * (1.0 + 1e-12));
        CHECK(row.nu_ball <= row.nu_upper * (1.0 + 1e-12));
        CHECK(row.cube_lower <= row.cube_upper);
    }

    DichotomyConfig up = dc;
    up.q = 2.375; // n q shifted by +0.5
    DichotomyResult res_up = dichotomy_ratio(ex, up);
    CHECK(res_up.strictly_increasing);
    CHECK(res_up.verdict == DichotomyVerdict::toward_infinity);

    DichotomyConfig down = dc;
    down.q = 1.875;
    DichotomyResult res_down = dichotomy_ratio(ex, down);
    CHECK(res_down.strictly_decreasing);
    CHECK(res_down.verdict == DichotomyVerdict::toward_zero);
}

TEST_CASE("dichotomy: weighted regime validates s = n q") {
    ExampleConfig cfg = default_config(12);
    ExampleVarifold ex = build_example(cfg);
    DichotomyConfig dc;
    dc.nu = DichotomyConfig::Nu::weighted;
    dc.q = 2.5; // s = 5 > n + (1 - 1/r) kappa = 3 with r = 1.5
    dc.weight_r = 1.5;
    dc.i_min = 2;
    dc.i_max = 6;
    DichotomyResult res = dichotomy_ratio(ex, dc);
    CHECK(res.verdict == DichotomyVerdict::bounded_positive);

    DichotomyConfig bad = dc;
    bad.q = 1.4; // s = 2.8 below the validity threshold
    CHECK_THROWS_AS(dichotomy_ratio(ex, bad), config_error);
}

TEST_CASE("excess scan: plane probes are in every B_i, flat windows in none") {
    const ExampleVarifold& ex = shared_example();
    ScanOptions opts;
    std::vector<Vec> on_plane = {Vec{0.0, 0.0, 0.0}, Vec{0.0, 0.25, -0.125},
                                 Vec{0.0, -0.5, 0.375}};
    for (int i : {2, 4, 8}) {
        ScanResult sr = excess_set_scan(ex, on_plane, i, opts);
        for (const auto& pr : sr.probes) {
            CHECK(pr.member == Membership::in);
            bool any = false;
            for (const auto& row : pr.rows) any = any || row.margin > 1.0;
            CHECK(any);
        }
    }

    auto window = make_canonical(CanonicalKind::plane_window, {2, 4.0, 64, 1.0});
    std::vector<Vec> interior = {Vec{0.0, 0.0, 0.0}, Vec{0.0, 1.0, -0.5}};
    for (int i : {2, 4}) {
        ScanResult sr = excess_set_scan(window, interior, i, opts);
        for (const auto& pr : sr.probes) {
            CHECK(pr.member == Membership::out);
            CHECK(pr.density_margin >= 1.0); // remark-style density conclusion
        }
    }
}

TEST_CASE("excess scan: plateau centers drop out at fine scales") {
    const ExampleVarifold& ex = shared_example();
    const auto& lv = ex.level(1);
    double top = lv.y_center + 0.5 * lv.cell_scale * lv.tau;
    std::vector<Vec> probe = {Vec{top, 0.0, 0.0}};
    ScanOptions opts;
    opts.k_max = 14;
    ScanResult sr = excess_set_scan(ex, probe, 64, opts);
    CHECK(sr.probes[0].member == Membership::out);
    for (const auto& row : sr.probes[0].rows) {
        CHECK(row.psi == 0.0);
        CHECK(row.mass > 0.0); // flat-patch disk mass
    }
}

TEST_CASE("excess scan: membership is monotone in i") {
    const ExampleVarifold& ex = shared_example();
    ScanOptions opts;
    std::vector<Vec> probes = {Vec{0.0, 0.0, 0.0}, Vec{0.0, 0.25, 0.25}};
    const auto& lv = ex.level(2);
    probes.push_back(Vec{lv.y_center + 0.5 * lv.cell_scale * lv.tau, 0.0, 0.0});
    std::vector<ScanResult> runs;
    for (int i : {2, 4, 8, 16}) runs.push_back(excess_set_scan(ex, probes, i, opts));
    for (std::size_t p = 0; p < probes.size(); ++p) {
        for (std::size_t t = 1; t < runs.size(); ++t) {
            // B_{i'} subset of B_i for i' > i: membership can only turn off
            bool coarse = runs[t - 1].probes[p].member == Membership::in;
            bool fine = runs[t].probes[p].member == Membership::in;
            CHECK((coarse || !fine));
        }
    }
}

TEST_CASE("flat-patch fast path refuses balls that reach a foreign level") {
    // n = 3 with kappa just above the validity threshold makes the gap from
    // a level-1 top sheet to the level-0 surface band smaller than the
    // plateau reach, so mid-sized balls must fall back to the generic path
    ExampleConfig cfg;
    cfg.n = 3;
    cfg.p = 1.0;
    cfg.alpha1 = cfg.alpha2 = 1.0;
    cfg.q1 = cfg.q2 = 1.6;
    cfg.max_level = 8;
    ExampleVarifold ex = build_example(cfg);

    double sigma1 = ex.scales().sigma(1);
    double top1 = ex.level(1).y_center + sigma1;
    Vec probe{top1, 0.0, 0.0, 0.0};
    double gap_up = (ex.level(0).y_center - ex.scales().sigma(0)) - top1;
    double reach = 0.25 * ex.level(1).cell_scale; // scaled plateau radius, tau = 1
    REQUIRE(gap_up < reach); // the dangerous window exists for this config

    detail::FlatPatch inside_gap = detail::flat_patch_value(ex, probe, 0.5 * gap_up);
    CHECK(inside_gap.applies);
    CHECK(inside_gap.mass ==
          doctest::Approx(unit_ball_volume(3) * std::pow(0.5 * gap_up, 3)).epsilon(1e-12));

    double danger = 0.5 * (gap_up + reach); // reaches level 0, still on the plateau
    detail::FlatPatch crossing = detail::flat_patch_value(ex, probe, danger);
    CHECK_FALSE(crossing.applies);
}

TEST_CASE("excess scan guards") {
    const ExampleVarifold& ex = shared_example();
    ScanOptions opts;
    std::vector<Vec> outside = {Vec{0.0, 0.9, 0.0}};
    CHECK_THROWS_AS(excess_set_scan(ex, outside, 4, opts), margin_error);
}

TEST_CASE("d-set scan: qualitative behaviour") {
    ExampleConfig cfg = default_config(10);
    ExampleVarifold ex = build_example(cfg);
    DScanOptions opts;
    opts.i = 4;
    opts.epsilon = 0.05;
    opts.q = 1.0;
    opts.level_cap = 5;
    opts.k_max = 6;
    opts.plane_grid = 8;
    DScanResult res = d_set_scan(ex, Vec{0.0, 0.0, 0.0}, opts);
    CHECK(!res.rows.empty());
    for (const auto& row : res.rows) {
        CHECK(row.measure_lower <= row.measure_upper + 1e-18);
        CHECK(row.ratio_lower >= 0.0);
        CHECK(std::isfinite(row.ratio_upper));
    }
    CHECK(res.classified_cells > 0);

    // a high threshold empties the set
    DScanOptions strict = opts;
    strict.epsilon = 1e9;
    DScanResult empty = d_set_scan(ex, Vec{0.0, 0.0, 0.0}, strict);
    for (const auto& row : empty.rows) CHECK(row.measure_lower == 0.0);
    CHECK(empty.member_cells == 0);
}

TEST_CASE("d-set scan requires weights") {
    ExampleConfig cfg = default_config(8);
    cfg.weight_s.reset();
    cfg.weight_r.reset();
    ExampleVarifold ex = build_example(cfg);
    DScanOptions opts;
    CHECK_THROWS_AS(d_set_scan(ex, Vec{0.0, 0.0, 0.0}, opts), config_error);
}

TEST_CASE("sample_value integrates to cell_value on the cloud") {
    const ExampleVarifold& ex = shared_example();
    for (auto kind : {QuantityKind::mass_minus_plane, QuantityKind::height,
                      QuantityKind::tilt, QuantityKind::curvature_mass}) {
        QuantitySpec spec = QuantitySpec::from_config(kind, ex.config());
        int j = 2;
        auto cloud = ex.unit_cloud(j);
        double acc = 0.0;
        for (const auto& smp : *cloud) acc += sample_value(ex, j, smp, spec);
        CHECK(acc == doctest::Approx(cell_value(ex, j, spec)).epsilon(0.05));
    }
}
