#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vfl/example.hpp"
#include "vfl/varifold.hpp"

namespace vfl {

enum class QuantityKind {
    mass_minus_plane,
    height,            // dist(. , T)^q2
    tilt,              // |P_. - P_T|^q1
    curvature_mass,    // |H|^p (p = 1: the total-variation mass off the plane)
    weighted_mass,     // f with f = 2^((na-s)j) per level
    weighted_power_mass // f^r
};

struct QuantitySpec {
    QuantityKind kind = QuantityKind::mass_minus_plane;
    double q = 2.0;                         // height/tilt exponent
    double p = 1.0;                         // curvature exponent
    double s = 6.0, r = 1.5;                // weight exponents
    PlaneNorm norm = PlaneNorm::frobenius;

    static QuantitySpec from_config(QuantityKind kind, const ExampleConfig& cfg);
};

const char* kind_name(QuantityKind kind);

// Per-cell value of the quantity at a level (from the memoised unit
// integrals) and its per-sample integrand on the level's unit cloud.
double cell_value(const ExampleVarifold& ex, int level, const QuantitySpec& spec);
double sample_value(const ExampleVarifold& ex, int level, const SurfaceSample& s,
                    const QuantitySpec& spec);

// Predicted decay exponent of the windowed quantity over cube(x, 2^-i).
double predicted_exponent(const ExampleVarifold& ex, const QuantitySpec& spec);

// Consecutive-level ratio of the window aggregates (exact via tiling counts)
// and its closed form 2^(n - ba(1-p) + (1-n)a) for the curvature kind.
std::vector<double> level_contribution_ratios(const ExampleVarifold& ex,
                                              const QuantitySpec& spec);
double closed_form_level_ratio(const ExampleVarifold& ex, const QuantitySpec& spec);

struct ProfileRow {
    int i = 0;
    double radius = 0.0; // 2^-i
    double lower = 0.0;  // contained-cell bracket
    double upper = 0.0;  // intersecting-cell bracket
};

struct SlopeFit {
    double slope_lower = 0.0, slope_upper = 0.0;
    double intercept_lower = 0.0, intercept_upper = 0.0;
    double residual_lower = 0.0, residual_upper = 0.0; // max |log2 dev|
};

// Ordinary least squares of log2(value) against log2(radius), per bracket.
SlopeFit fit_slope(const std::vector<ProfileRow>& rows);

struct ScalingReport {
    QuantitySpec spec;
    std::vector<ProfileRow> rows;
    SlopeFit fit;
    double predicted = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double tail_bound_at_imax = 0.0;
};

struct ProfileOptions {
    int i_min = 2, i_max = 8;
    double slope_tolerance = 0.15;
    double tail_tolerance = 1e-3;
    std::vector<Dyadic> center; // point of T; empty = origin
    bool parallel = true;
};

// Two-sided dyadic-radius profile over cubes: lower = sum_j c_{i,j} v_j,
// upper = sum_j b_{i,j} v_j, with slope fit against the prediction.
ScalingReport dyadic_profile(const ExampleVarifold& ex, const QuantitySpec& spec,
                             const ProfileOptions& opts);

// ---------------------------------------------------------------------------
// ball-window aggregation (shared by the dichotomy experiment and the scans)

struct BallValue {
    double lower = 0.0;    // bump cells whose surface box lies inside the ball
    double upper = 0.0;    // plus every straddling surface box
    double estimate = 0.0; // straddlers resolved by the level's sample cloud
};

struct BallOptions {
    double rel_slack = 1e-12;     // directed slack keeping the brackets valid
    double skip_threshold = 1e-4; // straddler mass below this (relative) is bracketed only
    bool use_cloud = true;
};

BallValue ball_aggregate(const ExampleVarifold& ex, const Vec& center, double radius,
                         const QuantitySpec& spec, const BallOptions& opts = {});

// Exact T-plane mass inside a ball (closed form disk area), 0 if the center
// height exceeds the radius.
double plane_mass_in_ball(const ExampleVarifold& ex, const Vec& center, double radius);

// ---------------------------------------------------------------------------
// excess-set scans

enum class Membership { in, out, indeterminate };

struct ScanOptions {
    double epsilon = 0.0;          // 0 = derive from gamma_candidate
    double gamma_candidate = 0.0;  // 0 = omega_n^(-1/n)/n
    int k_max = 10;                // deepest dyadic radius 2^-k scanned
    std::uint64_t seed = 0x5eed;
    bool parallel = true;
};

struct ProbeRadiusRow {
    int k = 0;
    double radius = 0.0;
    double psi = 0.0;       // curvature measure of the ball
    double mass = 0.0;      // mu of the ball
    double threshold = 0.0; // eps^(n-p) * mass^(1-p/n)
    double margin = 0.0;    // psi / threshold
};

struct ProbeResult {
    Vec probe;
    Membership member = Membership::out;
    std::vector<ProbeRadiusRow> rows;
    // for probes out of B_i: min over radii of mu(B)/((2 n gamma)^-n rho^n)
    double density_margin = 0.0;
};

struct ScanResult {
    int i = 0;
    double epsilon = 0.0;
    double gamma = 0.0;
    // display-only: the A-set density threshold (eps/Gamma)^(n-p)/omega_{n-p}
    // with Gamma = 8 gamma n; omega of fractional index is the
    // Gamma-function extension
    double a_set_threshold = 0.0;
    std::vector<ProbeResult> probes;
};

// B_i scan of the built example, on mu restricted off the plane (the
// theorem-relevant object for points of T).
ScanResult excess_set_scan(const ExampleVarifold& ex, const std::vector<Vec>& probes,
                           int i, const ScanOptions& opts);

namespace detail {
// Closed-form fast path for balls around a plateau point: applies only when
// the ball provably stays on one flat sheet and clear of every other
// surface; then the mass is a disk and the curvature measure vanishes.
struct FlatPatch {
    bool applies = false;
    double mass = 0.0;
};
FlatPatch flat_patch_value(const ExampleVarifold& ex, const Vec& probe, double radius);
} // namespace detail

// B_i scan of a discrete varifold (flat windows, canonical shapes).
ScanResult excess_set_scan(const DiscreteVarifold& v, const std::vector<Vec>& probes,
                           int i, const ScanOptions& opts);

// D_i(a) scan: cells are classified atomically by their center; the plane is
// classified on a grid. Returns per-radius measures of D_i(a) intersected
// with balls about a, normalised by r^(n + alpha q).
struct DScanOptions {
    double epsilon = 0.05;
    double q = 1.0;
    double alpha = 1.0;
    int i = 4;
    int k_max = 8;       // membership radii 2^-k < 1/i
    int level_cap = 8;   // cells classified down to this level
    int plane_grid = 24; // plane classification grid per axis
};

struct DScanRow {
    double r = 0.0;
    double measure_lower = 0.0, measure_upper = 0.0;
    double ratio_lower = 0.0, ratio_upper = 0.0; // measure / r^(n+alpha q)
};

struct DScanResult {
    DScanOptions opts;
    std::vector<DScanRow> rows;
    std::int64_t member_cells = 0, classified_cells = 0;
};

DScanResult d_set_scan(const ExampleVarifold& ex, const Vec& a, const DScanOptions& opts);

// ---------------------------------------------------------------------------
// dichotomy experiment

struct DichotomyConfig {
    double q = 2.125;
    enum class Nu { complement_of_t, weighted } nu = Nu::complement_of_t;
    double weight_r = 1.5; // for the weighted regime; s is fixed to n*q
    int i_min = 2, i_max = 8;
    double bracket_factor = 10.0;
    double trend_factor = 4.0;
    BallOptions ball;
};

enum class DichotomyVerdict { bounded_positive, toward_infinity, toward_zero, inconclusive };

struct DichotomyResult {
    struct Row {
        int i = 0;
        double radius = 0.0;
        double nu_ball = 0.0;              // cloud-resolved estimate
        double nu_lower = 0.0, nu_upper = 0.0;
        double ratio = 0.0;                // nu_ball / radius^(nq)
        double cube_lower = 0.0, cube_upper = 0.0; // cube-window variant
    };
    std::vector<Row> rows;
    DichotomyVerdict verdict = DichotomyVerdict::inconclusive;
    double ratio_min = 0.0, ratio_max = 0.0;
    bool strictly_increasing = false, strictly_decreasing = false;
};

const char* verdict_name(DichotomyVerdict v);

DichotomyResult dichotomy_ratio(const ExampleVarifold& ex, const DichotomyConfig& cfg);

} // namespace vfl
