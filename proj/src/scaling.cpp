#include "vfl/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vfl/parallel.hpp"

namespace vfl {

// ---------------------------------------------------------------------------
// quantity specs

QuantitySpec QuantitySpec::from_config(QuantityKind kind, const ExampleConfig& cfg) {
    QuantitySpec spec;
    spec.kind = kind;
    spec.p = cfg.p;
    switch (kind) {
    case QuantityKind::height: spec.q = cfg.q2; break;
    case QuantityKind::tilt: spec.q = cfg.q1; break;
    default: break;
    }
    if (cfg.weight_s) spec.s = *cfg.weight_s;
    if (cfg.weight_r) spec.r = *cfg.weight_r;
    return spec;
}

const char* kind_name(QuantityKind kind) {
    switch (kind) {
    case QuantityKind::mass_minus_plane: return "mass_minus_plane";
    case QuantityKind::height: return "height";
    case QuantityKind::tilt: return "tilt";
    case QuantityKind::curvature_mass: return "curvature_mass";
    case QuantityKind::weighted_mass: return "weighted_mass";
    case QuantityKind::weighted_power_mass: return "weighted_power_mass";
    }
    return "?";
}

double cell_value(const ExampleVarifold& ex, int level, const QuantitySpec& spec) {
    const ExampleConfig& cfg = ex.config();
    const LevelAggregate& lv = ex.level(level);
    const int n = cfg.n;
    double sn = std::pow(lv.cell_scale, n);
    switch (spec.kind) {
    case QuantityKind::mass_minus_plane:
        return lv.cell_mass;
    case QuantityKind::height: {
        if (spec.q == cfg.q2) return lv.cell_height;
        ProfileGeometry geom{lv.tau, n, cfg.smoothing};
        return sn * height_moment(geom, spec.q, lv.y_center, lv.cell_scale, cfg.quad);
    }
    case QuantityKind::tilt: {
        if (spec.q == cfg.q1 && spec.norm == PlaneNorm::frobenius) return lv.cell_tilt;
        ProfileGeometry geom{lv.tau, n, cfg.smoothing};
        return sn *
               unit_integrals(geom, cfg.p, spec.q, spec.norm, 1.0, cfg.quad).tilt_moment;
    }
    case QuantityKind::curvature_mass: {
        if (spec.p == cfg.p) return lv.cell_curvature;
        ProfileGeometry geom{lv.tau, n, cfg.smoothing};
        return std::pow(lv.cell_scale, n - spec.p) *
               unit_integrals(geom, spec.p, cfg.q1, spec.norm, 1.0, cfg.quad).curvature_moment;
    }
    case QuantityKind::weighted_mass:
        return weight_value(ex.scales(), level, spec.s) * lv.cell_mass;
    case QuantityKind::weighted_power_mass:
        return std::pow(weight_value(ex.scales(), level, spec.s), spec.r) * lv.cell_mass;
    }
    throw contract_error("cell_value: unknown kind");
}

double sample_value(const ExampleVarifold& ex, int level, const SurfaceSample& smp,
                    const QuantitySpec& spec) {
    const ExampleConfig& cfg = ex.config();
    const LevelAggregate& lv = ex.level(level);
    const int n = cfg.n;
    double sn = std::pow(lv.cell_scale, n);
    switch (spec.kind) {
    case QuantityKind::mass_minus_plane:
        return smp.weight * sn;
    case QuantityKind::height:
        return smp.weight * sn *
               std::pow(std::fabs(lv.y_center + lv.cell_scale * smp.position[0]), spec.q);
    case QuantityKind::tilt: {
        double sin_t = std::sqrt(std::max(0.0, 1.0 - smp.normal[0] * smp.normal[0]));
        return smp.weight * sn * std::pow(plane_norm_scale(spec.norm) * sin_t, spec.q);
    }
    case QuantityKind::curvature_mass:
        return smp.weight * std::pow(lv.cell_scale, n - spec.p) *
               std::pow(norm(smp.mean_curvature), spec.p);
    case QuantityKind::weighted_mass:
        return weight_value(ex.scales(), level, spec.s) * smp.weight * sn;
    case QuantityKind::weighted_power_mass:
        return std::pow(weight_value(ex.scales(), level, spec.s), spec.r) * smp.weight * sn;
    }
    throw contract_error("sample_value: unknown kind");
}

double predicted_exponent(const ExampleVarifold& ex, const QuantitySpec& spec) {
    const DerivedScales& sc = ex.scales();
    const int n = sc.n;
    const double a = sc.a, b = sc.b;
    switch (spec.kind) {
    case QuantityKind::mass_minus_plane:
        return n * a; // n + alpha2 q2
    case QuantityKind::height:
        return spec.q + n * a; // q2 + n + alpha2 q2
    case QuantityKind::tilt:
        return a * b + a * (n - 1); // n + alpha1 q1, independent of q
    case QuantityKind::curvature_mass:
        return a * (n - 1) + a * b * (1.0 - spec.p);
    case QuantityKind::weighted_mass:
        return spec.s;
    case QuantityKind::weighted_power_mass:
        return (spec.s - n * a) * spec.r + n * a;
    }
    throw contract_error("predicted_exponent: unknown kind");
}

double closed_form_level_ratio(const ExampleVarifold& ex, const QuantitySpec& spec) {
    // asymptotic consecutive-level ratio of the window aggregates; exact for
    // level-independent tau (b = 1) except for the height kind
    return std::exp2(ex.scales().n - predicted_exponent(ex, spec));
}

std::vector<double> level_contribution_ratios(const ExampleVarifold& ex,
                                              const QuantitySpec& spec) {
    std::vector<double> ratios;
    const auto& levels = ex.levels();
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
        double cur = levels[j].cell_count * cell_value(ex, static_cast<int>(j), spec);
        double nxt =
            levels[j + 1].cell_count * cell_value(ex, static_cast<int>(j + 1), spec);
        if (cur > 0.0) ratios.push_back(nxt / cur);
    }
    return ratios;
}

// ---------------------------------------------------------------------------
// slope fit

SlopeFit fit_slope(const std::vector<ProfileRow>& rows) {
    if (rows.size() < 3) throw fit_error("fit_slope: need at least 3 radii");
    for (const auto& r : rows)
        if (!(r.lower > 0.0) || !(r.upper > 0.0))
            throw fit_error("fit_slope: nonpositive value in log-domain fit");

    auto ols = [&](bool upper, double& slope, double& intercept, double& residual) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(rows.size());
        for (const auto& r : rows) {
            double x = std::log2(r.radius);
            double y = std::log2(upper ? r.upper : r.lower);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double denom = m * sxx - sx * sx;
        slope = (m * sxy - sx * sy) / denom;
        intercept = (sy - slope * sx) / m;
        residual = 0.0;
        for (const auto& r : rows) {
            double x = std::log2(r.radius);
            double y = std::log2(upper ? r.upper : r.lower);
            residual = std::max(residual, std::fabs(y - (slope * x + intercept)));
        }
    };
    SlopeFit fit;
    ols(false, fit.slope_lower, fit.intercept_lower, fit.residual_lower);
    ols(true, fit.slope_upper, fit.intercept_upper, fit.residual_upper);
    return fit;
}

// ---------------------------------------------------------------------------
// cube profiles

ScalingReport dyadic_profile(const ExampleVarifold& ex, const QuantitySpec& spec,
                             const ProfileOptions& opts) {
    const int J = ex.max_level();
    if (opts.i_min < 0 || opts.i_max < opts.i_min)
        throw contract_error("dyadic_profile: bad i range");
    double tail = tail_bound(ex, opts.i_max, J);
    if (tail > opts.tail_tolerance) {
        std::ostringstream msg;
        msg << "dyadic_profile: truncation insufficient for i_max=" << opts.i_max
            << " (tail bound " << tail << " > " << opts.tail_tolerance << ")";
        throw tail_error(msg.str());
    }
    std::vector<Dyadic> center = opts.center;
    if (center.empty()) center.assign(ex.config().n, Dyadic());
    // the cube must stay inside the built window
    {
        Dyadic reach = Dyadic(1, opts.i_min);
        for (const auto& c : center) {
            Dyadic lo = c - reach, hi = c + reach;
            if (lo < -ex.config().window_half_width || ex.config().window_half_width < hi)
                throw margin_error("dyadic_profile: cube leaves the built window");
        }
    }

    std::vector<double> values(static_cast<std::size_t>(J) + 1);
    for (int j = 0; j <= J; ++j) values[j] = cell_value(ex, j, spec);

    ScalingReport report;
    report.spec = spec;
    report.rows.resize(static_cast<std::size_t>(opts.i_max - opts.i_min + 1));
    auto body = [&](std::size_t idx) {
        int i = opts.i_min + static_cast<int>(idx);
        ProfileRow row;
        row.i = i;
        row.radius = std::exp2(-i);
        for (int j = i; j <= J; ++j) {
            double lo = static_cast<double>(count_cells(i, j, center, CountMode::contained));
            double hi = static_cast<double>(count_cells(i, j, center, CountMode::intersecting));
            row.lower += lo * values[j];
            row.upper += hi * values[j];
        }
        report.rows[idx] = row;
    };
    if (opts.parallel)
        parallel_for(report.rows.size(), body);
    else
        serial_for(report.rows.size(), body);

    report.fit = fit_slope(report.rows);
    report.predicted = predicted_exponent(ex, spec);
    report.tolerance = opts.slope_tolerance;
    report.tail_bound_at_imax = tail;
    report.pass = std::fabs(report.fit.slope_lower - report.predicted) <= opts.slope_tolerance &&
                  std::fabs(report.fit.slope_upper - report.predicted) <= opts.slope_tolerance;
    return report;
}

// ---------------------------------------------------------------------------
// ball aggregation over the lattice

namespace {

struct LevelBox {
    double y_lo, y_hi;   // surface box heights
    double cross_extent; // rho_j
    double spacing;      // 2^(-j-1)
};

LevelBox level_box(const ExampleVarifold& ex, int j) {
    const LevelAggregate& lv = ex.level(j);
    double sigma = 0.5 * lv.cell_scale * lv.tau;
    LevelBox box;
    box.y_lo = lv.y_center - sigma;
    box.y_hi = lv.y_center + sigma;
    box.cross_extent = 0.5 * lv.cell_scale;
    box.spacing = std::exp2(-j - 1);
    return box;
}

// per-axis index interval with |k*spacing - c| <= reach
struct KInterval {
    std::int64_t lo = 0, hi = -1;
    std::int64_t count() const { return hi < lo ? 0 : hi - lo + 1; }
    bool contains(std::int64_t k) const { return k >= lo && k <= hi; }
};

KInterval axis_interval(double c, double reach, double spacing) {
    KInterval iv;
    if (reach < 0.0) return iv;
    iv.lo = static_cast<std::int64_t>(std::ceil((c - reach) / spacing - 1e-12));
    iv.hi = static_cast<std::int64_t>(std::floor((c + reach) / spacing + 1e-12));
    return iv;
}

} // namespace

double plane_mass_in_ball(const ExampleVarifold& ex, const Vec& center, double radius) {
    double h = center[0];
    if (std::fabs(h) > radius) return 0.0;
    double r2 = radius * radius - h * h;
    return unit_ball_volume(ex.config().n) * std::pow(r2, 0.5 * ex.config().n);
}

namespace {

struct LevelCounts {
    std::int64_t contained = 0;
    std::int64_t straddling = 0;
};

// Walk the level-j cells whose surface box meets the ball. With a callback
// every such cell is visited (flagged contained or straddling); without one
// contained runs are counted in O(1) per outer index and only straddlers are
// enumerated into counts.
void walk_level_cells(const ExampleVarifold& ex, const Vec& center, double radius,
                      int j, double rel_slack, LevelCounts& counts,
                      const std::function<void(const std::vector<std::int64_t>&, bool)>* visit,
                      std::vector<std::vector<std::int64_t>>* straddlers_out) {
    const int n = ex.config().n;
    LevelBox box = level_box(ex, j);
    const double R2_in = radius * radius * (1.0 - rel_slack);
    const double R2_out = radius * radius * (1.0 + rel_slack);
    double y_far = std::max(std::fabs(box.y_lo - center[0]), std::fabs(box.y_hi - center[0]));
    double y_near = (center[0] < box.y_lo)   ? box.y_lo - center[0]
                    : (center[0] > box.y_hi) ? center[0] - box.y_hi
                                             : 0.0;
    double near_budget = R2_out - y_near * y_near;
    if (near_budget < 0.0) return;
    double far_budget = R2_in - y_far * y_far;

    std::vector<std::int64_t> k(static_cast<std::size_t>(n));
    std::function<void(int, double, double)> walk = [&](int axis, double near_sum,
                                                        double far_sum) {
        double c = center[axis + 1];
        double near_room = near_budget - near_sum;
        if (near_room < 0.0) return;
        KInterval outer = axis_interval(c, std::sqrt(near_room) + box.cross_extent, box.spacing);
        if (axis == n - 1) {
            KInterval inner;
            double far_room = far_budget - far_sum;
            if (far_room >= 0.0) {
                double w = std::sqrt(far_room) - box.cross_extent;
                inner = axis_interval(c, w, box.spacing);
                inner.lo = std::max(inner.lo, outer.lo);
                inner.hi = std::min(inner.hi, outer.hi);
            }
            counts.contained += inner.count();
            counts.straddling += outer.count() - inner.count();
            if (visit) {
                for (std::int64_t kk = outer.lo; kk <= outer.hi; ++kk) {
                    k[static_cast<std::size_t>(axis)] = kk;
                    (*visit)(k, inner.contains(kk));
                }
            }
            if (straddlers_out) {
                for (std::int64_t kk = outer.lo; kk <= outer.hi; ++kk) {
                    if (inner.contains(kk)) continue;
                    k[static_cast<std::size_t>(axis)] = kk;
                    straddlers_out->push_back(k);
                }
            }
            return;
        }
        for (std::int64_t kk = outer.lo; kk <= outer.hi; ++kk) {
            k[static_cast<std::size_t>(axis)] = kk;
            double d = std::fabs(kk * box.spacing - c);
            double near_t = std::max(0.0, d - box.cross_extent);
            double far_t = d + box.cross_extent;
            walk(axis + 1, near_sum + near_t * near_t, far_sum + far_t * far_t);
        }
    };
    walk(0, 0.0, 0.0);
}

} // namespace

BallValue ball_aggregate(const ExampleVarifold& ex, const Vec& center, double radius,
                         const QuantitySpec& spec, const BallOptions& opts) {
    const int n = ex.config().n;
    if (center.dim() != n + 1)
        throw contract_error("ball_aggregate: center must be an ambient point");

    BallValue out;
    for (int j = 0; j <= ex.max_level(); ++j) {
        double v = cell_value(ex, j, spec);
        LevelCounts counts;
        std::vector<std::vector<std::int64_t>> straddlers;
        // first pass counts; straddlers are re-collected only when the cloud
        // refinement is actually worth running
        walk_level_cells(ex, center, radius, j, opts.rel_slack, counts, nullptr, nullptr);
        out.lower += counts.contained * v;
        out.upper += counts.contained * v;
        out.estimate += counts.contained * v;
        if (counts.straddling == 0) continue;

        double straddle_total = static_cast<double>(counts.straddling) * v;
        out.upper += straddle_total;
        double scale_ref = std::max(out.lower, std::numeric_limits<double>::min());
        if (!opts.use_cloud || straddle_total < opts.skip_threshold * scale_ref) {
            out.estimate += 0.5 * straddle_total;
            continue;
        }
        LevelCounts again;
        walk_level_cells(ex, center, radius, j, opts.rel_slack, again, nullptr, &straddlers);
        auto cloud = ex.unit_cloud(j);
        const LevelAggregate& lv = ex.level(j);
        LevelBox box = level_box(ex, j);
        for (const auto& idx : straddlers) {
            double acc = 0.0;
            for (const auto& smp : *cloud) {
                double dy = lv.y_center + lv.cell_scale * smp.position[0] - center[0];
                double d2 = dy * dy;
                for (int t = 0; t < n; ++t) {
                    double dz = idx[static_cast<std::size_t>(t)] * box.spacing +
                                lv.cell_scale * smp.position[t + 1] - center[t + 1];
                    d2 += dz * dz;
                }
                if (d2 <= radius * radius) acc += sample_value(ex, j, smp, spec);
            }
            out.estimate += acc;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// excess-set scans

namespace {

double default_gamma(int n) { return std::pow(unit_ball_volume(n), -1.0 / n) / n; }

std::vector<int> scan_radii(int i, int k_max) {
    std::vector<int> ks;
    for (int k = 0; k <= k_max; ++k)
        if (std::exp2(-k) < 1.0 / i) ks.push_back(k);
    if (ks.empty()) throw contract_error("excess scan: no dyadic radius below 1/i");
    return ks;
}

} // namespace

namespace detail {

FlatPatch flat_patch_value(const ExampleVarifold& ex, const Vec& probe, double radius) {
    FlatPatch fp;
    const int n = ex.config().n;
    double y = probe[0];
    if (!(y > 0.0) || y > 1.0) return fp;
    int j = static_cast<int>(std::floor(-std::log2(y)));
    if (j < 0 || j > ex.max_level()) return fp;
    const LevelAggregate& lv = ex.level(j);
    LevelBox box = level_box(ex, j);
    // nearest cell center
    double spacing = box.spacing;
    double cross2 = 0.0;
    for (int t = 0; t < n; ++t) {
        double c = std::round(probe[t + 1] / spacing) * spacing;
        double d = probe[t + 1] - c;
        cross2 += d * d;
    }
    double sigma = 0.5 * lv.cell_scale * lv.tau;
    double top = lv.y_center + sigma, bottom = lv.y_center - sigma;
    double dy_top = std::fabs(y - top), dy_bottom = std::fabs(y - bottom);
    double dy = std::min(dy_top, dy_bottom);
    if (dy > 0.25 * radius) return fp; // probe is not on a plateau sheet
    double plateau_r = lv.cell_scale * RimCurve::get(lv.tau, ex.config().smoothing)->plateau_radius();
    if (std::sqrt(cross2) + radius >= plateau_r) return fp;
    if (radius >= sigma) return fp; // could reach the other sheet or the rim
    // the ball must also stay clear of every other level's surface band
    for (int jj = 0; jj <= ex.max_level(); ++jj) {
        if (jj == j) continue;
        LevelBox other = level_box(ex, jj);
        double band = (y < other.y_lo) ? other.y_lo - y
                      : (y > other.y_hi) ? y - other.y_hi
                                         : 0.0;
        if (radius >= band) return fp;
    }
    double r2 = radius * radius - dy * dy;
    if (r2 <= 0.0) return fp;
    fp.applies = true;
    fp.mass = unit_ball_volume(n) * std::pow(r2, 0.5 * n);
    return fp;
}

} // namespace detail

ScanResult excess_set_scan(const ExampleVarifold& ex, const std::vector<Vec>& probes,
                           int i, const ScanOptions& opts) {
    if (i < 1) throw contract_error("excess_set_scan: i must be >= 1");
    const ExampleConfig& cfg = ex.config();
    const int n = cfg.n;
    double gamma = opts.gamma_candidate > 0.0 ? opts.gamma_candidate : default_gamma(n);
    double eps = opts.epsilon > 0.0 ? opts.epsilon
                                    : std::pow(2.0 * gamma, -cfg.p / (n - cfg.p));
    double window = cfg.window_half_width.to_double();
    for (const auto& probe : probes) {
        if (probe.dim() != n + 1)
            throw contract_error("excess_set_scan: probes must be ambient points");
        double reach = std::fabs(probe[0]);
        for (int t = 0; t < n; ++t) reach = std::max(reach, std::fabs(probe[t + 1]));
        if (reach + 1.0 / i > window)
            throw margin_error("excess_set_scan: probe too close to the window boundary");
    }

    std::vector<int> ks = scan_radii(i, opts.k_max);
    QuantitySpec mass_spec{QuantityKind::mass_minus_plane};
    QuantitySpec curv_spec{QuantityKind::curvature_mass};
    curv_spec.p = cfg.p;

    ScanResult result;
    result.i = i;
    result.epsilon = eps;
    result.gamma = gamma;
    result.a_set_threshold = std::pow(eps / (8.0 * gamma * n), n - cfg.p) /
                             unit_ball_volume_real(n - cfg.p);
    result.probes.resize(probes.size());
    auto body = [&](std::size_t pi) {
        ProbeResult pr;
        pr.probe = probes[pi];
        pr.density_margin = std::numeric_limits<double>::infinity();
        for (int k : ks) {
            double rho = std::exp2(-k);
            ProbeRadiusRow row;
            row.k = k;
            row.radius = rho;
            detail::FlatPatch fp = detail::flat_patch_value(ex, probes[pi], rho);
            if (fp.applies) {
                row.mass = fp.mass;
                row.psi = 0.0;
            } else {
                row.mass = ball_aggregate(ex, probes[pi], rho, mass_spec).estimate;
                row.psi = ball_aggregate(ex, probes[pi], rho, curv_spec).estimate;
            }
            row.threshold =
                std::pow(eps, n - cfg.p) * std::pow(row.mass, 1.0 - cfg.p / n);
            row.margin = row.threshold > 0.0
                             ? row.psi / row.threshold
                             : (row.psi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            double density_floor = std::pow(2.0 * n * gamma, -double(n)) * std::pow(rho, n);
            pr.density_margin = std::min(pr.density_margin, row.mass / density_floor);
            pr.rows.push_back(row);
        }
        bool any_over = false, all_clearly_under = true;
        for (const auto& row : pr.rows) {
            if (row.margin > 1.0) any_over = true;
            if (!(row.margin < 0.99)) all_clearly_under = false;
        }
        pr.member = any_over ? Membership::in
                             : (all_clearly_under ? Membership::out : Membership::indeterminate);
        result.probes[pi] = std::move(pr);
    };
    if (opts.parallel)
        parallel_for(probes.size(), body);
    else
        serial_for(probes.size(), body);
    return result;
}

ScanResult excess_set_scan(const DiscreteVarifold& v, const std::vector<Vec>& probes,
                           int i, const ScanOptions& opts) {
    if (i < 1) throw contract_error("excess_set_scan: i must be >= 1");
    const int n = v.n();
    double gamma = opts.gamma_candidate > 0.0 ? opts.gamma_candidate : default_gamma(n);
    double p = v.p();
    double eps = opts.epsilon > 0.0 ? opts.epsilon : std::pow(2.0 * gamma, -p / (n - p));
    std::vector<int> ks = scan_radii(i, opts.k_max);

    ScanResult result;
    result.i = i;
    result.epsilon = eps;
    result.gamma = gamma;
    result.a_set_threshold = std::pow(eps / (8.0 * gamma * n), n - p) /
                             unit_ball_volume_real(n - p);
    result.probes.resize(probes.size());
    auto body = [&](std::size_t pi) {
        ProbeResult pr;
        pr.probe = probes[pi];
        pr.density_margin = std::numeric_limits<double>::infinity();
        for (int k : ks) {
            double rho = std::exp2(-k);
            Region ball = Region::ball(probes[pi], rho);
            ProbeRadiusRow row;
            row.k = k;
            row.radius = rho;
            row.mass = mass_in(v, ball);
            row.psi = curvature_measure(v, ball);
            row.threshold = std::pow(eps, n - p) * std::pow(row.mass, 1.0 - p / n);
            row.margin = row.threshold > 0.0
                             ? row.psi / row.threshold
                             : (row.psi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            double density_floor = std::pow(2.0 * n * gamma, -double(n)) * std::pow(rho, n);
            pr.density_margin = std::min(pr.density_margin, row.mass / density_floor);
            pr.rows.push_back(row);
        }
        bool any_over = false, all_clearly_under = true;
        for (const auto& row : pr.rows) {
            if (row.margin > 1.0) any_over = true;
            if (!(row.margin < 0.99)) all_clearly_under = false;
        }
        pr.member = any_over ? Membership::in
                             : (all_clearly_under ? Membership::out : Membership::indeterminate);
        result.probes[pi] = std::move(pr);
    };
    if (opts.parallel)
        parallel_for(probes.size(), body);
    else
        serial_for(probes.size(), body);
    return result;
}

// ---------------------------------------------------------------------------
// D_i(a) scan

namespace {

// f value at an ambient point: the level weight inside a slab, 0 on T and
// outside ]0, 1]
double weight_at(const ExampleVarifold& ex, const Vec& x, double s) {
    double y = x[0];
    if (!(y > 0.0) || y > 1.0) return 0.0;
    int j = static_cast<int>(std::floor(-std::log2(y)));
    if (j < 0 || j > ex.max_level()) return 0.0;
    return weight_value(ex.scales(), j, s);
}

} // namespace

DScanResult d_set_scan(const ExampleVarifold& ex, const Vec& a, const DScanOptions& opts) {
    const ExampleConfig& cfg = ex.config();
    const int n = cfg.n;
    if (!cfg.weight_s)
        throw config_error("weight s, r", "d_set_scan: example was built without weights");
    const double s = *cfg.weight_s;
    const double fa = weight_at(ex, a, s);
    const int cap = std::min(opts.level_cap, ex.max_level());
    std::vector<int> ks = scan_radii(opts.i, opts.k_max);

    // membership of a point x: exists rho = 2^-k < 1/i with
    //   integral |f - f(a)|^q dmu > eps * mu(ball);
    // straddling boxes enter at half value (no cloud refinement here)
    auto member = [&](const Vec& x) {
        for (int k : ks) {
            double rho = std::exp2(-k);
            double plane = plane_mass_in_ball(ex, x, rho);
            double mass = plane, lhs = std::pow(fa, opts.q) * plane;
            for (int j = 0; j <= ex.max_level(); ++j) {
                LevelCounts counts;
                walk_level_cells(ex, x, rho, j, 1e-12, counts, nullptr, nullptr);
                double cells = counts.contained + 0.5 * counts.straddling;
                if (cells == 0.0) continue;
                double level_mass = cells * ex.level(j).cell_mass;
                mass += level_mass;
                double w = weight_value(ex.scales(), j, s);
                lhs += std::pow(std::fabs(w - fa), opts.q) * level_mass;
            }
            if (lhs > opts.epsilon * mass) return true;
        }
        return false;
    };

    DScanResult result;
    result.opts = opts;

    double window = cfg.window_half_width.to_double();
    double a_reach = std::fabs(a[0]);
    for (int t = 0; t < n; ++t) a_reach = std::max(a_reach, std::fabs(a[t + 1]));

    // decay radii: largest dyadic r with ball and membership scans inside the
    // built window
    for (int t = 1; t <= opts.k_max; ++t) {
        double r = std::exp2(-t);
        if (a_reach + r + 1.0 / opts.i > window) continue;

        DScanRow row;
        row.r = r;
        // bump cells classified atomically by their center point
        for (int j = 0; j <= cap; ++j) {
            const LevelAggregate& lv = ex.level(j);
            LevelBox box = level_box(ex, j);
            LevelCounts counts;
            std::function<void(const std::vector<std::int64_t>&, bool)> visit =
                [&](const std::vector<std::int64_t>& idx, bool contained) {
                    Vec c(n + 1);
                    c[0] = lv.y_center;
                    for (int tt = 0; tt < n; ++tt) c[tt + 1] = idx[static_cast<std::size_t>(tt)] * box.spacing;
                    ++result.classified_cells;
                    if (!member(c)) return;
                    ++result.member_cells;
                    row.measure_upper += lv.cell_mass;
                    if (contained) row.measure_lower += lv.cell_mass;
                };
            walk_level_cells(ex, a, r, j, 1e-12, counts, &visit, nullptr);
        }
        // unclassified deep levels enter the upper bracket with their full
        // in-ball mass
        for (int j = cap + 1; j <= ex.max_level(); ++j) {
            LevelCounts counts;
            walk_level_cells(ex, a, r, j, 1e-12, counts, nullptr, nullptr);
            row.measure_upper +=
                (counts.contained + counts.straddling) * ex.level(j).cell_mass;
        }
        // plane part on a grid over the in-ball disk
        double h0 = a[0];
        if (std::fabs(h0) <= r) {
            double disk_r = std::sqrt(r * r - h0 * h0);
            int g = opts.plane_grid;
            double cell = 2.0 * disk_r / g;
            for (int ix = 0; ix < g; ++ix) {
                for (int iy = 0; iy < (n >= 2 ? g : 1); ++iy) {
                    Vec pt(n + 1);
                    pt[1] = a[1] - disk_r + cell * (ix + 0.5);
                    if (n >= 2) pt[2] = a[2] - disk_r + cell * (iy + 0.5);
                    double d2 = 0.0;
                    for (int tt = 0; tt < n; ++tt) {
                        double d = pt[tt + 1] - a[tt + 1];
                        d2 += d * d;
                    }
                    if (d2 > disk_r * disk_r) continue;
                    if (!member(pt)) continue;
                    double area = std::pow(cell, n);
                    row.measure_lower += area;
                    row.measure_upper += area;
                }
            }
        }
        double denom = std::pow(r, n + opts.alpha * opts.q);
        row.ratio_lower = row.measure_lower / denom;
        row.ratio_upper = row.measure_upper / denom;
        result.rows.push_back(row);
    }
    return result;
}

DichotomyResult dichotomy_ratio(const ExampleVarifold& ex, const DichotomyConfig& cfg) {
    const ExampleConfig& ecfg = ex.config();
    const int n = ecfg.n;
    QuantitySpec spec;
    if (cfg.nu == DichotomyConfig::Nu::complement_of_t) {
        spec.kind = QuantityKind::mass_minus_plane;
    } else {
        double r = cfg.weight_r, s = n * cfg.q;
        if (!(r > 1.0) || !std::isfinite(r))
            throw config_error("1 < r < infinity", "dichotomy: weighted regime needs finite r > 1");
        double lower = n + (1.0 - 1.0 / r) * ecfg.kappa2();
        if (!(s > lower)) {
            std::ostringstream msg;
            msg << "dichotomy: weighted regime needs n*q > n + (1-1/r)*kappa2 = " << lower;
            throw config_error("s = n*q > n + (1-1/r)*kappa2", msg.str());
        }
        spec.kind = QuantityKind::weighted_mass;
        spec.s = s;
        spec.r = r;
    }

    double window = ecfg.window_half_width.to_double();
    if (std::exp2(-cfg.i_min) > window)
        throw margin_error("dichotomy: largest ball leaves the built window");
    double tail = tail_bound(ex, cfg.i_max, ex.max_level());
    if (tail > 1e-2) throw tail_error("dichotomy: truncation insufficient for i_max");

    Vec center(n + 1);
    std::vector<Dyadic> origin(static_cast<std::size_t>(n), Dyadic());

    DichotomyResult result;
    result.rows.resize(static_cast<std::size_t>(cfg.i_max - cfg.i_min + 1));
    auto body = [&](std::size_t idx) {
        int i = cfg.i_min + static_cast<int>(idx);
        DichotomyResult::Row row;
        row.i = i;
        row.radius = std::exp2(-i);
        BallValue bv = ball_aggregate(ex, center, row.radius, spec, cfg.ball);
        row.nu_ball = bv.estimate;
        row.nu_lower = bv.lower;
        row.nu_upper = bv.upper;
        row.ratio = bv.estimate / std::pow(row.radius, n * cfg.q);
        for (int j = i; j <= ex.max_level(); ++j) {
            double v = cell_value(ex, j, spec);
            row.cube_lower += count_cells(i, j, origin, CountMode::contained) * v;
            row.cube_upper += count_cells(i, j, origin, CountMode::intersecting) * v;
        }
        result.rows[idx] = row;
    };
    parallel_for(result.rows.size(), body);

    result.ratio_min = std::numeric_limits<double>::infinity();
    result.ratio_max = 0.0;
    result.strictly_increasing = true;
    result.strictly_decreasing = true;
    for (std::size_t t = 0; t < result.rows.size(); ++t) {
        double r = result.rows[t].ratio;
        result.ratio_min = std::min(result.ratio_min, r);
        result.ratio_max = std::max(result.ratio_max, r);
        if (t > 0) {
            if (!(r > result.rows[t - 1].ratio)) result.strictly_increasing = false;
            if (!(r < result.rows[t - 1].ratio)) result.strictly_decreasing = false;
        }
    }
    double total = result.rows.back().ratio / result.rows.front().ratio;
    if (result.strictly_increasing && total > cfg.trend_factor)
        result.verdict = DichotomyVerdict::toward_infinity;
    else if (result.strictly_decreasing && 1.0 / total > cfg.trend_factor)
        result.verdict = DichotomyVerdict::toward_zero;
    else if (result.ratio_max / result.ratio_min <= cfg.bracket_factor)
        result.verdict = DichotomyVerdict::bounded_positive;
    else
        result.verdict = DichotomyVerdict::inconclusive;
    return result;
}

const char* verdict_name(DichotomyVerdict v) {
    switch (v) {
    case DichotomyVerdict::bounded_positive: return "bounded-positive";
    case DichotomyVerdict::toward_infinity: return "toward-infinity";
    case DichotomyVerdict::toward_zero: return "toward-zero";
    case DichotomyVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

} // namespace vfl
