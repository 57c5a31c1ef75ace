#include "vfl/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "vfl/quadrature.hpp"

namespace vfl {

double plane_norm_scale(PlaneNorm norm) {
    return norm == PlaneNorm::frobenius ? std::sqrt(2.0) : 1.0;
}

void ProfileGeometry::validate() const {
    if (!(tau > 0.0) || tau > 1.0)
        throw contract_error("profile: tau must lie in (0, 1]");
    if (n < 2) throw contract_error("profile: surface dimension must be >= 2");
    if (smoothing < 0.0) throw contract_error("profile: smoothing must be >= 0");
}

// ---------------------------------------------------------------------------
// RimCurve

namespace {

// turn angle of the curvature trapezoid (ramps of width w, peak kappa0)
double trapezoid_theta(double l, double kappa0, double w, double length) {
    if (w <= 0.0) return kappa0 * l;
    if (l <= w) return 0.5 * kappa0 * l * l / w;
    if (l <= length - w) return 0.5 * kappa0 * w + kappa0 * (l - w);
    double u = length - l;
    return 0.5 * M_PI - 0.5 * kappa0 * u * u / w;
}

double trapezoid_drop(double kappa0, double w) {
    // integral of sin(theta(l)) over [0, L] with total turn pi/2
    double length = w + 0.5 * M_PI / kappa0;
    return integrate_gl(
        [&](double l) { return std::sin(trapezoid_theta(l, kappa0, w, length)); }, 0.0,
        length, 32, 4);
}

} // namespace

RimCurve::RimCurve(double tau, double smoothing) : tau_(tau), w_(smoothing) {
    if (w_ == 0.0) {
        kappa0_ = 4.0 / tau;
        length_ = 0.5 * M_PI / kappa0_; // quarter circle of radius tau/4
    } else {
        // Solve drop(kappa0) = tau/4; drop decreases in kappa0.
        double target = 0.25 * tau;
        double lo = 4.0 / tau, hi = 4.0 / tau;
        if (trapezoid_drop(lo, w_) < target) {
            while (trapezoid_drop(lo, w_) < target) lo *= 0.5;
        } else {
            while (trapezoid_drop(hi, w_) > target) hi *= 2.0;
        }
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (trapezoid_drop(mid, w_) > target ? lo : hi) = mid;
        }
        kappa0_ = 0.5 * (lo + hi);
        length_ = w_ + 0.5 * M_PI / kappa0_;
    }

    // cumulative s(l), y(l) on a dense grid; increments by Gauss panels
    const int cells = 512;
    grid_l_.resize(cells + 1);
    grid_s_.resize(cells + 1);
    grid_y_.resize(cells + 1);
    double run = integrate_gl([&](double l) { return std::cos(theta_at(l)); }, 0.0,
                              length_, 32, 4);
    s0_ = 0.5 - run;
    if (s0_ <= 0.0)
        throw contract_error("profile: smoothing too large, plateau radius <= 0");
    grid_l_[0] = 0.0;
    grid_s_[0] = s0_;
    grid_y_[0] = 0.5 * tau_;
    for (int k = 1; k <= cells; ++k) {
        double a = length_ * (k - 1) / cells, b = length_ * k / cells;
        grid_l_[k] = b;
        grid_s_[k] = grid_s_[k - 1] +
                     integrate_gl([&](double l) { return std::cos(theta_at(l)); }, a, b, 12);
        grid_y_[k] = grid_y_[k - 1] -
                     integrate_gl([&](double l) { return std::sin(theta_at(l)); }, a, b, 12);
    }
}

std::shared_ptr<const RimCurve> RimCurve::get(double tau, double smoothing) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::shared_ptr<const RimCurve>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(tau, smoothing);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, std::shared_ptr<const RimCurve>(new RimCurve(tau, smoothing)))
                 .first;
    return it->second;
}

double RimCurve::theta_at(double l) const {
    l = std::clamp(l, 0.0, length_);
    return trapezoid_theta(l, kappa0_, w_, length_);
}

std::vector<double> RimCurve::piece_boundaries() const {
    if (w_ <= 0.0) return {};
    return {w_, length_ - w_};
}

RimCurve::Point RimCurve::at(double l) const {
    l = std::clamp(l, 0.0, length_);
    int cells = static_cast<int>(grid_l_.size()) - 1;
    int k = std::min(static_cast<int>(l / length_ * cells), cells - 1);
    double a = grid_l_[k];
    Point p;
    p.theta = theta_at(l);
    p.kappa = (w_ <= 0.0) ? kappa0_
              : (l <= w_) ? kappa0_ * l / w_
              : (l >= length_ - w_) ? kappa0_ * (length_ - l) / w_
                                    : kappa0_;
    p.s = grid_s_[k] + integrate_gl([&](double t) { return std::cos(theta_at(t)); }, a, l, 8);
    p.y = grid_y_[k] - integrate_gl([&](double t) { return std::sin(theta_at(t)); }, a, l, 8);
    return p;
}

double RimCurve::l_of_theta(double theta) const {
    theta = std::clamp(theta, 0.0, 0.5 * M_PI);
    if (w_ <= 0.0) return theta / kappa0_;
    double lo = 0.0, hi = length_;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (theta_at(mid) < theta ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double RimCurve::l_of_s(double s) const {
    s = std::clamp(s, s0_, 0.5);
    auto it = std::lower_bound(grid_s_.begin(), grid_s_.end(), s);
    int hi_idx = static_cast<int>(it - grid_s_.begin());
    double lo = hi_idx == 0 ? 0.0 : grid_l_[hi_idx - 1];
    double hi = hi_idx == 0 ? 0.0 : grid_l_[hi_idx];
    for (int itn = 0; itn < 80; ++itn) {
        double mid = 0.5 * (lo + hi);
        (at(mid).s < s ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// profile evaluation

ProfilePoint profile_eval(const ProfileGeometry& geom, double s) {
    geom.validate();
    if (s < 0.0 || s > 0.5)
        throw std::domain_error("profile_eval: s outside [0, 1/2]");
    auto rim = RimCurve::get(geom.tau, geom.smoothing);
    ProfilePoint out;
    if (s <= rim->plateau_radius()) {
        out.f = 0.5 * geom.tau;
        out.f_prime = 0.0;
        out.curvature = 0.0;
        return out;
    }
    double l = rim->l_of_s(s);
    auto p = rim->at(l);
    out.f = p.y;
    out.f_prime = (p.theta >= 0.5 * M_PI) ? -std::numeric_limits<double>::infinity()
                                          : -std::tan(p.theta);
    out.curvature = p.kappa;
    return out;
}

double curvature_bound(const ProfileGeometry& geom) {
    auto rim = RimCurve::get(geom.tau, geom.smoothing);
    // rotational curvatures are at most 1/plateau_radius <= 4
    return rim->peak_curvature() + 4.0 * (geom.n - 1);
}

// ---------------------------------------------------------------------------
// surface integrals

namespace {

struct SurfaceParts {
    std::shared_ptr<const RimCurve> rim;
    double plateau_area;  // both sheets
    double cylinder_area; // rim cylinder at radius 1/2, heights [-tau/4, tau/4]
    double cyl_mean_curv; // |H| on the cylinder
    int n;
    double ring; // n * omega_n, the S^{n-1} factor
};

SurfaceParts make_parts(const ProfileGeometry& geom) {
    geom.validate();
    SurfaceParts sp;
    sp.rim = RimCurve::get(geom.tau, geom.smoothing);
    sp.n = geom.n;
    sp.ring = unit_sphere_area(geom.n);
    sp.plateau_area = 2.0 * unit_ball_volume(geom.n) *
                      std::pow(sp.rim->plateau_radius(), geom.n);
    sp.cylinder_area = sp.ring * std::pow(0.5, geom.n - 1) * (0.5 * geom.tau);
    sp.cyl_mean_curv = 2.0 * (geom.n - 1);
    return sp;
}

// integral over both rim sheets of g(point) * area element; split at the
// curvature-ramp joints, where the integrand is only piecewise smooth
double rim_integral(const SurfaceParts& sp, const QuadratureOptions& opts,
                    const std::function<double(const RimCurve::Point&)>& g,
                    double l_lo = 0.0, double l_hi = -1.0) {
    const double L = sp.rim->length();
    if (l_hi < 0.0) l_hi = L;
    if (l_hi <= l_lo) return 0.0;
    auto f = [&](double l) {
        auto p = sp.rim->at(l);
        return g(p) * std::pow(p.s, sp.n - 1);
    };
    std::vector<double> cuts = {l_lo};
    for (double c : sp.rim->piece_boundaries())
        if (c > l_lo + 1e-15 && c < l_hi - 1e-15) cuts.push_back(c);
    cuts.push_back(l_hi);
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t)
        total += integrate_de(f, cuts[t], cuts[t + 1], opts.de_max_level, opts.de_rel_tol);
    return 2.0 * sp.ring * total;
}

struct MemoKey {
    double tau, smoothing, p, q, threshold;
    int n, norm, de_level, gl_order;
    double de_tol;
    bool operator<(const MemoKey& o) const {
        return std::tie(tau, smoothing, p, q, threshold, n, norm, de_level, gl_order, de_tol) <
               std::tie(o.tau, o.smoothing, o.p, o.q, o.threshold, o.n, o.norm, o.de_level,
                        o.gl_order, o.de_tol);
    }
};

} // namespace

UnitSurfaceIntegrals unit_integrals(const ProfileGeometry& geom, double p, double q,
                                    PlaneNorm norm, double threshold,
                                    const QuadratureOptions& opts) {
    if (p < 1.0 || q < 1.0)
        throw contract_error("unit_integrals: exponents must be >= 1");
    geom.validate();

    static std::mutex mu;
    static std::map<MemoKey, UnitSurfaceIntegrals> cache;
    MemoKey key{geom.tau, geom.smoothing, p,           q,
                threshold, geom.n,        static_cast<int>(norm),
                opts.de_max_level, opts.gl_order, opts.de_rel_tol};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    SurfaceParts sp = make_parts(geom);
    const double tilt_scale = plane_norm_scale(norm);
    UnitSurfaceIntegrals out;
    out.p = p;
    out.q = q;
    out.threshold = threshold;
    out.norm = norm;

    double rim_area = rim_integral(sp, opts, [](const RimCurve::Point&) { return 1.0; });
    out.mass = sp.plateau_area + rim_area + sp.cylinder_area;
    out.nonflat_mass = rim_area + sp.cylinder_area;

    out.curvature_moment =
        rim_integral(sp, opts,
                     [&](const RimCurve::Point& pt) {
                         double h = pt.kappa + (sp.n - 1) * std::sin(pt.theta) / pt.s;
                         return std::pow(h, p);
                     }) +
        sp.cylinder_area * std::pow(sp.cyl_mean_curv, p);

    out.tilt_moment =
        rim_integral(sp, opts,
                     [&](const RimCurve::Point& pt) {
                         return std::pow(tilt_scale * std::sin(pt.theta), q);
                     }) +
        sp.cylinder_area * std::pow(tilt_scale, q);

    if (threshold <= 0.0) {
        out.tilt_superlevel = out.mass;
    } else if (threshold > tilt_scale) {
        out.tilt_superlevel = 0.0;
    } else {
        double l_t = sp.rim->l_of_theta(std::asin(threshold / tilt_scale));
        out.tilt_superlevel =
            rim_integral(sp, opts, [](const RimCurve::Point&) { return 1.0; }, l_t) +
            sp.cylinder_area;
    }

    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, out);
    return out;
}

double height_moment(const ProfileGeometry& geom, double q, double y_center,
                     double scale, const QuadratureOptions& opts) {
    geom.validate();
    if (q < 0.0) throw contract_error("height_moment: q must be >= 0");
    if (!(scale > 0.0)) throw contract_error("height_moment: scale must be > 0");
    if (y_center < scale * 0.5 * geom.tau - 1e-15 * scale)
        throw contract_error("height_moment: y_center must be >= scale*tau/2");

    SurfaceParts sp = make_parts(geom);
    double half = 0.5 * sp.plateau_area;
    double top = y_center + scale * 0.5 * geom.tau;
    double bot = std::fabs(y_center - scale * 0.5 * geom.tau);
    double plateau = half * (std::pow(top, q) + std::pow(bot, q));

    double rim = rim_integral(sp, opts, [&](const RimCurve::Point& pt) {
        return 0.5 * (std::pow(y_center + scale * pt.y, q) +
                      std::pow(std::fabs(y_center - scale * pt.y), q));
    });

    double cyl_half = 0.25 * geom.tau;
    double cyl = sp.ring * std::pow(0.5, sp.n - 1) *
                 integrate_de(
                     [&](double y) {
                         return std::pow(std::fabs(y_center + scale * y), q);
                     },
                     -cyl_half, cyl_half, opts.de_max_level, opts.de_rel_tol);

    return plateau + rim + cyl;
}

} // namespace vfl
