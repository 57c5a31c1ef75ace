#include "vfl/sampling.hpp"

#include <cmath>

#include "vfl/parallel.hpp"

namespace vfl {

Vec Rng::direction(int dim) {
    Vec v(dim);
    for (int i = 0; i < dim; i += 2) {
        double u1 = uniform(), u2 = uniform();
        u1 = std::max(u1, 1e-300);
        double r = std::sqrt(-2.0 * std::log(u1));
        v[i] = r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < dim) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    double n = norm(v);
    if (n == 0.0) {
        v[0] = 1.0;
        return v;
    }
    v *= 1.0 / n;
    return v;
}

namespace {

struct StratumSplit {
    std::int64_t plateau, rim, cyl;
};

StratumSplit split_count(const ProfileGeometry& geom, const RimCurve& rim,
                         std::int64_t count) {
    const int n = geom.n;
    const double ring = unit_sphere_area(n);
    double a_plateau = 2.0 * unit_ball_volume(n) * std::pow(rim.plateau_radius(), n);
    // crude rim area bound is fine for allocation; exact split is not needed
    double a_rim = 2.0 * ring * rim.length() * std::pow(0.5, n - 1);
    double a_cyl = ring * std::pow(0.5, n - 1) * 0.5 * geom.tau;
    double total = a_plateau + a_rim + a_cyl;
    StratumSplit sp;
    sp.plateau = std::max<std::int64_t>(1, std::llround(count * a_plateau / total));
    sp.rim = std::max<std::int64_t>(1, std::llround(count * a_rim / total));
    sp.cyl = std::max<std::int64_t>(1, count - sp.plateau - sp.rim);
    return sp;
}

Vec embed(double y, double s, const Vec& dir) {
    Vec x(dir.dim() + 1);
    x[0] = y;
    for (int i = 0; i < dir.dim(); ++i) x[i + 1] = s * dir[i];
    return x;
}

} // namespace

SurfaceSample generate_sample(const ProfileGeometry& geom, const RimCurve& rim,
                              std::int64_t index, std::int64_t n_plateau,
                              std::int64_t n_rim, std::int64_t n_cyl,
                              std::uint64_t seed) {
    const int n = geom.n;
    const double ring = unit_sphere_area(n);
    SurfaceSample out;

    if (index < n_plateau) {
        Rng rng = Rng::at(seed, 0, static_cast<std::uint64_t>(index));
        double u = (index + rng.uniform()) / n_plateau; // stratified in area
        double s = rim.plateau_radius() * std::pow(u, 1.0 / n);
        Vec dir = rng.direction(n);
        double sign = rng.coin() ? 1.0 : -1.0;
        out.position = embed(sign * 0.5 * geom.tau, s, dir);
        out.normal = Vec(n + 1);
        out.normal[0] = sign;
        out.mean_curvature = Vec(n + 1);
        out.weight = 2.0 * unit_ball_volume(n) * std::pow(rim.plateau_radius(), n) /
                     n_plateau;
        out.stratum = 0;
        return out;
    }
    if (index < n_plateau + n_rim) {
        std::int64_t k = index - n_plateau;
        Rng rng = Rng::at(seed, 1, static_cast<std::uint64_t>(k));
        double l = rim.length() * (k + rng.uniform()) / n_rim; // stratified in l
        auto pt = rim.at(l);
        Vec dir = rng.direction(n);
        double sign = rng.coin() ? 1.0 : -1.0;
        out.position = embed(sign * pt.y, pt.s, dir);
        double h = pt.kappa + (n - 1) * std::sin(pt.theta) / pt.s;
        out.normal = embed(sign * std::cos(pt.theta), std::sin(pt.theta), dir);
        out.mean_curvature = out.normal;
        out.mean_curvature *= -h;
        // density 1/L in l; both sheets carried by the weight, sheet by sign
        out.weight = 2.0 * ring * std::pow(pt.s, n - 1) * rim.length() / n_rim;
        out.stratum = 1;
        return out;
    }
    std::int64_t k = index - n_plateau - n_rim;
    Rng rng = Rng::at(seed, 2, static_cast<std::uint64_t>(k));
    double y = 0.25 * geom.tau * (2.0 * (k + rng.uniform()) / n_cyl - 1.0);
    Vec dir = rng.direction(n);
    out.position = embed(y, 0.5, dir);
    out.normal = embed(0.0, 1.0, dir);
    double h = 2.0 * (n - 1);
    out.mean_curvature = out.normal;
    out.mean_curvature *= -h;
    out.weight = ring * std::pow(0.5, n - 1) * 0.5 * geom.tau / n_cyl;
    out.stratum = 2;
    return out;
}

std::vector<SurfaceSample> sample_surface(const ProfileGeometry& geom, std::int64_t count,
                                          std::uint64_t seed) {
    geom.validate();
    if (count < 1) throw contract_error("sample_surface: count must be >= 1");
    auto rim = RimCurve::get(geom.tau, geom.smoothing);
    StratumSplit sp = split_count(geom, *rim, count);
    std::int64_t total = sp.plateau + sp.rim + sp.cyl;
    std::vector<SurfaceSample> out(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i)
        out[static_cast<std::size_t>(i)] =
            generate_sample(geom, *rim, i, sp.plateau, sp.rim, sp.cyl, seed);
    return out;
}

McSurfaceResult mc_surface_integrals(const ProfileGeometry& geom, std::int64_t count,
                                     std::uint64_t seed, double p, double q,
                                     PlaneNorm norm_kind, bool parallel) {
    geom.validate();
    auto rim = RimCurve::get(geom.tau, geom.smoothing);
    StratumSplit sp = split_count(geom, *rim, count);
    const std::int64_t total = sp.plateau + sp.rim + sp.cyl;
    const double tilt_scale = plane_norm_scale(norm_kind);

    constexpr std::int64_t kBlock = 4096;
    const std::size_t blocks = static_cast<std::size_t>((total + kBlock - 1) / kBlock);

    struct Acc {
        double s[4] = {0, 0, 0, 0};  // mass, |H|^p, tilt^q, y
        double s2[4] = {0, 0, 0, 0}; // squares for the error estimate
    };
    std::vector<Acc> acc(blocks);

    auto body = [&](std::size_t b) {
        std::int64_t lo = static_cast<std::int64_t>(b) * kBlock;
        std::int64_t hi = std::min(total, lo + kBlock);
        Acc a;
        for (std::int64_t i = lo; i < hi; ++i) {
            SurfaceSample smp = generate_sample(geom, *rim, i, sp.plateau, sp.rim, sp.cyl, seed);
            double habs = norm(smp.mean_curvature);
            double sin_t = std::sqrt(std::max(0.0, 1.0 - smp.normal[0] * smp.normal[0]));
            double v[4] = {smp.weight, smp.weight * std::pow(habs, p),
                           smp.weight * std::pow(tilt_scale * sin_t, q),
                           smp.weight * smp.position[0]};
            for (int t = 0; t < 4; ++t) {
                a.s[t] += v[t];
                a.s2[t] += v[t] * v[t];
            }
        }
        acc[b] = a;
    };
    if (parallel)
        parallel_for(blocks, body);
    else
        serial_for(blocks, body);

    double sum[4] = {0, 0, 0, 0}, sum2[4] = {0, 0, 0, 0};
    for (const Acc& a : acc)
        for (int t = 0; t < 4; ++t) {
            sum[t] += a.s[t];
            sum2[t] += a.s2[t];
        }

    auto est = [&](int t) {
        McEstimate e;
        e.value = sum[t];
        double var = std::max(0.0, sum2[t] - sum[t] * sum[t] / total);
        e.std_error = std::sqrt(var) * std::sqrt(double(total) / std::max<std::int64_t>(1, total - 1));
        return e;
    };
    McSurfaceResult r;
    r.mass = est(0);
    r.curvature_moment = est(1);
    r.tilt_moment = est(2);
    r.mean_height = est(3);
    r.count = total;
    return r;
}

} // namespace vfl
