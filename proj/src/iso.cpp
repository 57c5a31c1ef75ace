#include "vfl/iso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vfl/parallel.hpp"

namespace vfl {

double lebesgue_ball_quotient(int n) {
    return std::pow(unit_ball_volume(n), -1.0 / n) / n;
}

IsoResult iso_quotient(const DiscreteVarifold& v) {
    IsoResult out;
    out.mass = v.total_mass();
    for (const auto& s : v.samples()) out.variation += s.weight * norm(s.mean_curvature);
    out.variation += v.boundary_variation();
    for (const auto& s : v.samples())
        if (s.density >= 1.0 - 1e-12) out.density_mass += s.weight;
    if (!(out.mass > 0.0) || !(out.variation > 0.0))
        throw degenerate_error("iso_quotient: zero mass or zero variation");
    out.quotient = out.density_mass / (std::pow(out.mass, 1.0 / v.n()) * out.variation);
    return out;
}

IsoResult iso_quotient_revolved(const ProfileGeometry& geom, const QuadratureOptions& opts) {
    UnitSurfaceIntegrals u = unit_integrals(geom, 1.0, 2.0, PlaneNorm::frobenius, 1.0, opts);
    IsoResult out;
    out.mass = u.mass;
    out.variation = u.curvature_moment; // p = 1, closed surface
    out.density_mass = u.mass;
    if (!(out.mass > 0.0) || !(out.variation > 0.0))
        throw degenerate_error("iso_quotient_revolved: degenerate surface");
    out.quotient = out.density_mass / (std::pow(out.mass, 1.0 / geom.n) * out.variation);
    return out;
}

namespace {

double variation_in(const DiscreteVarifold& v, const Region& region) {
    double s = 0.0;
    for (const auto& smp : v.samples())
        if (region.contains(smp.position)) s += smp.weight * norm(smp.mean_curvature);
    for (const auto& b : v.boundary())
        if (region.contains(b.position)) s += b.weight;
    return s;
}

bool on_support(const DiscreteVarifold& v, const Vec& a) {
    // sample resolution limits how precisely the support is known
    double best = std::numeric_limits<double>::infinity();
    double wsum = 0.0;
    int count = 0;
    for (const auto& smp : v.samples()) {
        Vec d = smp.position - a;
        best = std::min(best, norm(d));
        wsum += smp.weight;
        ++count;
    }
    if (count == 0) return false;
    double mean_spacing = std::pow(wsum / count, 1.0 / v.n());
    return best <= 4.0 * mean_spacing;
}

} // namespace

GoodPointReport good_point_check(const DiscreteVarifold& v, const Vec& a, double r_max,
                                 double gamma, int steps) {
    if (!(r_max > 0.0) || !(gamma > 0.0))
        throw contract_error("good_point_check: need r_max > 0 and gamma > 0");
    if (!on_support(v, a)) throw contract_error("good_point_check: point not on the support");
    const int n = v.n();
    GoodPointReport report;
    for (int t = steps - 1; t >= 0; --t) {
        double rho = r_max * std::exp2(-t);
        Region ball = Region::ball(a, rho);
        GoodPointRow row;
        row.radius = rho;
        row.mass = mass_in(v, ball);
        row.variation = variation_in(v, ball);
        row.hypothesis =
            row.variation <= std::pow(2.0 * gamma, -1.0) * std::pow(row.mass, 1.0 - 1.0 / n);
        row.conclusion_margin =
            row.mass / (std::pow(2.0 * n * gamma, -double(n)) * std::pow(rho, n));
        report.rows.push_back(row);
    }
    bool chain = true;
    for (auto& row : report.rows) { // ascending radii
        chain = chain && row.hypothesis;
        row.chain = chain;
        if (!row.hypothesis && report.first_failing_radius == 0.0)
            report.first_failing_radius = row.radius;
        if (row.chain && row.conclusion_margin < 1.0)
            report.conclusion_holds_on_chain = false;
    }
    return report;
}

LemmaVerdict density_lower_bound_check(const DiscreteVarifold& v, const Vec& a, double r,
                                       double epsilon, double delta, double gamma) {
    if (!on_support(v, a)) return LemmaVerdict::hypotheses_not_established;
    const int n = v.n();
    GoodPointReport gp = good_point_check(v, a, r, gamma);
    for (const auto& row : gp.rows)
        if (!row.hypothesis) return LemmaVerdict::hypotheses_not_established;
    Region ball = Region::ball(a, r);
    double variation = variation_in(v, ball);
    double mass = mass_in(v, ball);
    if (!(variation <= epsilon * std::pow(mass, 1.0 - 1.0 / n)))
        return LemmaVerdict::hypotheses_not_established;
    double floor = (1.0 - delta) * unit_ball_volume(n) * std::pow(r, n);
    return mass >= floor ? LemmaVerdict::holds : LemmaVerdict::fails;
}

SweepResult profile_sweep(const std::vector<double>& tau_grid, int n,
                          const QuadratureOptions& opts, bool parallel) {
    SweepResult result;
    result.rows.resize(tau_grid.size());
    auto body = [&](std::size_t t) {
        ProfileGeometry geom{tau_grid[t], n, 0.0};
        IsoResult iso = iso_quotient_revolved(geom, opts);
        result.rows[t] = {tau_grid[t], iso.mass, iso.variation, iso.quotient};
    };
    if (parallel)
        parallel_for(tau_grid.size(), body);
    else
        serial_for(tau_grid.size(), body);
    result.max_quotient = 0.0;
    for (const auto& row : result.rows) result.max_quotient = std::max(result.max_quotient, row.quotient);
    result.ball_quotient = lebesgue_ball_quotient(n);
    return result;
}

} // namespace vfl
