#pragma once

#include <vector>

#include "vfl/profile.hpp"
#include "vfl/varifold.hpp"

namespace vfl {

struct IsoResult {
    double mass = 0.0;         // mu(total)
    double variation = 0.0;    // ||delta mu||(total)
    double density_mass = 0.0; // mu({theta >= 1})
    double quotient = 0.0;     // density_mass / (mass^(1/n) * variation)
};

// Quotient of the varifold isoperimetric inequality; the total variation is
// the |H| mass plus the stored singular boundary part.
IsoResult iso_quotient(const DiscreteVarifold& v);

// Same quotient along the closed-form quadrature path for the revolved
// surface family (no sample cloud involved).
IsoResult iso_quotient_revolved(const ProfileGeometry& geom,
                                const QuadratureOptions& opts = {});

// Lower bound omega_n^(-1/n)/n attained by the Lebesgue ball.
double lebesgue_ball_quotient(int n);

struct GoodPointRow {
    double radius = 0.0;
    double variation = 0.0;     // ||delta mu||(closed ball)
    double mass = 0.0;          // mu(closed ball)
    bool hypothesis = false;    // variation <= (2 gamma)^-1 mass^(1-1/n)
    bool chain = false;         // hypothesis holds at every scanned radius below
    double conclusion_margin = 0.0; // mass / ((2 n gamma)^-n rho^n)
};

struct GoodPointReport {
    std::vector<GoodPointRow> rows; // ascending radii
    double first_failing_radius = 0.0; // 0 if the hypothesis never fails
    bool conclusion_holds_on_chain = true;
};

// Scans dyadic radii r_max * 2^-t and checks the density lower bound
// mu(B(a, rho)) >= (2 n gamma)^-n rho^n wherever the hypothesis chain holds
// from the smallest scanned radius up.
GoodPointReport good_point_check(const DiscreteVarifold& v, const Vec& a, double r_max,
                                 double gamma, int steps = 12);

enum class LemmaVerdict { holds, fails, hypotheses_not_established };

// Conclusion mu(B(a, r)) >= (1 - delta) omega_n r^n under the good-point
// chain plus the epsilon-smallness of the variation at scale r.
LemmaVerdict density_lower_bound_check(const DiscreteVarifold& v, const Vec& a, double r,
                                       double epsilon, double delta, double gamma);

struct SweepRow {
    double tau = 0.0;
    double mass = 0.0;
    double variation = 0.0;
    double quotient = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double max_quotient = 0.0;
    double ball_quotient = 0.0; // omega_n^(-1/n)/n for comparison
};

// Quotients of the closed revolved surfaces over a tau grid; gathered as
// numerical evidence only, never asserted as a bound for gamma_n.
SweepResult profile_sweep(const std::vector<double>& tau_grid, int n,
                          const QuadratureOptions& opts = {}, bool parallel = true);

} // namespace vfl
