#pragma once

#include <memory>
#include <vector>

#include "vfl/errors.hpp"
#include "vfl/geometry.hpp"

namespace vfl {

// Norm used on projection-operator differences |P_S - P_T|. For hyperplanes
// with normal angle theta: frobenius = sqrt(2)*sin(theta), operator_norm =
// sin(theta). The fitted exponents do not depend on the choice.
enum class PlaneNorm { frobenius, operator_norm };

double plane_norm_scale(PlaneNorm norm); // sqrt(2) resp. 1

// Unit-scale bump surface: a closed hypersurface of revolution about the
// first axis inside the cube of half-width 1/2. Two flat plateaus at heights
// +-tau/2 of radius 1/2 - tau/4, joined to a rim cylinder at radius 1/2
// (heights [-tau/4, tau/4]) by quarter-turn arcs of radius tau/4. The profile
// is concave and C^{1,1}; a positive `smoothing` replaces the curvature jumps
// at the arc ends by linear ramps of that arc length (curvature becomes
// continuous, peak curvature slightly above 4/tau).
struct ProfileGeometry {
    double tau = 0.25; // neck parameter in (0, 1]
    int n = 2;         // surface dimension, >= 2
    double smoothing = 0.0;

    void validate() const;
};

struct ProfilePoint {
    double f;         // profile height
    double f_prime;   // df/ds (-inf at the vertical tangent s = 1/2)
    double curvature; // curve curvature of the generatrix (0 plateau, 4/tau arc)
};

// Evaluate the generatrix graph over s in [0, 1/2].
ProfilePoint profile_eval(const ProfileGeometry& geom, double s);

struct QuadratureOptions {
    int de_max_level = 10;
    double de_rel_tol = 1e-13;
    int gl_order = 24;
};

struct UnitSurfaceIntegrals {
    double mass = 0.0;             // A(tau) = H^n(M)
    double curvature_moment = 0.0; // B_p(tau) = integral |H|^p
    double tilt_moment = 0.0;      // C_q(tau) = integral |P_S - P_T|^q
    double tilt_superlevel = 0.0;  // H^n{ tilt >= threshold }
    double nonflat_mass = 0.0;     // H^n{ H != 0 or T_x != T } (arcs + cylinder)
    double p = 1.0, q = 2.0, threshold = 1.0;
    PlaneNorm norm = PlaneNorm::frobenius;
};

// All surface integrals reduced to one-dimensional quadrature: plateau and
// cylinder in closed form, the arcs by arc length (bounded integrands at the
// vertical tangent). Results are memoised behind an internal mutex keyed by
// the full argument list.
UnitSurfaceIntegrals unit_integrals(const ProfileGeometry& geom, double p, double q,
                                    PlaneNorm norm = PlaneNorm::frobenius,
                                    double threshold = 1.0,
                                    const QuadratureOptions& opts = {});

// integral over the unit surface of |y_center + scale*y|^q dH^n(y, z);
// the per-cell factor of a height integral after placement (the caller
// supplies the H^n scaling of the placed copy).
double height_moment(const ProfileGeometry& geom, double q, double y_center,
                     double scale, const QuadratureOptions& opts = {});

// Explicit implementation constants (this artifact's, not literature values):
// |H| <= curvature_bound everywhere on the unit surface with smoothing 0.
double curvature_bound(const ProfileGeometry& geom);

// Generatrix arc from the plateau edge (theta = 0) to the rim (theta = pi/2),
// parametrised by arc length. Shared by quadrature, sampling and meshing.
class RimCurve {
public:
    static std::shared_ptr<const RimCurve> get(double tau, double smoothing);

    double length() const { return length_; }
    double peak_curvature() const { return kappa0_; }
    double plateau_radius() const { return s0_; }

    struct Point {
        double s;     // radial coordinate
        double y;     // height (top sheet), in [tau/4, tau/2]
        double theta; // turn angle in [0, pi/2]
        double kappa; // curvature at l
    };
    Point at(double l) const;

    double theta_at(double l) const;
    // arc-length positions of the curvature-ramp joints (empty when the
    // smoothing width is zero)
    std::vector<double> piece_boundaries() const;
    // inverse of the (monotone) turn angle
    double l_of_theta(double theta) const;
    // inverse of the (monotone) radial coordinate, s in [s0, 1/2]
    double l_of_s(double s) const;

private:
    RimCurve(double tau, double smoothing);

    double tau_, w_, kappa0_, length_, s0_;
    std::vector<double> grid_l_, grid_s_, grid_y_;
};

} // namespace vfl
