#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vfl/geometry.hpp"
#include "vfl/profile.hpp"

namespace vfl {

// Unoriented n-plane in R^(n+m): a unit normal when m = 1, an orthonormal
// basis otherwise (m = 0 means the full space).
class TangentPlane {
public:
    static TangentPlane hyperplane(const Vec& normal); // m = 1
    static TangentPlane full_space(int dim);           // m = 0
    static TangentPlane span(std::vector<Vec> basis, int ambient);

    int ambient() const { return ambient_; }
    int plane_dim() const { return plane_dim_; }
    bool is_hyperplane() const { return !normal_.has_value() ? false : true; }
    const Vec& normal() const; // only when m = 1
    const std::vector<Vec>& basis() const { return basis_; }

    Vec project(const Vec& x) const;
    // trace of D eta restricted to the plane, from the ambient Jacobian
    // supplied column-wise: jac[c][r] = d eta_r / d x_c
    double tangential_divergence(const std::vector<Vec>& jac) const;

private:
    int ambient_ = 0;
    int plane_dim_ = 0;
    std::optional<Vec> normal_;
    std::vector<Vec> basis_; // orthonormal; empty for hyperplanes until asked
};

// |P_S - P_T| in the requested norm; for hyperplanes frobenius equals
// sqrt(2)*sin(theta) and operator_norm equals sin(theta) where theta is the
// normal angle.
double plane_distance(const TangentPlane& S, const TangentPlane& T, PlaneNorm norm);

struct VarifoldSample {
    Vec position;
    TangentPlane plane;
    double weight = 0.0;        // H^n quadrature weight, > 0
    Vec mean_curvature;         // vector, 1/length units
    double density = 1.0;       // theta^n >= 1 on the support by convention
};

// Singular part of the first variation (boundary-type mass) for shapes whose
// delta mu is not representable by a mean curvature alone (p = 1 only).
struct BoundarySample {
    Vec position;
    double weight = 0.0; // H^(n-1) quadrature weight
    Vec conormal;        // outward unit conormal
};

// Reference to an exactly-known revolved patch: the unit surface with the
// given neck ratio, scaled and placed. Carried for reproducible pipelines;
// the sample arrays remain the operational representation.
struct PatchDescriptor {
    double tau = 0.25;
    int n = 2;
    double smoothing = 0.0;
    Vec center; // ambient placement of the unit-surface origin
    double scale = 1.0;
};

// Compactly supported C^1 test field given as value and Jacobian callbacks;
// jacobian(x)[c] is the derivative of eta along coordinate c.
struct TestField {
    std::function<Vec(const Vec&)> value;
    std::function<std::vector<Vec>(const Vec&)> jacobian;
};

class DiscreteVarifold {
public:
    DiscreteVarifold(int n, int m, double p);

    int n() const { return n_; }
    int m() const { return m_; }
    int ambient() const { return n_ + m_; }
    double p() const { return p_; }

    void add_sample(VarifoldSample s);
    void add_boundary(BoundarySample b);
    void add_patch(PatchDescriptor patch);
    void finalize(); // freezes the object; operations require it

    const std::vector<VarifoldSample>& samples() const { return samples_; }
    const std::vector<BoundarySample>& boundary() const { return boundary_; }
    const std::vector<PatchDescriptor>& patches() const { return patches_; }

    double total_mass() const { return total_mass_; }
    double boundary_variation() const { return boundary_variation_; }

    // Closed-form region mass where the shape admits one (canonical shapes);
    // nullopt falls back to the sample sum. Survives dilation/translation.
    using ExactMassFn = std::function<std::optional<double>(const Region&)>;
    void set_exact_mass(ExactMassFn fn) { exact_mass_ = std::move(fn); }
    const ExactMassFn& exact_mass() const { return exact_mass_; }

private:
    int n_, m_;
    double p_;
    bool finalized_ = false;
    double total_mass_ = 0.0;
    double boundary_variation_ = 0.0;
    std::vector<VarifoldSample> samples_;
    std::vector<BoundarySample> boundary_;
    std::vector<PatchDescriptor> patches_;
    ExactMassFn exact_mass_;

    friend DiscreteVarifold dilated(const DiscreteVarifold& v, double factor);
    friend DiscreteVarifold translated(const DiscreteVarifold& v, const Vec& shift);
};

enum class CanonicalKind { sphere, flat_disk, lebesgue_ball, plane_window };

struct CanonicalParams {
    int n = 2;
    double radius = 1.0;      // radius resp. window half-width
    int resolution = 64;      // quadrature resolution per direction
    double p = 1.0;
};

// sphere: |H| = n/r, closed; flat_disk: H = 0 with boundary variation
// H^(n-1)(boundary); lebesgue_ball: m = 0 with ||delta mu|| = n*omega_n*r^(n-1)
// on the boundary sphere; plane_window: flat patch with zero first variation.
DiscreteVarifold make_canonical(CanonicalKind kind, const CanonicalParams& params);

// Midpoint-rule discretisation of the unit revolved surface (n = 2 only),
// used by the first-variation order tests.
DiscreteVarifold make_revolved_varifold(const ProfileGeometry& geom, int resolution,
                                        double p = 1.0);

double mass_in(const DiscreteVarifold& v, const Region& region);

// (delta mu)(eta) = integral of the tangential divergence of eta
double first_variation(const DiscreteVarifold& v, const TestField& eta);

// integral of -H . eta dmu plus the boundary pairing; for sanity checks of
// the integration-by-parts identity
double curvature_pairing(const DiscreteVarifold& v, const TestField& eta);

// psi(region): total variation ||delta mu|| if p = 1, integral of |H|^p else
double curvature_measure(const DiscreteVarifold& v, const Region& region);

enum class ExcessKind { height, tilt };

double excess(const DiscreteVarifold& v, const Region& region, const TangentPlane& plane,
              double q, ExcessKind kind, PlaneNorm norm = PlaneNorm::frobenius);

double density_ratio(const DiscreteVarifold& v, const Vec& x, double rho);

double fint_average(const DiscreteVarifold& v, const Region& region,
                    const std::function<double(const VarifoldSample&)>& f);

DiscreteVarifold dilated(const DiscreteVarifold& v, double factor);
DiscreteVarifold translated(const DiscreteVarifold& v, const Vec& shift);

// Documented JSON layout (ambient dims, p, sample arrays, boundary arrays)
// for reproducible pipelines.
std::string to_json(const DiscreteVarifold& v);
DiscreteVarifold varifold_from_json(const std::string& text);

} // namespace vfl
