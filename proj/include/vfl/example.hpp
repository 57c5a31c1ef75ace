#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "vfl/dyadic.hpp"
#include "vfl/profile.hpp"
#include "vfl/sampling.hpp"

namespace vfl {

// Parameters of the multiscale construction: a plane T = {0} x R^n plus one
// bump surface per slab cell, with per-level scales rho_j = 2^(-ja-2) and
// sigma_j = 2^(-jba-2).
struct ExampleConfig {
    int n = 2;
    double p = 1.0;
    double alpha1 = 1.0, q1 = 3.0;
    double alpha2 = 1.0, q2 = 3.0;
    Dyadic window_half_width{1, 0};
    int max_level = 18; // truncation J
    std::optional<double> weight_s; // weight-function exponents, both or none
    std::optional<double> weight_r;
    double smoothing = 0.0;
    QuadratureOptions quad;

    double kappa1() const { return alpha1 * q1; }
    double kappa2() const { return alpha2 * q2; }
};

struct DerivedScales {
    int n = 2;
    double a = 0.0; // alpha2*q2/n + 1
    double b = 0.0; // (alpha1*q1 - alpha2*q2)/a + 1
    int max_level = 0;

    double rho(int j) const { return std::exp2(-j * a - 2.0); }
    double sigma(int j) const { return std::exp2(-j * b * a - 2.0); }
    double tau(int j) const { return std::exp2(-j * a * (b - 1.0)); }
    double cell_scale(int j) const { return 2.0 * rho(j); } // unit half-width 1/2 -> rho_j
    double y_center(int j) const { return 3.0 * std::exp2(-j - 2.0); }
};

// Validates the config inequalities (errors name the violated constraint)
// and computes the scales.
DerivedScales derive_parameters(const ExampleConfig& config);

// f = 2^((na-s)j) on level-j cells; f = 0 on the plane T.
double weight_value(const DerivedScales& scales, int level, double s);
inline double weight_on_plane() { return 0.0; }

// Consecutive-level mass ratio 2^(n(1-a)) of the aggregates.
double tail_ratio(const DerivedScales& scales);

struct LevelAggregate {
    int level = 0;
    std::int64_t cell_count = 0; // centers in the half-open window (exact tiling count)
    double cell_scale = 0.0;
    double y_center = 0.0;
    double tau = 0.0;
    UnitSurfaceIntegrals unit; // at tau_j with the config's p, q1
    double cell_mass = 0.0;       // scale^n * A(tau_j)
    double cell_curvature = 0.0;  // scale^(n-p) * B_p(tau_j)
    double cell_tilt = 0.0;       // scale^n * C_q1(tau_j), frobenius
    double cell_height = 0.0;     // scale^n * height moment at q2
    double weight = 1.0;          // weight-function value on the level
};

class ExampleVarifold {
public:
    const ExampleConfig& config() const { return config_; }
    const DerivedScales& scales() const { return scales_; }
    const std::vector<LevelAggregate>& levels() const { return levels_; }
    const LevelAggregate& level(int j) const { return levels_.at(static_cast<std::size_t>(j)); }
    int max_level() const { return scales_.max_level; }

    double plane_mass_in_window() const { return plane_mass_; }
    // total bump mass over the window, all built levels
    double bump_mass_in_window() const;

    // fixed unit-surface sample cloud per level (clouds are shared between
    // levels with equal tau); used by ball-window estimates
    std::shared_ptr<const std::vector<SurfaceSample>> unit_cloud(int level) const;
    std::uint64_t cloud_seed() const { return cloud_seed_; }
    int cloud_size() const { return cloud_size_; }
    void set_cloud(std::uint64_t seed, int size);

private:
    friend ExampleVarifold build_example(const ExampleConfig&, bool);
    ExampleConfig config_;
    DerivedScales scales_;
    std::vector<LevelAggregate> levels_;
    double plane_mass_ = 0.0;
    std::uint64_t cloud_seed_ = 0x5eed;
    int cloud_size_ = 2048;
    struct CloudCache;
    std::shared_ptr<CloudCache> clouds_;
};

// Assembles the per-level aggregates via exact window tiling counts and the
// unit-surface quadrature. The aggregate path is the source of all reported
// numbers; sample clouds are an oracle on top of it.
ExampleVarifold build_example(const ExampleConfig& config, bool parallel = true);

// Upper bound for the relative contribution of the omitted levels > J to
// mu(cube(x, 2^-i) \ T), from the geometric level ratio and the per-axis
// count bounds.
double tail_bound(const ExampleVarifold& ex, int i, int J);

// Containment margins (surface extents against cell extents), asserted by
// the build: rho_j <= 2^(-j-2) and sigma_j <= 2^(-j-2) for all j <= J.
bool placement_contained(const DerivedScales& scales);

} // namespace vfl
