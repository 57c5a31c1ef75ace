#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vfl/geometry.hpp"
#include "vfl/profile.hpp"

namespace vfl {

// Counter-based generator: the k-th draw of a stream depends only on
// (seed, stream, k), never on thread schedule.
struct Rng {
    std::uint64_t state;

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    static Rng at(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        return Rng{mix(mix(seed ^ (stream << 32)) ^ index)};
    }

    std::uint64_t next() {
        state = mix(state);
        return state;
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    bool coin() { return (next() & 1) != 0; }
    // unit vector in R^dim via normalised gaussians
    Vec direction(int dim);
};

struct SurfaceSample {
    Vec position;       // in R^(n+1)
    Vec normal;         // outward unit normal
    Vec mean_curvature; // vector, = -|H| * normal
    double weight;      // H^n quadrature weight
    int stratum;        // 0 plateau, 1 rim, 2 cylinder
};

// Stratified area-proportional samples of the unit surface; deterministic
// given seed.
std::vector<SurfaceSample> sample_surface(const ProfileGeometry& geom, std::int64_t count,
                                          std::uint64_t seed);

// Streaming Monte-Carlo estimates of the unit-surface integrals; the
// independent oracle for the quadrature path. Accumulation is block-wise
// (fixed 4096-sample blocks combined in index order), so the OpenMP and
// serial paths agree bitwise.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct McSurfaceResult {
    McEstimate mass;
    McEstimate curvature_moment; // integral |H|^p
    McEstimate tilt_moment;      // integral tilt^q
    McEstimate mean_height;      // integral y dH^n / mass estimate helper
    std::int64_t count = 0;
};

McSurfaceResult mc_surface_integrals(const ProfileGeometry& geom, std::int64_t count,
                                     std::uint64_t seed, double p, double q,
                                     PlaneNorm norm_kind, bool parallel = true);

// Per-sample generation shared by the materialised and streaming paths.
SurfaceSample generate_sample(const ProfileGeometry& geom, const RimCurve& rim,
                              std::int64_t index, std::int64_t n_plateau,
                              std::int64_t n_rim, std::int64_t n_cyl,
                              std::uint64_t seed);

} // namespace vfl
