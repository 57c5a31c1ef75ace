#include "vfl/varifold.hpp"

#include <algorithm>
#include <cmath>

#include "vfl/quadrature.hpp"

namespace vfl {

// ---------------------------------------------------------------------------
// TangentPlane

TangentPlane TangentPlane::hyperplane(const Vec& normal) {
    TangentPlane t;
    t.ambient_ = normal.dim();
    t.plane_dim_ = normal.dim() - 1;
    double len = norm(normal);
    if (!(len > 0.0)) throw contract_error("TangentPlane: zero normal");
    Vec u = normal;
    u *= 1.0 / len;
    t.normal_ = u;
    return t;
}

TangentPlane TangentPlane::full_space(int dim) {
    TangentPlane t;
    t.ambient_ = dim;
    t.plane_dim_ = dim;
    t.basis_.reserve(dim);
    for (int i = 0; i < dim; ++i) {
        Vec e(dim);
        e[i] = 1.0;
        t.basis_.push_back(e);
    }
    return t;
}

TangentPlane TangentPlane::span(std::vector<Vec> basis, int ambient) {
    TangentPlane t;
    t.ambient_ = ambient;
    t.plane_dim_ = static_cast<int>(basis.size());
    // Gram-Schmidt; inputs are expected near-orthonormal already
    for (auto& b : basis) {
        for (const auto& prev : t.basis_) {
            double c = dot(b, prev);
            Vec adj = prev;
            adj *= c;
            b -= adj;
        }
        double len = norm(b);
        if (len < 1e-12) throw contract_error("TangentPlane: degenerate basis");
        b *= 1.0 / len;
        t.basis_.push_back(b);
    }
    return t;
}

const Vec& TangentPlane::normal() const {
    if (!normal_) throw contract_error("TangentPlane: not a hyperplane");
    return *normal_;
}

Vec TangentPlane::project(const Vec& x) const {
    if (normal_) {
        double c = dot(x, *normal_);
        Vec r = x;
        Vec adj = *normal_;
        adj *= c;
        r -= adj;
        return r;
    }
    Vec r(ambient_);
    for (const auto& b : basis_) {
        double c = dot(x, b);
        Vec adj = b;
        adj *= c;
        r += adj;
    }
    return r;
}

double TangentPlane::tangential_divergence(const std::vector<Vec>& jac) const {
    // trace(P . D eta) = sum_c (P e_c) . (d eta / d x_c)
    double s = 0.0;
    for (int c = 0; c < ambient_; ++c) {
        Vec ec(ambient_);
        ec[c] = 1.0;
        Vec pc = project(ec);
        s += dot(pc, jac[c]);
    }
    return s;
}

namespace {

double trace_product(const TangentPlane& S, const TangentPlane& T) {
    // tr(P_S P_T) without forming matrices
    double s = 0.0;
    int d = S.ambient();
    for (int c = 0; c < d; ++c) {
        Vec ec(d);
        ec[c] = 1.0;
        s += dot(S.project(ec), T.project(ec));
    }
    return s;
}

} // namespace

double plane_distance(const TangentPlane& S, const TangentPlane& T, PlaneNorm norm_kind) {
    if (S.ambient() != T.ambient())
        throw contract_error("plane_distance: ambient dimension mismatch");
    if (S.is_hyperplane() && T.is_hyperplane()) {
        double c = std::clamp(dot(S.normal(), T.normal()), -1.0, 1.0);
        double sin_t = std::sqrt(std::max(0.0, 1.0 - c * c));
        return plane_norm_scale(norm_kind) * sin_t;
    }
    if (norm_kind == PlaneNorm::frobenius) {
        double t = S.plane_dim() + T.plane_dim() - 2.0 * trace_product(S, T);
        return std::sqrt(std::max(0.0, t));
    }
    // symmetric difference operator: power iteration for |lambda|_max
    int d = S.ambient();
    auto apply = [&](const Vec& x) {
        Vec r = S.project(x);
        r -= T.project(x);
        return r;
    };
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = 1.0 + 0.01 * i;
    x = normalized(x);
    double lambda = 0.0;
    for (int it = 0; it < 400; ++it) {
        Vec y = apply(apply(x)); // D^2 keeps the iterate sign-stable
        double len = norm(y);
        if (len < 1e-300) return 0.0;
        y *= 1.0 / len;
        x = y;
        lambda = len;
    }
    return std::sqrt(lambda);
}

// ---------------------------------------------------------------------------
// DiscreteVarifold

DiscreteVarifold::DiscreteVarifold(int n, int m, double p) : n_(n), m_(m), p_(p) {
    if (n < 1 || m < 0 || n + m > kMaxDim)
        throw contract_error("DiscreteVarifold: unsupported dimensions");
    if (p < 1.0) throw contract_error("DiscreteVarifold: p must be >= 1");
}

void DiscreteVarifold::add_sample(VarifoldSample s) {
    if (finalized_) throw contract_error("DiscreteVarifold: frozen");
    if (!(s.weight > 0.0)) throw contract_error("DiscreteVarifold: weight must be > 0");
    samples_.push_back(std::move(s));
}

void DiscreteVarifold::add_boundary(BoundarySample b) {
    if (finalized_) throw contract_error("DiscreteVarifold: frozen");
    boundary_.push_back(std::move(b));
}

void DiscreteVarifold::add_patch(PatchDescriptor patch) {
    if (finalized_) throw contract_error("DiscreteVarifold: frozen");
    patches_.push_back(std::move(patch));
}

void DiscreteVarifold::finalize() {
    if (p_ > 1.0 && !boundary_.empty())
        throw contract_error("DiscreteVarifold: boundary mass requires p = 1");
    total_mass_ = 0.0;
    for (const auto& s : samples_) total_mass_ += s.weight;
    boundary_variation_ = 0.0;
    for (const auto& b : boundary_) boundary_variation_ += b.weight;
    finalized_ = true;
}

// ---------------------------------------------------------------------------
// canonical shapes

namespace {

void append_sphere_shell(DiscreteVarifold& v, int n, double radius, int res,
                         double weight_scale, bool as_boundary) {
    // product quadrature on S^n in R^(n+1): Gauss-Legendre in the polar
    // cosine (or the two polar angles for S^3) and uniform azimuth
    if (n == 1) {
        // circle of radius r in the first two coordinates
        int mphi = 4 * res;
        double w = 2.0 * M_PI * radius / mphi;
        for (int k = 0; k < mphi; ++k) {
            double phi = 2.0 * M_PI * (k + 0.5) / mphi;
            Vec pos(v.ambient());
            pos[0] = radius * std::cos(phi);
            pos[1] = radius * std::sin(phi);
            Vec nrm(v.ambient());
            nrm[0] = std::cos(phi);
            nrm[1] = std::sin(phi);
            if (as_boundary) {
                v.add_boundary({pos, w * weight_scale, nrm});
            } else {
                VarifoldSample s;
                s.position = pos;
                s.plane = TangentPlane::hyperplane(nrm);
                s.weight = w * weight_scale;
                s.mean_curvature = nrm;
                s.mean_curvature *= -1.0 / radius;
                v.add_sample(std::move(s));
            }
        }
        return;
    }
    if (n == 2) {
        const auto& gl = gauss_legendre(res);
        int mphi = 2 * res;
        for (const auto& node : gl) {
            double z = node.x; // cos(polar)
            double sin_p = std::sqrt(std::max(0.0, 1.0 - z * z));
            double w_band = node.w * 2.0 * M_PI / mphi * radius * radius;
            for (int k = 0; k < mphi; ++k) {
                double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                Vec nrm(v.ambient());
                nrm[0] = sin_p * std::cos(phi);
                nrm[1] = sin_p * std::sin(phi);
                nrm[2] = z;
                Vec pos = nrm;
                pos *= radius;
                if (as_boundary) {
                    v.add_boundary({pos, w_band * weight_scale, nrm});
                } else {
                    VarifoldSample s;
                    s.position = pos;
                    s.plane = TangentPlane::hyperplane(nrm);
                    s.weight = w_band * weight_scale;
                    s.mean_curvature = nrm;
                    s.mean_curvature *= -2.0 / radius;
                    v.add_sample(std::move(s));
                }
            }
        }
        return;
    }
    if (n == 3) {
        // S^3 = {(cos a, sin a * omega)}, measure sin^2(a) da dS^2(omega)
        const auto& gl = gauss_legendre(res);
        const auto& gl2 = gauss_legendre(res);
        int mphi = 2 * res;
        for (const auto& na : gl) {
            double a = 0.5 * M_PI * (na.x + 1.0);
            double wa = na.w * 0.5 * M_PI * std::sin(a) * std::sin(a);
            for (const auto& nz : gl2) {
                double z = nz.x;
                double sin_p = std::sqrt(std::max(0.0, 1.0 - z * z));
                double w = wa * nz.w * 2.0 * M_PI / mphi * std::pow(radius, 3);
                for (int k = 0; k < mphi; ++k) {
                    double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                    Vec nrm(v.ambient());
                    nrm[0] = std::cos(a);
                    nrm[1] = std::sin(a) * sin_p * std::cos(phi);
                    nrm[2] = std::sin(a) * sin_p * std::sin(phi);
                    nrm[3] = std::sin(a) * z;
                    Vec pos = nrm;
                    pos *= radius;
                    if (as_boundary) {
                        v.add_boundary({pos, w * weight_scale, nrm});
                    } else {
                        VarifoldSample s;
                        s.position = pos;
                        s.plane = TangentPlane::hyperplane(nrm);
                        s.weight = w * weight_scale;
                        s.mean_curvature = nrm;
                        s.mean_curvature *= -3.0 / radius;
                        v.add_sample(std::move(s));
                    }
                }
            }
        }
        return;
    }
    throw contract_error("canonical sphere: n must be 1, 2 or 3");
}

// radial x angular grid over the solid n-ball; calls sink(point, weight)
void ball_quadrature(int n, double radius, int res,
                     const std::function<void(const Vec&, double)>& sink) {
    const auto& gl = gauss_legendre(res);
    if (n == 1) {
        for (const auto& node : gl) sink(Vec{radius * node.x}, node.w * radius);
        return;
    }
    if (n == 2) {
        int mphi = 2 * res;
        for (const auto& node : gl) {
            double r = 0.5 * radius * (node.x + 1.0);
            double wr = node.w * 0.5 * radius * r * 2.0 * M_PI / mphi;
            for (int k = 0; k < mphi; ++k) {
                double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                sink(Vec{r * std::cos(phi), r * std::sin(phi)}, wr);
            }
        }
        return;
    }
    if (n == 3) {
        const auto& glz = gauss_legendre(res);
        int mphi = 2 * res;
        for (const auto& node : gl) {
            double r = 0.5 * radius * (node.x + 1.0);
            double wr = node.w * 0.5 * radius * r * r;
            for (const auto& nz : glz) {
                double z = nz.x;
                double sin_p = std::sqrt(std::max(0.0, 1.0 - z * z));
                double w = wr * nz.w * 2.0 * M_PI / mphi;
                for (int k = 0; k < mphi; ++k) {
                    double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                    sink(Vec{r * sin_p * std::cos(phi), r * sin_p * std::sin(phi), r * z}, w);
                }
            }
        }
        return;
    }
    throw contract_error("canonical ball: n must be 1, 2 or 3");
}

// polar-cap area of the n-sphere of radius r, geodesic angle theta
double sphere_cap_area(int n, double r, double theta) {
    theta = std::clamp(theta, 0.0, M_PI);
    switch (n) {
    case 1: return 2.0 * r * theta;
    case 2: return 2.0 * M_PI * r * r * (1.0 - std::cos(theta));
    case 3:
        return 4.0 * M_PI * r * r * r * 0.5 * (theta - std::sin(theta) * std::cos(theta));
    default: return -1.0;
    }
}

DiscreteVarifold::ExactMassFn sphere_exact_mass(int n, double r) {
    return [n, r](const Region& region) -> std::optional<double> {
        if (region.kind != Region::Kind::ball) return std::nullopt;
        double d = norm(region.center);
        double rho = region.size;
        if (d >= r + rho || r >= d + rho) return (d + r <= rho) ? sphere_cap_area(n, r, M_PI)
                                                                : std::optional<double>(0.0);
        if (d + r <= rho) return sphere_cap_area(n, r, M_PI);
        if (d == 0.0) return 0.0;
        double c = std::clamp((d * d + r * r - rho * rho) / (2.0 * d * r), -1.0, 1.0);
        double area = sphere_cap_area(n, r, std::acos(c));
        if (area < 0.0) return std::nullopt;
        return area;
    };
}

DiscreteVarifold::ExactMassFn plane_window_exact_mass(int n, double window) {
    return [n, window](const Region& region) -> std::optional<double> {
        if (region.kind == Region::Kind::cube) {
            if (std::fabs(region.center[0]) > region.size) return 0.0;
            double area = 1.0;
            for (int t = 0; t < n; ++t) {
                double lo = std::max(-window, region.center[t + 1] - region.size);
                double hi = std::min(window, region.center[t + 1] + region.size);
                if (hi <= lo) return 0.0;
                area *= hi - lo;
            }
            return area;
        }
        double h = region.center[0];
        if (std::fabs(h) > region.size) return 0.0;
        double disk = std::sqrt(region.size * region.size - h * h);
        bool inside = true, outside = false;
        for (int t = 0; t < n; ++t) {
            double c = region.center[t + 1];
            if (std::fabs(c) + disk > window) inside = false;
            if (std::fabs(c) - disk > window) outside = true;
        }
        if (outside) return 0.0;
        if (inside) return unit_ball_volume(n) * std::pow(disk, n);
        return std::nullopt; // straddles the window edge
    };
}

} // namespace

DiscreteVarifold make_canonical(CanonicalKind kind, const CanonicalParams& params) {
    const int n = params.n;
    if (!(params.radius > 0.0)) throw contract_error("make_canonical: radius must be > 0");
    switch (kind) {
    case CanonicalKind::sphere: {
        DiscreteVarifold v(n, 1, params.p);
        append_sphere_shell(v, n, params.radius, params.resolution, 1.0, false);
        v.set_exact_mass(sphere_exact_mass(n, params.radius));
        v.finalize();
        return v;
    }
    case CanonicalKind::flat_disk: {
        if (params.p != 1.0)
            throw contract_error("flat_disk: boundary variation requires p = 1");
        DiscreteVarifold v(n, 1, 1.0);
        TangentPlane plane = TangentPlane::hyperplane([n] {
            Vec e(n + 1);
            e[0] = 1.0;
            return e;
        }());
        ball_quadrature(n, params.radius, params.resolution, [&](const Vec& z, double w) {
            VarifoldSample s;
            s.position = Vec(n + 1);
            for (int i = 0; i < n; ++i) s.position[i + 1] = z[i];
            s.plane = plane;
            s.weight = w;
            s.mean_curvature = Vec(n + 1);
            v.add_sample(std::move(s));
        });
        // rim: outward conormal inside the disk plane
        if (n == 1) {
            for (double sgn : {-1.0, 1.0}) {
                Vec pos(n + 1);
                pos[1] = sgn * params.radius;
                Vec co(n + 1);
                co[1] = sgn;
                v.add_boundary({pos, 1.0, co});
            }
        } else {
            int res = params.resolution;
            // boundary sphere S^(n-1) of radius r in coords 1..n
            if (n == 2) {
                int mphi = 4 * res;
                double w = 2.0 * M_PI * params.radius / mphi;
                for (int k = 0; k < mphi; ++k) {
                    double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                    Vec pos(n + 1);
                    pos[1] = params.radius * std::cos(phi);
                    pos[2] = params.radius * std::sin(phi);
                    Vec co(n + 1);
                    co[1] = std::cos(phi);
                    co[2] = std::sin(phi);
                    v.add_boundary({pos, w, co});
                }
            } else {
                throw contract_error("flat_disk: n must be 1 or 2");
            }
        }
        v.finalize();
        return v;
    }
    case CanonicalKind::lebesgue_ball: {
        DiscreteVarifold v(n, 0, 1.0);
        ball_quadrature(n, params.radius, params.resolution, [&](const Vec& z, double w) {
            VarifoldSample s;
            s.position = z;
            s.plane = TangentPlane::full_space(n);
            s.weight = w;
            s.mean_curvature = Vec(n);
            v.add_sample(std::move(s));
        });
        // ||delta mu|| concentrated on the boundary sphere
        if (n == 1) {
            for (double sgn : {-1.0, 1.0}) {
                Vec pos(1);
                pos[0] = sgn * params.radius;
                Vec co(1);
                co[0] = sgn;
                v.add_boundary({pos, 1.0, co});
            }
        } else if (n == 2) {
            int mphi = 4 * params.resolution;
            double w = 2.0 * M_PI * params.radius / mphi;
            for (int k = 0; k < mphi; ++k) {
                double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                Vec pos{params.radius * std::cos(phi), params.radius * std::sin(phi)};
                Vec co{std::cos(phi), std::sin(phi)};
                v.add_boundary({pos, w, co});
            }
        } else if (n == 3) {
            const auto& gl = gauss_legendre(params.resolution);
            int mphi = 2 * params.resolution;
            for (const auto& node : gl) {
                double z = node.x;
                double sin_p = std::sqrt(std::max(0.0, 1.0 - z * z));
                double w = node.w * 2.0 * M_PI / mphi * params.radius * params.radius;
                for (int k = 0; k < mphi; ++k) {
                    double phi = 2.0 * M_PI * (k + 0.5) / mphi;
                    Vec co{sin_p * std::cos(phi), sin_p * std::sin(phi), z};
                    Vec pos = co;
                    pos *= params.radius;
                    v.add_boundary({pos, w, co});
                }
            }
        } else {
            throw contract_error("lebesgue_ball: n must be 1, 2 or 3");
        }
        v.finalize();
        return v;
    }
    case CanonicalKind::plane_window: {
        DiscreteVarifold v(n, 1, params.p);
        TangentPlane plane = TangentPlane::hyperplane([n] {
            Vec e(n + 1);
            e[0] = 1.0;
            return e;
        }());
        // midpoint grid over [-W, W]^n
        int g = params.resolution;
        double h = 2.0 * params.radius / g;
        std::vector<int> idx(n, 0);
        for (;;) {
            VarifoldSample s;
            s.position = Vec(n + 1);
            for (int a = 0; a < n; ++a)
                s.position[a + 1] = -params.radius + h * (idx[a] + 0.5);
            s.plane = plane;
            s.weight = std::pow(h, n);
            s.mean_curvature = Vec(n + 1);
            v.add_sample(std::move(s));
            int a = n - 1;
            while (a >= 0 && ++idx[a] == g) idx[a--] = 0;
            if (a < 0) break;
        }
        v.set_exact_mass(plane_window_exact_mass(n, params.radius));
        v.finalize();
        return v;
    }
    }
    throw contract_error("make_canonical: unknown kind");
}

DiscreteVarifold make_revolved_varifold(const ProfileGeometry& geom, int resolution,
                                        double p) {
    geom.validate();
    if (geom.n != 2)
        throw contract_error("make_revolved_varifold: only n = 2 is meshed");
    auto rim = RimCurve::get(geom.tau, geom.smoothing);
    DiscreteVarifold v(2, 1, p);
    v.add_patch({geom.tau, geom.n, geom.smoothing, Vec(3), 1.0});
    const int mphi = 2 * resolution;
    const double dphi = 2.0 * M_PI / mphi;

    // plateau sheets: midpoint in s^2 (area-uniform rings)
    double s0 = rim->plateau_radius();
    for (double sgn : {1.0, -1.0}) {
        for (int i = 0; i < resolution; ++i) {
            double u = (i + 0.5) / resolution;
            double s = s0 * std::sqrt(u);
            double band = M_PI * s0 * s0 / resolution; // exact ring area
            for (int k = 0; k < mphi; ++k) {
                double phi = dphi * (k + 0.5);
                VarifoldSample smp;
                smp.position = Vec{sgn * 0.5 * geom.tau, s * std::cos(phi), s * std::sin(phi)};
                Vec nrm{sgn, 0.0, 0.0};
                smp.plane = TangentPlane::hyperplane(nrm);
                smp.weight = band / mphi;
                smp.mean_curvature = Vec(3);
                v.add_sample(std::move(smp));
            }
        }
    }
    // rim sheets: midpoint in arc length
    double L = rim->length();
    for (double sgn : {1.0, -1.0}) {
        for (int i = 0; i < resolution; ++i) {
            double l = L * (i + 0.5) / resolution;
            auto pt = rim->at(l);
            double h_abs = pt.kappa + std::sin(pt.theta) / pt.s;
            double band = 2.0 * M_PI * pt.s * (L / resolution);
            for (int k = 0; k < mphi; ++k) {
                double phi = dphi * (k + 0.5);
                VarifoldSample smp;
                smp.position = Vec{sgn * pt.y, pt.s * std::cos(phi), pt.s * std::sin(phi)};
                Vec nrm{sgn * std::cos(pt.theta), std::sin(pt.theta) * std::cos(phi),
                        std::sin(pt.theta) * std::sin(phi)};
                smp.plane = TangentPlane::hyperplane(nrm);
                smp.weight = band / mphi;
                smp.mean_curvature = nrm;
                smp.mean_curvature *= -h_abs;
                v.add_sample(std::move(smp));
            }
        }
    }
    // cylinder: midpoint in height
    for (int i = 0; i < resolution; ++i) {
        double y = 0.25 * geom.tau * (2.0 * (i + 0.5) / resolution - 1.0);
        double band = 2.0 * M_PI * 0.5 * (0.5 * geom.tau / resolution);
        for (int k = 0; k < mphi; ++k) {
            double phi = dphi * (k + 0.5);
            VarifoldSample smp;
            smp.position = Vec{y, 0.5 * std::cos(phi), 0.5 * std::sin(phi)};
            Vec nrm{0.0, std::cos(phi), std::sin(phi)};
            smp.plane = TangentPlane::hyperplane(nrm);
            smp.weight = band / mphi;
            smp.mean_curvature = nrm;
            smp.mean_curvature *= -2.0;
            v.add_sample(std::move(smp));
        }
    }
    v.finalize();
    return v;
}

// ---------------------------------------------------------------------------
// functionals

double mass_in(const DiscreteVarifold& v, const Region& region) {
    if (v.exact_mass()) {
        if (auto exact = v.exact_mass()(region)) return *exact;
    }
    double s = 0.0;
    for (const auto& smp : v.samples())
        if (region.contains(smp.position)) s += smp.weight;
    return s;
}

double first_variation(const DiscreteVarifold& v, const TestField& eta) {
    double s = 0.0;
    for (const auto& smp : v.samples())
        s += smp.weight * smp.plane.tangential_divergence(eta.jacobian(smp.position));
    return s;
}

double curvature_pairing(const DiscreteVarifold& v, const TestField& eta) {
    double s = 0.0;
    for (const auto& smp : v.samples())
        s -= smp.weight * dot(smp.mean_curvature, eta.value(smp.position));
    for (const auto& b : v.boundary())
        s += b.weight * dot(b.conormal, eta.value(b.position));
    return s;
}

double curvature_measure(const DiscreteVarifold& v, const Region& region) {
    double s = 0.0;
    if (v.p() == 1.0) {
        for (const auto& smp : v.samples())
            if (region.contains(smp.position)) s += smp.weight * norm(smp.mean_curvature);
        for (const auto& b : v.boundary())
            if (region.contains(b.position)) s += b.weight;
        return s;
    }
    for (const auto& smp : v.samples()) {
        if (!region.contains(smp.position)) continue;
        if (smp.mean_curvature.dim() != v.ambient())
            throw contract_error("curvature_measure: sample lacks mean curvature under p > 1");
        s += smp.weight * std::pow(norm(smp.mean_curvature), v.p());
    }
    return s;
}

double excess(const DiscreteVarifold& v, const Region& region, const TangentPlane& plane,
              double q, ExcessKind kind, PlaneNorm norm_kind) {
    if (q < 1.0) throw contract_error("excess: q must be >= 1");
    double s = 0.0;
    for (const auto& smp : v.samples()) {
        if (!region.contains(smp.position)) continue;
        if (kind == ExcessKind::height) {
            Vec d = smp.position - region.center;
            Vec tangential = plane.project(d);
            d -= tangential;
            s += smp.weight * std::pow(norm(d), q);
        } else {
            s += smp.weight * std::pow(plane_distance(smp.plane, plane, norm_kind), q);
        }
    }
    return s;
}

double density_ratio(const DiscreteVarifold& v, const Vec& x, double rho) {
    if (!(rho > 0.0)) throw contract_error("density_ratio: rho must be > 0");
    double m = mass_in(v, Region::ball(x, rho));
    return m / (unit_ball_volume(v.n()) * std::pow(rho, v.n()));
}

double fint_average(const DiscreteVarifold& v, const Region& region,
                    const std::function<double(const VarifoldSample&)>& f) {
    double m = 0.0, s = 0.0;
    for (const auto& smp : v.samples()) {
        if (!region.contains(smp.position)) continue;
        m += smp.weight;
        s += smp.weight * f(smp);
    }
    if (!(m > 0.0)) throw degenerate_error("fint_average: region has zero mass");
    return s / m;
}

DiscreteVarifold dilated(const DiscreteVarifold& v, double factor) {
    if (!(factor > 0.0)) throw contract_error("dilated: factor must be > 0");
    DiscreteVarifold out(v.n(), v.m(), v.p());
    for (auto smp : v.samples()) {
        smp.position *= factor;
        smp.weight *= std::pow(factor, v.n());
        smp.mean_curvature *= 1.0 / factor;
        out.add_sample(std::move(smp));
    }
    for (auto b : v.boundary()) {
        b.position *= factor;
        b.weight *= std::pow(factor, v.n() - 1);
        out.add_boundary(std::move(b));
    }
    if (v.exact_mass()) {
        auto base = v.exact_mass();
        int n = v.n();
        out.set_exact_mass([base, factor, n](const Region& region) -> std::optional<double> {
            Region pre = region;
            pre.center *= 1.0 / factor;
            pre.size = region.size / factor;
            if (auto m = base(pre)) return *m * std::pow(factor, n);
            return std::nullopt;
        });
    }
    out.finalize();
    return out;
}

DiscreteVarifold translated(const DiscreteVarifold& v, const Vec& shift) {
    DiscreteVarifold out(v.n(), v.m(), v.p());
    for (auto smp : v.samples()) {
        smp.position += shift;
        out.add_sample(std::move(smp));
    }
    for (auto b : v.boundary()) {
        b.position += shift;
        out.add_boundary(std::move(b));
    }
    if (v.exact_mass()) {
        auto base = v.exact_mass();
        out.set_exact_mass([base, shift](const Region& region) -> std::optional<double> {
            Region pre = region;
            pre.center -= shift;
            return base(pre);
        });
    }
    out.finalize();
    return out;
}

} // namespace vfl
