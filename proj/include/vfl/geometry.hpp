#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>

#include "vfl/errors.hpp"

namespace vfl {

// Points and vectors live in R^d with d <= kMaxDim; fixed capacity keeps the
// hot loops allocation-free.
inline constexpr int kMaxDim = 8;

class Vec {
public:
    Vec() = default;
    explicit Vec(int dim) : dim_(dim) {
        assert(dim >= 0 && dim <= kMaxDim);
        for (int i = 0; i < dim_; ++i) v_[i] = 0.0;
    }
    Vec(std::initializer_list<double> xs) : dim_(static_cast<int>(xs.size())) {
        assert(dim_ <= kMaxDim);
        int i = 0;
        for (double x : xs) v_[i++] = x;
    }

    int dim() const { return dim_; }
    double operator[](int i) const { return v_[i]; }
    double& operator[](int i) { return v_[i]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) v_[i] += o.v_[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim_; ++i) v_[i] -= o.v_[i];
        return *this;
    }
    Vec& operator*=(double c) {
        for (int i = 0; i < dim_; ++i) v_[i] *= c;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double c, Vec a) { return a *= c; }

private:
    int dim_ = 0;
    double v_[kMaxDim] = {};
};

inline double dot(const Vec& a, const Vec& b) {
    assert(a.dim() == b.dim());
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(const Vec& a) {
    double n = norm(a);
    Vec r = a;
    if (n > 0.0) r *= 1.0 / n;
    return r;
}

// omega_n, the volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Gamma-function extension of omega to real index; used for display only
// where a fractional index arises.
double unit_ball_volume_real(double s);

// H^{n-1} measure of the unit sphere S^{n-1}, i.e. n * omega_n.
double unit_sphere_area(int n);

// Closed ball or closed cube (sup-norm ball), used as an integration region.
struct Region {
    enum class Kind { ball, cube };

    static Region ball(Vec center, double radius) { return {Kind::ball, center, radius}; }
    static Region cube(Vec center, double half_width) { return {Kind::cube, center, half_width}; }

    Kind kind = Kind::ball;
    Vec center;
    double size = 0.0; // radius resp. half-width

    bool contains(const Vec& x) const {
        assert(x.dim() == center.dim());
        if (kind == Kind::ball) {
            Vec d = x - center;
            return dot(d, d) <= size * size;
        }
        for (int i = 0; i < x.dim(); ++i)
            if (std::fabs(x[i] - center[i]) > size) return false;
        return true;
    }
};

} // namespace vfl
