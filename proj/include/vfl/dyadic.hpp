#pragma once

#include <cstdint>
#include <vector>

#include "vfl/errors.hpp"
#include "vfl/geometry.hpp"

namespace vfl {

// Dyadic rational num * 2^(-exp). All lattice arithmetic is exact; any
// operation that would leave the 2^62-safe integer range throws
// capacity_error instead of overflowing silently.
struct Dyadic {
    std::int64_t num = 0;
    int exp = 0;

    Dyadic() = default;
    Dyadic(std::int64_t n, int e) : num(n), exp(e) { normalize(); }
    static Dyadic from_int(std::int64_t n) { return Dyadic(n, 0); }

    void normalize();
    double to_double() const;

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    Dyadic operator-() const { return Dyadic(-num, exp); }

    // value * 2^k
    Dyadic shifted(int k) const;

    friend bool operator==(const Dyadic& a, const Dyadic& b);
    friend bool operator<(const Dyadic& a, const Dyadic& b);
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return a < b || a == b; }
};

// floor(v) and ceil(v) as integers
std::int64_t dyadic_floor(const Dyadic& v);
std::int64_t dyadic_ceil(const Dyadic& v);

// Closed cube of family W_i: center index*2^(-i-1) per axis, half-width
// 2^(-i-2). Closures of the level-i cubes tile R^n; distinct indices give
// disjoint open cubes.
struct DyadicCube {
    int level = 0;
    std::vector<std::int64_t> index;

    int dim() const { return static_cast<int>(index.size()); }
    Dyadic center(int axis) const { return Dyadic(index[axis], level + 1); }
    Dyadic half_width() const { return Dyadic(1, level + 2); }
};

// Cell of family F_j: open slab ]2^(-j-1), 2^(-j)[ times a level-j cube.
// Cells across all levels and indices are pairwise disjoint and their
// closures cover ]0,1] x R^n.
struct SlabCell {
    int level = 0;
    DyadicCube cube;

    Dyadic slab_lo() const { return Dyadic(1, level + 1); }
    Dyadic slab_hi() const { return Dyadic(1, level); }
};

struct CellGeometry {
    Vec center;              // in R^(n+1), first coordinate 3*2^(-j-2)
    double cross_half_width; // 2^(-j-2)
    double slab_lo, slab_hi; // ]2^(-j-1), 2^(-j)[
};

// Axis-aligned restriction domain: cube in R^(n+1) centered on the plane
// T = {0} x R^n with dyadic half-width.
struct Window {
    std::vector<Dyadic> center; // n cross-section coordinates on T
    Dyadic half_width;          // > 0

    int dim() const { return static_cast<int>(center.size()); }
    static Window centered(int n, Dyadic half_width);
};

enum class CountMode { intersecting, contained };

// Level-j cells whose closure intersects the closed window cube, in
// lexicographic index order.
std::vector<SlabCell> enumerate_cells(const Window& window, int level);

// Counts b_{i,j} (intersecting) and c_{i,j} (contained) of level-j cells
// against cube(x, 2^-i), x a dyadic point of T. The slab factor of a cell is
// the open interval, the cross-section cube is closed, and the window cube
// is closed (touching cross-sections count).
std::int64_t count_cells(int i, int j, const std::vector<Dyadic>& x, CountMode mode);

// Per-axis index bounds used by count_cells; exposed for the enumeration
// oracle in tests. Returns {lo, hi} with count = hi - lo + 1 (empty if
// hi < lo).
struct AxisRange {
    std::int64_t lo = 0, hi = -1;
    std::int64_t count() const { return hi < lo ? 0 : hi - lo + 1; }
};
AxisRange count_axis_range(int i, int j, const Dyadic& x_axis, CountMode mode);

CellGeometry cell_geometry(const SlabCell& cell);

} // namespace vfl
