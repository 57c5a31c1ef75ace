#include "vfl/dyadic.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace vfl {

namespace {

constexpr std::int64_t kSafe = std::int64_t{1} << 62;

[[noreturn]] void capacity(const char* where) {
    std::ostringstream msg;
    msg << "dyadic lattice arithmetic exceeds the 2^62-safe range in " << where;
    throw capacity_error(msg.str());
}

std::int64_t checked_shift(std::int64_t n, int k, const char* where) {
    // n * 2^k for k >= 0
    for (int s = 0; s < k; ++s) {
        if (n >= kSafe / 2 || n <= -(kSafe / 2)) capacity(where);
        n <<= 1;
    }
    return n;
}

// common-exponent numerators; exponent is max(a.exp, b.exp)
void align(const Dyadic& a, const Dyadic& b, std::int64_t& na, std::int64_t& nb) {
    int e = std::max(a.exp, b.exp);
    na = checked_shift(a.num, e - a.exp, "align");
    nb = checked_shift(b.num, e - b.exp, "align");
}

} // namespace

void Dyadic::normalize() {
    if (num == 0) {
        exp = 0;
        return;
    }
    while ((num & 1) == 0 && exp > 0) {
        num >>= 1;
        --exp;
    }
    if (exp < 0) {
        num = checked_shift(num, -exp, "normalize");
        exp = 0;
    }
    if (exp > 200) capacity("normalize");
}

double Dyadic::to_double() const { return std::ldexp(static_cast<double>(num), -exp); }

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    std::int64_t na, nb;
    align(a, b, na, nb);
    if ((nb > 0 && na > kSafe - nb) || (nb < 0 && na < -kSafe - nb)) capacity("add");
    return Dyadic(na + nb, std::max(a.exp, b.exp));
}

Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }

Dyadic Dyadic::shifted(int k) const {
    if (num == 0) return Dyadic();
    if (k >= 0) {
        int drop = std::min(k, exp);
        return Dyadic(checked_shift(num, k - drop, "shift"), exp - drop);
    }
    return Dyadic(num, exp - k);
}

bool operator==(const Dyadic& a, const Dyadic& b) { return a.num == b.num && a.exp == b.exp; }

bool operator<(const Dyadic& a, const Dyadic& b) {
    std::int64_t na, nb;
    align(a, b, na, nb);
    return na < nb;
}

std::int64_t dyadic_floor(const Dyadic& v) {
    if (v.exp == 0) return v.num;
    std::int64_t q = v.num >> v.exp; // arithmetic shift floors for negatives
    return q;
}

std::int64_t dyadic_ceil(const Dyadic& v) {
    if (v.exp == 0) return v.num;
    std::int64_t f = v.num >> v.exp;
    std::int64_t rem = v.num - (f << v.exp);
    return rem == 0 ? f : f + 1;
}

Window Window::centered(int n, Dyadic half_width) {
    Window w;
    w.center.assign(n, Dyadic());
    w.half_width = half_width;
    return w;
}

std::vector<SlabCell> enumerate_cells(const Window& window, int level) {
    const int j = level;
    if (j < 0 || !(Dyadic() < window.half_width))
        throw contract_error("enumerate_cells: need level >= 0 and positive window half-width");
    if (j + 2 > 60) capacity("enumerate_cells: level too deep");

    std::vector<SlabCell> cells;
    // closed slab [2^-j-1, 2^-j] vs window first coordinate [-h, h]
    if (window.half_width < Dyadic(1, j + 1)) return cells;

    const int n = window.dim();
    std::vector<std::int64_t> lo(n), hi(n);
    for (int axis = 0; axis < n; ++axis) {
        // |k*2^(-j-1) - c| <= h + 2^(-j-2), touching counts
        Dyadic reach = window.half_width + Dyadic(1, j + 2);
        Dyadic lo_d = (window.center[axis] - reach).shifted(j + 1);
        Dyadic hi_d = (window.center[axis] + reach).shifted(j + 1);
        lo[axis] = dyadic_ceil(lo_d);
        hi[axis] = dyadic_floor(hi_d);
        if (hi[axis] < lo[axis]) return {};
    }

    std::vector<std::int64_t> k(lo);
    for (;;) {
        SlabCell cell;
        cell.level = j;
        cell.cube.level = j;
        cell.cube.index = k;
        cells.push_back(std::move(cell));
        int axis = n - 1;
        while (axis >= 0) {
            if (++k[axis] <= hi[axis]) break;
            k[axis] = lo[axis];
            --axis;
        }
        if (axis < 0) break;
        if (cells.size() > (std::size_t{1} << 31))
            capacity("enumerate_cells: cell count");
    }
    return cells;
}

AxisRange count_axis_range(int i, int j, const Dyadic& x_axis, CountMode mode) {
    // Cross-section condition per axis, scaled by 2^(j+1):
    //   intersecting: |k - x*2^(j+1)| <= 2^(j+1-i) + 1/2
    //   contained:    |k - x*2^(j+1)| <= 2^(j+1-i) - 1/2
    Dyadic center = x_axis.shifted(j + 1);
    Dyadic radius = Dyadic(1, 0).shifted(j + 1 - i);
    Dyadic half(1, 1);
    Dyadic reach = (mode == CountMode::intersecting) ? radius + half : radius - half;
    AxisRange r;
    r.lo = dyadic_ceil(center - reach);
    r.hi = dyadic_floor(center + reach);
    return r;
}

std::int64_t count_cells(int i, int j, const std::vector<Dyadic>& x, CountMode mode) {
    if (i < 0 || j < 0) throw contract_error("count_cells: negative level");
    if (j + 2 > 60 || j + 1 - i > 60) capacity("count_cells: level too deep");
    if (j < i) return 0; // open slab misses the cube entirely
    std::int64_t total = 1;
    for (const Dyadic& c : x) {
        std::int64_t axis = count_axis_range(i, j, c, mode).count();
        if (axis == 0) return 0;
        if (total > kSafe / axis) capacity("count_cells: product");
        total *= axis;
    }
    return total;
}

CellGeometry cell_geometry(const SlabCell& cell) {
    const int j = cell.level;
    CellGeometry g;
    g.center = Vec(cell.cube.dim() + 1);
    g.center[0] = 3.0 * std::ldexp(1.0, -j - 2);
    for (int a = 0; a < cell.cube.dim(); ++a)
        g.center[a + 1] = cell.cube.center(a).to_double();
    g.cross_half_width = std::ldexp(1.0, -j - 2);
    g.slab_lo = std::ldexp(1.0, -j - 1);
    g.slab_hi = std::ldexp(1.0, -j);
    return g;
}

} // namespace vfl
