#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "vfl/dyadic.hpp"

using namespace vfl;

namespace {

// Brute-force count over the index lattice, the oracle for count_cells.
// Works directly on the per-axis conditions with dyadic arithmetic.
std::int64_t brute_count(int i, int j, const std::vector<Dyadic>& x, CountMode mode) {
    if (j < i) return 0;
    std::int64_t total = 1;
    for (const Dyadic& c : x) {
        // scan a generous index range around the center
        std::int64_t guess = (std::int64_t{1} << (j - i + 3)) + 4;
        std::int64_t center = dyadic_floor(c.shifted(j + 1));
        std::int64_t cnt = 0;
        for (std::int64_t k = center - guess; k <= center + guess; ++k) {
            Dyadic cell_center(k, j + 1);
            Dyadic d = cell_center - c;
            if (d.num < 0) d = -d;
            Dyadic reach = (mode == CountMode::intersecting)
                               ? Dyadic(1, i) + Dyadic(1, j + 2)
                               : Dyadic(1, i) - Dyadic(1, j + 2);
            if (d <= reach) ++cnt;
        }
        total *= cnt;
    }
    return total;
}

std::int64_t ipow(std::int64_t base, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

} // namespace

TEST_CASE("dyadic rational arithmetic") {
    Dyadic half(1, 1), quarter(1, 2);
    CHECK((half + quarter).to_double() == 0.75);
    CHECK((half - quarter) == quarter);
    CHECK(quarter < half);
    CHECK(dyadic_floor(Dyadic(-3, 1)) == -2); // floor(-1.5)
    CHECK(dyadic_ceil(Dyadic(-3, 1)) == -1);
    CHECK(dyadic_floor(Dyadic(3, 1)) == 1);
    CHECK(dyadic_ceil(Dyadic(3, 1)) == 2);
    CHECK(Dyadic(8, 3) == Dyadic(1, 0)); // normalisation
}

TEST_CASE("capacity guard fires instead of overflowing") {
    CHECK_THROWS_AS(Dyadic(std::int64_t{1} << 60, 0).shifted(10), capacity_error);
    std::vector<Dyadic> x(2, Dyadic());
    CHECK_THROWS_AS(count_cells(0, 80, x, CountMode::intersecting), capacity_error);
}

TEST_CASE("cell geometry from the definition") {
    SlabCell cell;
    cell.level = 0;
    cell.cube.level = 0;
    cell.cube.index = {0, 0};
    CellGeometry g = cell_geometry(cell);
    CHECK(g.center[0] == 0.75);
    CHECK(g.center[1] == 0.0);
    CHECK(g.cross_half_width == 0.25);
    CHECK(g.slab_lo == 0.5);
    CHECK(g.slab_hi == 1.0);

    cell.level = 1;
    cell.cube.level = 1;
    CellGeometry g1 = cell_geometry(cell);
    CHECK(g1.center[0] == 0.375);
    CHECK(g1.cross_half_width == 0.125);

    // slab midpoint does not depend on the index
    cell.cube.index = {7, -3};
    CHECK(cell_geometry(cell).center[0] == 0.375);
}

TEST_CASE("enumerate_cells matches the per-axis counts") {
    Window w = Window::centered(2, Dyadic(1, 0));
    CHECK(enumerate_cells(w, 0).size() == 25);
    CHECK(enumerate_cells(w, 1).size() == 81);

    // slab above the window reach in the first coordinate
    Window small = Window::centered(2, Dyadic(1, 4));
    CHECK(enumerate_cells(small, 0).empty());
    CHECK(enumerate_cells(small, 2).empty());
    CHECK(!enumerate_cells(small, 4).empty()); // 2^-5 <= 1/16 touches
}

TEST_CASE("enumerate_cells is lexicographic and within reach") {
    Window w = Window::centered(2, Dyadic(1, 1));
    auto cells = enumerate_cells(w, 2);
    for (std::size_t t = 1; t < cells.size(); ++t)
        CHECK(cells[t - 1].cube.index < cells[t].cube.index);
    for (const auto& c : cells) {
        CHECK(c.level == 2);
        for (double ki : {double(c.cube.index[0]), double(c.cube.index[1])})
            CHECK(std::fabs(ki) * 0.125 <= 0.5 + 0.0625 + 1e-12);
    }
}

TEST_CASE("counts at the origin: closed forms, sandwich bounds, oracle") {
    // b_{0,1} = 81, c_{0,1} = 49 for n = 2
    std::vector<Dyadic> x0(2, Dyadic());
    CHECK(count_cells(0, 1, x0, CountMode::intersecting) == 81);
    CHECK(count_cells(0, 1, x0, CountMode::contained) == 49);

    // sandwich (3*2)^2 <= c <= b <= (5*2)^2
    CHECK(36 <= count_cells(0, 1, x0, CountMode::contained));
    CHECK(count_cells(0, 1, x0, CountMode::intersecting) <= 100);

    // j < i gives zero in both modes
    CHECK(count_cells(3, 2, x0, CountMode::intersecting) == 0);
    CHECK(count_cells(3, 2, x0, CountMode::contained) == 0);
    CHECK(count_cells(3, 3, x0, CountMode::intersecting) > 0);

    for (int n = 1; n <= 3; ++n) {
        std::vector<Dyadic> x(n, Dyadic());
        for (int i = 0; i <= 2; ++i) {
            for (int j = i; j <= i + 8; ++j) {
                int d = j - i;
                std::int64_t b = count_cells(i, j, x, CountMode::intersecting);
                std::int64_t c = count_cells(i, j, x, CountMode::contained);
                // closed per-axis forms at the origin
                CHECK(b == ipow((std::int64_t{1} << (d + 2)) + 1, n));
                CHECK(c == ipow((std::int64_t{1} << (d + 2)) - 1, n));
                CHECK(ipow(3 * (std::int64_t{1} << d), n) <= c);
                CHECK(c <= b);
                CHECK(b <= ipow(5 * (std::int64_t{1} << d), n));
            }
        }
    }
}

TEST_CASE("counts against the enumeration oracle, off-center") {
    std::vector<std::vector<Dyadic>> centers = {
        {Dyadic(1, 2), Dyadic(-3, 3)}, // (0.25, -0.375)
        {Dyadic(1, 1), Dyadic(1, 4)},
        {Dyadic(-5, 2), Dyadic(7, 3)},
    };
    for (const auto& x : centers) {
        for (int i = 0; i <= 2; ++i) {
            for (int j = i; j <= i + 4; ++j) {
                CHECK(count_cells(i, j, x, CountMode::intersecting) ==
                      brute_count(i, j, x, CountMode::intersecting));
                CHECK(count_cells(i, j, x, CountMode::contained) ==
                      brute_count(i, j, x, CountMode::contained));
            }
        }
    }
}

TEST_CASE("enumerated cells are pairwise disjoint across levels") {
    Window w = Window::centered(1, Dyadic(1, 1));
    struct Box {
        double ylo, yhi, zlo, zhi;
    };
    std::vector<Box> boxes;
    for (int j = 0; j <= 3; ++j) {
        for (const auto& cell : enumerate_cells(w, j)) {
            CellGeometry g = cell_geometry(cell);
            boxes.push_back({g.slab_lo, g.slab_hi, g.center[1] - g.cross_half_width,
                             g.center[1] + g.cross_half_width});
        }
    }
    for (std::size_t s = 0; s < boxes.size(); ++s) {
        for (std::size_t t = s + 1; t < boxes.size(); ++t) {
            bool y_overlap = boxes[s].ylo < boxes[t].yhi && boxes[t].ylo < boxes[s].yhi;
            bool z_overlap = boxes[s].zlo < boxes[t].zhi && boxes[t].zlo < boxes[s].zhi;
            CHECK_FALSE((y_overlap && z_overlap));
        }
    }
}

TEST_CASE("translation by a level lattice vector maps the cell set onto itself") {
    const int level = 2;
    Window w = Window::centered(2, Dyadic(1, 1));
    auto base = enumerate_cells(w, level);

    Window shifted = w;
    // shift by 3 * 2^-(level+1) along the first cross axis
    shifted.center[0] = shifted.center[0] + Dyadic(3, level + 1);
    auto moved = enumerate_cells(shifted, level);

    REQUIRE(base.size() == moved.size());
    std::set<std::vector<std::int64_t>> expect;
    for (const auto& c : base) {
        auto idx = c.cube.index;
        idx[0] += 3;
        expect.insert(idx);
    }
    for (const auto& c : moved) CHECK(expect.count(c.cube.index) == 1);
}
