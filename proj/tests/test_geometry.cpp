#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>

#include "doctest.h"
#include "snow/geometry.hpp"

using namespace snow;

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kDelta = std::log(4.0) / std::log(3.0);

std::vector<int> word(std::initializer_list<int> w) { return std::vector<int>(w); }
}  // namespace

TEST_CASE("ifs fixed points and cell chain") {
    CHECK(std::abs(ifs_apply(word({1}), 0.0)) == 0.0);
    CHECK(std::abs(ifs_apply(word({4}), 1.0) - 1.0) == 0.0);
    CHECK(std::abs(ifs_apply(word({2}), 0.0) - 1.0 / 3.0) < 1e-15);
    // the four cells chain 0 -> 1/3 -> apex -> 2/3 -> 1; psi_3 starts at the apex
    std::complex<double> apex(0.5, kSqrt3 / 6.0);
    CHECK(std::abs(ifs_apply(word({3}), 0.0) - apex) < 1e-15);
    CHECK(std::abs(ifs_apply(word({2}), 1.0) - apex) < 1e-15);
    CHECK(std::abs(ifs_apply(word({3}), 1.0) - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("ifs self-similarity under concatenation") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> digit(1, 4);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> w1, w2;
        int l1 = 1 + static_cast<int>(rng() % 4), l2 = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < l1; ++i) w1.push_back(digit(rng));
        for (int i = 0; i < l2; ++i) w2.push_back(digit(rng));
        std::complex<double> z(coord(rng), coord(rng));
        std::vector<int> cat = w1;
        cat.insert(cat.end(), w2.begin(), w2.end());
        auto lhs = ifs_apply(cat, z);
        auto rhs = ifs_apply(w1, ifs_apply(w2, z));
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

TEST_CASE("V1 of one copy has five points") {
    // oracle: enumerate psi_j({0,1}) in floating point and deduplicate
    std::set<std::pair<long, long>> pts;
    for (int j = 1; j <= 4; ++j) {
        for (double e : {0.0, 1.0}) {
            auto z = ifs_apply(word({j}), e);
            pts.insert({std::lround(z.real() * 1e12), std::lround(z.imag() * 1e12)});
        }
    }
    CHECK(pts.size() == 5);
}

TEST_CASE("boundary graph structure") {
    for (int level : {0, 1, 2, 3}) {
        BoundaryGraph g = boundary_graph(level);
        CHECK(g.vertex_count() == 3 * pow4(level + 1));
        CHECK(g.vertex_count() == g.edge_count());  // single cycle
        CHECK(static_cast<std::int64_t>(g.pos.size()) == g.vertex_count());
        // all vertices distinct (junctions identified exactly once)
        CHECK(static_cast<std::int64_t>(g.index_of.size()) == g.vertex_count());
        // every edge has exact length 3^-N: numerator difference is a unit
        for (std::int64_t e = 0; e < g.edge_count(); ++e) {
            EPoint d = g.pos[static_cast<std::size_t>((e + 1) % g.vertex_count())] -
                       g.pos[static_cast<std::size_t>(e)];
            CHECK(enorm2(d) == 1);
        }
    }
    CHECK_THROWS_AS(boundary_graph(-1), std::invalid_argument);
    CHECK_THROWS_AS(boundary_graph(kMaxLevel + 1), std::invalid_argument);
}

TEST_CASE("inward and outward extreme points") {
    BoundaryGraph g = boundary_graph(2);
    // six innermost points are the 6th roots of unity, exactly representable
    for (int k = 0; k < 6; ++k) {
        EPoint root = pow3(g.level) * sixth_root(k);
        auto it = g.index_of.find(root);
        REQUIRE(it != g.index_of.end());
    }
    // every vertex lies between the unit circle and radius sqrt(3)
    double lo = 1e9, hi = 0.0;
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        double r = std::abs(g.fpos(v));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(kSqrt3).epsilon(1e-12));
}

TEST_CASE("harmonic coordinate: level-1 values and the metric identity") {
    BoundaryGraph g = boundary_graph(0);  // vertices V_1, five per copy
    // oracle: minimize the level-1 discrete energy with pinned endpoints.
    // For the path with 4 equal conductances the minimizer solves a 3x3
    // tridiagonal system; solve it directly.
    double a[3][4] = {{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, 1}};
    // forward elimination (endpoint values 0 and 1 folded into the rhs)
    for (int i = 1; i < 3; ++i) {
        double m = a[i][i - 1] / a[i - 1][i - 1];
        for (int j = 0; j < 4; ++j) a[i][j] -= m * a[i - 1][j];
    }
    double x2 = a[2][3] / a[2][2];
    double x1 = (a[1][3] - a[1][2] * x2) / a[1][1];
    double x0 = (a[0][3] - a[0][1] * x1 - a[0][2] * x2) / a[0][0];
    CHECK(x0 == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(x1 == doctest::Approx(0.50).epsilon(1e-14));
    CHECK(x2 == doctest::Approx(0.75).epsilon(1e-14));
    for (int j = 0; j <= 4; ++j)
        CHECK(g.h_in_copy(j, 1) == doctest::Approx(j / 4.0).epsilon(1e-15));
}

TEST_CASE("|h(p)-h(q)| equals unit-chart |p-q|^delta on neighbor pairs") {
    for (int level : {0, 1, 2, 3, 4}) {
        BoundaryGraph g = boundary_graph(level);
        const std::int64_t n = g.vertex_count();
        double worst = 0.0;
        for (std::int64_t e = 0; e < n; ++e) {
            if ((e + 1) % g.cells_per_copy() == 0) continue;  // junction edge pair spans charts
            double dh = std::abs(g.h((e + 1) % n) - g.h(e));
            double dist = std::abs(g.fpos((e + 1) % n) - g.fpos(e)) / 3.0;  // unit-copy chart
            worst = std::max(worst, std::abs(dh - std::pow(dist, kDelta)));
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("copies containing junctions and apexes") {
    BoundaryGraph g = boundary_graph(1);
    const std::int64_t C = g.cells_per_copy();
    auto copies = g.copies_containing(C);  // corner W0 between K1 and K2, inside K4
    CHECK(copies == std::vector<int>({1, 2, 4}));
    copies = g.copies_containing(C / 2);  // apex A2: interior of K1, endpoint of K4 and K6
    CHECK(copies == std::vector<int>({1, 4, 6}));
    copies = g.copies_containing(1);  // first half of K1 lies inside K6
    CHECK(copies == std::vector<int>({1, 6}));
    CHECK(g.h_in_copy(C, 2) == doctest::Approx(0.0));
    CHECK(g.h_in_copy(C, 1) == doctest::Approx(1.0));
    CHECK(g.h_in_copy(C, 4) == doctest::Approx(0.5));
}

TEST_CASE("addresses: canonical form round-trips and shifted copies agree") {
    BoundaryGraph g = boundary_graph(1);
    for (std::int64_t v : {0L, 1L, 5L, 16L, 17L, 31L, 32L, 47L}) {
        Address a = canonical_address(g, v);
        CHECK(vertex_of_address(g, a) == v);
    }
    // the apex of K1 is the midpoint of copy 4: same point through either chart
    Address through_k4;
    through_k4.copy = 4;
    through_k4.word = {1, 1};
    through_k4.endpoint = 0;
    CHECK(vertex_of_address(g, through_k4) == g.cells_per_copy() / 2);
    // canonical picks the lowest copy at junction corners
    Address w0 = canonical_address(g, g.cells_per_copy());
    CHECK(w0.copy == 1);
    CHECK(w0.endpoint == 1);
    CHECK(std::all_of(w0.word.begin(), w0.word.end(), [](int d) { return d == 4; }));
}

TEST_CASE("addresses that name no vertex are rejected") {
    BoundaryGraph g = boundary_graph(1);
    Address bad;
    bad.copy = 1;
    bad.word = {1};  // wrong word length for this level
    CHECK_THROWS_AS(vertex_of_address(g, bad), std::invalid_argument);
}

TEST_CASE("prefractal area approaches the snowflake area from below") {
    // oracle: fan triangulation from the origin over floating positions
    for (int level : {0, 1, 2, 3}) {
        BoundaryGraph g = boundary_graph(level);
        long double fan = 0.0L;
        const std::int64_t n = g.vertex_count();
        for (std::int64_t i = 0; i < n; ++i) {
            auto p = g.fpos(i), q = g.fpos((i + 1) % n);
            fan += 0.5L * (p.real() * q.imag() - p.imag() * q.real());
        }
        CHECK(prefractal_area(g) == doctest::Approx(static_cast<double>(fan)).epsilon(1e-13));
    }
    CHECK(prefractal_area(boundary_graph(0)) == doctest::Approx(3.0 * kSqrt3).epsilon(1e-13));
    // monotone increasing toward area 18 sqrt(3) / 5
    double prev = 0.0;
    for (int level : {0, 1, 2, 3, 4}) {
        double area = prefractal_area(boundary_graph(level));
        CHECK(area > prev);
        prev = area;
    }
    CHECK(prev < 18.0 * kSqrt3 / 5.0);
    CHECK(prev > 18.0 * kSqrt3 / 5.0 - 0.05);
}
