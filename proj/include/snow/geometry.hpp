#ifndef SNOW_GEOMETRY_HPP
#define SNOW_GEOMETRY_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "snow/eisenstein.hpp"

// Koch snowflake geometry.  Conventions used throughout:
//
//  * Ambient frame: the snowflake is inscribed in the circle of radius
//    sqrt(3); the six innermost boundary points are the 6th roots of unity,
//    the six outermost points are sqrt(3) * exp(i(pi/6 + k pi/3)).
//  * The boundary splits into three congruent Koch curves K1, K2, K3 (sides
//    of the base triangle, bumps outward) and alternatively into the shifted
//    copies K4, K5, K6 joining the side apexes across the triangle corners.
//  * Each copy carries a unit chart onto the Koch curve K with endpoints 0, 1;
//    the chart sends the copy's counterclockwise-first endpoint to 0, so the
//    harmonic coordinate h increases counterclockwise in every copy.
//  * Level-N boundary graph: vertex set V_{N+1}, a single cycle of
//    3 * 4^(N+1) vertices in counterclockwise order starting at the corner
//    (0, -sqrt(3)).  Consecutive vertices are 3^-N apart; the h increment per
//    edge is 4^-(N+1) in the owning copy's chart.
//  * Exact coordinates: graph vertices at level N live on the lattice
//    L_N = 3^-N Z[w]; EPoint numerators are stored at scale N.

namespace snow {

inline constexpr int kMaxLevel = 10;

inline std::int64_t pow3(int n) {
    std::int64_t r = 1;
    while (n-- > 0) r *= 3;
    return r;
}
inline std::int64_t pow4(int n) {
    std::int64_t r = 1;
    while (n-- > 0) r *= 4;
    return r;
}

// ---------------------------------------------------------------------------
// Iterated function system on the unit chart (endpoints 0 and 1).
//   psi_1(z) = z/3
//   psi_2(z) = z w / 3 + 1/3
//   psi_3(z) = z conj(w) / 3 + 1/2 + i sqrt(3)/6
//   psi_4(z) = (z + 2) / 3
// The translation of psi_3 equals (1 + w)/3, which places the third cell
// between the middle bump apex and 2/3; the four cell images then chain
// 0 -> 1/3 -> apex -> 2/3 -> 1 along the curve.

std::complex<double> ifs_apply(const std::vector<int>& word, std::complex<double> z);

// Exact variant: maps numerator `num` at scale `scale3` through psi_j,
// returning the numerator at scale3 + 1.
EPoint ifs_apply_exact(int j, EPoint num, int scale3);

// Exact left endpoint psi_w(0) of the cell with index `cell` among the 4^m
// level-m cells of the unit curve, as a numerator at scale m.
EPoint cell_left_endpoint(std::int64_t cell, int m);

// ---------------------------------------------------------------------------
// Copy charts.  chart_to_ambient maps a unit-chart numerator (scale m) into
// the ambient frame (scale m-1): copies have diameter 3.  The similarity
// conjugates so that the bumps point outward while h still increases
// counterclockwise.

struct CopyChart {
    EPoint anchor;  // ccw-first endpoint, ambient scale 0
    EPoint rot;     // unit of Z[w]
};
const CopyChart& copy_chart(int copy);  // copy in 1..6

EPoint chart_to_ambient(int copy, EPoint unit_num, int unit_scale);

// ---------------------------------------------------------------------------
// Addresses: (copy, word) names the level-|word| cell  chi_copy(psi_word(K)),
// or with endpoint 0/1 one of its two endpoint vertices.

struct Address {
    int copy = 1;                 // 1..6
    std::vector<int> word;        // digits in 1..4
    int endpoint = 0;             // 0 or 1 (vertex addresses)
};

// Ambient position of an address vertex, numerator at scale |word| - 1
// (scale max(|word|-1, 0); level-0 words address copy endpoints).
EPoint address_position(const Address& addr);

// ---------------------------------------------------------------------------
// Boundary graph.

struct BoundaryGraph {
    int level = 0;                       // N
    std::vector<EPoint> pos;             // ambient numerators at scale N, ccw order
    std::unordered_map<EPoint, int, EPointHash> index_of;  // exact position -> vertex id

    std::int64_t cells_per_copy() const { return pow4(level + 1); }
    std::int64_t vertex_count() const { return 3 * cells_per_copy(); }
    std::int64_t edge_count() const { return vertex_count(); }

    // copy (1..3) owning edge e = (v_e -> v_{e+1})
    int edge_copy(std::int64_t e) const { return static_cast<int>(e / cells_per_copy()) + 1; }
    // harmonic coordinate of vertex v in its primary copy's chart
    double h(std::int64_t v) const {
        return static_cast<double>(v % cells_per_copy()) / static_cast<double>(cells_per_copy());
    }
    // h increment along one (ccw) edge; identical for every edge
    double h_increment() const { return 1.0 / static_cast<double>(cells_per_copy()); }
    // mass of one boundary cell: mu is the energy measure of h, total 1/2 per copy
    double cell_mass() const { return 0.5 / static_cast<double>(cells_per_copy()); }
    // lumped vertex mass: half-sum of the two incident cell masses
    double vertex_mass(std::int64_t) const { return cell_mass(); }
    double total_mass() const { return 1.5; }

    std::complex<double> fpos(std::int64_t v) const { return to_complex(pos[v], level); }

    // primary copy (1..3) containing vertex v; junction corners report the
    // copy in which they are the ccw-first endpoint's predecessor (lower index
    // under the canonical rule is handled by canonical_address)
    int primary_copy(std::int64_t v) const { return static_cast<int>(v / cells_per_copy()) + 1; }

    bool is_junction(std::int64_t v) const { return v % cells_per_copy() == 0; }

    // set of copies (1..6) whose closed arc contains vertex v
    std::vector<int> copies_containing(std::int64_t v) const;

    // harmonic coordinate of v in the chart of a given copy (1..6);
    // throws if v is not on that copy
    double h_in_copy(std::int64_t v, int copy) const;
};

BoundaryGraph boundary_graph(int level);

// canonical (lexicographically smallest) vertex address: lowest copy index,
// then the left-endpoint word of the cell starting at the vertex
Address canonical_address(const BoundaryGraph& g, std::int64_t v);

// vertex id for an arbitrary address on graph g (phrase in any copy 1..6)
std::int64_t vertex_of_address(const BoundaryGraph& g, const Address& addr);

// Closed prefractal polyline of g in ccw order: edge i joins pos[i], pos[i+1].
// Area enclosed (shoelace, exact numerator over 2*9^N) and as double.
double prefractal_area(const BoundaryGraph& g);

}  // namespace snow

#endif
