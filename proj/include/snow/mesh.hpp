#ifndef SNOW_MESH_HPP
#define SNOW_MESH_HPP

#include <array>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "snow/geometry.hpp"
#include "snow/parallel.hpp"

// Triangulations of the snowflake interior.
//
// All meshes live on the lattice L_N = 3^-N Z[w]; node numerators are stored
// at scale N.  The level-(N+1) prefractal polygon is itself an L_N lattice
// polygon (its vertices are L_N \cap boundary), so "inside" tests reduce to a
// flood fill over lattice triangles with the polyline edges as barriers:
//
//  * T_k (paper's shell set) = side-3^-k triangles strictly inside the
//    level-(k+1) polygon, i.e. flooded triangles with no vertex on the
//    polyline.  It is compact and separated from the boundary.
//  * collar = flooded triangles touching the polyline; together with T_N they
//    tile the prefractal polygon exactly, so the collar needs no bespoke
//    triangulation and every element stays equilateral.
//
// Two constructions are provided:
//  * shell bands: T_1 at side 1/3, then T_k \ T_{k-1} at side 3^-k.  Faithful
//    to the multiscale picture; coarse and fine bands meet in T-junctions
//    (fine vertices on coarse edges), which extension handles by interface
//    interpolation.  Not suitable for conforming FEM.
//  * uniform: every triangle at side 3^-N.  Conforming; the solver runs here.

namespace snow {

enum class Construction { ShellLattice, HexagonInduction };

struct TriMesh {
    int level = 0;
    Construction construction = Construction::ShellLattice;
    bool uniform = false;
    bool has_collar = false;

    std::vector<EPoint> node_pos;                    // numerators at scale `level`
    std::vector<std::array<int, 3>> tris;            // ccw node triples
    std::vector<int> shell;                          // per-tri band k; -1 = collar
    std::vector<int> boundary_link;                  // per-node graph vertex id or -1
    std::vector<std::vector<int>> shell_ring_nodes;  // nodes on boundary of T_k, k=1..level
    std::vector<std::vector<std::array<int, 2>>> shell_ring_edges;

    // nodes that subdivide a coarser band's edge (T-junctions); value = the
    // two coarse endpoint node ids and the interpolation weight of the first
    struct HangingNode {
        int node;
        int master0, master1;
        double weight0;
    };
    std::vector<HangingNode> hanging;

    std::size_t node_count() const { return node_pos.size(); }
    std::size_t tri_count() const { return tris.size(); }
    std::complex<double> fpos(int n) const { return to_complex(node_pos[static_cast<std::size_t>(n)], level); }

    double tri_area(std::size_t t) const;
    double min_angle_deg() const;
    double total_area() const;
    bool conforming() const;  // no T-junctions anywhere
};

// Paper-style multiscale shell triangulation T_N (bands of side 3^-k).
TriMesh shell_triangulation(int level, ExecPolicy policy = ExecPolicy::OpenMP);

// Uniform side-3^-N triangulation of T_N (single band, conforming).
TriMesh uniform_triangulation(int level, ExecPolicy policy = ExecPolicy::OpenMP);

// Append the collar (lattice triangles between T_N and the level-(N+1)
// polyline) and link boundary nodes to graph vertices.  The graph must be at
// the same level as the mesh.
TriMesh collar_mesh(const TriMesh& base, const BoundaryGraph& graph);

// --------------------------------------------------------------------------
// Hexagon exhaustion (second construction).  hexagon_census(level) reports the
// open components of Omega \ closure(Omega_level) by shape class.

struct HexagonCensus {
    std::int64_t two_fractal_sides = 0;
    std::int64_t one_fractal_side = 0;
    std::int64_t triangles = 0;
    std::int64_t total() const { return two_fractal_sides + one_fractal_side + triangles; }
};

TriMesh hexagon_exhaustion(int level);
HexagonCensus hexagon_census(int level);

}  // namespace snow

#endif
