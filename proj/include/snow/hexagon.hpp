#ifndef SNOW_HEXAGON_HPP
#define SNOW_HEXAGON_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "snow/mesh.hpp"

// Internal machinery of the hexagon exhaustion, exposed so the extension
// module can replay how every node value arises:
//   Boundary - node is a prefractal boundary vertex, value = f there
//   Lerp     - node subdivides a straight segment whose trace is linear
//   Center   - hexagon center, value = average of its six ring vertices
// Nodes appear in creation order, so a single forward pass evaluates them.

namespace snow {

struct NodeProv {
    enum Kind { Boundary, Lerp, Center } kind = Boundary;
    std::int64_t gidx = -1;          // Boundary: graph vertex index
    int n0 = -1, n1 = -1;            // Lerp: value = w0 v[n0] + (1-w0) v[n1]
    double w0 = 0.0;
    std::array<int, 6> ring{};       // Center
};

struct HexBuild {
    TriMesh mesh;
    std::vector<NodeProv> prov;                 // one per node
    std::vector<HexagonCensus> census_by_level; // census_by_level[L] = components of Omega \ Omega_L
    // per-hexagon record: ring node ids + how many ring vertices sit on the boundary
    struct Hexagon {
        int gen;
        int center;
        std::array<int, 6> ring;
        int boundary_vertices;
        int facet_vertices;
    };
    std::vector<Hexagon> hexagons;
};

// Omega_level mesh; with complete_to_boundary the pending components are
// filled down to the level-(level+1) polyline (one more hexagon generation
// plus terminal lattice triangles, tagged -1) and boundary nodes are linked.
HexBuild build_hexagon(int level, bool complete_to_boundary, const BoundaryGraph& graph);

}  // namespace snow

#endif
