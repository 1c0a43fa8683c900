#include "snow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace snow {
namespace {

// --- lattice triangle keys -------------------------------------------------
// Up triangle at base v: {v, v+1, v+w}; down triangle: {v+1, v+1+w, v+w}.
// Keys pack (a, b, up) with a bias; coordinates stay below 2^20 for N <= 10.

constexpr std::int64_t kBias = 1 << 20;

inline std::uint64_t tri_key(std::int64_t a, std::int64_t b, bool up) {
    return (static_cast<std::uint64_t>(a + kBias) << 22) ^
           (static_cast<std::uint64_t>(b + kBias) << 1) ^ (up ? 1u : 0u);
}
inline void tri_unkey(std::uint64_t k, std::int64_t& a, std::int64_t& b, bool& up) {
    up = k & 1u;
    b = static_cast<std::int64_t>((k >> 1) & ((1u << 21) - 1)) - kBias;
    a = static_cast<std::int64_t>(k >> 22) - kBias;
}

inline std::array<EPoint, 3> tri_vertices(std::int64_t a, std::int64_t b, bool up) {
    EPoint v{a, b};
    if (up) return {v, v + EPoint{1, 0}, v + EPoint{0, 1}};
    return {v + EPoint{1, 0}, v + EPoint{1, 1}, v + EPoint{0, 1}};
}

// edge key: canonical direction in {(1,0),(0,1),(1,-1)} from the smaller end
inline std::uint64_t edge_key(EPoint p, EPoint q) {
    EPoint d = q - p;
    if (d.a < 0 || (d.a == 0 && d.b < 0)) { std::swap(p, q); d = -d; }
    int dir = (d.a == 1 && d.b == 0) ? 0 : (d.a == 0 && d.b == 1) ? 1 : 2;
    return (static_cast<std::uint64_t>(p.a + kBias) << 24) ^
           (static_cast<std::uint64_t>(p.b + kBias) << 2) ^ static_cast<std::uint64_t>(dir);
}

struct TriSet {
    std::unordered_set<std::uint64_t> keys;
    bool contains(std::uint64_t k) const { return keys.count(k) != 0; }
};

// the three edge-neighbors of a triangle, in the same order as tri_edges
inline std::array<std::uint64_t, 3> neighbors(std::int64_t a, std::int64_t b, bool up) {
    if (up)  // edges: bottom, diagonal, left
        return {tri_key(a, b - 1, false), tri_key(a, b, false), tri_key(a - 1, b, false)};
    // edges: right, top, diagonal
    return {tri_key(a + 1, b, true), tri_key(a, b + 1, true), tri_key(a, b, true)};
}
inline std::array<std::pair<EPoint, EPoint>, 3> tri_edges(std::int64_t a, std::int64_t b, bool up) {
    auto v = tri_vertices(a, b, up);
    return {{{v[0], v[1]}, {v[1], v[2]}, {v[2], v[0]}}};
}

// flood fill inside the closed polyline of `graph` (level k); returns every
// lattice triangle of L_k whose interior lies inside the polygon
TriSet flood_polygon(const BoundaryGraph& graph) {
    std::unordered_set<std::uint64_t> barrier;
    const std::int64_t n = graph.vertex_count();
    barrier.reserve(static_cast<std::size_t>(n) * 2);
    for (std::int64_t i = 0; i < n; ++i)
        barrier.insert(edge_key(graph.pos[static_cast<std::size_t>(i)],
                                graph.pos[static_cast<std::size_t>((i + 1) % n)]));
    TriSet out;
    std::deque<std::uint64_t> queue;
    std::uint64_t seed = tri_key(0, 0, true);
    out.keys.insert(seed);
    queue.push_back(seed);
    while (!queue.empty()) {
        std::uint64_t k = queue.front();
        queue.pop_front();
        std::int64_t a, b; bool up;
        tri_unkey(k, a, b, up);
        auto nb = neighbors(a, b, up);
        auto ed = tri_edges(a, b, up);
        for (int i = 0; i < 3; ++i) {
            if (barrier.count(edge_key(ed[static_cast<std::size_t>(i)].first,
                                       ed[static_cast<std::size_t>(i)].second)))
                continue;
            if (out.keys.insert(nb[static_cast<std::size_t>(i)]).second)
                queue.push_back(nb[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

inline bool touches_boundary(std::uint64_t k, const BoundaryGraph& graph) {
    std::int64_t a, b; bool up;
    tri_unkey(k, a, b, up);
    for (auto& v : tri_vertices(a, b, up))
        if (graph.index_of.count(v)) return true;
    return false;
}

// parent triangle one scale coarser
inline std::uint64_t parent_key(std::uint64_t k) {
    std::int64_t a, b; bool up;
    tri_unkey(k, a, b, up);
    std::int64_t pa = a >= 0 ? a / 3 : -((-a + 2) / 3);
    std::int64_t pb = b >= 0 ? b / 3 : -((-b + 2) / 3);
    std::int64_t r = a - 3 * pa, s = b - 3 * pb;
    bool parent_up = up ? (r + s <= 2) : (r + s <= 1);
    return tri_key(pa, pb, parent_up);
}

struct MeshBuilder {
    TriMesh mesh;
    std::unordered_map<EPoint, int, EPointHash> node_of;

    explicit MeshBuilder(int level) { mesh.level = level; }

    int node(EPoint p) {  // p at scale mesh.level
        auto it = node_of.find(p);
        if (it != node_of.end()) return it->second;
        int id = static_cast<int>(mesh.node_pos.size());
        mesh.node_pos.push_back(p);
        mesh.boundary_link.push_back(-1);
        node_of.emplace(p, id);
        return id;
    }
    void add_tri(EPoint p0, EPoint p1, EPoint p2, int shell_tag) {
        if (orient(p0, p1, p2) < 0) std::swap(p1, p2);
        mesh.tris.push_back({node(p0), node(p1), node(p2)});
        mesh.shell.push_back(shell_tag);
    }
};

// boundary edges (used once) of a triangle set, as scale-k point pairs
std::vector<std::pair<EPoint, EPoint>> set_boundary_edges(const TriSet& set) {
    std::unordered_map<std::uint64_t, std::pair<EPoint, EPoint>> first_seen;
    std::unordered_set<std::uint64_t> dup;
    for (std::uint64_t k : set.keys) {
        std::int64_t a, b; bool up;
        tri_unkey(k, a, b, up);
        for (auto& e : tri_edges(a, b, up)) {
            std::uint64_t ek = edge_key(e.first, e.second);
            if (!first_seen.emplace(ek, e).second) dup.insert(ek);
        }
    }
    std::vector<std::pair<EPoint, EPoint>> out;
    for (auto& [ek, e] : first_seen)
        if (!dup.count(ek)) out.push_back(e);
    return out;
}

void build_bands(MeshBuilder& mb, int level, bool uniform) {
    TriMesh& mesh = mb.mesh;
    TriSet prev;
    std::vector<std::pair<EPoint, EPoint>> prev_ring;  // at scale k-1
    mesh.shell_ring_nodes.assign(static_cast<std::size_t>(level) + 1, {});
    mesh.shell_ring_edges.assign(static_cast<std::size_t>(level) + 1, {});

    std::unordered_map<std::uint64_t, int> band_tag;  // for uniform tags
    for (int k = 1; k <= level; ++k) {
        BoundaryGraph g = boundary_graph(k);
        TriSet flood = flood_polygon(g);
        TriSet strict;
        strict.keys.reserve(flood.keys.size());
        for (std::uint64_t t : flood.keys)
            if (!touches_boundary(t, g)) strict.keys.insert(t);

        const std::int64_t up = pow3(level - k);  // scale factor to mesh scale

        if (!uniform) {
            // band triangles: strict at k, parent not strict at k-1
            for (std::uint64_t t : strict.keys) {
                if (k > 1 && prev.contains(parent_key(t))) continue;
                std::int64_t a, b; bool tu;
                tri_unkey(t, a, b, tu);
                auto v = tri_vertices(a, b, tu);
                mb.add_tri(up * v[0], up * v[1], up * v[2], k);
            }
        } else {
            std::unordered_map<std::uint64_t, int> tags;
            tags.reserve(strict.keys.size());
            for (std::uint64_t t : strict.keys) {
                int tag = k;
                if (k > 1) {
                    auto it = band_tag.find(parent_key(t));
                    if (it != band_tag.end()) tag = it->second;
                }
                tags.emplace(t, tag);
            }
            band_tag.swap(tags);
            if (k == level) {
                for (auto& [t, tag] : band_tag) {
                    std::int64_t a, b; bool tu;
                    tri_unkey(t, a, b, tu);
                    auto v = tri_vertices(a, b, tu);
                    mb.add_tri(v[0], v[1], v[2], tag);
                }
            }
        }

        // ring of T_k
        auto ring = set_boundary_edges(strict);
        auto& rn = mesh.shell_ring_nodes[static_cast<std::size_t>(k)];
        auto& re = mesh.shell_ring_edges[static_cast<std::size_t>(k)];
        std::unordered_set<int> seen;
        for (auto& e : ring) {
            int n0 = mb.node(up * e.first), n1 = mb.node(up * e.second);
            re.push_back({n0, n1});
            if (seen.insert(n0).second) rn.push_back(n0);
            if (seen.insert(n1).second) rn.push_back(n1);
        }

        // hanging nodes: fine ring/band vertices splitting a coarse ring edge
        if (!uniform && k > 1) {
            std::unordered_set<std::uint64_t> coarse_ring;
            for (auto& e : prev_ring) coarse_ring.insert(edge_key(e.first, e.second));
            std::unordered_set<int> done;
            auto consider = [&](EPoint p) {  // p at scale k
                std::int64_t ra = ((p.a % 3) + 3) % 3, rb = ((p.b % 3) + 3) % 3;
                if (ra == 0 && rb == 0) return;  // coarse lattice point
                for (int t = 1; t <= 2; ++t) {
                    for (int d = 0; d < 6; ++d) {
                        EPoint dir = sixth_root(d);
                        EPoint base = p - t * dir;
                        if (base.a % 3 != 0 || base.b % 3 != 0) continue;
                        EPoint c0{base.a / 3, base.b / 3};
                        EPoint c1 = c0 + dir;
                        if (!coarse_ring.count(edge_key(c0, c1))) continue;
                        int id = mb.node(up * p);
                        if (!done.insert(id).second) return;
                        int m0 = mb.node(3 * up * c0), m1 = mb.node(3 * up * c1);
                        mesh.hanging.push_back({id, m0, m1, 1.0 - t / 3.0});
                        return;
                    }
                }
            };
            for (std::uint64_t t : strict.keys) {
                if (prev.contains(parent_key(t))) continue;
                std::int64_t a, b; bool tu;
                tri_unkey(t, a, b, tu);
                for (auto& v : tri_vertices(a, b, tu)) consider(v);
            }
        }

        prev = std::move(strict);
        prev_ring = std::move(ring);
    }
}

}  // namespace

double TriMesh::tri_area(std::size_t t) const {
    auto& tr = tris[t];
    EPoint p = node_pos[static_cast<std::size_t>(tr[0])];
    EPoint q = node_pos[static_cast<std::size_t>(tr[1])];
    EPoint r = node_pos[static_cast<std::size_t>(tr[2])];
    double c = static_cast<double>(ecross(q - p, r - p));
    return std::abs(c) * 0.8660254037844386467637231707529362 * 0.5 *
           std::pow(3.0, -2.0 * level);
}

double TriMesh::total_area() const {
    __int128 acc = 0;
    for (auto& tr : tris) {
        EPoint p = node_pos[static_cast<std::size_t>(tr[0])];
        EPoint q = node_pos[static_cast<std::size_t>(tr[1])];
        EPoint r = node_pos[static_cast<std::size_t>(tr[2])];
        acc += static_cast<__int128>(ecross(q - p, r - p));
    }
    return static_cast<double>(static_cast<long double>(acc)) *
           0.8660254037844386467637231707529362 * 0.5 * std::pow(3.0, -2.0 * level);
}

double TriMesh::min_angle_deg() const {
    double worst = 180.0;
    for (auto& tr : tris) {
        std::array<std::complex<double>, 3> p;
        for (int i = 0; i < 3; ++i)
            p[static_cast<std::size_t>(i)] =
                to_complex(node_pos[static_cast<std::size_t>(tr[static_cast<std::size_t>(i)])], level);
        for (int i = 0; i < 3; ++i) {
            auto u = p[static_cast<std::size_t>((i + 1) % 3)] - p[static_cast<std::size_t>(i)];
            auto v = p[static_cast<std::size_t>((i + 2) % 3)] - p[static_cast<std::size_t>(i)];
            double cosang = (u.real() * v.real() + u.imag() * v.imag()) / (std::abs(u) * std::abs(v));
            worst = std::min(worst, std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / M_PI);
        }
    }
    return worst;
}

bool TriMesh::conforming() const { return hanging.empty(); }

TriMesh shell_triangulation(int level, ExecPolicy) {
    if (level < 1 || level > kMaxLevel)
        throw std::invalid_argument("shell_triangulation: level out of range 1..10");
    MeshBuilder mb(level);
    mb.mesh.construction = Construction::ShellLattice;
    mb.mesh.uniform = false;
    build_bands(mb, level, false);
    return std::move(mb.mesh);
}

TriMesh uniform_triangulation(int level, ExecPolicy) {
    if (level < 1 || level > kMaxLevel)
        throw std::invalid_argument("uniform_triangulation: level out of range 1..10");
    MeshBuilder mb(level);
    mb.mesh.construction = Construction::ShellLattice;
    mb.mesh.uniform = true;
    build_bands(mb, level, true);
    return std::move(mb.mesh);
}

TriMesh collar_mesh(const TriMesh& base, const BoundaryGraph& graph) {
    if (base.level != graph.level)
        throw std::invalid_argument("collar_mesh: mesh and graph level mismatch");
    if (base.construction == Construction::HexagonInduction)
        throw std::invalid_argument("collar_mesh: use hexagon_exhaustion's collar completion");
    if (base.has_collar) throw std::invalid_argument("collar_mesh: base already has a collar");
    TriMesh out = base;
    MeshBuilder mb(base.level);
    mb.mesh = std::move(out);
    mb.node_of.reserve(mb.mesh.node_pos.size() * 2);
    for (std::size_t i = 0; i < mb.mesh.node_pos.size(); ++i)
        mb.node_of.emplace(mb.mesh.node_pos[i], static_cast<int>(i));

    TriSet flood = flood_polygon(graph);
    for (std::uint64_t t : flood.keys) {
        if (!touches_boundary(t, graph)) continue;
        std::int64_t a, b; bool up;
        tri_unkey(t, a, b, up);
        auto v = tri_vertices(a, b, up);
        mb.add_tri(v[0], v[1], v[2], -1);
    }
    // boundary links
    for (std::size_t i = 0; i < mb.mesh.node_pos.size(); ++i) {
        auto it = graph.index_of.find(mb.mesh.node_pos[i]);
        if (it != graph.index_of.end()) mb.mesh.boundary_link[i] = it->second;
    }
    mb.mesh.has_collar = true;
    // wire consistency: every graph vertex must be a mesh node
    for (auto& [p, gi] : graph.index_of) {
        (void)gi;
        if (!mb.node_of.count(p))
            throw std::runtime_error("collar_mesh: non-conforming collar (graph vertex missing)");
    }
    return std::move(mb.mesh);
}

}  // namespace snow
