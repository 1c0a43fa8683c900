#include "snow/hexagon.hpp"

#include <cassert>
#include <stdexcept>
#include <unordered_map>

namespace snow {
namespace {

struct Comp {
    enum Kind { TwoSided, OneSided, Triangle } kind;
    int gen;                      // sides and arc chords have length 3^-(gen-1)
    std::int64_t arc_lo = 0, arc_hi = 0;  // ccw graph indices, arc_hi > arc_lo (mod n)
    int f0 = -1, f1 = -1;         // TwoSided facet node ids (= arc endpoint nodes)
    int nu = -1, nw = -1, nv = -1;  // OneSided: u on boundary, w interior, v on boundary
    int t0 = -1, t1 = -1, t2 = -1;  // Triangle node ids
};

struct Builder {
    const BoundaryGraph& graph;
    HexBuild out;
    std::unordered_map<EPoint, int, EPointHash> node_of;

    explicit Builder(const BoundaryGraph& g) : graph(g) {
        out.mesh.level = g.level;
        out.mesh.construction = Construction::HexagonInduction;
    }

    EPoint gpos(std::int64_t i) const {
        return graph.pos[static_cast<std::size_t>(i % graph.vertex_count())];
    }

    int node(EPoint p, const NodeProv& prov) {
        auto it = node_of.find(p);
        if (it != node_of.end()) return it->second;
        int id = static_cast<int>(out.mesh.node_pos.size());
        out.mesh.node_pos.push_back(p);
        out.mesh.boundary_link.push_back(prov.kind == NodeProv::Boundary
                                             ? static_cast<int>(prov.gidx % graph.vertex_count())
                                             : -1);
        out.prov.push_back(prov);
        node_of.emplace(p, id);
        return id;
    }
    int bnode(std::int64_t gidx) {
        NodeProv p;
        p.kind = NodeProv::Boundary;
        p.gidx = gidx % graph.vertex_count();
        return node(gpos(gidx), p);
    }
    void add_tri(int a, int b, int c, int tag) {
        EPoint pa = out.mesh.node_pos[static_cast<std::size_t>(a)];
        EPoint pb = out.mesh.node_pos[static_cast<std::size_t>(b)];
        EPoint pc = out.mesh.node_pos[static_cast<std::size_t>(c)];
        if (orient(pa, pb, pc) < 0) std::swap(b, c);
        out.mesh.tris.push_back({a, b, c});
        out.mesh.shell.push_back(tag);
    }

    // inscribe the hexagon of a pending component; returns its children
    std::vector<Comp> subdivide(const Comp& comp) {
        std::vector<Comp> kids;
        const int g = comp.gen;
        if (comp.kind == Comp::Triangle) return kids;  // terminal by nature

        if (comp.kind == Comp::TwoSided) {
            const std::int64_t Wf = (comp.arc_hi - comp.arc_lo) / 2;
            const std::int64_t mid = comp.arc_lo + Wf;
            EPoint A = gpos(comp.arc_lo), B = gpos(comp.arc_hi);
            EPoint D = B - A;
            EPoint U{D.a / 3, D.b / 3};
            EPoint c = A + emul(U, {2, -1});
            std::array<EPoint, 6> H;
            for (int m = 0; m < 6; ++m) H[static_cast<std::size_t>(m)] = c + emul(U, sixth_root(m + 2));

            NodeProv lp;
            lp.kind = NodeProv::Lerp;
            lp.n0 = comp.f0; lp.n1 = comp.f1;
            lp.w0 = 2.0 / 3.0;
            int h0 = node(H[0], lp);
            lp.w0 = 1.0 / 3.0;
            int h5 = node(H[5], lp);
            int h1 = bnode(comp.arc_lo + Wf / 4);
            int h2 = bnode(comp.arc_lo + 3 * Wf / 4);
            int h3 = bnode(mid + Wf / 4);
            int h4 = bnode(mid + 3 * Wf / 4);

            NodeProv cp;
            cp.kind = NodeProv::Center;
            cp.ring = {h0, h1, h2, h3, h4, h5};
            int ctr = node(c, cp);
            std::array<int, 6> ring = {h0, h1, h2, h3, h4, h5};
            for (int m = 0; m < 6; ++m)
                add_tri(ctr, ring[static_cast<std::size_t>(m)], ring[static_cast<std::size_t>((m + 1) % 6)], g);
            out.hexagons.push_back({g, ctr, ring, 4, 2});

            kids.push_back({Comp::OneSided, g + 1, comp.arc_lo, comp.arc_lo + Wf / 4,
                            -1, -1, comp.f0, h0, h1, -1, -1, -1});
            kids.push_back({Comp::TwoSided, g + 1, comp.arc_lo + Wf / 4, comp.arc_lo + 3 * Wf / 4,
                            h1, h2, -1, -1, -1, -1, -1, -1});
            kids.push_back({Comp::TwoSided, g + 1, comp.arc_lo + 3 * Wf / 4, mid + Wf / 4,
                            h2, h3, -1, -1, -1, -1, -1, -1});
            kids.push_back({Comp::TwoSided, g + 1, mid + Wf / 4, mid + 3 * Wf / 4,
                            h3, h4, -1, -1, -1, -1, -1, -1});
            kids.push_back({Comp::OneSided, g + 1, mid + 3 * Wf / 4, comp.arc_hi,
                            -1, -1, h4, h5, comp.f1, -1, -1, -1});
            return kids;
        }

        // OneSided
        const std::int64_t Wf = comp.arc_hi - comp.arc_lo;
        EPoint Pu = gpos(comp.arc_lo), Pv = gpos(comp.arc_hi);
        EPoint D = Pv - Pu;
        EPoint U{D.a / 3, D.b / 3};
        EPoint C = Pu + emul(U, {1, 1});
        std::array<EPoint, 6> G;
        for (int m = 0; m < 6; ++m) G[static_cast<std::size_t>(m)] = C + emul(U, sixth_root(m));

        NodeProv lp;
        lp.kind = NodeProv::Lerp;
        lp.n0 = comp.nw; lp.n1 = comp.nv;
        lp.w0 = 1.0 / 3.0;
        int g0 = node(G[0], lp);
        lp.w0 = 2.0 / 3.0;
        int g1 = node(G[1], lp);
        lp.n0 = comp.nu; lp.n1 = comp.nw;
        lp.w0 = 1.0 / 3.0;
        int g2 = node(G[2], lp);
        lp.w0 = 2.0 / 3.0;
        int g3 = node(G[3], lp);
        int g4 = bnode(comp.arc_lo + Wf / 4);
        int g5 = bnode(comp.arc_lo + 3 * Wf / 4);

        NodeProv cp;
        cp.kind = NodeProv::Center;
        cp.ring = {g0, g1, g2, g3, g4, g5};
        int ctr = node(C, cp);
        std::array<int, 6> ring = {g0, g1, g2, g3, g4, g5};
        for (int m = 0; m < 6; ++m)
            add_tri(ctr, ring[static_cast<std::size_t>(m)], ring[static_cast<std::size_t>((m + 1) % 6)], g);
        out.hexagons.push_back({g, ctr, ring, 2, 4});

        kids.push_back({Comp::Triangle, g + 1, 0, 0, -1, -1, -1, -1, -1, comp.nw, g1, g2});
        kids.push_back({Comp::OneSided, g + 1, comp.arc_lo, comp.arc_lo + Wf / 4,
                        -1, -1, comp.nu, g3, g4, -1, -1, -1});
        kids.push_back({Comp::TwoSided, g + 1, comp.arc_lo + Wf / 4, comp.arc_lo + 3 * Wf / 4,
                        g4, g5, -1, -1, -1, -1, -1, -1});
        kids.push_back({Comp::OneSided, g + 1, comp.arc_lo + 3 * Wf / 4, comp.arc_hi,
                        -1, -1, g5, g0, comp.nv, -1, -1, -1});
        return kids;
    }

    void terminal(const Comp& comp) {
        if (comp.kind == Comp::Triangle) {
            add_tri(comp.t0, comp.t1, comp.t2, -1);
            return;
        }
        if (comp.kind == Comp::TwoSided) {
            std::int64_t mid = (comp.arc_lo + comp.arc_hi) / 2;
            add_tri(comp.f0, bnode(mid), comp.f1, -1);
            return;
        }
        add_tri(comp.nu, comp.nw, comp.nv, -1);
    }
};

HexagonCensus census_of(const std::vector<Comp>& pending) {
    HexagonCensus c;
    for (auto& comp : pending) {
        if (comp.kind == Comp::TwoSided) ++c.two_fractal_sides;
        else if (comp.kind == Comp::OneSided) ++c.one_fractal_side;
        else ++c.triangles;
    }
    return c;
}

}  // namespace

HexBuild build_hexagon(int level, bool complete_to_boundary, const BoundaryGraph& graph) {
    if (level < 1 || level > kMaxLevel)
        throw std::invalid_argument("hexagon_exhaustion: level out of range 1..10");
    if (graph.level != level)
        throw std::invalid_argument("hexagon_exhaustion: graph level must equal mesh level");
    Builder b(graph);
    const std::int64_t C = graph.cells_per_copy();

    // base hexagon: six unit triangles between the 6th roots of unity
    std::array<int, 6> roots;
    std::array<std::int64_t, 6> ridx;
    for (int k = 0; k < 6; ++k) {
        // roots in ccw order starting at e^{-i pi/3}: copy c at quarter positions
        ridx[static_cast<std::size_t>(k)] = (C / 4) + k * (C / 2);
        roots[static_cast<std::size_t>(k)] = b.bnode(ridx[static_cast<std::size_t>(k)]);
    }
    NodeProv cp;
    cp.kind = NodeProv::Center;
    cp.ring = roots;
    int ctr = b.node(EPoint{0, 0}, cp);
    for (int k = 0; k < 6; ++k)
        b.add_tri(ctr, roots[static_cast<std::size_t>(k)], roots[static_cast<std::size_t>((k + 1) % 6)], 0);
    b.out.hexagons.push_back({0, ctr, roots, 6, 0});

    std::vector<Comp> pending;
    for (int k = 0; k < 6; ++k)
        pending.push_back({Comp::TwoSided, 1, ridx[static_cast<std::size_t>(k)],
                           ridx[static_cast<std::size_t>(k)] + C / 2,
                           roots[static_cast<std::size_t>(k)], roots[static_cast<std::size_t>((k + 1) % 6)],
                           -1, -1, -1, -1, -1, -1});

    b.out.census_by_level.assign(static_cast<std::size_t>(level) + 2, {});
    b.out.census_by_level[1] = census_of(pending);

    const int last_gen = complete_to_boundary ? level : level - 1;
    for (int g = 1; g <= last_gen; ++g) {
        std::vector<Comp> next;
        for (auto& comp : pending) {
            if (comp.kind == Comp::Triangle) {  // never subdivides further
                next.push_back(comp);
                continue;
            }
            auto kids = b.subdivide(comp);
            next.insert(next.end(), kids.begin(), kids.end());
        }
        pending = std::move(next);
        b.out.census_by_level[static_cast<std::size_t>(g) + 1] = census_of(pending);
    }
    if (complete_to_boundary) {
        for (auto& comp : pending) b.terminal(comp);
        b.out.mesh.has_collar = true;
    }
    return std::move(b.out);
}

TriMesh hexagon_exhaustion(int level) {
    BoundaryGraph g = boundary_graph(level);
    return build_hexagon(level, false, g).mesh;
}

HexagonCensus hexagon_census(int level) {
    BoundaryGraph g = boundary_graph(level);
    HexBuild hb = build_hexagon(level, false, g);
    return hb.census_by_level[static_cast<std::size_t>(level)];
}

}  // namespace snow
