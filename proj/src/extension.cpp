#include "snow/extension.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "snow/hexagon.hpp"

namespace snow {
namespace {

// Bucketed exact nearest-point search over a fixed set of boundary points.
// Buckets are floating, candidate comparison is exact; ties are kept.
struct NearestSearch {
    const BoundaryGraph& graph;
    std::int64_t stride;  // fine indices between consecutive V_{k+1} points
    double cell;          // bucket size
    std::unordered_map<std::int64_t, std::vector<std::int64_t>> buckets;

    NearestSearch(const BoundaryGraph& g, int shell_k) : graph(g) {
        stride = pow4(g.level - shell_k);
        cell = std::pow(3.0, -shell_k);
        const std::int64_t n = g.vertex_count();
        for (std::int64_t i = 0; i < n; i += stride) {
            auto z = g.fpos(i);
            buckets[key(z.real(), z.imag())].push_back(i);
        }
    }
    std::int64_t key(double x, double y) const {
        auto ix = static_cast<std::int64_t>(std::floor(x / cell));
        auto iy = static_cast<std::int64_t>(std::floor(y / cell));
        return (ix + (1 << 20)) * (1LL << 22) + (iy + (1 << 20));
    }
    // all minimizers of exact squared distance to p (numerator at graph scale)
    std::vector<std::int64_t> nearest(EPoint p) const {
        auto z = to_complex(p, graph.level);
        auto cx = static_cast<std::int64_t>(std::floor(z.real() / cell));
        auto cy = static_cast<std::int64_t>(std::floor(z.imag() / cell));
        std::vector<std::int64_t> best;
        std::int64_t best_d2 = std::numeric_limits<std::int64_t>::max();
        for (std::int64_t ring = 0;; ++ring) {
            bool any_cell = false;
            for (std::int64_t dx = -ring; dx <= ring; ++dx) {
                for (std::int64_t dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    auto it = buckets.find((cx + dx + (1 << 20)) * (1LL << 22) + (cy + dy + (1 << 20)));
                    if (it == buckets.end()) continue;
                    any_cell = true;
                    for (std::int64_t i : it->second) {
                        std::int64_t d2 = enorm2(graph.pos[static_cast<std::size_t>(i)] - p);
                        if (d2 < best_d2) {
                            best_d2 = d2;
                            best.assign(1, i);
                        } else if (d2 == best_d2) {
                            best.push_back(i);
                        }
                    }
                }
            }
            (void)any_cell;
            if (!best.empty()) {
                // certified when the nearest possible point of the next ring
                // is farther than the current best
                double ring_min = (static_cast<double>(ring)) * cell;  // conservative
                double best_d = std::sqrt(static_cast<double>(best_d2)) * std::pow(3.0, -graph.level);
                if (ring_min > best_d) break;
            }
            if (ring > (1 << 12)) throw std::runtime_error("nearest: search did not terminate");
        }
        return best;
    }
};

double segment_distance(std::complex<double> p, std::complex<double> a, std::complex<double> b) {
    auto d = b - a;
    double len2 = std::norm(d);
    double t = len2 > 0 ? std::clamp(((p - a).real() * d.real() + (p - a).imag() * d.imag()) / len2, 0.0, 1.0)
                        : 0.0;
    return std::abs(p - (a + t * d));
}

}  // namespace

std::vector<std::int64_t> nearest_boundary_points(const BoundaryGraph& g, int shell_k, EPoint p) {
    NearestSearch search(g, shell_k);
    return search.nearest(p);
}

double intrinsic_lipschitz_constant(const BoundaryFunction& f) {
    const BoundaryGraph& g = *f.graph;
    const std::int64_t n = g.vertex_count();
    double best = 0.0;
    for (std::int64_t e = 0; e < n; ++e)
        best = std::max(best, std::abs(f.values[static_cast<std::size_t>((e + 1) % n)] -
                                       f.values[static_cast<std::size_t>(e)]));
    return best * static_cast<double>(g.cells_per_copy());
}

ExtensionResult extend_shell(const BoundaryFunction& f,
                             std::shared_ptr<const TriMesh> mesh_ptr, ExecPolicy policy) {
    const BoundaryGraph& g = *f.graph;
    const TriMesh& mesh = *mesh_ptr;
    if (mesh.level != g.level) throw std::invalid_argument("extend_shell: mesh/graph level mismatch");
    if (!mesh.has_collar) throw std::invalid_argument("extend_shell: mesh must carry the collar");

    ExtensionResult out;
    out.mesh = mesh_ptr;
    out.method = Construction::ShellLattice;
    const double unset = std::numeric_limits<double>::quiet_NaN();
    out.values.assign(mesh.node_count(), unset);

    for (std::size_t i = 0; i < mesh.node_count(); ++i)
        if (mesh.boundary_link[i] >= 0)
            out.values[i] = f.values[static_cast<std::size_t>(mesh.boundary_link[i])];

    std::unordered_set<int> hanging_ids;
    for (auto& h : mesh.hanging) hanging_ids.insert(h.node);

    // nodes of each band, in band order
    std::vector<std::vector<int>> band_nodes(static_cast<std::size_t>(mesh.level) + 1);
    {
        std::vector<int> band_of(mesh.node_count(), std::numeric_limits<int>::max());
        for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
            int s = mesh.shell[t];
            if (s < 0) continue;
            for (int v : mesh.tris[t]) band_of[static_cast<std::size_t>(v)] =
                std::min(band_of[static_cast<std::size_t>(v)], s);
        }
        for (std::size_t i = 0; i < mesh.node_count(); ++i)
            if (band_of[i] <= mesh.level) band_nodes[static_cast<std::size_t>(band_of[i])].push_back(static_cast<int>(i));
    }

    for (int k = 1; k <= mesh.level; ++k) {
        NearestSearch search(g, k);
        auto& nodes = band_nodes[static_cast<std::size_t>(k)];
        std::vector<int> todo;
        for (int i : nodes)
            if (std::isnan(out.values[static_cast<std::size_t>(i)]) && !hanging_ids.count(i))
                todo.push_back(i);
        parallel_for(static_cast<std::int64_t>(todo.size()), policy, [&](std::int64_t idx) {
            int i = todo[static_cast<std::size_t>(idx)];
            auto mins = search.nearest(mesh.node_pos[static_cast<std::size_t>(i)]);
            double acc = 0.0;
            for (std::int64_t m : mins) acc += f.values[static_cast<std::size_t>(m)];
            out.values[static_cast<std::size_t>(i)] = acc / static_cast<double>(mins.size());
        });
    }

    // interface nodes keep the coarse value (linear along the split edge)
    for (auto& h : mesh.hanging)
        out.values[static_cast<std::size_t>(h.node)] =
            h.weight0 * out.values[static_cast<std::size_t>(h.master0)] +
            (1.0 - h.weight0) * out.values[static_cast<std::size_t>(h.master1)];

    // collar-interior nodes not reached by any band: finest-shell averaging
    {
        NearestSearch search(g, mesh.level);
        for (std::size_t i = 0; i < mesh.node_count(); ++i) {
            if (!std::isnan(out.values[i])) continue;
            auto mins = search.nearest(mesh.node_pos[i]);
            double acc = 0.0;
            for (std::int64_t m : mins) acc += f.values[static_cast<std::size_t>(m)];
            out.values[i] = acc / static_cast<double>(mins.size());
        }
    }
    return out;
}

ExtensionResult extend_shell(const BoundaryFunction& f, int level, ExecPolicy policy) {
    if (f.graph->level != level) throw std::invalid_argument("extend_shell: f level mismatch");
    auto mesh = std::make_shared<TriMesh>(collar_mesh(shell_triangulation(level, policy), *f.graph));
    return extend_shell(f, std::move(mesh), policy);
}

ExtensionResult extend_hexagon(const BoundaryFunction& f, int level) {
    const BoundaryGraph& g = *f.graph;
    if (g.level != level) throw std::invalid_argument("extend_hexagon: f level mismatch");
    HexBuild hb = build_hexagon(level, false, g);
    ExtensionResult out;
    out.method = Construction::HexagonInduction;
    out.values.assign(hb.mesh.node_count(), 0.0);
    for (std::size_t i = 0; i < hb.prov.size(); ++i) {
        const NodeProv& p = hb.prov[i];
        switch (p.kind) {
            case NodeProv::Boundary:
                out.values[i] = f.values[static_cast<std::size_t>(p.gidx)];
                break;
            case NodeProv::Lerp:
                out.values[i] = p.w0 * out.values[static_cast<std::size_t>(p.n0)] +
                                (1.0 - p.w0) * out.values[static_cast<std::size_t>(p.n1)];
                break;
            case NodeProv::Center: {
                double acc = 0.0;
                for (int r : p.ring) acc += out.values[static_cast<std::size_t>(r)];
                out.values[i] = acc / 6.0;
                break;
            }
        }
    }
    out.mesh = std::make_shared<TriMesh>(std::move(hb.mesh));
    return out;
}

LipschitzReport measured_lipschitz(const ExtensionResult& r, ExecPolicy policy) {
    const TriMesh& mesh = *r.mesh;
    LipschitzReport rep;
    rep.per_shell.assign(static_cast<std::size_t>(mesh.level) + 1, 0.0);
    std::vector<double> grad(mesh.tri_count(), 0.0);
    parallel_for(static_cast<std::int64_t>(mesh.tri_count()), policy, [&](std::int64_t t) {
        auto& tr = mesh.tris[static_cast<std::size_t>(t)];
        auto p0 = mesh.fpos(tr[0]), p1 = mesh.fpos(tr[1]), p2 = mesh.fpos(tr[2]);
        double v0 = r.values[static_cast<std::size_t>(tr[0])];
        double v1 = r.values[static_cast<std::size_t>(tr[1])];
        double v2 = r.values[static_cast<std::size_t>(tr[2])];
        auto e1 = p1 - p0, e2 = p2 - p0;
        double det = e1.real() * e2.imag() - e1.imag() * e2.real();
        double gx = ((v1 - v0) * e2.imag() - (v2 - v0) * e1.imag()) / det;
        double gy = ((v2 - v0) * e1.real() - (v1 - v0) * e2.real()) / det;
        grad[static_cast<std::size_t>(t)] = std::hypot(gx, gy);
    });
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        int s = mesh.shell[t];
        rep.global = std::max(rep.global, grad[t]);
        if (s < 0)
            rep.collar = std::max(rep.collar, grad[t]);
        else if (s <= mesh.level)
            rep.per_shell[static_cast<std::size_t>(s)] = std::max(rep.per_shell[static_cast<std::size_t>(s)], grad[t]);
    }
    return rep;
}

BoundaryFunction y1_boundary_data(const BoundaryGraph& g) {
    BoundaryFunction f(g);
    const std::int64_t C = g.cells_per_copy();
    for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
        double h = static_cast<double>(v % C) / static_cast<double>(C);
        switch (static_cast<int>(v / C)) {
            case 0: f.values[static_cast<std::size_t>(v)] = h; break;
            case 1: f.values[static_cast<std::size_t>(v)] = 1.0 + 2.0 * h; break;
            default: f.values[static_cast<std::size_t>(v)] = 3.0 - 3.0 * h; break;
        }
    }
    return f;
}

std::pair<ExtensionResult, ExtensionResult> coordinates(int level, ExecPolicy policy) {
    if (level < 2) throw std::invalid_argument("coordinates: level must be >= 2");
    BoundaryGraph g = boundary_graph(level);
    BoundaryFunction f = y1_boundary_data(g);
    auto mesh = std::make_shared<TriMesh>(collar_mesh(shell_triangulation(level, policy), g));
    ExtensionResult y1 = extend_shell(f, mesh, policy);

    const TriMesh& m = *mesh;
    ExtensionResult y2;
    y2.mesh = mesh;
    y2.method = Construction::ShellLattice;
    const double unset = std::numeric_limits<double>::quiet_NaN();
    y2.values.assign(m.node_count(), unset);

    // ring values 3^-k; boundary 0
    for (std::size_t i = 0; i < m.node_count(); ++i)
        if (m.boundary_link[i] >= 0) y2.values[i] = 0.0;
    std::vector<int> ring_of(m.node_count(), -1);
    for (int k = 1; k <= m.level; ++k)
        for (int i : m.shell_ring_nodes[static_cast<std::size_t>(k)]) {
            ring_of[static_cast<std::size_t>(i)] = k;
            y2.values[static_cast<std::size_t>(i)] = std::pow(3.0, -k);
        }
    for (auto& h : m.hanging)  // interface nodes sit on the coarse ring
        y2.values[static_cast<std::size_t>(h.node)] =
            h.weight0 * y2.values[static_cast<std::size_t>(h.master0)] +
            (1.0 - h.weight0) * y2.values[static_cast<std::size_t>(h.master1)];

    // distances to rings / boundary for the in-between nodes
    auto ring_dist = [&](int k, std::complex<double> z) {
        double best = std::numeric_limits<double>::infinity();
        for (auto& e : m.shell_ring_edges[static_cast<std::size_t>(k)])
            best = std::min(best, segment_distance(z, m.fpos(e[0]), m.fpos(e[1])));
        return best;
    };
    const std::int64_t nb = g.vertex_count();
    auto boundary_dist = [&](std::complex<double> z) {
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t e = 0; e < nb; ++e)
            best = std::min(best, segment_distance(z, g.fpos(e), g.fpos((e + 1) % nb)));
        return best;
    };

    std::vector<int> band_of(m.node_count(), std::numeric_limits<int>::max());
    for (std::size_t t = 0; t < m.tri_count(); ++t) {
        int s = m.shell[t] < 0 ? m.level + 1 : m.shell[t];  // collar treated as band N+1
        for (int v : m.tris[t])
            band_of[static_cast<std::size_t>(v)] = std::min(band_of[static_cast<std::size_t>(v)], s);
    }
    for (std::size_t i = 0; i < m.node_count(); ++i) {
        if (!std::isnan(y2.values[i])) continue;
        auto z = m.fpos(static_cast<int>(i));
        int k = band_of[i];
        if (k == 1) {  // interior of T_1: grow inward from the ring value
            y2.values[i] = 1.0 / 3.0 + ring_dist(1, z);
        } else if (k <= m.level) {  // between rings k-1 and k
            double dp = ring_dist(k - 1, z), dn = ring_dist(k, z);
            double vp = std::pow(3.0, -(k - 1)), vn = std::pow(3.0, -k);
            y2.values[i] = (vp * dn + vn * dp) / (dp + dn);
        } else {  // collar: between ring N and the boundary polyline
            double dp = ring_dist(m.level, z), dn = boundary_dist(z);
            double vp = std::pow(3.0, -m.level);
            y2.values[i] = vp * dn / (dp + dn);
        }
    }
    return {std::move(y1), std::move(y2)};
}

double evaluate(const ExtensionResult& r, std::complex<double> z) {
    const TriMesh& m = *r.mesh;
    for (std::size_t t = 0; t < m.tri_count(); ++t) {
        auto& tr = m.tris[t];
        auto p0 = m.fpos(tr[0]), p1 = m.fpos(tr[1]), p2 = m.fpos(tr[2]);
        auto e1 = p1 - p0, e2 = p2 - p0, d = z - p0;
        double det = e1.real() * e2.imag() - e1.imag() * e2.real();
        double l1 = (d.real() * e2.imag() - d.imag() * e2.real()) / det;
        double l2 = (e1.real() * d.imag() - e1.imag() * d.real()) / det;
        if (l1 < -1e-12 || l2 < -1e-12 || l1 + l2 > 1.0 + 1e-12) continue;
        return (1.0 - l1 - l2) * r.values[static_cast<std::size_t>(tr[0])] +
               l1 * r.values[static_cast<std::size_t>(tr[1])] +
               l2 * r.values[static_cast<std::size_t>(tr[2])];
    }
    throw std::invalid_argument("evaluate: point outside mesh");
}

}  // namespace snow
