#include "snow/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace snow {

std::complex<double> ifs_apply(const std::vector<int>& word, std::complex<double> z) {
    static const std::complex<double> w(0.5, 0.8660254037844386467637231707529362);
    static const std::complex<double> wbar = std::conj(w);
    static const std::complex<double> apex = (1.0 + w) / 3.0;  // 1/2 + i sqrt(3)/6
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        switch (*it) {
            case 1: z = z / 3.0; break;
            case 2: z = z * w / 3.0 + 1.0 / 3.0; break;
            case 3: z = z * wbar / 3.0 + apex; break;
            case 4: z = (z + 2.0) / 3.0; break;
            default: throw std::invalid_argument("ifs word digit must be 1..4");
        }
    }
    return z;
}

EPoint ifs_apply_exact(int j, EPoint n, int scale3) {
    const std::int64_t one = pow3(scale3);
    switch (j) {
        case 1: return {n.a, n.b};
        case 2: return {one - n.b, n.a + n.b};            // z w + 1
        case 3: return {n.a + n.b + one, one - n.a};      // z (1 - w) + 1 + w
        case 4: return {n.a + 2 * one, n.b};
        default: throw std::invalid_argument("ifs word digit must be 1..4");
    }
}

EPoint cell_left_endpoint(std::int64_t cell, int m) {
    // digits of `cell` base 4, most significant first = outermost map
    EPoint z{0, 0};
    int scale = 0;
    for (int k = 0; k < m; ++k) {
        int digit = static_cast<int>((cell >> (2 * (k))) & 3) + 1;  // innermost first
        z = ifs_apply_exact(digit, z, scale);
        ++scale;
    }
    return z;
}

const CopyChart& copy_chart(int copy) {
    // anchors: W2=(0,-s3), W0=(3/2,s3/2), W1=(-3/2,s3/2), A2=(3/2,-s3/2),
    // A0=(0,s3), A1=(-3/2,-s3/2); rot = (ccw-last - ccw-first)/3
    static const std::array<CopyChart, 6> charts = {{
        {{1, -2}, sixth_root(1)},   // K1: W2 -> W0
        {{1, 1}, sixth_root(3)},    // K2: W0 -> W1
        {{-2, 1}, sixth_root(5)},   // K3: W1 -> W2
        {{2, -1}, sixth_root(2)},   // K4: A2 -> A0 (through W0)
        {{-1, 2}, sixth_root(4)},   // K5: A0 -> A1 (through W1)
        {{-1, -1}, sixth_root(0)},  // K6: A1 -> A2 (through W2)
    }};
    if (copy < 1 || copy > 6) throw std::invalid_argument("copy index must be 1..6");
    return charts[copy - 1];
}

EPoint chart_to_ambient(int copy, EPoint unit_num, int unit_scale) {
    // chi(z) = anchor + 3 rot conj(z); numerators: unit scale m -> ambient m-1
    const CopyChart& c = copy_chart(copy);
    if (unit_scale == 0) {  // promote to scale 1 so the result lands at scale 0
        unit_num = 3 * unit_num;
        unit_scale = 1;
    }
    EPoint r = emul(c.rot, econj(unit_num));
    return pow3(unit_scale - 1) * c.anchor + r;
}

EPoint address_position(const Address& addr) {
    const int m = static_cast<int>(addr.word.size());
    EPoint z = (addr.endpoint == 0) ? EPoint{0, 0} : EPoint{pow3(0), 0};
    int scale = 0;
    for (auto it = addr.word.rbegin(); it != addr.word.rend(); ++it) {
        z = ifs_apply_exact(*it, z, scale);
        ++scale;
    }
    (void)m;
    return chart_to_ambient(addr.copy, z, scale);
}

BoundaryGraph boundary_graph(int level) {
    if (level < 0 || level > kMaxLevel)
        throw std::invalid_argument("boundary_graph: level out of range 0..10");
    BoundaryGraph g;
    g.level = level;
    const std::int64_t cells = g.cells_per_copy();
    g.pos.resize(static_cast<std::size_t>(3 * cells));
    const int m = level + 1;
    for (int copy = 1; copy <= 3; ++copy) {
        for (std::int64_t j = 0; j < cells; ++j) {
            g.pos[static_cast<std::size_t>((copy - 1) * cells + j)] =
                chart_to_ambient(copy, cell_left_endpoint(j, m), m);
        }
    }
    g.index_of.reserve(g.pos.size() * 2);
    for (std::size_t i = 0; i < g.pos.size(); ++i) g.index_of.emplace(g.pos[i], static_cast<int>(i));
    return g;
}

std::vector<int> BoundaryGraph::copies_containing(std::int64_t v) const {
    const std::int64_t C = cells_per_copy();
    const std::int64_t half = C / 2;
    std::vector<int> out;
    const int c = primary_copy(v);
    const std::int64_t r = v % C;
    out.push_back(c);
    if (r == 0) out.push_back(c == 1 ? 3 : c - 1);
    // shifted copies: K_{i+3} covers the second half of K_i and first half of K_{i+1}
    auto in_shifted = [&](int i) {  // i in 1..3 -> copy i+3 spans [iC - half, iC + half]
        std::int64_t lo = i * C - half, hi = i * C + half;
        std::int64_t vv = v;
        if (i == 3 && vv <= half) vv += 3 * C;  // wrap for K6
        return vv >= lo && vv <= hi;
    };
    for (int i = 1; i <= 3; ++i)
        if (in_shifted(i)) out.push_back(i + 3);
    std::sort(out.begin(), out.end());
    return out;
}

double BoundaryGraph::h_in_copy(std::int64_t v, int copy) const {
    const std::int64_t C = cells_per_copy();
    if (copy >= 1 && copy <= 3) {
        const std::int64_t lo = (copy - 1) * C, hi = copy * C;
        std::int64_t vv = v;
        if (copy == 3 && v == 0) vv = 3 * C;  // closing corner
        if (vv < lo || vv > hi) throw std::invalid_argument("vertex not on requested copy");
        return static_cast<double>(vv - lo) / static_cast<double>(C);
    }
    if (copy >= 4 && copy <= 6) {
        const int i = copy - 3;  // spans [iC - C/2, iC + C/2]
        std::int64_t lo = i * C - C / 2, vv = v;
        if (i == 3 && vv <= C / 2) vv += 3 * C;
        if (vv < lo || vv > lo + C) throw std::invalid_argument("vertex not on requested copy");
        return static_cast<double>(vv - lo) / static_cast<double>(C);
    }
    throw std::invalid_argument("copy index must be 1..6");
}

Address canonical_address(const BoundaryGraph& g, std::int64_t v) {
    const std::int64_t C = g.cells_per_copy();
    Address a;
    std::int64_t r = v % C;
    int copy = g.primary_copy(v);
    if (r == 0 && copy != 1) {  // junction: lower copy wins, as right endpoint -> use
        // the cell ending at v in copy-1 has index C-1; canonical form prefers the
        // lowest copy, and within it the left-endpoint word is not available, so the
        // junction is named by the preceding copy's last cell with endpoint 1.
        copy -= 1;
        a.copy = copy;
        a.word.assign(static_cast<std::size_t>(g.level + 1), 4);
        a.endpoint = 1;
        return a;
    }
    if (v == 0) {  // corner W2 = start of copy 1: canonical is copy 1, word 1..1
        a.copy = 1;
        a.word.assign(static_cast<std::size_t>(g.level + 1), 1);
        a.endpoint = 0;
        return a;
    }
    a.copy = copy;
    a.endpoint = 0;
    const int m = g.level + 1;
    a.word.resize(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        a.word[static_cast<std::size_t>(m - 1 - k)] = static_cast<int>((r / pow4(k)) % 4) + 1;
    return a;
}

std::int64_t vertex_of_address(const BoundaryGraph& g, const Address& addr) {
    if (static_cast<int>(addr.word.size()) != g.level + 1)
        throw std::invalid_argument("address word length must equal level+1");
    EPoint p = address_position(addr);
    auto it = g.index_of.find(p);
    if (it == g.index_of.end()) throw std::invalid_argument("address does not name a graph vertex");
    return it->second;
}

double prefractal_area(const BoundaryGraph& g) {
    // shoelace over the exact numerators; the only rounding is the final cast
    const std::int64_t n = g.vertex_count();
    __int128 acc = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        EPoint p = g.pos[i], q = g.pos[(i + 1) % n];
        acc += static_cast<__int128>(ecross(p, q));
    }
    // cross carries the lattice factor sqrt(3)/2 and scale 9^-N
    long double scale = std::pow(3.0L, -2.0L * g.level);
    return static_cast<double>(static_cast<long double>(acc) * 0.5L *
                               0.8660254037844386467637231707529362L * scale);
}

}  // namespace snow
