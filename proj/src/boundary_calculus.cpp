#include "snow/boundary_calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace snow {

FormReport discrete_energy(const BoundaryFunction& u, ExecPolicy policy) {
    const BoundaryGraph& g = *u.graph;
    if (static_cast<std::int64_t>(u.values.size()) != g.vertex_count())
        throw std::invalid_argument("discrete_energy: value count != vertex count");
    FormReport rep;
    rep.level = g.level;
    const std::int64_t C = g.cells_per_copy();
    const double prefactor = 0.5 * static_cast<double>(C);  // (1/2) 4^(N+1)
    const std::int64_t n = g.vertex_count();
    for (int copy = 0; copy < 3; ++copy) {
        const std::int64_t lo = copy * C;
        double s = parallel_sum(C, policy, [&](std::int64_t i) {
            double d = u.values[static_cast<std::size_t>((lo + i + 1) % n)] -
                       u.values[static_cast<std::size_t>(lo + i)];
            return d * d;
        });
        rep.per_copy[static_cast<std::size_t>(copy)] = prefactor * s;
    }
    rep.energy = rep.per_copy[0] + rep.per_copy[1] + rep.per_copy[2];
    return rep;
}

BoundaryFunction harmonic_extend(const BoundaryFunction& coarse, const BoundaryGraph& fine) {
    const BoundaryGraph& cg = *coarse.graph;
    if (fine.level < cg.level)
        throw std::invalid_argument("harmonic_extend: fine level below coarse level");
    BoundaryFunction out(fine);
    const std::int64_t R = pow4(fine.level - cg.level);
    const std::int64_t nc = cg.vertex_count();
    for (std::int64_t j = 0; j < nc; ++j) {
        double a = coarse.values[static_cast<std::size_t>(j)];
        double b = coarse.values[static_cast<std::size_t>((j + 1) % nc)];
        for (std::int64_t r = 0; r < R; ++r)
            out.values[static_cast<std::size_t>(j * R + r)] =
                a + (b - a) * (static_cast<double>(r) / static_cast<double>(R));
    }
    return out;
}

BoundaryFunction restrict_to(const BoundaryFunction& u, const BoundaryGraph& coarse) {
    const BoundaryGraph& g = *u.graph;
    if (coarse.level > g.level)
        throw std::invalid_argument("restrict_to: coarse level above fine level");
    BoundaryFunction out(coarse);
    const std::int64_t R = pow4(g.level - coarse.level);
    for (std::int64_t j = 0; j < coarse.vertex_count(); ++j)
        out.values[static_cast<std::size_t>(j)] = u.values[static_cast<std::size_t>(j * R)];
    return out;
}

EdgeField tangential_gradient(const BoundaryFunction& u, ExecPolicy policy) {
    const BoundaryGraph& g = *u.graph;
    if (static_cast<std::int64_t>(u.values.size()) != g.vertex_count())
        throw std::invalid_argument("tangential_gradient: value count != vertex count");
    EdgeField f;
    f.graph = &g;
    const std::int64_t n = g.edge_count();
    f.values.resize(static_cast<std::size_t>(n));
    const double inv_dh = static_cast<double>(g.cells_per_copy());  // 1 / h-increment
    parallel_for(n, policy, [&](std::int64_t e) {
        f.values[static_cast<std::size_t>(e)] =
            (u.values[static_cast<std::size_t>((e + 1) % n)] - u.values[static_cast<std::size_t>(e)]) * inv_dh;
    });
    return f;
}

BoundaryOperators boundary_laplacian_matrices(const BoundaryGraph& g) {
    const std::int64_t n = g.vertex_count();
    const double w = 0.5 * static_cast<double>(g.cells_per_copy());  // edge weight
    BoundaryOperators ops;
    ops.stiffness.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(3 * n));
    for (std::int64_t e = 0; e < n; ++e) {
        auto p = static_cast<Eigen::Index>(e), q = static_cast<Eigen::Index>((e + 1) % n);
        trips.emplace_back(p, p, w);
        trips.emplace_back(q, q, w);
        trips.emplace_back(p, q, -w);
        trips.emplace_back(q, p, -w);
    }
    ops.stiffness.setFromTriplets(trips.begin(), trips.end());
    ops.lumped_mass = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), g.cell_mass());
    return ops;
}

double resistance_metric(const BoundaryGraph& g, std::int64_t p, std::int64_t q) {
    const std::int64_t n = g.vertex_count();
    if (p < 0 || p >= n || q < 0 || q >= n)
        throw std::invalid_argument("resistance_metric: vertex out of range");
    if (p == q) return 0.0;
    const double r_edge = 2.0 / static_cast<double>(g.cells_per_copy());
    std::int64_t k = ((q - p) % n + n) % n;
    double r1 = r_edge * static_cast<double>(k);
    double r2 = r_edge * static_cast<double>(n - k);
    return r1 * r2 / (r1 + r2);
}

double intrinsic_metric(const BoundaryGraph& g, std::int64_t x, std::int64_t y) {
    const std::int64_t n = g.vertex_count();
    if (x < 0 || x >= n || y < 0 || y >= n)
        throw std::invalid_argument("intrinsic_metric: vertex out of range");
    std::int64_t k = ((y - x) % n + n) % n;
    std::int64_t arc = std::min(k, n - k);
    return static_cast<double>(arc) * g.h_increment();
}

double besov_norm(const BoundaryFunction& u, double beta, ExecPolicy policy) {
    const BoundaryGraph& g = *u.graph;
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("besov_norm: beta must lie in (0,1)");
    const std::int64_t n = g.vertex_count();
    const double mass = g.vertex_mass(0);
    const double expo = hausdorff_delta() + 2.0 * beta;
    // |x - y| < 1 in the ambient frame <=> exact numerator norm^2 < 9^N
    const std::int64_t cut = pow3(g.level) * pow3(g.level);
    const double inv9N = 1.0 / static_cast<double>(cut);

    // squared distances are integers below the cutoff; tabulating the kernel
    // replaces a pow per pair with a lookup
    std::vector<double> kernel;
    if (cut <= (1 << 24)) {
        kernel.resize(static_cast<std::size_t>(cut));
        for (std::int64_t d2 = 1; d2 < cut; ++d2)
            kernel[static_cast<std::size_t>(d2)] =
                std::pow(static_cast<double>(d2) * inv9N, -0.5 * expo);
    }

    double dsum = parallel_sum(n, policy, [&](std::int64_t i) {
        double acc = 0.0;
        const EPoint pi = g.pos[static_cast<std::size_t>(i)];
        const double ui = u.values[static_cast<std::size_t>(i)];
        for (std::int64_t j = 0; j < n; ++j) {
            if (j == i) continue;
            std::int64_t d2 = enorm2(g.pos[static_cast<std::size_t>(j)] - pi);
            if (d2 >= cut) continue;
            double du = u.values[static_cast<std::size_t>(j)] - ui;
            double w = kernel.empty()
                           ? std::pow(static_cast<double>(d2) * inv9N, -0.5 * expo)
                           : kernel[static_cast<std::size_t>(d2)];
            acc += du * du * w;
        }
        return acc * mass * mass;
    });

    double l2 = 0.0;
    for (std::int64_t i = 0; i < n; ++i)
        l2 += u.values[static_cast<std::size_t>(i)] * u.values[static_cast<std::size_t>(i)] * mass;
    return std::sqrt(l2) + std::sqrt(dsum);
}

}  // namespace snow
