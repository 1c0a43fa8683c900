#ifndef SNOW_BOUNDARY_CALCULUS_HPP
#define SNOW_BOUNDARY_CALCULUS_HPP

#include <Eigen/Sparse>
#include <array>
#include <cstdint>
#include <vector>

#include "snow/geometry.hpp"
#include "snow/parallel.hpp"

// Discrete Kusuoka-Kigami calculus on the snowflake boundary.
//
// Conventions (fixed once, used consistently by every operator here and by
// the coupled solver):
//  * level-N energy: E(u) = (1/2) 4^(N+1) sum over unordered level-(N+1)
//    edges of (du)^2, split per copy K1..K3.  The harmonic coordinate h then
//    has energy 1/2 per copy.
//  * mu is the energy measure of h: each level-(N+1) cell carries mass
//    (1/2) 4^-(N+1); each copy has mass 1/2, the whole boundary 3/2.  With
//    this normalization sum (Du)^2 mu = E(u) holds exactly edge by edge.
//  * D u per ccw edge (p -> q) is (u(q)-u(p)) / (h(q)-h(p)); h increases
//    counterclockwise in every copy chart, so the sign is always +1.

namespace snow {

struct BoundaryFunction {
    const BoundaryGraph* graph = nullptr;
    std::vector<double> values;

    BoundaryFunction() = default;
    explicit BoundaryFunction(const BoundaryGraph& g)
        : graph(&g), values(static_cast<std::size_t>(g.vertex_count()), 0.0) {}
    double& operator[](std::int64_t i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return values[static_cast<std::size_t>(i)]; }
};

struct EdgeField {
    const BoundaryGraph* graph = nullptr;
    std::vector<double> values;  // one per ccw edge e = (v_e, v_{e+1})
};

struct FormReport {
    int level = 0;
    double energy = 0.0;
    std::array<double, 3> per_copy{};
    // factor-of-two convention recorded with every report
    static constexpr const char* convention = "E = (1/2) 4^n sum over unordered edges";
};

FormReport discrete_energy(const BoundaryFunction& u, ExecPolicy policy = ExecPolicy::OpenMP);

// energy-minimizing extension from the level-M graph to the level-N graph
// (affine in h within each coarse cell); fine must outlive the result
BoundaryFunction harmonic_extend(const BoundaryFunction& coarse, const BoundaryGraph& fine);

// restriction to a coarser graph (every 4^(N-M)-th vertex)
BoundaryFunction restrict_to(const BoundaryFunction& u, const BoundaryGraph& coarse);

EdgeField tangential_gradient(const BoundaryFunction& u, ExecPolicy policy = ExecPolicy::OpenMP);

struct BoundaryOperators {
    Eigen::SparseMatrix<double> stiffness;  // u^T S u = E(u)
    Eigen::VectorXd lumped_mass;            // diagonal of the mu mass matrix
};
BoundaryOperators boundary_laplacian_matrices(const BoundaryGraph& g);

// effective resistance between two vertices of the boundary cycle (edge
// conductance (1/2) 4^(N+1): one unit copy has resistance 2)
double resistance_metric(const BoundaryGraph& g, std::int64_t p, std::int64_t q);

// intrinsic metric: minimum over the two arcs of the accumulated h-increments
double intrinsic_metric(const BoundaryGraph& g, std::int64_t x, std::int64_t y);

// Discrete Besov-type norm: ||u||_L2(mu) + sqrt( sum_{|x-y|<1} |u(x)-u(y)|^2
// |x-y|^-(delta+2*beta) m_x m_y ).  Diagnostic at fixed level.
double besov_norm(const BoundaryFunction& u, double beta, ExecPolicy policy = ExecPolicy::OpenMP);

inline double hausdorff_delta() { return std::log(4.0) / std::log(3.0); }

}  // namespace snow

#endif
