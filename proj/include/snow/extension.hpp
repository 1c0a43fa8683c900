#ifndef SNOW_EXTENSION_HPP
#define SNOW_EXTENSION_HPP

#include <memory>
#include <utility>
#include <vector>

#include "snow/boundary_calculus.hpp"
#include "snow/mesh.hpp"

// Constructive Euclidean-Lipschitz extensions of intrinsically Lipschitz
// boundary data, by shell averaging and by hexagon induction.

namespace snow {

struct ExtensionResult {
    std::shared_ptr<const TriMesh> mesh;
    std::vector<double> values;  // one per mesh node, affine per triangle
    Construction method = Construction::ShellLattice;
};

// max over finest-level edges of |df| / (h-increment); lower bound for the
// intrinsic Lipschitz constant, exact in the limit, and dominating the same
// ratio at every coarser level
double intrinsic_lipschitz_constant(const BoundaryFunction& f);

// Shell construction: per shell k, every newly covered lattice node receives
// the average of f over its closest points of L_k on the boundary (all exact
// tie minimizers averaged); earlier shells are never revisited.  The mesh is
// the multiscale band mesh plus collar; nodes subdividing a coarser band edge
// take the interface value so the function stays continuous.
ExtensionResult extend_shell(const BoundaryFunction& f,
                             std::shared_ptr<const TriMesh> collar_band_mesh,
                             ExecPolicy policy = ExecPolicy::OpenMP);
ExtensionResult extend_shell(const BoundaryFunction& f, int level,
                             ExecPolicy policy = ExecPolicy::OpenMP);

// Hexagon construction on Omega_level: centers average their six ring values,
// boundary vertices take f, facet vertices keep the already-defined values.
ExtensionResult extend_hexagon(const BoundaryFunction& f, int level);

struct LipschitzReport {
    double global = 0.0;
    std::vector<double> per_shell;  // index k = 1..level (0 unused)
    double collar = 0.0;
};
LipschitzReport measured_lipschitz(const ExtensionResult& r, ExecPolicy policy = ExecPolicy::OpenMP);

// Lipschitz coordinate pair: y1 extends a piecewise h-affine boundary
// function (slopes 1, 2, -3 on K1..K3, chosen so no dihedral symmetry fixes
// it); y2 is 3^-k on the shell ring of T_k, 0 on the boundary, distance
// interpolated between rings.
std::pair<ExtensionResult, ExtensionResult> coordinates(int level,
                                                        ExecPolicy policy = ExecPolicy::OpenMP);

// boundary data of y1 (exposed for tests and the CLI)
BoundaryFunction y1_boundary_data(const BoundaryGraph& g);

// all exact minimizers of the distance from p (numerator at graph scale) to
// the shell-k boundary lattice points L_k on the boundary
std::vector<std::int64_t> nearest_boundary_points(const BoundaryGraph& g, int shell_k, EPoint p);

// evaluate a piecewise-linear extension at an arbitrary point (sampling aid;
// point given in ambient floating coordinates, must lie in some triangle)
double evaluate(const ExtensionResult& r, std::complex<double> z);

}  // namespace snow

#endif
