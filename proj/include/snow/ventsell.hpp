#ifndef SNOW_VENTSELL_HPP
#define SNOW_VENTSELL_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <vector>

#include "snow/boundary_calculus.hpp"
#include "snow/mesh.hpp"

// Coupled bulk/boundary parabolic problem: P1 elements on the collar mesh,
// boundary graph form on the shared boundary degrees of freedom.
//
//   (M_bulk + M_bdry) du/dt + B u = (M_bulk + M_bdry) f,
//   B = stiff_bulk + drift_bulk + stiff_bdry + drift_bdry + potential_bdry.
//
// Mass matrices are lumped; bulk and boundary masses add on boundary nodes
// (the reference measure is area plus the boundary energy measure).

namespace snow {

using SpMat = Eigen::SparseMatrix<double>;

struct CoefficientSet {
    std::function<Eigen::Matrix2d(double, double)> A;   // bulk diffusion
    std::function<Eigen::Vector2d(double, double)> b;   // bulk drift
    std::function<double(double, double)> b_boundary;   // tangential drift, eval at edge midpoints
    std::function<double(double, double)> c;            // boundary potential, eval at vertices
    double c0 = 1.0;
    double lambda = 1.0;  // claimed ellipticity constant
    double gamma1 = 0.0, gamma2 = 0.0;  // bulk drift form bound
    double delta1 = 0.0, delta2 = 0.0;  // boundary drift form bound

    // optional per-element tables (indexed by triangle); when nonempty they
    // override the positional functions during assembly
    std::vector<Eigen::Matrix2d> A_table;
    std::vector<Eigen::Vector2d> b_table;

    static CoefficientSet pure_diffusion();
};

struct FormMatrices {
    int n = 0;  // degrees of freedom = mesh nodes
    Eigen::VectorXd mass_bulk, mass_boundary;   // lumped diagonals over all dofs
    SpMat stiff_bulk, stiff_boundary;
    SpMat drift_bulk, drift_boundary;
    Eigen::VectorXd potential_boundary;         // diagonal
    std::vector<int> node_to_graph;             // -1 for interior nodes
    std::vector<int> graph_to_node;
    double c0 = 1.0;
    double lambda_quadrature = 0.0;             // min eigenvalue of A over barycenters

    SpMat full_operator() const;      // B (potential included)
    Eigen::VectorXd mass() const { return mass_bulk + mass_boundary; }
};

// Assembles all operators on a conforming collar mesh.  One-point barycenter
// quadrature for A and b; exact P1 stiffness per triangle.
FormMatrices assemble(const TriMesh& mesh, const BoundaryGraph& graph,
                      const CoefficientSet& coeff, ExecPolicy policy = ExecPolicy::OpenMP);

struct AssumptionReport {
    double lambda_quadrature = 0.0;  // min eigenvalue of A over barycenters
    double epsilon = 0.0;            // epsilon realizing the bulk form bound
    bool bulk_bound_ok = false;
    bool boundary_bound_ok = false;
    double alpha = 0.0;              // smallest shift making B + alpha M positive definite
    double sector_K = 0.0;           // empirical sector constant of E_{alpha+1}
    std::uint64_t seed = 0;
};

// Throws RejectedCoefficients when the claimed smallness conditions
// sqrt(2 gamma1) < lambda, sqrt(2 delta1) < c0 fail or ellipticity is violated.
struct RejectedCoefficients : std::runtime_error {
    using std::runtime_error::runtime_error;
};
AssumptionReport check_assumptions(const FormMatrices& fm, const CoefficientSet& coeff,
                                   std::uint64_t seed = 0x5eed);

enum class Scheme { ImplicitEuler, CrankNicolson };

// One theta-step solver; factorizes (M + dt*theta*B) once.
class Stepper {
  public:
    Stepper(const FormMatrices& fm, double dt, Scheme scheme);
    // load = time-integrated forcing contribution for this step (already * dt)
    Eigen::VectorXd step(const Eigen::VectorXd& u, const Eigen::VectorXd& load) const;
    double dt() const { return dt_; }
    double theta() const { return theta_; }

  private:
    double dt_, theta_;
    SpMat lhs_, rhs_;
    Eigen::VectorXd mass_;
    Eigen::SparseLU<SpMat> lu_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    Scheme scheme = Scheme::ImplicitEuler;
    double dt = 0.0;
};

// forcing(t) returns nodal values of f; the mass weighting is applied inside
Trajectory solve_cauchy(const FormMatrices& fm, const Eigen::VectorXd& u0,
                        const std::function<Eigen::VectorXd(double)>& forcing, double T,
                        double dt, Scheme scheme);

// Discrete co-normal pairing <du/dn_A, phi_p> at every boundary vertex:
// bulk stiffness and drift rows plus the bulk mass applied to (du/dt - f).
BoundaryFunction conormal_residual(const FormMatrices& fm, const BoundaryGraph& graph,
                                   const Eigen::VectorXd& state, const Eigen::VectorXd& state_dot,
                                   const Eigen::VectorXd& f_bulk);

// Residual of the discrete boundary equation (second line of the strong form)
// along one step; zero to solver accuracy by construction.
Eigen::VectorXd ventsell_identity_residual(const FormMatrices& fm, const BoundaryGraph& graph,
                                           const Eigen::VectorXd& u_old,
                                           const Eigen::VectorXd& u_new, double dt, double theta,
                                           const Eigen::VectorXd& f_old,
                                           const Eigen::VectorXd& f_new);

}  // namespace snow

#endif
