#include <cmath>
#include <random>

#include "doctest.h"
#include "snow/boundary_calculus.hpp"
#include "snow/extension.hpp"
#include "snow/ventsell.hpp"

#ifdef SNOW_HAVE_OPENMP
#include <omp.h>
#endif

using namespace snow;

// The OpenMP kernels must reproduce the serial reference paths: identical
// values for element-wise and max kernels, and identical sums thanks to the
// deterministic per-thread combine.  Threads are forced above one so the
// parallel paths are exercised even on a single-core host.

namespace {

struct ForceThreads {
    ForceThreads() {
#ifdef SNOW_HAVE_OPENMP
        omp_set_num_threads(4);
#endif
    }
};

BoundaryFunction random_function(const BoundaryGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BoundaryFunction u(g);
    for (auto& v : u.values) v = unif(rng);
    return u;
}

}  // namespace

TEST_CASE("energy, gradient and besov kernels match their serial reference") {
    ForceThreads force;
    BoundaryGraph g = boundary_graph(4);
    BoundaryFunction u = random_function(g, 41);

    FormReport es = discrete_energy(u, ExecPolicy::Serial);
    FormReport ep = discrete_energy(u, ExecPolicy::OpenMP);
    for (int i = 0; i < 3; ++i)
        CHECK(ep.per_copy[static_cast<std::size_t>(i)] ==
              doctest::Approx(es.per_copy[static_cast<std::size_t>(i)]).epsilon(1e-14));

    EdgeField ds = tangential_gradient(u, ExecPolicy::Serial);
    EdgeField dp = tangential_gradient(u, ExecPolicy::OpenMP);
    CHECK(ds.values == dp.values);  // element-wise kernel: bitwise equal

    BoundaryGraph g3 = boundary_graph(3);
    BoundaryFunction u3 = random_function(g3, 42);
    double bs = besov_norm(u3, 0.6, ExecPolicy::Serial);
    double bp = besov_norm(u3, 0.6, ExecPolicy::OpenMP);
    CHECK(bp == doctest::Approx(bs).epsilon(1e-13));
}

TEST_CASE("extension and measurement kernels match their serial reference") {
    ForceThreads force;
    const int level = 3;
    BoundaryGraph g = boundary_graph(level);
    BoundaryFunction f = y1_boundary_data(g);
    auto mesh = std::make_shared<TriMesh>(collar_mesh(shell_triangulation(level), g));

    ExtensionResult es = extend_shell(f, mesh, ExecPolicy::Serial);
    ExtensionResult ep = extend_shell(f, mesh, ExecPolicy::OpenMP);
    CHECK(es.values == ep.values);  // node-wise kernel: bitwise equal

    LipschitzReport ls = measured_lipschitz(es, ExecPolicy::Serial);
    LipschitzReport lp = measured_lipschitz(ep, ExecPolicy::OpenMP);
    CHECK(ls.global == lp.global);
    CHECK(ls.per_shell == lp.per_shell);
    CHECK(ls.collar == lp.collar);
}

TEST_CASE("assembly matches its serial reference") {
    ForceThreads force;
    BoundaryGraph g = boundary_graph(2);
    TriMesh mesh = collar_mesh(uniform_triangulation(2), g);
    CoefficientSet coeff = CoefficientSet::pure_diffusion();
    coeff.b = [](double x, double y) { return Eigen::Vector2d(0.2 * y - 0.1, 0.3 * x); };
    coeff.b_boundary = [](double, double) { return 0.25; };
    coeff.c = [](double x, double) { return 0.1 + x; };

    FormMatrices fs = assemble(mesh, g, coeff, ExecPolicy::Serial);
    FormMatrices fp = assemble(mesh, g, coeff, ExecPolicy::OpenMP);
    CHECK(Eigen::MatrixXd(fs.stiff_bulk - fp.stiff_bulk).cwiseAbs().maxCoeff() == 0.0);
    CHECK(Eigen::MatrixXd(fs.drift_bulk - fp.drift_bulk).cwiseAbs().maxCoeff() == 0.0);
    CHECK((fs.mass_bulk - fp.mass_bulk).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(Eigen::MatrixXd(fs.stiff_boundary - fp.stiff_boundary).cwiseAbs().maxCoeff() == 0.0);
    CHECK(fs.lambda_quadrature == fp.lambda_quadrature);
}
