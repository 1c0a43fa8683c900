// Benchmark of the OpenMP kernels against their serial reference paths.

#include <chrono>
#include <cstdio>
#include <random>

#include "CLI11.hpp"
#include "snow/boundary_calculus.hpp"
#include "snow/extension.hpp"
#include "snow/ventsell.hpp"

#ifdef SNOW_HAVE_OPENMP
#include <omp.h>
#endif

using namespace snow;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class F>
double timed(F&& f, int reps) {
    f();  // warm up
    double t0 = now_ms();
    for (int r = 0; r < reps; ++r) f();
    return (now_ms() - t0) / reps;
}

void row(const char* name, double serial_ms, double omp_ms, double defect) {
    std::printf("%-24s %10.2f ms %10.2f ms %8.2fx   max|d| = %.3e\n", name, serial_ms, omp_ms,
                serial_ms / omp_ms, defect);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel benchmark"};
    int level = 4;
    int reps = 3;
    app.add_option("--level", level, "graph/mesh level");
    app.add_option("--reps", reps, "repetitions per kernel");
    CLI11_PARSE(app, argc, argv);

#ifdef SNOW_HAVE_OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    BoundaryGraph g = boundary_graph(level);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BoundaryFunction u(g);
    for (auto& v : u.values) v = unif(rng);

    {
        double rs = 0.0, rp = 0.0;
        double ts = timed([&] { rs = discrete_energy(u, ExecPolicy::Serial).energy; }, reps);
        double tp = timed([&] { rp = discrete_energy(u, ExecPolicy::OpenMP).energy; }, reps);
        row("discrete_energy", ts, tp, std::abs(rs - rp));
    }
    {
        EdgeField fs, fp;
        double ts = timed([&] { fs = tangential_gradient(u, ExecPolicy::Serial); }, reps);
        double tp = timed([&] { fp = tangential_gradient(u, ExecPolicy::OpenMP); }, reps);
        double d = 0.0;
        for (std::size_t i = 0; i < fs.values.size(); ++i)
            d = std::max(d, std::abs(fs.values[i] - fp.values[i]));
        row("tangential_gradient", ts, tp, d);
    }
    {
        int blevel = std::min(level, 4);
        BoundaryGraph gb = blevel == level ? std::move(g) : boundary_graph(blevel);
        BoundaryFunction ub(gb);
        for (auto& v : ub.values) v = unif(rng);
        double rs = 0.0, rp = 0.0;
        double ts = timed([&] { rs = besov_norm(ub, 0.6, ExecPolicy::Serial); }, 1);
        double tp = timed([&] { rp = besov_norm(ub, 0.6, ExecPolicy::OpenMP); }, 1);
        row("besov_norm", ts, tp, std::abs(rs - rp));
        g = std::move(gb);
    }

    BoundaryGraph ge = boundary_graph(std::min(level, 4));
    BoundaryFunction f = y1_boundary_data(ge);
    auto mesh = std::make_shared<TriMesh>(collar_mesh(shell_triangulation(ge.level), ge));
    {
        ExtensionResult es, ep;
        double ts = timed([&] { es = extend_shell(f, mesh, ExecPolicy::Serial); }, reps);
        double tp = timed([&] { ep = extend_shell(f, mesh, ExecPolicy::OpenMP); }, reps);
        double d = 0.0;
        for (std::size_t i = 0; i < es.values.size(); ++i)
            d = std::max(d, std::abs(es.values[i] - ep.values[i]));
        row("extend_shell", ts, tp, d);

        LipschitzReport ls, lp;
        double ms = timed([&] { ls = measured_lipschitz(es, ExecPolicy::Serial); }, reps);
        double mp = timed([&] { lp = measured_lipschitz(es, ExecPolicy::OpenMP); }, reps);
        row("measured_lipschitz", ms, mp, std::abs(ls.global - lp.global));
    }
    {
        int sl = std::min(level, 3);
        BoundaryGraph gs = boundary_graph(sl);
        TriMesh smesh = collar_mesh(uniform_triangulation(sl), gs);
        CoefficientSet coeff = CoefficientSet::pure_diffusion();
        coeff.b = [](double x, double y) { return Eigen::Vector2d(0.2 * y, -0.1 * x); };
        FormMatrices fs, fp;
        double ts = timed([&] { fs = assemble(smesh, gs, coeff, ExecPolicy::Serial); }, reps);
        double tp = timed([&] { fp = assemble(smesh, gs, coeff, ExecPolicy::OpenMP); }, reps);
        double d = Eigen::MatrixXd(fs.stiff_bulk - fp.stiff_bulk).cwiseAbs().maxCoeff();
        row("assemble", ts, tp, d);
    }
    return 0;
}
