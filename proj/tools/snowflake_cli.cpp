// Command-line front end: mesh generation, Lipschitz extensions, coupled
// bulk/boundary parabolic solves, invariant verification, figure export.
//
// Exit codes: 0 success, 1 bad configuration, 2 numerical failure (the
// offending reason is printed as "error: <code> <detail>").

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "snow/boundary_calculus.hpp"
#include "snow/extension.hpp"
#include "snow/hexagon.hpp"
#include "snow/io.hpp"
#include "snow/mesh.hpp"
#include "snow/ventsell.hpp"

namespace fs = std::filesystem;
using namespace snow;

namespace {

struct RunConfig {
    std::string command;
    int level = 2;
    std::string method = "shell";       // shell | hexagon | uniform
    std::string scheme = "ie";          // ie | cn
    double dt = 0.01;
    double T = 0.1;
    std::string coeff_path;
    std::string boundary_data = "builtin:haffine";
    std::string u0 = "constant(1)";
    std::string forcing = "zero";
    std::string out_dir = "out";
    std::uint64_t seed = 0xC0FFEE;
    bool svg = false;
};

ConfigEcho echo_of(const RunConfig& c) {
    ConfigEcho e;
    e["command"] = c.command;
    e["level"] = std::to_string(c.level);
    e["method"] = c.method;
    e["scheme"] = c.scheme;
    e["dt"] = std::to_string(c.dt);
    e["T"] = std::to_string(c.T);
    e["coeff"] = c.coeff_path.empty() ? "<pure-diffusion>" : c.coeff_path;
    e["boundary_data"] = c.boundary_data;
    e["u0"] = c.u0;
    e["forcing"] = c.forcing;
    e["seed"] = std::to_string(c.seed);
    return e;
}

std::ofstream open_out(const RunConfig& c, const std::string& name) {
    fs::create_directories(c.out_dir);
    std::ofstream os(fs::path(c.out_dir) / name);
    if (!os) throw std::invalid_argument("cannot open output file " + name);
    return os;
}

std::vector<double> parse_numbers(const std::string& spec, std::size_t open) {
    auto close = spec.find(')', open);
    if (close == std::string::npos) throw std::invalid_argument("missing ')' in " + spec);
    std::vector<double> out;
    std::istringstream ss(spec.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

BoundaryFunction load_boundary_data(const RunConfig& c, const BoundaryGraph& g) {
    const std::string& spec = c.boundary_data;
    if (spec.rfind("builtin:", 0) == 0) {
        std::string which = spec.substr(8);
        if (which == "haffine") return y1_boundary_data(g);
        if (which == "tent") {
            BoundaryFunction f(g);
            const std::int64_t C = g.cells_per_copy();
            for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
                double h = static_cast<double>(v % C) / static_cast<double>(C);
                int copy = static_cast<int>(v / C);
                f.values[static_cast<std::size_t>(v)] = copy == 0 ? h : copy == 1 ? 1.0 - h : 0.0;
            }
            return f;
        }
        if (which.rfind("constant(", 0) == 0) {
            auto a = parse_numbers(which, 8);
            BoundaryFunction f(g);
            std::fill(f.values.begin(), f.values.end(), a.at(0));
            return f;
        }
        if (which == "random") {
            std::mt19937_64 rng(c.seed);
            std::uniform_real_distribution<double> unif(-1.0, 1.0);
            BoundaryFunction f(g);
            const double dh = g.h_increment();
            double acc = 0.0;
            for (std::int64_t v = 0; v < g.vertex_count(); ++v) {
                f.values[static_cast<std::size_t>(v)] = acc;
                acc += 2.0 * dh * unif(rng);
            }
            for (std::int64_t v = 0; v < g.vertex_count(); ++v)
                f.values[static_cast<std::size_t>(v)] -=
                    acc * static_cast<double>(v) / static_cast<double>(g.vertex_count());
            return f;
        }
        throw std::invalid_argument("unknown builtin boundary data '" + which + "'");
    }
    std::ifstream is(spec);
    if (!is) throw std::invalid_argument("cannot read boundary data file " + spec);
    return read_boundary_csv(is, g);
}

Eigen::VectorXd nodal_field(const TriMesh& mesh, const std::string& spec) {
    auto fill = [&](const std::function<double(double, double)>& f) {
        Eigen::VectorXd u(mesh.node_count());
        for (std::size_t i = 0; i < mesh.node_count(); ++i) {
            auto z = mesh.fpos(static_cast<int>(i));
            u[static_cast<Eigen::Index>(i)] = f(z.real(), z.imag());
        }
        return u;
    };
    if (spec == "constant") return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(mesh.node_count()));
    if (spec.rfind("constant(", 0) == 0) {
        auto a = parse_numbers(spec, 8);
        return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(mesh.node_count()), a.at(0));
    }
    if (spec == "bump") return fill([](double x, double y) { return std::exp(-2.0 * (x * x + y * y)); });
    if (spec == "x1") return fill([](double x, double) { return x; });
    if (spec == "x2") return fill([](double, double y) { return y; });
    throw std::invalid_argument("unknown nodal field '" + spec + "'");
}

// forcing: zero | constant(v) | linear(a,b) meaning f(t) = a + b t, constant in space
std::function<Eigen::VectorXd(double)> forcing_of(const TriMesh& mesh, const std::string& spec) {
    const auto n = static_cast<Eigen::Index>(mesh.node_count());
    if (spec == "zero") return [n](double) { return Eigen::VectorXd::Zero(n).eval(); };
    if (spec.rfind("constant(", 0) == 0) {
        double v = parse_numbers(spec, 8).at(0);
        return [n, v](double) { return Eigen::VectorXd::Constant(n, v).eval(); };
    }
    if (spec.rfind("linear(", 0) == 0) {
        auto a = parse_numbers(spec, 6);
        if (a.size() != 2) throw std::invalid_argument("forcing=linear(a,b) needs 2 numbers");
        return [n, a](double t) { return Eigen::VectorXd::Constant(n, a[0] + a[1] * t).eval(); };
    }
    throw std::invalid_argument("unknown forcing '" + spec + "'");
}

int cmd_mesh(const RunConfig& c) {
    BoundaryGraph g = boundary_graph(c.level);
    TriMesh mesh;
    if (c.method == "hexagon") {
        mesh = build_hexagon(c.level, true, g).mesh;
    } else if (c.method == "uniform") {
        mesh = collar_mesh(uniform_triangulation(c.level), g);
    } else if (c.method == "shell") {
        mesh = collar_mesh(shell_triangulation(c.level), g);
    } else {
        throw std::invalid_argument("unknown method '" + c.method + "'");
    }
    auto os = open_out(c, "mesh.snowmesh");
    write_snowmesh(os, mesh, echo_of(c));
    if (c.svg) {
        auto svg = open_out(c, "mesh.svg");
        write_svg_mesh(svg, mesh, echo_of(c));
    }
    std::cout << "mesh: " << mesh.tri_count() << " triangles, " << mesh.node_count()
              << " nodes, area " << mesh.total_area() << "\n";
    return 0;
}

int cmd_extend(const RunConfig& c) {
    BoundaryGraph g = boundary_graph(c.level);
    BoundaryFunction f = load_boundary_data(c, g);
    double L = intrinsic_lipschitz_constant(f);
    ExtensionResult e = c.method == "hexagon" ? extend_hexagon(f, c.level) : extend_shell(f, c.level);
    LipschitzReport rep = measured_lipschitz(e);

    auto os = open_out(c, "extension.snowmesh");
    write_snowmesh(os, *e.mesh, echo_of(c), &e.values);
    if (c.svg) {
        auto svg = open_out(c, "extension.svg");
        write_svg_heat(svg, e, echo_of(c));
    }
    ConfigEcho report = echo_of(c);
    std::ostringstream num;
    num.precision(17);
    auto put = [&](const std::string& k, double v) {
        num.str("");
        num << v;
        report[k] = num.str();
    };
    put("intrinsic_lipschitz", L);
    put("global_lipschitz", rep.global);
    put("collar_lipschitz", rep.collar);
    for (int k = 1; k < static_cast<int>(rep.per_shell.size()); ++k)
        put("per_shell_" + std::to_string(k), rep.per_shell[static_cast<std::size_t>(k)]);
    // decay ratios past the core band (the scaling regime)
    bool ratios_ok = true;
    for (int k = 3; k < static_cast<int>(rep.per_shell.size()); ++k) {
        double ratio = rep.per_shell[static_cast<std::size_t>(k)] /
                       rep.per_shell[static_cast<std::size_t>(k - 1)];
        put("shell_ratio_" + std::to_string(k), ratio);
        if (c.method != "hexagon" && (ratio < 0.70 || ratio > 0.80)) ratios_ok = false;
    }
    report["shell_ratio_ok"] = ratios_ok ? "1" : "0";
    auto ros = open_out(c, "extension_report.txt");
    write_report(ros, report);
    for (auto& [k, v] : report) std::cout << k << "=" << v << "\n";
    return 0;
}

int cmd_solve(const RunConfig& c) {
    BoundaryGraph g = boundary_graph(c.level);
    TriMesh mesh = collar_mesh(uniform_triangulation(c.level), g);
    CoefficientSet coeff = CoefficientSet::pure_diffusion();
    if (!c.coeff_path.empty()) {
        std::ifstream is(c.coeff_path);
        if (!is) throw std::invalid_argument("cannot read coefficient file " + c.coeff_path);
        coeff = parse_coefficients(is);
    }
    FormMatrices fm = assemble(mesh, g, coeff);
    AssumptionReport rep = check_assumptions(fm, coeff, c.seed);

    Scheme scheme = c.scheme == "cn" ? Scheme::CrankNicolson : Scheme::ImplicitEuler;
    Eigen::VectorXd u0 = nodal_field(mesh, c.u0);
    auto forcing = forcing_of(mesh, c.forcing);
    Trajectory traj = solve_cauchy(fm, u0, forcing, c.T, c.dt, scheme);

    Eigen::VectorXd mass = fm.mass();
    double conservation_defect = 0.0, constant_defect = 0.0;
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
        conservation_defect = std::max(
            conservation_defect, std::abs(mass.dot(traj.states[k]) - mass.dot(traj.states[k - 1])));
        constant_defect =
            std::max(constant_defect, (traj.states[k] - traj.states[0]).cwiseAbs().maxCoeff());
    }

    auto os = open_out(c, "trajectory.csv");
    write_trajectory_csv(os, traj, echo_of(c));
    ConfigEcho report = echo_of(c);
    std::ostringstream num;
    num.precision(17);
    auto put = [&](const std::string& k, double v) {
        num.str("");
        num << v;
        report[k] = num.str();
    };
    put("lambda", rep.lambda_quadrature);
    put("alpha", rep.alpha);
    put("sector_K", rep.sector_K);
    put("epsilon", rep.epsilon);
    report["bulk_bound_ok"] = rep.bulk_bound_ok ? "1" : "0";
    report["boundary_bound_ok"] = rep.boundary_bound_ok ? "1" : "0";
    put("conservation_defect", conservation_defect);
    report["conservation_defect_ok"] = conservation_defect < 1e-10 ? "1" : "0";
    put("constant_defect", constant_defect);
    report["constant_defect_ok"] = constant_defect < 1e-10 ? "1" : "0";
    report["steps"] = std::to_string(traj.times.size() - 1);
    auto ros = open_out(c, "diagnostics.txt");
    write_report(ros, report);
    for (auto& [k, v] : report) std::cout << k << "=" << v << "\n";
    return 0;
}

int cmd_export(const RunConfig& c) {
    BoundaryGraph g = boundary_graph(c.level);
    {
        auto os = open_out(c, "polyline.svg");
        write_svg_polyline(os, g, echo_of(c));
    }
    {
        BoundaryFunction h(g);
        for (std::int64_t v = 0; v < g.vertex_count(); ++v)
            h.values[static_cast<std::size_t>(v)] = g.h(v);
        auto os = open_out(c, "harmonic_coordinate.csv");
        write_boundary_csv(os, h, echo_of(c));
    }
    {
        TriMesh mesh = collar_mesh(shell_triangulation(std::max(1, c.level)), g);
        auto os = open_out(c, "mesh.svg");
        write_svg_mesh(os, mesh, echo_of(c));
    }
    std::cout << "export: wrote polyline.svg, harmonic_coordinate.csv, mesh.svg\n";
    return 0;
}

// deterministic invariant suite; prints "PASS <n> checks" on success
int cmd_verify(const RunConfig& c) {
    int checks = 0;
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    };
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> w1, w2;
        for (int i = 0; i < 3; ++i) w1.push_back(1 + static_cast<int>(rng() % 4));
        for (int i = 0; i < 2; ++i) w2.push_back(1 + static_cast<int>(rng() % 4));
        std::complex<double> z(unif(rng), unif(rng));
        std::vector<int> cat = w1;
        cat.insert(cat.end(), w2.begin(), w2.end());
        expect(std::abs(ifs_apply(cat, z) - ifs_apply(w1, ifs_apply(w2, z))) < 1e-14,
               "ifs self-similarity");
    }

    const int L = c.level;
    BoundaryGraph g = boundary_graph(L);
    expect(g.vertex_count() == g.edge_count(), "cycle |V| = |E|");
    expect(static_cast<std::int64_t>(g.index_of.size()) == g.vertex_count(), "vertices distinct");
    {
        bool unit = true, mosco = true;
        const double delta = hausdorff_delta();
        for (std::int64_t e = 0; e < g.edge_count(); ++e) {
            EPoint d = g.pos[static_cast<std::size_t>((e + 1) % g.vertex_count())] -
                       g.pos[static_cast<std::size_t>(e)];
            unit = unit && enorm2(d) == 1;
            double dh = g.h_increment();
            double dist = std::abs(g.fpos((e + 1) % g.vertex_count()) - g.fpos(e)) / 3.0;
            mosco = mosco && std::abs(dh - std::pow(dist, delta)) < 1e-10;
        }
        expect(unit, "edge lengths exactly 3^-N");
        expect(mosco, "metric identity |h(p)-h(q)| = |p-q|^delta");
    }

    for (int n = 0; n <= L; ++n) {
        BoundaryGraph gn = boundary_graph(n);
        BoundaryFunction t(gn);
        const std::int64_t C = gn.cells_per_copy();
        for (std::int64_t v = 0; v < gn.vertex_count(); ++v) {
            double h = static_cast<double>(v % C) / static_cast<double>(C);
            int copy = static_cast<int>(v / C);
            t.values[static_cast<std::size_t>(v)] = copy == 0 ? h : copy == 1 ? 1.0 - h : 0.0;
        }
        FormReport rep = discrete_energy(t);
        expect(std::abs(rep.per_copy[0] - 0.5) < 1e-12, "harmonic energy 1/2 per copy");
    }

    {
        BoundaryGraph coarse = boundary_graph(std::max(0, L - 1));
        for (int trial = 0; trial < 20; ++trial) {
            BoundaryFunction u(g);
            for (auto& v : u.values) v = unif(rng);
            expect(discrete_energy(restrict_to(u, coarse)).energy <=
                       discrete_energy(u).energy + 1e-10,
                   "restriction energies non-decreasing");
        }
        BoundaryFunction u(coarse);
        for (auto& v : u.values) v = unif(rng);
        double e0 = discrete_energy(u).energy;
        expect(std::abs(discrete_energy(harmonic_extend(u, g)).energy - e0) < 1e-12 * (1.0 + e0),
               "harmonic extension preserves energy");
    }

    {
        BoundaryFunction u(g);
        for (auto& v : u.values) v = unif(rng);
        EdgeField du = tangential_gradient(u);
        double acc = 0.0;
        for (double x : du.values) acc += x * x * g.cell_mass();
        double en = discrete_energy(u).energy;
        expect(std::abs(acc - en) < 1e-10 * (1.0 + en), "gradient Parseval identity");
        expect(besov_norm(u, 0.4) <= besov_norm(u, hausdorff_delta() / 2.0) + 1e-12,
               "besov norm monotone in beta");
    }

    {
        BoundaryOperators ops = boundary_laplacian_matrices(g);
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.vertex_count()));
        expect((ops.stiffness * ones).cwiseAbs().maxCoeff() <
                   1e-10 * static_cast<double>(g.cells_per_copy()),
               "constants in the stiffness kernel");
        expect(std::abs(ops.lumped_mass.sum() - 1.5) < 1e-12, "total boundary mass 3/2");
    }

    {
        int ml = std::max(1, std::min(L, 4));
        BoundaryGraph gm = boundary_graph(ml);
        BoundaryFunction f(gm);
        const double dh = gm.h_increment();
        double acc = 0.0;
        for (std::int64_t v = 0; v < gm.vertex_count(); ++v) {
            f.values[static_cast<std::size_t>(v)] = acc;
            acc += 2.0 * dh * unif(rng);
        }
        for (std::int64_t v = 0; v < gm.vertex_count(); ++v)
            f.values[static_cast<std::size_t>(v)] -=
                acc * static_cast<double>(v) / static_cast<double>(gm.vertex_count());
        double Lf = intrinsic_lipschitz_constant(f);
        ExtensionResult e = extend_shell(f, ml);
        const TriMesh& mesh = *e.mesh;
        bool fidelity = true;
        for (std::size_t i = 0; i < mesh.node_count(); ++i)
            if (mesh.boundary_link[i] >= 0)
                fidelity = fidelity &&
                           e.values[i] == f.values[static_cast<std::size_t>(mesh.boundary_link[i])];
        expect(fidelity, "extension boundary fidelity");
        double fmin = *std::min_element(f.values.begin(), f.values.end());
        double fmax = *std::max_element(f.values.begin(), f.values.end());
        bool range_ok = true;
        for (double v : e.values) range_ok = range_ok && v >= fmin - 1e-12 && v <= fmax + 1e-12;
        expect(range_ok, "extension max principle");
        bool avg_ok = true;
        for (int k = 1; k <= ml; ++k) {
            double bound = 7.0 * std::pow(4.0, -k) * Lf + 1e-12;
            for (auto& edge : mesh.shell_ring_edges[static_cast<std::size_t>(k)])
                avg_ok = avg_ok && std::abs(e.values[static_cast<std::size_t>(edge[0])] -
                                            e.values[static_cast<std::size_t>(edge[1])]) <= bound;
        }
        expect(avg_ok, "shell neighbor-averaging bound 7 L 4^-n");
        expect(std::abs(mesh.total_area() - prefractal_area(gm)) < 1e-12,
               "mesh area matches shoelace");
        expect(mesh.min_angle_deg() >= 20.0, "minimum triangle angle at least 20 degrees");
    }

    {
        HexagonCensus census = hexagon_census(2);
        expect(census.total() == 30 && census.two_fractal_sides == 18 &&
                   census.one_fractal_side == 12,
               "hexagon census 30 = 18 + 12");
    }

    {
        int sl = std::max(1, std::min(L, 2));
        BoundaryGraph gs = boundary_graph(sl);
        TriMesh mesh = collar_mesh(uniform_triangulation(sl), gs);
        CoefficientSet pure = CoefficientSet::pure_diffusion();
        FormMatrices fm = assemble(mesh, gs, pure);
        SpMat B = fm.full_operator();
        SpMat Bt = SpMat(B.transpose());
        expect(Eigen::MatrixXd(B - Bt).cwiseAbs().maxCoeff() < 1e-12, "pure form symmetric");
        Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(
            fm.n, [&](Eigen::Index) { return 0.5 + 0.5 * unif(rng); });
        Stepper st(fm, 0.5, Scheme::ImplicitEuler);
        Eigen::VectorXd next = st.step(u, Eigen::VectorXd::Zero(fm.n));
        expect(next.minCoeff() >= -1e-12 && next.maxCoeff() <= 1.0 + 1e-12,
               "Markov property of one implicit step");
        Eigen::VectorXd mass = fm.mass();
        expect(std::abs(mass.dot(next) - mass.dot(u)) < 1e-10, "mass conservation per step");
    }

    if (failures.empty()) {
        std::cout << "PASS " << checks << " checks\n";
        return 0;
    }
    std::cout << "FAIL " << failures.size() << " of " << checks << " checks\n";
    for (auto& f : failures) std::cout << "  failed: " << f << "\n";
    std::cout << "error: verify " << failures.front() << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koch snowflake boundary-energy toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    std::string config_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file (flags override)");
        sub->add_option("--level", cfg.level, "prefractal level");
        sub->add_option("--method", cfg.method, "shell | hexagon | uniform");
        sub->add_option("--scheme", cfg.scheme, "ie | cn");
        sub->add_option("--dt", cfg.dt, "time step");
        sub->add_option("--T", cfg.T, "final time");
        sub->add_option("--coeff", cfg.coeff_path, "coefficient file");
        sub->add_option("--boundary-data", cfg.boundary_data, "csv path or builtin:<name>");
        sub->add_option("--u0", cfg.u0, "initial state spec");
        sub->add_option("--forcing", cfg.forcing, "forcing spec");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--seed", cfg.seed, "rng seed for property checks");
        sub->add_flag("--svg", cfg.svg, "emit svg figures");
    };
    add_common(app.add_subcommand("mesh", "generate and export a triangulation"));
    add_common(app.add_subcommand("extend", "extend boundary data into the domain"));
    add_common(app.add_subcommand("solve", "time-step the coupled parabolic problem"));
    add_common(app.add_subcommand("verify", "run the invariant suite"));
    add_common(app.add_subcommand("export", "emit figure data"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    cfg.command = app.get_subcommands().front()->get_name();

    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) throw std::invalid_argument("cannot read config file " + config_path);
            auto* sub = app.get_subcommands().front();
            std::string line;
            while (std::getline(is, line)) {
                if (line.empty() || line[0] == '#') continue;
                auto eq = line.find('=');
                if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value");
                std::string key = line.substr(0, eq), val = line.substr(eq + 1);
                auto overridden = [&](const std::string& flag) { return sub->count("--" + flag) > 0; };
                if (key == "level") { if (!overridden("level")) cfg.level = std::stoi(val); }
                else if (key == "method") { if (!overridden("method")) cfg.method = val; }
                else if (key == "scheme") { if (!overridden("scheme")) cfg.scheme = val; }
                else if (key == "dt") { if (!overridden("dt")) cfg.dt = std::stod(val); }
                else if (key == "T") { if (!overridden("T")) cfg.T = std::stod(val); }
                else if (key == "coeff") { if (!overridden("coeff")) cfg.coeff_path = val; }
                else if (key == "boundary_data") { if (!overridden("boundary-data")) cfg.boundary_data = val; }
                else if (key == "u0") { if (!overridden("u0")) cfg.u0 = val; }
                else if (key == "forcing") { if (!overridden("forcing")) cfg.forcing = val; }
                else if (key == "out") { if (!overridden("out")) cfg.out_dir = val; }
                else if (key == "seed") { if (!overridden("seed")) cfg.seed = std::stoull(val); }
                else if (key == "svg") { if (!overridden("svg")) cfg.svg = (val == "1" || val == "true"); }
                else throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        }

        if (cfg.command == "mesh") return cmd_mesh(cfg);
        if (cfg.command == "extend") return cmd_extend(cfg);
        if (cfg.command == "solve") return cmd_solve(cfg);
        if (cfg.command == "verify") return cmd_verify(cfg);
        if (cfg.command == "export") return cmd_export(cfg);
        std::cerr << "error: config unknown command\n";
        return 1;
    } catch (const RejectedCoefficients& e) {
        std::cout << "error: assumptions " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cout << "error: config " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cout << "error: numerical " << e.what() << "\n";
        return 2;
    }
}
