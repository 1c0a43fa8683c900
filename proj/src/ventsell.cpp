#include "snow/ventsell.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace snow {

CoefficientSet CoefficientSet::pure_diffusion() {
    CoefficientSet c;
    c.A = [](double, double) { return Eigen::Matrix2d::Identity(); };
    c.b = [](double, double) { return Eigen::Vector2d::Zero(); };
    c.b_boundary = [](double, double) { return 0.0; };
    c.c = [](double, double) { return 0.0; };
    c.c0 = 1.0;
    c.lambda = 1.0;
    return c;
}

SpMat FormMatrices::full_operator() const {
    SpMat B = stiff_bulk + stiff_boundary + drift_bulk + drift_boundary;
    SpMat P(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < n; ++i)
        if (potential_boundary[i] != 0.0) trips.emplace_back(i, i, potential_boundary[i]);
    P.setFromTriplets(trips.begin(), trips.end());
    return B + P;
}

namespace {

using Trip = Eigen::Triplet<double>;

SpMat from_triplets_sorted(int n, std::vector<Trip>& trips) {
    std::stable_sort(trips.begin(), trips.end(), [](const Trip& a, const Trip& b) {
        return a.col() != b.col() ? a.col() < b.col() : a.row() < b.row();
    });
    SpMat m(n, n);
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

}  // namespace

FormMatrices assemble(const TriMesh& mesh, const BoundaryGraph& graph,
                      const CoefficientSet& coeff, ExecPolicy policy) {
    if (!mesh.conforming())
        throw std::invalid_argument("assemble: mesh has T-junctions; use the uniform construction");
    if (!mesh.has_collar) throw std::invalid_argument("assemble: mesh must include the collar");
    if (mesh.level != graph.level) throw std::invalid_argument("assemble: mesh/graph level mismatch");
    if (!coeff.A_table.empty() && coeff.A_table.size() != mesh.tri_count())
        throw std::invalid_argument("assemble: A table size != triangle count");
    if (!coeff.b_table.empty() && coeff.b_table.size() != mesh.tri_count())
        throw std::invalid_argument("assemble: b table size != triangle count");

    FormMatrices fm;
    fm.n = static_cast<int>(mesh.node_count());
    fm.c0 = coeff.c0;
    fm.node_to_graph = mesh.boundary_link;
    fm.graph_to_node.assign(static_cast<std::size_t>(graph.vertex_count()), -1);
    for (int i = 0; i < fm.n; ++i)
        if (mesh.boundary_link[static_cast<std::size_t>(i)] >= 0)
            fm.graph_to_node[static_cast<std::size_t>(mesh.boundary_link[static_cast<std::size_t>(i)])] = i;
    for (int v = 0; v < static_cast<int>(graph.vertex_count()); ++v)
        if (fm.graph_to_node[static_cast<std::size_t>(v)] < 0)
            throw std::invalid_argument("assemble: unlinked boundary node");

    const auto nt = static_cast<std::int64_t>(mesh.tri_count());
    const int threads = thread_count(policy);
    std::vector<std::vector<Trip>> stiff_buf(static_cast<std::size_t>(threads)),
        drift_buf(static_cast<std::size_t>(threads));
    std::vector<Eigen::VectorXd> mass_buf(static_cast<std::size_t>(threads),
                                          Eigen::VectorXd::Zero(fm.n));
    std::vector<char> asym_flag(static_cast<std::size_t>(threads), 0);
    std::vector<double> lam_min(static_cast<std::size_t>(threads),
                                std::numeric_limits<double>::infinity());

#ifdef SNOW_HAVE_OPENMP
#pragma omp parallel num_threads(threads) if (threads > 1)
#endif
    {
#ifdef SNOW_HAVE_OPENMP
        const int tid = threads > 1 ? omp_get_thread_num() : 0;
#else
        const int tid = 0;
#endif
        auto& st = stiff_buf[static_cast<std::size_t>(tid)];
        auto& dr = drift_buf[static_cast<std::size_t>(tid)];
        auto& ms = mass_buf[static_cast<std::size_t>(tid)];
        auto& lam = lam_min[static_cast<std::size_t>(tid)];
#ifdef SNOW_HAVE_OPENMP
#pragma omp for schedule(static)
#endif
        for (std::int64_t t = 0; t < nt; ++t) {
            auto& tr = mesh.tris[static_cast<std::size_t>(t)];
            std::array<std::complex<double>, 3> p;
            for (int i = 0; i < 3; ++i) p[static_cast<std::size_t>(i)] = mesh.fpos(tr[static_cast<std::size_t>(i)]);
            double area = 0.5 * ((p[1] - p[0]).real() * (p[2] - p[0]).imag() -
                                 (p[1] - p[0]).imag() * (p[2] - p[0]).real());
            std::complex<double> bary = (p[0] + p[1] + p[2]) / 3.0;
            Eigen::Matrix2d Aq = coeff.A_table.empty()
                                     ? coeff.A(bary.real(), bary.imag())
                                     : coeff.A_table[static_cast<std::size_t>(t)];
            if (std::abs(Aq(0, 1) - Aq(1, 0)) > 1e-12 * (1.0 + Aq.cwiseAbs().maxCoeff()))
                asym_flag[static_cast<std::size_t>(tid)] = 1;
            double half_tr = 0.5 * (Aq(0, 0) + Aq(1, 1));
            double disc = std::sqrt(std::max(
                0.0, 0.25 * std::pow(Aq(0, 0) - Aq(1, 1), 2) + Aq(0, 1) * Aq(1, 0)));
            lam = std::min(lam, half_tr - disc);
            Eigen::Vector2d bq = coeff.b_table.empty()
                                     ? coeff.b(bary.real(), bary.imag())
                                     : coeff.b_table[static_cast<std::size_t>(t)];
            std::array<Eigen::Vector2d, 3> grad;
            for (int i = 0; i < 3; ++i) {
                auto e = p[static_cast<std::size_t>((i + 2) % 3)] - p[static_cast<std::size_t>((i + 1) % 3)];
                grad[static_cast<std::size_t>(i)] = Eigen::Vector2d(-e.imag(), e.real()) / (2.0 * area);
            }
            for (int i = 0; i < 3; ++i) {
                ms[tr[static_cast<std::size_t>(i)]] += area / 3.0;
                for (int j = 0; j < 3; ++j) {
                    double sij = area * grad[static_cast<std::size_t>(i)].dot(Aq * grad[static_cast<std::size_t>(j)]);
                    st.emplace_back(tr[static_cast<std::size_t>(i)], tr[static_cast<std::size_t>(j)], sij);
                    double dij = -(bq.dot(grad[static_cast<std::size_t>(j)])) * area / 3.0;
                    if (dij != 0.0) dr.emplace_back(tr[static_cast<std::size_t>(i)], tr[static_cast<std::size_t>(j)], dij);
                }
            }
        }
    }

    for (char f : asym_flag)
        if (f) throw std::invalid_argument("assemble: non-symmetric A input");
    fm.lambda_quadrature = *std::min_element(lam_min.begin(), lam_min.end());

    std::vector<Trip> stiff_trips, drift_trips;
    for (auto& b : stiff_buf) stiff_trips.insert(stiff_trips.end(), b.begin(), b.end());
    for (auto& b : drift_buf) drift_trips.insert(drift_trips.end(), b.begin(), b.end());
    fm.stiff_bulk = from_triplets_sorted(fm.n, stiff_trips);
    fm.drift_bulk = from_triplets_sorted(fm.n, drift_trips);
    fm.mass_bulk = Eigen::VectorXd::Zero(fm.n);
    for (auto& b : mass_buf) fm.mass_bulk += b;

    // boundary operators on the shared dofs
    const std::int64_t ne = graph.edge_count();
    const double w = 0.5 * static_cast<double>(graph.cells_per_copy());
    const double mass_e = graph.cell_mass();
    const double inv_dh = static_cast<double>(graph.cells_per_copy());
    std::vector<Trip> sb, db;
    fm.mass_boundary = Eigen::VectorXd::Zero(fm.n);
    fm.potential_boundary = Eigen::VectorXd::Zero(fm.n);
    for (std::int64_t e = 0; e < ne; ++e) {
        int np = fm.graph_to_node[static_cast<std::size_t>(e)];
        int nq = fm.graph_to_node[static_cast<std::size_t>((e + 1) % ne)];
        double cw = coeff.c0 * w;
        sb.emplace_back(np, np, cw);
        sb.emplace_back(nq, nq, cw);
        sb.emplace_back(np, nq, -cw);
        sb.emplace_back(nq, np, -cw);
        auto zp = graph.fpos(e), zq = graph.fpos((e + 1) % ne);
        auto mid = 0.5 * (zp + zq);
        double be = coeff.b_boundary(mid.real(), mid.imag());
        if (be != 0.0) {
            // row r gets -b_e * (u_q - u_p) * inv_dh * (mass_e / 2) for r in {p, q}
            double s = -be * inv_dh * 0.5 * mass_e;
            db.emplace_back(np, nq, s);
            db.emplace_back(np, np, -s);
            db.emplace_back(nq, nq, -s);
            db.emplace_back(nq, np, s);
        }
        fm.mass_boundary[np] += 0.5 * mass_e;
        fm.mass_boundary[nq] += 0.5 * mass_e;
    }
    fm.stiff_boundary = from_triplets_sorted(fm.n, sb);
    fm.drift_boundary = from_triplets_sorted(fm.n, db);
    for (std::int64_t v = 0; v < graph.vertex_count(); ++v) {
        int nv = fm.graph_to_node[static_cast<std::size_t>(v)];
        auto z = graph.fpos(v);
        fm.potential_boundary[nv] = coeff.c(z.real(), z.imag()) * graph.vertex_mass(v);
    }
    return fm;
}

namespace {

// smallest eigenvalue of the pencil (S, diag(m)) by shift-and-invert power
// iteration; S symmetric
double pencil_lambda_min(const SpMat& S, const Eigen::VectorXd& m) {
    const int n = static_cast<int>(S.rows());
    SpMat M(n, n);
    std::vector<Trip> trips;
    trips.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) trips.emplace_back(i, i, m[i]);
    M.setFromTriplets(trips.begin(), trips.end());

    double shift = 1.0;
    Eigen::SimplicialLDLT<SpMat> ldlt;
    for (int attempt = 0; attempt < 64; ++attempt) {
        SpMat K = S + shift * M;
        ldlt.compute(K);
        if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) break;
        shift *= 4.0;
        if (attempt == 63) throw std::runtime_error("pencil_lambda_min: no positive shift found");
    }
    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    x += 1e-3 * Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
    double rho = 0.0;
    for (int it = 0; it < 400; ++it) {
        Eigen::VectorXd y = ldlt.solve(m.cwiseProduct(x).eval());
        double norm = std::sqrt(y.dot(m.cwiseProduct(y)));
        x = y / norm;
        double rho_new = x.dot(S * x) / x.dot(m.cwiseProduct(x));
        if (it > 20 && std::abs(rho_new - rho) < 1e-13 * (1.0 + std::abs(rho_new))) {
            rho = rho_new;
            break;
        }
        rho = rho_new;
    }
    return rho;
}

}  // namespace

AssumptionReport check_assumptions(const FormMatrices& fm, const CoefficientSet& coeff,
                                   std::uint64_t seed) {
    AssumptionReport rep;
    rep.seed = seed;
    if (std::sqrt(2.0 * coeff.gamma1) >= coeff.lambda)
        throw RejectedCoefficients("assumptions: sqrt(2 gamma1) >= lambda");
    if (std::sqrt(2.0 * coeff.delta1) >= coeff.c0)
        throw RejectedCoefficients("assumptions: sqrt(2 delta1) >= c0");

    // (a) ellipticity at the assembly quadrature points
    rep.lambda_quadrature = fm.lambda_quadrature;
    if (rep.lambda_quadrature < coeff.lambda - 1e-12)
        throw RejectedCoefficients("assumptions: ellipticity below claimed lambda");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto rand_vec = [&]() {
        Eigen::VectorXd u(fm.n);
        for (int i = 0; i < fm.n; ++i) u[i] = unif(rng);
        return u;
    };
    const Eigen::VectorXd mass = fm.mass();

    // (b) bulk form bound with epsilon picked by line search
    {
        std::vector<Eigen::VectorXd> samples;
        for (int s = 0; s < 100; ++s) samples.push_back(rand_vec());
        const double g1 = coeff.gamma1, g2 = coeff.gamma2, lam = coeff.lambda;
        for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}) {
            bool ok = true;
            for (auto& u : samples) {
                double lhs = std::abs(u.dot(fm.drift_bulk * u));
                double rhs = (std::sqrt(2.0 * g1) + eps * eps) / lam * u.dot(fm.stiff_bulk * u) +
                             2.0 * g2 / (eps * eps) * u.dot(mass.cwiseProduct(u));
                if (lhs > rhs * (1.0 + 1e-12) + 1e-14) { ok = false; break; }
            }
            if (ok) {
                rep.bulk_bound_ok = true;
                rep.epsilon = eps;
                break;
            }
        }
    }
    // (c) boundary analogue
    {
        std::vector<Eigen::VectorXd> samples;
        for (int s = 0; s < 100; ++s) samples.push_back(rand_vec());
        const double d1 = coeff.delta1, d2 = coeff.delta2, c0 = coeff.c0;
        for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}) {
            bool ok = true;
            for (auto& u : samples) {
                double lhs = std::abs(u.dot(fm.drift_boundary * u));
                double rhs = (std::sqrt(2.0 * d1) + eps * eps) / c0 * u.dot(fm.stiff_boundary * u) +
                             2.0 * d2 / (eps * eps) * u.dot(mass.cwiseProduct(u));
                if (lhs > rhs * (1.0 + 1e-12) + 1e-14) { ok = false; break; }
            }
            if (ok) {
                rep.boundary_bound_ok = true;
                break;
            }
        }
    }

    // (d) smallest alpha with B + alpha * Mass positive definite
    SpMat B = fm.full_operator();
    SpMat Bt = SpMat(B.transpose());
    SpMat Bsym = 0.5 * (B + Bt);
    double lmin = pencil_lambda_min(Bsym, mass);
    rep.alpha = std::max(0.0, -lmin);

    // (e) sector constant of E_{alpha+1}: largest singular value of the
    // Gram-preconditioned operator, by power iteration
    {
        const double a1 = rep.alpha + 1.0;
        SpMat M(fm.n, fm.n);
        std::vector<Trip> trips;
        for (int i = 0; i < fm.n; ++i) trips.emplace_back(i, i, a1 * mass[i]);
        M.setFromTriplets(trips.begin(), trips.end());
        SpMat N = B + M;
        SpMat G = Bsym + M;  // symmetric part of E_{alpha+1}, positive definite
        Eigen::SimplicialLDLT<SpMat> gld(G);
        if (gld.info() != Eigen::Success)
            throw std::runtime_error("check_assumptions: Gram factorization failed");
        Eigen::VectorXd x = rand_vec();
        x.normalize();
        double k2 = 1.0;
        SpMat Nt = SpMat(N.transpose());
        for (int it = 0; it < 200; ++it) {
            Eigen::VectorXd y = gld.solve((N * x).eval());
            y = gld.solve((Nt * y).eval());
            double k2_new = std::sqrt(y.dot(G * y));  // since x is G-normalized
            y /= std::sqrt(y.dot(G * y));
            x = y;
            if (it > 10 && std::abs(k2_new - k2) < 1e-10 * (1.0 + k2_new)) {
                k2 = k2_new;
                break;
            }
            k2 = k2_new;
        }
        rep.sector_K = std::sqrt(k2);
    }
    return rep;
}

Stepper::Stepper(const FormMatrices& fm, double dt, Scheme scheme)
    : dt_(dt), theta_(scheme == Scheme::ImplicitEuler ? 1.0 : 0.5) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    SpMat B = fm.full_operator();
    mass_ = fm.mass();
    SpMat M(fm.n, fm.n);
    std::vector<Trip> trips;
    for (int i = 0; i < fm.n; ++i) trips.emplace_back(i, i, mass_[i]);
    M.setFromTriplets(trips.begin(), trips.end());
    lhs_ = M + dt_ * theta_ * B;
    rhs_ = M - dt_ * (1.0 - theta_) * B;
    lu_.compute(lhs_);
    if (lu_.info() != Eigen::Success) throw std::runtime_error("step: singular system");
}

Eigen::VectorXd Stepper::step(const Eigen::VectorXd& u, const Eigen::VectorXd& load) const {
    Eigen::VectorXd rhs = rhs_ * u + load;
    Eigen::VectorXd x = lu_.solve(rhs);
    Eigen::VectorXd res = rhs - lhs_ * x;
    double scale = rhs.norm() + 1.0;
    if (res.norm() > 1e-12 * scale) {
        x += lu_.solve(res);
        res = rhs - lhs_ * x;
        if (res.norm() > 1e-12 * scale) throw std::runtime_error("step: solve failed to converge");
    }
    return x;
}

Trajectory solve_cauchy(const FormMatrices& fm, const Eigen::VectorXd& u0,
                        const std::function<Eigen::VectorXd(double)>& forcing, double T,
                        double dt, Scheme scheme) {
    if (!(T > 0.0) || !(dt > 0.0) || dt > T)
        throw std::invalid_argument("solve_cauchy: need 0 < dt <= T");
    Trajectory traj;
    traj.scheme = scheme;
    traj.dt = dt;
    const auto steps = static_cast<std::int64_t>(std::ceil(T / dt - 1e-12));
    Stepper st(fm, dt, scheme);
    const Eigen::VectorXd mass = fm.mass();
    traj.times.push_back(0.0);
    traj.states.push_back(u0);
    Eigen::VectorXd u = u0;
    Eigen::VectorXd f_old = forcing(0.0);
    const double theta = st.theta();
    for (std::int64_t k = 0; k < steps; ++k) {
        double t_new = static_cast<double>(k + 1) * dt;
        Eigen::VectorXd f_new = forcing(t_new);
        Eigen::VectorXd load =
            dt * (theta * mass.cwiseProduct(f_new) + (1.0 - theta) * mass.cwiseProduct(f_old));
        u = st.step(u, load);
        traj.times.push_back(t_new);
        traj.states.push_back(u);
        f_old = std::move(f_new);
    }
    return traj;
}

BoundaryFunction conormal_residual(const FormMatrices& fm, const BoundaryGraph& graph,
                                   const Eigen::VectorXd& state, const Eigen::VectorXd& state_dot,
                                   const Eigen::VectorXd& f_bulk) {
    Eigen::VectorXd r = fm.stiff_bulk * state + fm.drift_bulk * state +
                        fm.mass_bulk.cwiseProduct(state_dot - f_bulk);
    BoundaryFunction out(graph);
    for (std::int64_t v = 0; v < graph.vertex_count(); ++v)
        out.values[static_cast<std::size_t>(v)] = r[fm.graph_to_node[static_cast<std::size_t>(v)]];
    return out;
}

Eigen::VectorXd ventsell_identity_residual(const FormMatrices& fm, const BoundaryGraph& graph,
                                           const Eigen::VectorXd& u_old,
                                           const Eigen::VectorXd& u_new, double dt, double theta,
                                           const Eigen::VectorXd& f_old,
                                           const Eigen::VectorXd& f_new) {
    Eigen::VectorXd udot = (u_new - u_old) / dt;
    Eigen::VectorXd u_eval = theta * u_new + (1.0 - theta) * u_old;
    Eigen::VectorXd f_eval = theta * f_new + (1.0 - theta) * f_old;

    BoundaryFunction conormal = conormal_residual(fm, graph, u_eval, udot, f_eval);
    Eigen::VectorXd bdry = fm.stiff_boundary * u_eval + fm.drift_boundary * u_eval +
                           fm.potential_boundary.cwiseProduct(u_eval) +
                           fm.mass_boundary.cwiseProduct(udot - f_eval);
    Eigen::VectorXd res(graph.vertex_count());
    for (std::int64_t v = 0; v < graph.vertex_count(); ++v) {
        int nv = fm.graph_to_node[static_cast<std::size_t>(v)];
        res[static_cast<Eigen::Index>(v)] = bdry[nv] + conormal.values[static_cast<std::size_t>(v)];
    }
    return res;
}

}  // namespace snow
