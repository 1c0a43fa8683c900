#include "snow/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snow {
namespace {

void echo(std::ostream& os, const ConfigEcho& config, const char* prefix = "# ") {
    for (auto& [k, v] : config) os << prefix << k << "=" << v << "\n";
}

}  // namespace

void write_snowmesh(std::ostream& os, const TriMesh& mesh, const ConfigEcho& config,
                    const std::vector<double>* values) {
    os << "snowmesh v1\n";
    echo(os, config);
    os << std::setprecision(17);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        auto z = mesh.fpos(static_cast<int>(i));
        os << "node " << i << " " << z.real() << " " << z.imag();
        if (mesh.boundary_link[i] >= 0) os << " boundary " << mesh.boundary_link[i];
        os << "\n";
    }
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        auto& tr = mesh.tris[t];
        os << "tri " << t << " " << tr[0] << " " << tr[1] << " " << tr[2] << " " << mesh.shell[t]
           << "\n";
    }
    if (values) {
        for (std::size_t i = 0; i < values->size(); ++i)
            os << "val " << i << " " << (*values)[i] << "\n";
    }
}

TriMesh read_snowmesh(std::istream& is) {
    // float positions only; exact coordinates are not recoverable from text,
    // so the reader serves viewers and round-trip tests of the lossy fields
    TriMesh mesh;
    std::string line;
    if (!std::getline(is, line) || line.rfind("snowmesh v1", 0) != 0)
        throw std::invalid_argument("read_snowmesh: bad header");
    std::vector<std::complex<double>> fpos;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "node") {
            std::size_t id; double x, y;
            ss >> id >> x >> y;
            fpos.emplace_back(x, y);
            std::string b; int link = -1;
            if (ss >> b >> link && b == "boundary")
                mesh.boundary_link.push_back(link);
            else
                mesh.boundary_link.push_back(-1);
            mesh.node_pos.push_back(EPoint{0, 0});
        } else if (tag == "tri") {
            std::size_t id; int a, b, c, s;
            ss >> id >> a >> b >> c >> s;
            mesh.tris.push_back({a, b, c});
            mesh.shell.push_back(s);
        }
    }
    return mesh;
}

namespace {

struct SvgFrame {
    double min_x = -2.0, max_x = 2.0, min_y = -2.0, max_y = 2.0, size = 800.0;
    double sx(double x) const { return (x - min_x) / (max_x - min_x) * size; }
    double sy(double y) const { return size - (y - min_y) / (max_y - min_y) * size; }
};

void svg_open(std::ostream& os, const ConfigEcho& config, const SvgFrame& f) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.size << "\" height=\""
       << f.size << "\" viewBox=\"0 0 " << f.size << " " << f.size << "\">\n";
    os << "<!--\n";
    echo(os, config, "");
    os << "-->\n";
}

}  // namespace

void write_svg_mesh(std::ostream& os, const TriMesh& mesh, const ConfigEcho& config) {
    SvgFrame f;
    svg_open(os, config, f);
    os << std::setprecision(8);
    os << "<g stroke=\"black\" stroke-width=\"0.4\" fill=\"none\">\n";
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        auto& tr = mesh.tris[t];
        os << "<path d=\"M";
        for (int i = 0; i < 3; ++i) {
            auto z = mesh.fpos(tr[static_cast<std::size_t>(i)]);
            os << " " << f.sx(z.real()) << " " << f.sy(z.imag()) << (i < 2 ? " L" : "");
        }
        os << " Z\"/>\n";
    }
    os << "</g>\n</svg>\n";
}

void write_svg_polyline(std::ostream& os, const BoundaryGraph& graph, const ConfigEcho& config) {
    SvgFrame f;
    svg_open(os, config, f);
    os << std::setprecision(8);
    os << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"0.6\" points=\"";
    for (std::int64_t v = 0; v < graph.vertex_count(); ++v) {
        auto z = graph.fpos(v);
        os << f.sx(z.real()) << "," << f.sy(z.imag()) << " ";
    }
    os << "\"/>\n</svg>\n";
}

void write_svg_heat(std::ostream& os, const ExtensionResult& r, const ConfigEcho& config) {
    SvgFrame f;
    svg_open(os, config, f);
    const TriMesh& mesh = *r.mesh;
    double lo = *std::min_element(r.values.begin(), r.values.end());
    double hi = *std::max_element(r.values.begin(), r.values.end());
    double span = hi > lo ? hi - lo : 1.0;
    os << std::setprecision(8);
    for (std::size_t t = 0; t < mesh.tri_count(); ++t) {
        auto& tr = mesh.tris[t];
        double v = (r.values[static_cast<std::size_t>(tr[0])] +
                    r.values[static_cast<std::size_t>(tr[1])] +
                    r.values[static_cast<std::size_t>(tr[2])]) / 3.0;
        int shade = static_cast<int>(std::lround((v - lo) / span * 255.0));
        os << "<path fill=\"rgb(" << shade << "," << 64 << "," << 255 - shade
           << ")\" stroke=\"none\" d=\"M";
        for (int i = 0; i < 3; ++i) {
            auto z = mesh.fpos(tr[static_cast<std::size_t>(i)]);
            os << " " << f.sx(z.real()) << " " << f.sy(z.imag()) << (i < 2 ? " L" : "");
        }
        os << " Z\"/>\n";
    }
    os << "</svg>\n";
}

void write_boundary_csv(std::ostream& os, const BoundaryFunction& f, const ConfigEcho& config) {
    echo(os, config);
    os << "vertex_or_edge_id,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < f.values.size(); ++i) os << i << "," << f.values[i] << "\n";
}

void write_edge_csv(std::ostream& os, const EdgeField& f, const ConfigEcho& config) {
    echo(os, config);
    os << "vertex_or_edge_id,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < f.values.size(); ++i) os << i << "," << f.values[i] << "\n";
}

BoundaryFunction read_boundary_csv(std::istream& is, const BoundaryGraph& graph) {
    BoundaryFunction f(graph);
    std::string line;
    std::size_t seen = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("vertex", 0) == 0) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("boundary csv: expected id,value");
        std::int64_t id = std::stoll(line.substr(0, comma));
        double v = std::stod(line.substr(comma + 1));
        if (id < 0 || id >= graph.vertex_count())
            throw std::invalid_argument("boundary csv: vertex id out of range");
        f.values[static_cast<std::size_t>(id)] = v;
        ++seen;
    }
    if (seen != f.values.size())
        throw std::invalid_argument("boundary csv: value count != vertex count");
    return f;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ConfigEcho& config) {
    echo(os, config);
    os << "time,node_id,value\n" << std::setprecision(17);
    for (std::size_t k = 0; k < traj.times.size(); ++k)
        for (Eigen::Index i = 0; i < traj.states[k].size(); ++i)
            os << traj.times[k] << "," << i << "," << traj.states[k][i] << "\n";
}

void write_report(std::ostream& os, const ConfigEcho& entries) {
    for (auto& [k, v] : entries) os << k << "=" << v << "\n";
}

void write_form_report(std::ostream& os, const FormReport& rep, const ConfigEcho& config) {
    echo(os, config);
    os << std::setprecision(17);
    os << "level=" << rep.level << "\n";
    os << "energy=" << rep.energy << "\n";
    for (int i = 0; i < 3; ++i) os << "energy_K" << i + 1 << "=" << rep.per_copy[static_cast<std::size_t>(i)] << "\n";
    os << "convention=" << FormReport::convention << "\n";
}

namespace {

std::vector<double> parse_args(const std::string& s, std::size_t open) {
    auto close = s.find(')', open);
    if (close == std::string::npos) throw std::invalid_argument("coefficients: missing ')'");
    std::vector<double> out;
    std::string inner = s.substr(open + 1, close - open - 1);
    std::istringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

CoefficientSet parse_coefficients_text(const std::string& text) {
    CoefficientSet c = CoefficientSet::pure_diffusion();
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("coefficients: expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "A") {
            if (val.rfind("table:", 0) == 0) {
                std::ifstream tf(val.substr(6));
                if (!tf) throw std::invalid_argument("coefficients: cannot read " + val.substr(6));
                std::string row;
                while (std::getline(tf, row)) {
                    if (row.empty() || row[0] == '#') continue;
                    std::istringstream rs(row);
                    std::size_t id; double a11, a12, a22;
                    if (!(rs >> id >> a11 >> a12 >> a22))
                        throw std::invalid_argument("coefficients: A table row needs 'id a11 a12 a22'");
                    if (c.A_table.size() <= id) c.A_table.resize(id + 1, Eigen::Matrix2d::Identity());
                    c.A_table[id] << a11, a12, a12, a22;
                }
            } else if (val == "identity") {
                c.A = [](double, double) { return Eigen::Matrix2d::Identity(); };
            } else if (val.rfind("diag(", 0) == 0) {
                auto a = parse_args(val, 4);
                if (a.size() != 2) throw std::invalid_argument("A=diag(a,b) needs 2 numbers");
                c.A = [a](double, double) {
                    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
                    m(0, 0) = a[0];
                    m(1, 1) = a[1];
                    return m;
                };
            } else if (val.rfind("constant(", 0) == 0) {
                auto a = parse_args(val, 8);
                if (a.size() != 3) throw std::invalid_argument("A=constant(a11,a12,a22) needs 3 numbers");
                c.A = [a](double, double) {
                    Eigen::Matrix2d m;
                    m << a[0], a[1], a[1], a[2];
                    return m;
                };
            } else {
                throw std::invalid_argument("coefficients: unknown A spec '" + val + "'");
            }
        } else if (key == "b") {
            if (val.rfind("table:", 0) == 0) {
                std::ifstream tf(val.substr(6));
                if (!tf) throw std::invalid_argument("coefficients: cannot read " + val.substr(6));
                std::string row;
                while (std::getline(tf, row)) {
                    if (row.empty() || row[0] == '#') continue;
                    std::istringstream rs(row);
                    std::size_t id; double b1, b2;
                    if (!(rs >> id >> b1 >> b2))
                        throw std::invalid_argument("coefficients: b table row needs 'id b1 b2'");
                    if (c.b_table.size() <= id) c.b_table.resize(id + 1, Eigen::Vector2d::Zero());
                    c.b_table[id] << b1, b2;
                }
            } else if (val == "zero") {
                c.b = [](double, double) { return Eigen::Vector2d::Zero(); };
            } else if (val.rfind("constant(", 0) == 0) {
                auto a = parse_args(val, 8);
                if (a.size() != 2) throw std::invalid_argument("b=constant(v1,v2) needs 2 numbers");
                c.b = [a](double, double) { return Eigen::Vector2d(a[0], a[1]); };
            } else {
                throw std::invalid_argument("coefficients: unknown b spec '" + val + "'");
            }
        } else if (key == "b_boundary") {
            if (val == "zero") {
                c.b_boundary = [](double, double) { return 0.0; };
            } else if (val.rfind("constant(", 0) == 0) {
                auto a = parse_args(val, 8);
                if (a.size() != 1) throw std::invalid_argument("b_boundary=constant(v) needs 1 number");
                c.b_boundary = [a](double, double) { return a[0]; };
            } else {
                throw std::invalid_argument("coefficients: unknown b_boundary spec '" + val + "'");
            }
        } else if (key == "c") {
            if (val == "zero") {
                c.c = [](double, double) { return 0.0; };
            } else if (val.rfind("constant(", 0) == 0) {
                auto a = parse_args(val, 8);
                if (a.size() != 1) throw std::invalid_argument("c=constant(v) needs 1 number");
                c.c = [a](double, double) { return a[0]; };
            } else {
                throw std::invalid_argument("coefficients: unknown c spec '" + val + "'");
            }
        } else if (key == "c0") {
            c.c0 = std::stod(val);
        } else if (key == "lambda") {
            c.lambda = std::stod(val);
        } else if (key == "gamma1") {
            c.gamma1 = std::stod(val);
        } else if (key == "gamma2") {
            c.gamma2 = std::stod(val);
        } else if (key == "delta1") {
            c.delta1 = std::stod(val);
        } else if (key == "delta2") {
            c.delta2 = std::stod(val);
        } else {
            throw std::invalid_argument("coefficients: unknown key '" + key + "'");
        }
    }
    if (!(c.c0 > 0.0)) throw std::invalid_argument("coefficients: c0 must be positive");
    if (!(c.lambda > 0.0)) throw std::invalid_argument("coefficients: lambda must be positive");
    return c;
}

CoefficientSet parse_coefficients(std::istream& is) {
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_coefficients_text(ss.str());
}

}  // namespace snow
