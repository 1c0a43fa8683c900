#ifndef SNOW_IO_HPP
#define SNOW_IO_HPP

#include <map>
#include <ostream>
#include <string>

#include "snow/boundary_calculus.hpp"
#include "snow/extension.hpp"
#include "snow/mesh.hpp"
#include "snow/ventsell.hpp"

// File formats.  Every output begins with the effective configuration echoed
// in comment lines so runs are reproducible byte for byte.
//
//   mesh:  "snowmesh v1" header, "# key=value" config lines, then
//          "node <id> <x> <y> [boundary <graph-id>]" and
//          "tri <id> <n1> <n2> <n3> <shell>" (-1 marks collar triangles),
//          optionally "val <node-id> <value>" for piecewise-linear functions.
//   csv:   "# key=value" comment header, then "vertex_or_edge_id,value" or
//          "time,node_id,value" rows.
//   report: "key=value" lines.

namespace snow {

using ConfigEcho = std::map<std::string, std::string>;

void write_snowmesh(std::ostream& os, const TriMesh& mesh, const ConfigEcho& config,
                    const std::vector<double>* values = nullptr);
TriMesh read_snowmesh(std::istream& is);

void write_svg_mesh(std::ostream& os, const TriMesh& mesh, const ConfigEcho& config);
void write_svg_polyline(std::ostream& os, const BoundaryGraph& graph, const ConfigEcho& config);
void write_svg_heat(std::ostream& os, const ExtensionResult& r, const ConfigEcho& config);

void write_boundary_csv(std::ostream& os, const BoundaryFunction& f, const ConfigEcho& config);
void write_edge_csv(std::ostream& os, const EdgeField& f, const ConfigEcho& config);
BoundaryFunction read_boundary_csv(std::istream& is, const BoundaryGraph& graph);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const ConfigEcho& config);
void write_report(std::ostream& os, const ConfigEcho& entries);
void write_form_report(std::ostream& os, const FormReport& rep, const ConfigEcho& config);

// Coefficient files: key=value with builtins
//   A = identity | diag(a,b) | constant(a11,a12,a22) | table:<file>
//   b = constant(v1,v2) | zero | table:<file>
//   b_boundary = constant(v) | zero
//   c = constant(v) | zero
//   c0, lambda, gamma1, gamma2, delta1, delta2 = numbers
// Table files hold one row per mesh triangle: "id a11 a12 a22" or "id b1 b2".
CoefficientSet parse_coefficients(std::istream& is);
CoefficientSet parse_coefficients_text(const std::string& text);

}  // namespace snow

#endif
