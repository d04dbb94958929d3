// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_MESH_HPP
#define SPHERODYN_MESH_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spherodyn/vec3.hpp"

namespace spherodyn
{

// Tetrahedral mesh of the nested-shell ball. Region tags partition the tets
// into the four radial bands (1: rho < r1, 2: r1 < rho < r2, 3: r2 < rho < r3,
// 4: r3 < rho < r4, rho = barycenter radius). Interface spheres are unions of
// triangle faces: no tet straddles a band boundary.
struct Mesh
{
  struct Tet
  {
    std::array<int, 4> v;
    int region = 0;
  };

  std::vector<Point3> vertices;
  std::vector<Tet> tets;
  std::array<double, 4> radii{};

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_tets() const { return static_cast<int>(tets.size()); }
};

// Relative tolerance for on-sphere tests (well above double rounding, far
// below any mesh size in use).
inline constexpr double kGeomTol = 1e-9;

// Builds the ball mesh: octahedral macro decomposition into radial shells
// aligned with the four radii, then `levels` rounds of uniform red refinement
// with radial snapping of interface/boundary vertices. Tet count multiplies by
// exactly 8 per level.
//
// Throws std::invalid_argument for non-increasing radii and std::length_error
// when the requested level would exceed the configured tet budget.
Mesh generate_shell_ball_mesh(const std::array<double, 4> &radii, int levels);

// tmesh ASCII round trip. save emits the canonical form (17 significant
// digits); load validates indices, region tags and barycenter bands.
Mesh load_mesh(const std::string &path);
void save_mesh(const Mesh &mesh, const std::string &path);

// The exact byte sequence save_mesh writes (also the input to content
// hashing).
std::string mesh_canonical_text(const Mesh &mesh);

// Stored region tag of a tet; in debug builds recomputes the barycenter band
// and asserts agreement.
int classify_region(const Mesh &mesh, int tet_id);

// Longest edge over all tets.
double mesh_h_max(const Mesh &mesh);

// Summed tet volumes per region tag 1..4.
std::array<double, 4> region_volumes(const Mesh &mesh);

double tet_volume(const Mesh &mesh, int tet_id);
Point3 tet_barycenter(const Mesh &mesh, int tet_id);

// Checks the Mesh invariants (index ranges, positive volumes, band membership)
// and throws std::runtime_error on the first violation.
void validate_mesh(const Mesh &mesh);

// Global edge enumeration with one degree of freedom per edge (tangential
// circulation). Edges are oriented from the lower to the higher global vertex
// index; tet_sign records whether a tet's local edge agrees with that
// orientation.
struct EdgeDofMap
{
  std::vector<std::array<int, 2>> edges;  // (v_lo, v_hi), sorted lexicographically
  std::vector<std::array<int, 6>> tet_edge;
  std::vector<std::array<std::int8_t, 6>> tet_sign;
  std::vector<std::uint8_t> boundary_edge;
  std::vector<std::uint8_t> boundary_vertex;
  int n_vertices = 0;

  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_boundary_edges() const;
};

// Throws std::runtime_error on non-manifold connectivity (a face shared by
// more than two tets). Boundary edges are the edges of faces shared by exactly
// one tet.
EdgeDofMap build_edge_dof_map(const Mesh &mesh);

}  // namespace spherodyn

#endif  // SPHERODYN_MESH_HPP
