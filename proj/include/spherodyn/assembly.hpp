// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_ASSEMBLY_HPP
#define SPHERODYN_ASSEMBLY_HPP

#include <array>
#include <vector>

#include "spherodyn/mesh.hpp"
#include "spherodyn/model.hpp"
#include "spherodyn/sparse.hpp"
#include "spherodyn/whitney.hpp"

namespace spherodyn
{

// Edge circulations of a discrete field B_h, indexed by global edge id.
using FieldCoeffs = std::vector<double>;

// Per-tet frames (barycentric gradients + volume), the cache used by every
// assembly loop. Throws on a degenerate tet.
std::vector<TetFrame> build_tet_frames(const Mesh &mesh);

// Global mass matrix (B, A); symmetric positive definite. When region_mask is
// given, only tets whose region tag is selected contribute (used for the
// magnetic-energy integral over the tachocline + convection zone).
SparseMatrix assemble_mass(const Mesh &mesh, const EdgeDofMap &dof,
                           const std::vector<TetFrame> &frames,
                           const std::array<bool, 4> &region_mask = {true, true, true, true});

// Global curl-curl matrix (beta curl B, curl A) with per-region constant
// diffusivity; symmetric positive semidefinite.
SparseMatrix assemble_curlcurl(const Mesh &mesh, const EdgeDofMap &dof,
                               const std::vector<TetFrame> &frames,
                               const std::array<double, 4> &beta);

// Edge-by-vertex incidence matrix: row of edge (lo, hi) is -1 at lo, +1 at
// hi. Its range is the curl-free subspace of the edge space.
SparseMatrix discrete_gradient(const Mesh &mesh, const EdgeDofMap &dof);

// Right-hand side of the time step at time t:
//   A |-> r_alpha (f B / (1 + sigma |B|^2), curl A) + r_m (u x B, curl A)
// with B evaluated from the previous step's coefficients. In dynamo mode the
// f-term lives on region 3 and the u-term on region 2 (the supports of the
// coefficient fields); in mms mode both coefficients are global polynomials.
std::vector<double> assemble_dynamo_rhs(const Mesh &mesh, const EdgeDofMap &dof,
                                        const std::vector<TetFrame> &frames,
                                        const FieldCoeffs &B_prev, double t,
                                        const ModelConfig &config, Mode mode);

// Record of the couplings removed by boundary elimination, enough to
// constrain later right-hand sides against new boundary values.
struct BcElimination
{
  struct Entry
  {
    int row;  // interior edge
    int col;  // boundary edge
    double val;
  };
  std::vector<Entry> coupling;
  std::vector<int> boundary;  // boundary edge ids, ascending
};

// Replaces boundary rows/columns of A by the identity (symmetric
// elimination); the returned record feeds constrain_rhs.
BcElimination eliminate_boundary(SparseMatrix &A, const EdgeDofMap &dof);

// rhs_i -= a_ib values_b over the recorded couplings, then rhs_b = values_b.
// `values` is a full-length vector read at boundary positions.
void constrain_rhs(const BcElimination &bc, const std::vector<double> &values,
                   std::vector<double> &rhs);

// One-shot form: eliminate A and constrain rhs against the given boundary
// values. After solving, the solution carries values exactly at boundary
// entries.
BcElimination apply_essential_bc(SparseMatrix &A, std::vector<double> &rhs,
                                 const EdgeDofMap &dof, const std::vector<double> &values);

}  // namespace spherodyn

#endif  // SPHERODYN_ASSEMBLY_HPP
