// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/assembly.hpp"

#include <stdexcept>

namespace spherodyn
{

std::vector<TetFrame> build_tet_frames(const Mesh &mesh)
{
  std::vector<TetFrame> frames;
  frames.reserve(mesh.tets.size());
  for (const auto &t : mesh.tets)
  {
    frames.push_back(make_tet_frame({mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                     mesh.vertices[t.v[2]], mesh.vertices[t.v[3]]}));
  }
  return frames;
}

namespace
{

SparseMatrix edge_edge_pattern(const Mesh &mesh, const EdgeDofMap &dof)
{
  std::vector<std::array<int, 2>> entries;
  entries.reserve(mesh.tets.size() * 36);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
  {
    for (int a = 0; a < 6; ++a)
    {
      for (int b = 0; b < 6; ++b)
      {
        entries.push_back({dof.tet_edge[t][a], dof.tet_edge[t][b]});
      }
    }
  }
  return make_pattern(dof.n_edges(), dof.n_edges(), std::move(entries));
}

template <typename LocalKernel>
SparseMatrix assemble_edge_operator(const Mesh &mesh, const EdgeDofMap &dof,
                                    LocalKernel &&kernel)
{
  SparseMatrix A = edge_edge_pattern(mesh, dof);
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
  {
    Mat6 local;
    if (!kernel(t, local))
    {
      continue;
    }
    for (int a = 0; a < 6; ++a)
    {
      const int ga = dof.tet_edge[t][a];
      const double sa = dof.tet_sign[t][a];
      for (int b = 0; b < 6; ++b)
      {
        A.add(ga, dof.tet_edge[t][b], sa * dof.tet_sign[t][b] * local[a][b]);
      }
    }
  }
  return A;
}

}  // namespace

SparseMatrix assemble_mass(const Mesh &mesh, const EdgeDofMap &dof,
                           const std::vector<TetFrame> &frames,
                           const std::array<bool, 4> &region_mask)
{
  return assemble_edge_operator(mesh, dof,
                                [&](std::size_t t, Mat6 &local)
                                {
                                  if (!region_mask[mesh.tets[t].region - 1])
                                  {
                                    return false;
                                  }
                                  local = local_mass(frames[t]);
                                  return true;
                                });
}

SparseMatrix assemble_curlcurl(const Mesh &mesh, const EdgeDofMap &dof,
                               const std::vector<TetFrame> &frames,
                               const std::array<double, 4> &beta)
{
  for (double b : beta)
  {
    if (!(b > 0.0))
    {
      throw std::invalid_argument("beta must be positive");
    }
  }
  return assemble_edge_operator(mesh, dof,
                                [&](std::size_t t, Mat6 &local)
                                {
                                  local = local_curlcurl(frames[t], beta[mesh.tets[t].region - 1]);
                                  return true;
                                });
}

SparseMatrix discrete_gradient(const Mesh &mesh, const EdgeDofMap &dof)
{
  (void)mesh;
  SparseMatrix G;
  G.rows = dof.n_edges();
  G.cols = dof.n_vertices;
  G.row_ptr.resize(G.rows + 1);
  G.col.resize(2 * G.rows);
  G.val.resize(2 * G.rows);
  for (int e = 0; e < G.rows; ++e)
  {
    G.row_ptr[e] = 2 * e;
    // edges store (lo, hi) with lo < hi, so columns are already sorted
    G.col[2 * e] = dof.edges[e][0];
    G.val[2 * e] = -1.0;
    G.col[2 * e + 1] = dof.edges[e][1];
    G.val[2 * e + 1] = 1.0;
  }
  G.row_ptr[G.rows] = 2 * G.rows;
  return G;
}

std::vector<double> assemble_dynamo_rhs(const Mesh &mesh, const EdgeDofMap &dof,
                                        const std::vector<TetFrame> &frames,
                                        const FieldCoeffs &B_prev, double t,
                                        const ModelConfig &config, Mode mode)
{
  if (static_cast<int>(B_prev.size()) != dof.n_edges())
  {
    throw std::invalid_argument("field coefficient vector has wrong length");
  }
  // both coefficient sets are autonomous; the argument keeps the t_n sampling
  // point explicit at call sites
  (void)t;
  const TetQuadrature &q = tet_quadrature_deg4();
  std::vector<double> rhs(dof.n_edges(), 0.0);

  for (std::size_t tid = 0; tid < mesh.tets.size(); ++tid)
  {
    const int region = mesh.tets[tid].region;
    const bool alpha_term = (mode == Mode::mms) || region == 3;
    const bool shear_term = (mode == Mode::mms) || region == 2;
    if (!alpha_term && !shear_term)
    {
      continue;
    }
    const TetFrame &T = frames[tid];

    // signed local coefficients of B^{n-1} on this tet
    Vec6 c;
    for (int k = 0; k < 6; ++k)
    {
      c[k] = dof.tet_sign[tid][k] * B_prev[dof.tet_edge[tid][k]];
    }

    Vec3 avg{};  // int_T g
    for (int n = 0; n < 14; ++n)
    {
      Vec3 b{};
      for (int k = 0; k < 6; ++k)
      {
        b += c[k] * whitney_shape(T, k, q.points[n]);
      }
      const Vec3 x = bary_to_point(T, q.points[n]);
      Vec3 g{};
      if (alpha_term)
      {
        const double f = (mode == Mode::mms) ? mms_alpha_coeff(x)
                                             : alpha_profile_at(x, config.radii);
        g += (config.r_alpha * f / (1.0 + config.sigma * norm2(b))) * b;
      }
      if (shear_term)
      {
        const Vec3 u = (mode == Mode::mms) ? mms_velocity(x)
                                           : shear_velocity_at(x, config.radii);
        g += config.r_m * cross(u, b);
      }
      avg += (q.weights[n] * T.volume) * g;
    }
    for (int k = 0; k < 6; ++k)
    {
      rhs[dof.tet_edge[tid][k]] +=
          dof.tet_sign[tid][k] * dot(whitney_curl(T, k), avg);
    }
  }
  return rhs;
}

BcElimination eliminate_boundary(SparseMatrix &A, const EdgeDofMap &dof)
{
  BcElimination bc;
  for (int e = 0; e < dof.n_edges(); ++e)
  {
    if (dof.boundary_edge[e])
    {
      bc.boundary.push_back(e);
    }
  }
  for (int i = 0; i < A.rows; ++i)
  {
    const bool bdry_row = dof.boundary_edge[i] != 0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      const int j = A.col[k];
      if (bdry_row)
      {
        A.val[k] = (j == i) ? 1.0 : 0.0;
      }
      else if (dof.boundary_edge[j])
      {
        bc.coupling.push_back({i, j, A.val[k]});
        A.val[k] = 0.0;
      }
    }
  }
  return bc;
}

void constrain_rhs(const BcElimination &bc, const std::vector<double> &values,
                   std::vector<double> &rhs)
{
  for (const auto &e : bc.coupling)
  {
    rhs[e.row] -= e.val * values[e.col];
  }
  for (int b : bc.boundary)
  {
    rhs[b] = values[b];
  }
}

BcElimination apply_essential_bc(SparseMatrix &A, std::vector<double> &rhs,
                                 const EdgeDofMap &dof, const std::vector<double> &values)
{
  if (static_cast<int>(values.size()) != dof.n_edges())
  {
    throw std::invalid_argument("missing boundary values: expected one entry per edge");
  }
  BcElimination bc = eliminate_boundary(A, dof);
  constrain_rhs(bc, values, rhs);
  return bc;
}

}  // namespace spherodyn
