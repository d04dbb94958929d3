// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_WHITNEY_HPP
#define SPHERODYN_WHITNEY_HPP

#include <array>

#include "spherodyn/vec3.hpp"

namespace spherodyn
{

// Local edge numbering on a tetrahedron: edge k connects local vertices
// (kTetEdges[k][0], kTetEdges[k][1]) with the first index smaller.
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Per-tetrahedron geometric data: vertex positions, constant barycentric
// gradients and the (positive) volume. The gradients satisfy sum_i grad[i] = 0
// and lambda_i(vertex[k]) = delta_ik.
struct TetFrame
{
  std::array<Vec3, 4> vertex;
  std::array<Vec3, 4> grad;
  double volume = 0.0;
};

// Builds the frame for a tetrahedron given by its four vertices. Throws
// std::runtime_error if the tetrahedron is degenerate (volume ~ 0) or has
// negative orientation.
TetFrame make_tet_frame(const std::array<Vec3, 4> &verts);

using Bary = std::array<double, 4>;

inline Vec3 bary_to_point(const TetFrame &T, const Bary &l)
{
  return l[0] * T.vertex[0] + l[1] * T.vertex[1] + l[2] * T.vertex[2] + l[3] * T.vertex[3];
}

// Barycentric coordinates of a point with respect to the frame.
Bary point_to_bary(const TetFrame &T, const Vec3 &p);

// Whitney edge function N_k = lambda_i grad(lambda_j) - lambda_j grad(lambda_i)
// for local edge k = (i, j), evaluated at barycentric coordinates l.
inline Vec3 whitney_shape(const TetFrame &T, int k, const Bary &l)
{
  const int i = kTetEdges[k][0], j = kTetEdges[k][1];
  return l[i] * T.grad[j] - l[j] * T.grad[i];
}

// curl N_k = 2 grad(lambda_i) x grad(lambda_j), constant on the tetrahedron.
inline Vec3 whitney_curl(const TetFrame &T, int k)
{
  const int i = kTetEdges[k][0], j = kTetEdges[k][1];
  return 2.0 * cross(T.grad[i], T.grad[j]);
}

// Quadrature on the reference tetrahedron in barycentric coordinates.
// Weights sum to 1; multiply by the tetrahedron volume at use.
struct TetQuadrature
{
  std::array<Bary, 14> points;
  std::array<double, 14> weights;
  int degree = 4;
};

// Degree-4 Keast rule (14 points, all weights positive).
const TetQuadrature &tet_quadrature_deg4();

// Two-point Gauss-Legendre abscissae on [0, 1], weights 1/2 each. Exact for
// cubics, which makes edge interpolation of polynomial fields up to degree 3
// exact.
inline constexpr std::array<double, 2> kEdgeGauss = {
    0.21132486540518711775, 0.78867513459481288225};

// Circulation of a vector field along the segment a -> b.
template <typename Field>
double segment_circulation(const Vec3 &a, const Vec3 &b, Field &&field)
{
  const Vec3 t = b - a;
  double acc = 0.0;
  for (double s : kEdgeGauss)
  {
    acc += 0.5 * dot(field(a + s * t), t);
  }
  return acc;
}

// Circulation of a field along local edge k of the frame, oriented from the
// lower to the higher local vertex index.
template <typename Field>
double edge_circulation(const TetFrame &T, int k, Field &&field)
{
  return segment_circulation(T.vertex[kTetEdges[k][0]], T.vertex[kTetEdges[k][1]], field);
}

using Mat6 = std::array<std::array<double, 6>, 6>;
using Vec6 = std::array<double, 6>;

// Element mass matrix: M_kl = int_T N_k . N_l, by the degree-4 rule (exact,
// the integrand is quadratic). Symmetric positive definite.
Mat6 local_mass(const TetFrame &T);

// Element curl-curl matrix: K_kl = beta |T| curl(N_k) . curl(N_l), exact.
// Symmetric positive semidefinite with rank 3.
Mat6 local_curlcurl(const TetFrame &T, double beta_cell);

// Load functional A |-> int_T g . curl(A): component k equals
// curl(N_k) . int_T g, with int_T g by the degree-4 rule.
template <typename Field>
Vec6 local_load_curltest(const TetFrame &T, Field &&g)
{
  const TetQuadrature &q = tet_quadrature_deg4();
  Vec3 avg{};
  for (int n = 0; n < 14; ++n)
  {
    avg += q.weights[n] * g(bary_to_point(T, q.points[n]));
  }
  avg *= T.volume;
  Vec6 out{};
  for (int k = 0; k < 6; ++k)
  {
    out[k] = dot(whitney_curl(T, k), avg);
  }
  return out;
}

}  // namespace spherodyn

#endif  // SPHERODYN_WHITNEY_HPP
