// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/whitney.hpp"

#include <cmath>
#include <stdexcept>

namespace spherodyn
{

TetFrame make_tet_frame(const std::array<Vec3, 4> &verts)
{
  TetFrame T;
  T.vertex = verts;
  const Vec3 e1 = verts[1] - verts[0];
  const Vec3 e2 = verts[2] - verts[0];
  const Vec3 e3 = verts[3] - verts[0];
  const double det = dot(e1, cross(e2, e3));
  T.volume = det / 6.0;
  const double scale = std::max({norm(e1), norm(e2), norm(e3)});
  if (!(T.volume > 1e-14 * scale * scale * scale))
  {
    throw std::runtime_error("degenerate tetrahedron (zero or negative volume)");
  }
  // Rows of the inverse Jacobian are the gradients of lambda_1..lambda_3.
  T.grad[1] = (1.0 / det) * cross(e2, e3);
  T.grad[2] = (1.0 / det) * cross(e3, e1);
  T.grad[3] = (1.0 / det) * cross(e1, e2);
  T.grad[0] = -(T.grad[1] + T.grad[2] + T.grad[3]);
  return T;
}

Bary point_to_bary(const TetFrame &T, const Vec3 &p)
{
  Bary l;
  for (int i = 1; i < 4; ++i)
  {
    l[i] = dot(T.grad[i], p - T.vertex[0]);
  }
  l[0] = 1.0 - l[1] - l[2] - l[3];
  return l;
}

const TetQuadrature &tet_quadrature_deg4()
{
  // Keast, degree of precision 4. Orbits: the 6 edge midpoints, plus two
  // 4-point orbits (a,b,b,b) with a + 3b = 1.
  static const TetQuadrature rule = []
  {
    TetQuadrature q;
    int n = 0;
    const double w_mid = 2.0 / 105.0;
    for (int k = 0; k < 6; ++k)
    {
      Bary l{0.0, 0.0, 0.0, 0.0};
      l[kTetEdges[k][0]] = 0.5;
      l[kTetEdges[k][1]] = 0.5;
      q.points[n] = l;
      q.weights[n++] = w_mid;
    }
    const double a1 = 0.6984197043243866, b1 = 0.1005267652252045;
    const double w1 = 0.0885898247429807;
    const double a2 = 0.0568813795204234, b2 = 0.3143728734931922;
    const double w2 = 0.1328387466855907;
    for (int i = 0; i < 4; ++i)
    {
      Bary l{b1, b1, b1, b1};
      l[i] = a1;
      q.points[n] = l;
      q.weights[n++] = w1;
    }
    for (int i = 0; i < 4; ++i)
    {
      Bary l{b2, b2, b2, b2};
      l[i] = a2;
      q.points[n] = l;
      q.weights[n++] = w2;
    }
    return q;
  }();
  return rule;
}

Mat6 local_mass(const TetFrame &T)
{
  const TetQuadrature &q = tet_quadrature_deg4();
  Mat6 M{};
  std::array<Vec3, 6> N;
  for (int n = 0; n < 14; ++n)
  {
    for (int k = 0; k < 6; ++k)
    {
      N[k] = whitney_shape(T, k, q.points[n]);
    }
    const double w = q.weights[n] * T.volume;
    for (int k = 0; k < 6; ++k)
    {
      for (int l = k; l < 6; ++l)
      {
        M[k][l] += w * dot(N[k], N[l]);
      }
    }
  }
  for (int k = 0; k < 6; ++k)
  {
    for (int l = 0; l < k; ++l)
    {
      M[k][l] = M[l][k];
    }
  }
  return M;
}

Mat6 local_curlcurl(const TetFrame &T, double beta_cell)
{
  if (!(beta_cell > 0.0))
  {
    throw std::invalid_argument("beta must be positive");
  }
  std::array<Vec3, 6> c;
  for (int k = 0; k < 6; ++k)
  {
    c[k] = whitney_curl(T, k);
  }
  Mat6 K{};
  const double s = beta_cell * T.volume;
  for (int k = 0; k < 6; ++k)
  {
    for (int l = k; l < 6; ++l)
    {
      K[k][l] = s * dot(c[k], c[l]);
      K[l][k] = K[k][l];
    }
  }
  return K;
}

}  // namespace spherodyn
