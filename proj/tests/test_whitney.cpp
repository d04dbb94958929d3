// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "spherodyn/whitney.hpp"
#include "test_util.hpp"

using namespace spherodyn;
using namespace spherodyn::testing;

namespace
{

double approx_norm(const Vec3 &a, const Vec3 &b) { return norm(a - b); }

}  // namespace

TEST_CASE("degree-4 quadrature: positive weights summing to one")
{
  const TetQuadrature &q = tet_quadrature_deg4();
  double sum = 0.0;
  for (int n = 0; n < 14; ++n)
  {
    CHECK(q.weights[n] > 0.0);
    sum += q.weights[n];
    double lsum = 0.0;
    for (double l : q.points[n])
    {
      CHECK(l >= 0.0);
      lsum += l;
    }
    CHECK(lsum == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degree-4 quadrature integrates monomials exactly on the reference tet")
{
  const TetFrame T = reference_tet();
  const TetQuadrature &q = tet_quadrature_deg4();
  for (int a = 0; a <= 4; ++a)
  {
    for (int b = 0; a + b <= 4; ++b)
    {
      for (int c = 0; a + b + c <= 4; ++c)
      {
        double val = 0.0;
        for (int n = 0; n < 14; ++n)
        {
          const Vec3 p = bary_to_point(T, q.points[n]);
          val += q.weights[n] * T.volume * std::pow(p.x, a) * std::pow(p.y, b) *
                 std::pow(p.z, c);
        }
        CHECK(val == doctest::Approx(reference_monomial_integral(a, b, c)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("barycentric gradients: zero sum and Kronecker property")
{
  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial)
  {
    const TetFrame T = make_tet_frame(random_tet(rng));
    CHECK(norm(T.grad[0] + T.grad[1] + T.grad[2] + T.grad[3]) < 1e-13);
    for (int i = 0; i < 4; ++i)
    {
      const Bary l = point_to_bary(T, T.vertex[i]);
      for (int k = 0; k < 4; ++k)
      {
        CHECK(l[k] == doctest::Approx(i == k ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("whitney shape on the reference tet")
{
  const TetFrame T = reference_tet();
  // edge (0,1) at v0
  CHECK(approx_norm(whitney_shape(T, 0, point_to_bary(T, {0, 0, 0})), {1, 0, 0}) < 1e-14);
  // edge (0,1) at the edge midpoint (0.5, 0, 0)
  CHECK(approx_norm(whitney_shape(T, 0, point_to_bary(T, {0.5, 0, 0})), {1, 0.5, 0.5}) < 1e-14);
}

TEST_CASE("tangential component vanishes on the opposite edge")
{
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial)
  {
    const TetFrame T = make_tet_frame(random_tet(rng));
    for (int k = 0; k < 6; ++k)
    {
      const int i = kTetEdges[k][0], j = kTetEdges[k][1];
      // the opposite edge connects the other two vertices
      int o1 = -1, o2 = -1;
      for (int v = 0; v < 4; ++v)
      {
        if (v != i && v != j)
        {
          (o1 < 0 ? o1 : o2) = v;
        }
      }
      const Vec3 mid = 0.5 * (T.vertex[o1] + T.vertex[o2]);
      const Vec3 t = T.vertex[o2] - T.vertex[o1];
      CHECK(std::abs(dot(whitney_shape(T, k, point_to_bary(T, mid)), t)) < 1e-13);
    }
  }
}

TEST_CASE("whitney curl: reference value, translation invariance, scaling")
{
  const TetFrame T = reference_tet();
  CHECK(approx_norm(whitney_curl(T, 0), {0, -2, 2}) < 1e-14);

  std::mt19937 rng(13);
  const auto verts = random_tet(rng);
  const TetFrame A = make_tet_frame(verts);
  const Vec3 shift{0.3, -1.2, 0.7};
  std::array<Vec3, 4> moved = verts;
  for (auto &p : moved)
  {
    p += shift;
  }
  const TetFrame B = make_tet_frame(moved);
  std::array<Vec3, 4> scaled = verts;
  for (auto &p : scaled)
  {
    p = 2.0 * p;
  }
  const TetFrame C = make_tet_frame(scaled);
  for (int k = 0; k < 6; ++k)
  {
    CHECK(approx_norm(whitney_curl(A, k), whitney_curl(B, k)) < 1e-13);
    CHECK(approx_norm(0.25 * whitney_curl(A, k), whitney_curl(C, k)) < 1e-14);
  }
}

TEST_CASE("edge circulation: delta duality on random tets")
{
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial)
  {
    const TetFrame T = make_tet_frame(random_tet(rng));
    for (int j = 0; j < 6; ++j)
    {
      for (int k = 0; k < 6; ++k)
      {
        const double circ =
            edge_circulation(T, k, [&](const Vec3 &p)
                             { return whitney_shape(T, j, point_to_bary(T, p)); });
        CHECK(std::abs(circ - (j == k ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("edge circulation of a constant field")
{
  std::mt19937 rng(19);
  const TetFrame T = make_tet_frame(random_tet(rng));
  const Vec3 c{0.3, -0.8, 1.1};
  for (int k = 0; k < 6; ++k)
  {
    const Vec3 t = T.vertex[kTetEdges[k][1]] - T.vertex[kTetEdges[k][0]];
    const double circ = edge_circulation(T, k, [&](const Vec3 &) { return c; });
    CHECK(circ == doctest::Approx(dot(c, t)).epsilon(1e-13));
  }
}

TEST_CASE("discrete Stokes: gradient circulations around a face sum to zero")
{
  std::mt19937 rng(23);
  const TetFrame T = make_tet_frame(random_tet(rng));
  auto grad_field = [](const Vec3 &p) -> Vec3
  {
    // gradient of psi = x^2 y + z
    return {2.0 * p.x * p.y, p.x * p.x, 1.0};
  };
  // face (0,1,2): loop = edge(0,1) + edge(1,2) - edge(0,2); the quadratic
  // traces are inside the 2-point Gauss exactness range
  const double loop = edge_circulation(T, 0, grad_field) + edge_circulation(T, 3, grad_field) -
                      edge_circulation(T, 1, grad_field);
  CHECK(std::abs(loop) < 1e-13);

  auto affine_grad = [](const Vec3 &) -> Vec3 { return {0.4, -1.0, 2.5}; };
  const double affine_loop = edge_circulation(T, 0, affine_grad) +
                             edge_circulation(T, 3, affine_grad) -
                             edge_circulation(T, 1, affine_grad);
  CHECK(std::abs(affine_loop) < 1e-14);
}

TEST_CASE("local mass matches a Monte-Carlo oracle")
{
  const TetFrame T = reference_tet();
  const Mat6 M = local_mass(T);
  std::mt19937 rng(29);
  const int samples = 1'000'000;
  Mat6 mc{};
  const std::array<Vec3, 4> verts = T.vertex;
  for (int s = 0; s < samples; ++s)
  {
    const Vec3 p = sample_in_tet(verts, rng);
    const Bary l = point_to_bary(T, p);
    std::array<Vec3, 6> N;
    for (int k = 0; k < 6; ++k)
    {
      N[k] = whitney_shape(T, k, l);
    }
    for (int a = 0; a < 6; ++a)
    {
      for (int b = 0; b < 6; ++b)
      {
        mc[a][b] += dot(N[a], N[b]);
      }
    }
  }
  for (int a = 0; a < 6; ++a)
  {
    for (int b = 0; b < 6; ++b)
    {
      mc[a][b] *= T.volume / samples;
      CHECK(std::abs(mc[a][b] - M[a][b]) < 1e-3);
    }
  }
}

TEST_CASE("local mass scales linearly with the tet")
{
  std::mt19937 rng(31);
  const auto verts = random_tet(rng);
  const TetFrame A = make_tet_frame(verts);
  std::array<Vec3, 4> scaled = verts;
  for (auto &p : scaled)
  {
    p = 2.0 * p;
  }
  const TetFrame B = make_tet_frame(scaled);
  const Mat6 MA = local_mass(A), MB = local_mass(B);
  for (int a = 0; a < 6; ++a)
  {
    for (int b = 0; b < 6; ++b)
    {
      CHECK(MB[a][b] == doctest::Approx(2.0 * MA[a][b]).epsilon(1e-12));
    }
  }
}

TEST_CASE("local mass is symmetric positive definite")
{
  std::mt19937 rng(37);
  const TetFrame T = make_tet_frame(random_tet(rng));
  const Mat6 M = local_mass(T);
  std::vector<std::vector<double>> dense(6, std::vector<double>(6));
  for (int a = 0; a < 6; ++a)
  {
    for (int b = 0; b < 6; ++b)
    {
      CHECK(M[a][b] == M[b][a]);
      dense[a][b] = M[a][b];
    }
  }
  const auto ev = symmetric_eigenvalues(dense);
  CHECK(ev.front() > 0.0);
}

TEST_CASE("local curl-curl: rank 3 with the discrete-gradient nullspace")
{
  std::mt19937 rng(41);
  const TetFrame T = make_tet_frame(random_tet(rng));
  const Mat6 K = local_curlcurl(T, 1.0);

  std::vector<std::vector<double>> dense(6, std::vector<double>(6));
  double scale = 0.0;
  for (int a = 0; a < 6; ++a)
  {
    for (int b = 0; b < 6; ++b)
    {
      dense[a][b] = K[a][b];
      scale = std::max(scale, std::abs(K[a][b]));
    }
  }
  const auto ev = symmetric_eigenvalues(dense);
  // eigen-decomposition oracle: exactly three near-zero eigenvalues, rest positive
  CHECK(std::abs(ev[0]) < 1e-12 * scale);
  CHECK(std::abs(ev[1]) < 1e-12 * scale);
  CHECK(std::abs(ev[2]) < 1e-12 * scale);
  CHECK(ev[3] > 1e-8 * scale);

  // K applied to the local gradient of every hat function vanishes
  for (int vtx = 0; vtx < 4; ++vtx)
  {
    Vec6 g{};
    for (int k = 0; k < 6; ++k)
    {
      g[k] = (kTetEdges[k][1] == vtx ? 1.0 : 0.0) - (kTetEdges[k][0] == vtx ? 1.0 : 0.0);
    }
    for (int a = 0; a < 6; ++a)
    {
      double acc = 0.0;
      for (int b = 0; b < 6; ++b)
      {
        acc += K[a][b] * g[b];
      }
      CHECK(std::abs(acc) < 1e-13 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("local load functional for curl test functions")
{
  const TetFrame T = reference_tet();

  auto zero = [](const Vec3 &) { return Vec3{}; };
  for (double v : local_load_curltest(T, zero))
  {
    CHECK(v == 0.0);
  }

  const Vec3 c{0.7, -0.2, 0.5};
  auto constant = [&](const Vec3 &) { return c; };
  const Vec6 load = local_load_curltest(T, constant);
  for (int k = 0; k < 6; ++k)
  {
    CHECK(load[k] == doctest::Approx(T.volume * dot(c, whitney_curl(T, k))).epsilon(1e-13));
  }

  // polynomial field with the exact integral from the monomial table
  auto poly = [](const Vec3 &p) -> Vec3
  {
    return {p.x * p.x, p.y * p.z, p.x * p.y * p.z};
  };
  const Vec3 exact_integral{reference_monomial_integral(2, 0, 0),
                            reference_monomial_integral(0, 1, 1),
                            reference_monomial_integral(1, 1, 1)};
  const Vec6 load_poly = local_load_curltest(T, poly);
  for (int k = 0; k < 6; ++k)
  {
    CHECK(load_poly[k] ==
          doctest::Approx(dot(exact_integral, whitney_curl(T, k))).epsilon(1e-13));
  }
}

TEST_CASE("tangential continuity across a shared face")
{
  // two positively oriented tets sharing the edge (v0, v1) and the z = 0 face
  const std::array<Vec3, 4> va = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0.2, 0.3, 1}};
  const std::array<Vec3, 4> vb = {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.4, 0.1, -0.8},
                                  Vec3{0, 1, 0}};
  const TetFrame A = make_tet_frame(va);
  const TetFrame B = make_tet_frame(vb);
  const Vec3 n{0, 0, 1};  // face normal

  std::mt19937 rng(43);
  std::uniform_real_distribution<double> u(0.05, 0.9);
  for (int trial = 0; trial < 30; ++trial)
  {
    double l0 = u(rng), l1 = u(rng) * (1.0 - l0);
    const Vec3 p = l0 * va[0] + l1 * va[1] + (1.0 - l0 - l1) * va[2];
    // shared edge (0,1) is local edge 0 in both tets
    const Vec3 sa = whitney_shape(A, 0, point_to_bary(A, p));
    const Vec3 sb = whitney_shape(B, 0, point_to_bary(B, p));
    const Vec3 jump = sa - sb;
    CHECK(norm(cross(n, jump)) < 1e-12);
  }
}
