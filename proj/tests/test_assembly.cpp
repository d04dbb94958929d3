// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "spherodyn/assembly.hpp"
#include "spherodyn/simulation.hpp"
#include "spherodyn/solver.hpp"
#include "test_util.hpp"

using namespace spherodyn;
using namespace spherodyn::testing;

namespace
{

const std::array<double, 4> kUnitRadii = {0.2, 0.25, 1.0 / 3.0, 1.0};

Mesh reference_tet_mesh()
{
  Mesh mesh;
  mesh.radii = {1.0, 2.0, 3.0, 4.0};
  mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  mesh.tets = {{{0, 1, 2, 3}, 1}};
  return mesh;
}

std::vector<double> random_vector(int n, std::mt19937 &rng, double lo = -1.0, double hi = 1.0)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double &x : v)
  {
    x = u(rng);
  }
  return v;
}

double inf_norm(const std::vector<double> &v)
{
  double m = 0.0;
  for (double x : v)
  {
    m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

TEST_CASE("assembled mass on a single reference tet equals the local matrix")
{
  const Mesh mesh = reference_tet_mesh();
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const SparseMatrix M = assemble_mass(mesh, dof, frames);
  const Mat6 local = local_mass(frames[0]);
  // vertex order equals local order here, so global edge ids follow kTetEdges
  for (int a = 0; a < 6; ++a)
  {
    for (int b = 0; b < 6; ++b)
    {
      CHECK(*M.find(dof.tet_edge[0][a], dof.tet_edge[0][b]) ==
            doctest::Approx(local[a][b]).epsilon(1e-14));
    }
  }
}

TEST_CASE("global mass is exactly symmetric and positive definite")
{
  const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, 0);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const SparseMatrix M = assemble_mass(mesh, dof, frames);

  for (int i = 0; i < M.rows; ++i)
  {
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
    {
      const double *t = M.find(M.col[k], i);
      REQUIRE(t != nullptr);
      CHECK(*t == M.val[k]);  // bitwise symmetric accumulation
    }
  }

  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial)
  {
    const auto x = random_vector(M.rows, rng);
    const auto y = M.mat_vec(x);
    double q = 0.0;
    for (int i = 0; i < M.rows; ++i)
    {
      q += x[i] * y[i];
    }
    CHECK(q > 0.0);
  }
}

TEST_CASE("curl-curl assembly: single tet, beta linearity")
{
  const Mesh mesh = reference_tet_mesh();
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const SparseMatrix K1 = assemble_curlcurl(mesh, dof, frames, {1.0, 1.0, 1.0, 1.0});
  const Mat6 local = local_curlcurl(frames[0], 1.0);
  for (int a = 0; a < 6; ++a)
  {
    for (int b = 0; b < 6; ++b)
    {
      CHECK(*K1.find(dof.tet_edge[0][a], dof.tet_edge[0][b]) ==
            doctest::Approx(local[a][b]).epsilon(1e-14));
    }
  }
  const SparseMatrix K2 = assemble_curlcurl(mesh, dof, frames, {2.0, 2.0, 2.0, 2.0});
  for (int k = 0; k < K1.nnz(); ++k)
  {
    CHECK(K2.val[k] == doctest::Approx(2.0 * K1.val[k]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(assemble_curlcurl(mesh, dof, frames, {1.0, 0.0, 1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("discrete gradient: constants, coordinates, curl-curl nullspace")
{
  const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, 0);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const SparseMatrix G = discrete_gradient(mesh, dof);

  const std::vector<double> ones(dof.n_vertices, 1.0);
  CHECK(inf_norm(G.mat_vec(ones)) == 0.0);

  std::vector<double> xcoord(dof.n_vertices);
  for (int v = 0; v < dof.n_vertices; ++v)
  {
    xcoord[v] = mesh.vertices[v].x;
  }
  const auto gx = G.mat_vec(xcoord);
  for (int e = 0; e < dof.n_edges(); ++e)
  {
    const double expect = mesh.vertices[dof.edges[e][1]].x - mesh.vertices[dof.edges[e][0]].x;
    CHECK(gx[e] == doctest::Approx(expect).epsilon(1e-14));
  }

  // interpolation of an affine gradient field coincides with G(psi at vertices)
  const Vec3 a{0.7, -0.3, 1.2};
  const double a0 = 0.25;
  const auto interp =
      project_initial(mesh, dof, [&](const Vec3 &) { return a; });
  std::vector<double> psi(dof.n_vertices);
  for (int v = 0; v < dof.n_vertices; ++v)
  {
    psi[v] = a0 + dot(a, mesh.vertices[v]);
  }
  const auto gpsi = G.mat_vec(psi);
  for (int e = 0; e < dof.n_edges(); ++e)
  {
    CHECK(interp[e] == doctest::Approx(gpsi[e]).epsilon(1e-12));
  }

  // K (G p) = 0 for random vertex potentials
  const SparseMatrix K = assemble_curlcurl(mesh, dof, frames, {1.0, 1.0, 1.0, 150.0});
  std::mt19937 rng(11);
  double kscale = 0.0;
  for (double v : K.val)
  {
    kscale = std::max(kscale, std::abs(v));
  }
  for (int trial = 0; trial < 5; ++trial)
  {
    const auto p = random_vector(dof.n_vertices, rng);
    const auto kgp = K.mat_vec(G.mat_vec(p));
    CHECK(inf_norm(kgp) <= 1e-11 * kscale * inf_norm(p) * 10.0);
  }
}

TEST_CASE("dynamo rhs vanishes without field or coefficients")
{
  const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, 0);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  ModelConfig config;
  config.radii = kUnitRadii;

  const std::vector<double> zero(dof.n_edges(), 0.0);
  CHECK(inf_norm(assemble_dynamo_rhs(mesh, dof, frames, zero, 0.1, config, Mode::dynamo)) ==
        0.0);

  std::mt19937 rng(3);
  const auto b = random_vector(dof.n_edges(), rng);
  config.r_alpha = 0.0;
  config.r_m = 0.0;
  CHECK(inf_norm(assemble_dynamo_rhs(mesh, dof, frames, b, 0.1, config, Mode::dynamo)) == 0.0);
}

TEST_CASE("mms-mode rhs on one tet matches an analytic quadrature oracle")
{
  const Mesh mesh = reference_tet_mesh();
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const TetFrame &T = frames[0];

  ModelConfig config;
  config.r_alpha = 2.0;
  config.r_m = 0.0;
  config.sigma = 0.0;

  std::mt19937 rng(17);
  const auto coeffs = random_vector(6, rng);
  const auto rhs = assemble_dynamo_rhs(mesh, dof, frames, coeffs, 0.0, config, Mode::mms);

  // Monte-Carlo oracle for int_T r_alpha |x|^2 B(x) dx (B linear in x)
  const int samples = 2'000'000;
  std::mt19937 mc_rng(99);
  Vec3 integral{};
  for (int s = 0; s < samples; ++s)
  {
    const Vec3 p = sample_in_tet(T.vertex, mc_rng);
    Vec3 b{};
    const Bary l = point_to_bary(T, p);
    for (int e = 0; e < 6; ++e)
    {
      b += dof.tet_sign[0][e] * coeffs[dof.tet_edge[0][e]] * whitney_shape(T, e, l);
    }
    integral += (config.r_alpha * dot(p, p)) * b;
  }
  integral *= T.volume / samples;
  for (int e = 0; e < 6; ++e)
  {
    const double expect = dof.tet_sign[0][e] * dot(whitney_curl(T, e), integral);
    CHECK(std::abs(rhs[dof.tet_edge[0][e]] - expect) < 1e-3);
  }
}

TEST_CASE("rhs is orthogonal to discrete gradients")
{
  const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, 0);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const SparseMatrix G = discrete_gradient(mesh, dof);

  ModelConfig config;
  config.radii = kUnitRadii;
  config.beta = {1.0, 1.0, 1.0, 1.0};
  config.r_alpha = 1.0;
  config.r_m = 1.0;
  config.sigma = 1.0;

  std::mt19937 rng(23);
  const auto B = random_vector(dof.n_edges(), rng);

  for (Mode mode : {Mode::dynamo, Mode::mms})
  {
    const auto rhs = assemble_dynamo_rhs(mesh, dof, frames, B, 0.3, config, mode);
    const double scale = inf_norm(rhs) + 1e-30;
    for (int trial = 0; trial < 5; ++trial)
    {
      auto p = random_vector(dof.n_vertices, rng);
      for (int v = 0; v < dof.n_vertices; ++v)
      {
        if (dof.boundary_vertex[v])
        {
          p[v] = 0.0;
        }
      }
      const auto gp = G.mat_vec(p);
      double acc = 0.0;
      for (int e = 0; e < dof.n_edges(); ++e)
      {
        acc += gp[e] * rhs[e];
      }
      CHECK(std::abs(acc) <= 1e-11 * scale * dof.n_edges());
    }
  }
}

TEST_CASE("gradient moments of interpolated gradient fields")
{
  // G^T M applied to the interpolant of grad(psi): exactly zero (up to
  // accumulation roundoff) for affine psi, shrinking under refinement for a
  // smooth psi vanishing on the boundary
  double prev = 0.0;
  for (int level = 0; level <= 1; ++level)
  {
    const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, level);
    const EdgeDofMap dof = build_edge_dof_map(mesh);
    const auto frames = build_tet_frames(mesh);
    const SparseMatrix M = assemble_mass(mesh, dof, frames);

    auto moments = [&](const FieldCoeffs &B)
    {
      const auto y = M.mat_vec(B);
      std::vector<double> d(dof.n_vertices, 0.0);
      for (int e = 0; e < dof.n_edges(); ++e)
      {
        d[dof.edges[e][0]] -= y[e];
        d[dof.edges[e][1]] += y[e];
      }
      double worst = 0.0;
      for (int v = 0; v < dof.n_vertices; ++v)
      {
        if (!dof.boundary_vertex[v])
        {
          worst = std::max(worst, std::abs(d[v]));
        }
      }
      return worst;
    };

    const Vec3 a{0.8, -0.4, 0.6};
    const auto affine = project_initial(mesh, dof, [&](const Vec3 &) { return a; });
    CHECK(moments(affine) < 1e-11);

    const double r4 = mesh.radii[3];
    const auto smooth = project_initial(mesh, dof,
                                        [&](const Vec3 &x) -> Vec3
                                        {
                                          // grad of psi = (r4^2 - |x|^2)^2 / 4
                                          const double s = dot(x, x) - r4 * r4;
                                          return s * x;
                                        });
    const double worst = moments(smooth);
    if (level > 0)
    {
      CHECK(worst < prev);
    }
    prev = worst;
  }
}

TEST_CASE("assembly is deterministic")
{
  const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, 0);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);
  const SparseMatrix M1 = assemble_mass(mesh, dof, frames);
  const SparseMatrix M2 = assemble_mass(mesh, dof, frames);
  CHECK(M1.val == M2.val);
  CHECK(M1.col == M2.col);
}

TEST_CASE("essential boundary elimination")
{
  const Mesh mesh = generate_shell_ball_mesh(kUnitRadii, 0);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto frames = build_tet_frames(mesh);

  SUBCASE("identity matrix: solution equals rhs except boundary values")
  {
    std::vector<std::array<int, 2>> diag;
    for (int i = 0; i < dof.n_edges(); ++i)
    {
      diag.push_back({i, i});
    }
    SparseMatrix A = make_pattern(dof.n_edges(), dof.n_edges(), std::move(diag));
    for (int i = 0; i < dof.n_edges(); ++i)
    {
      A.add(i, i, 1.0);
    }
    std::mt19937 rng(31);
    auto rhs = random_vector(dof.n_edges(), rng);
    const auto rhs_orig = rhs;
    auto values = random_vector(dof.n_edges(), rng);
    apply_essential_bc(A, rhs, dof, values);
    for (int i = 0; i < dof.n_edges(); ++i)
    {
      CHECK(rhs[i] == (dof.boundary_edge[i] ? values[i] : rhs_orig[i]));
    }
  }

  SUBCASE("eliminated system stays symmetric and solves with exact boundary entries")
  {
    SparseMatrix A = assemble_mass(mesh, dof, frames);
    const SparseMatrix K = assemble_curlcurl(mesh, dof, frames, {1, 1, 1, 1});
    for (int k = 0; k < A.nnz(); ++k)
    {
      A.val[k] += 0.1 * K.val[k];
    }
    std::mt19937 rng(37);
    auto rhs = random_vector(dof.n_edges(), rng);
    std::vector<double> values(dof.n_edges(), 0.0);
    for (int e = 0; e < dof.n_edges(); ++e)
    {
      if (dof.boundary_edge[e])
      {
        values[e] = std::sin(0.1 * e);
      }
    }
    const BcElimination bc = apply_essential_bc(A, rhs, dof, values);
    CHECK(bc.boundary.size() == static_cast<std::size_t>(dof.n_boundary_edges()));

    for (int i = 0; i < A.rows; ++i)
    {
      for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      {
        const double *t = A.find(A.col[k], i);
        REQUIRE(t != nullptr);
        CHECK(*t == A.val[k]);
      }
    }

    std::vector<double> x0(dof.n_edges(), 0.0);
    for (int b : bc.boundary)
    {
      x0[b] = values[b];
    }
    const auto [x, report] = pcg(A, rhs, x0, 1e-12, 10 * dof.n_edges());
    REQUIRE(report.converged);
    for (int b : bc.boundary)
    {
      CHECK(x[b] == values[b]);  // exact, not approximate
    }
  }

  SUBCASE("wrong-length values are rejected")
  {
    SparseMatrix A = assemble_mass(mesh, dof, frames);
    std::vector<double> rhs(dof.n_edges(), 0.0);
    std::vector<double> values(3, 0.0);
    CHECK_THROWS_AS(apply_essential_bc(A, rhs, dof, values), std::invalid_argument);
  }
}
