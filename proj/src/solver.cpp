// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace spherodyn
{

namespace
{

double dot(const std::vector<double> &a, const std::vector<double> &b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
  {
    s += a[i] * b[i];
  }
  return s;
}

}  // namespace

std::pair<std::vector<double>, SolverReport> pcg(const SparseMatrix &A,
                                                 const std::vector<double> &b,
                                                 const std::vector<double> &x0, double tol,
                                                 int maxiter)
{
  const int n = A.rows;
  std::vector<double> inv_diag(n);
  for (int i = 0; i < n; ++i)
  {
    const double *d = A.find(i, i);
    if (d == nullptr || *d == 0.0)
    {
      throw std::runtime_error("pcg: zero diagonal entry at row " + std::to_string(i));
    }
    inv_diag[i] = 1.0 / *d;
  }

  SolverReport report;
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0)
  {
    report.converged = true;
    return {std::vector<double>(n, 0.0), report};
  }

  std::vector<double> x = x0;
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A.mat_vec(x, Ap);
  for (int i = 0; i < n; ++i)
  {
    r[i] = b[i] - Ap[i];
  }
  for (int i = 0; i < n; ++i)
  {
    z[i] = inv_diag[i] * r[i];
  }
  p = z;
  double rz = dot(r, z);
  double rnorm = std::sqrt(dot(r, r));

  while (rnorm > tol * bnorm && report.iterations < maxiter)
  {
    A.mat_vec(p, Ap);
    const double alpha = rz / dot(p, Ap);
    for (int i = 0; i < n; ++i)
    {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    for (int i = 0; i < n; ++i)
    {
      z[i] = inv_diag[i] * r[i];
    }
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    for (int i = 0; i < n; ++i)
    {
      p[i] = z[i] + beta * p[i];
    }
    rz = rz_next;
    rnorm = std::sqrt(dot(r, r));
    ++report.iterations;
  }

  report.relative_residual = rnorm / bnorm;
  report.converged = rnorm <= tol * bnorm;
  return {x, report};
}

}  // namespace spherodyn
