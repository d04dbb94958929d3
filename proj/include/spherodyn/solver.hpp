// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_SOLVER_HPP
#define SPHERODYN_SOLVER_HPP

#include <utility>
#include <vector>

#include "spherodyn/sparse.hpp"

namespace spherodyn
{

struct SolverReport
{
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients for symmetric positive definite
// systems. Stops when ||b - Ax||_2 <= tol ||b||_2; a maxiter overrun returns
// converged = false and leaves the decision to the caller. Throws
// std::runtime_error on a zero diagonal entry.
std::pair<std::vector<double>, SolverReport> pcg(const SparseMatrix &A,
                                                 const std::vector<double> &b,
                                                 const std::vector<double> &x0, double tol,
                                                 int maxiter);

}  // namespace spherodyn

#endif  // SPHERODYN_SOLVER_HPP
