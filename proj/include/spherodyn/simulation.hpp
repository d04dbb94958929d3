// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_SIMULATION_HPP
#define SPHERODYN_SIMULATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "spherodyn/assembly.hpp"
#include "spherodyn/mesh.hpp"
#include "spherodyn/model.hpp"
#include "spherodyn/solver.hpp"

namespace spherodyn
{

// Edge interpolant: DOF e = circulation of the field along edge e (oriented
// low-to-high global vertex index).
template <typename Field>
FieldCoeffs project_initial(const Mesh &mesh, const EdgeDofMap &dof, Field &&field)
{
  FieldCoeffs c(dof.n_edges());
  for (int e = 0; e < dof.n_edges(); ++e)
  {
    c[e] = segment_circulation(mesh.vertices[dof.edges[e][0]],
                               mesh.vertices[dof.edges[e][1]], field);
  }
  return c;
}

// Running stability sums mirroring the discrete energy estimates:
// max_n ||B^n||_M^2, tau sum_n ||curl B^n||_beta^2 and tau sum_n
// ||d_tau B^n||_M^2.
struct StabilityAccumulators
{
  double max_mass_energy = 0.0;
  double tau_sum_curl_energy = 0.0;
  double tau_sum_dt_energy = 0.0;
};

// Matrices and metadata fixed for one run. M and K stay unconstrained (they
// feed right-hand sides and diagnostics); A = M + tau K carries the boundary
// elimination.
struct DynamoSystem
{
  const Mesh *mesh = nullptr;
  const EdgeDofMap *dof = nullptr;
  std::vector<TetFrame> frames;
  SparseMatrix M;
  SparseMatrix K;
  SparseMatrix G;
  SparseMatrix A;
  BcElimination bc;
  ModelConfig config;
  Mode mode = Mode::dynamo;
};

DynamoSystem build_system(const Mesh &mesh, const EdgeDofMap &dof, const ModelConfig &config,
                          Mode mode);

struct RunState
{
  int n = 0;
  double t = 0.0;
  FieldCoeffs B;
  StabilityAccumulators acc;
  SolverReport last_solve;
};

// B^0: edge interpolant of the mode's initial field (B_0 for dynamo, the
// manufactured field at t = 0 for mms).
RunState initial_state(const DynamoSystem &sys);

// One backward-Euler step: solves (M + tau K) B^n = M B^{n-1} + tau rhs with
// the explicit nonlinear terms (and, in mms mode, the manufactured source and
// the exact boundary trace) evaluated at t_n. Throws on solver failure.
void step(const DynamoSystem &sys, RunState &state);

// Magnetic energy E_M = int_V |B_h|^2 over regions 2-3 = B^T M_V B.
double magnetic_energy(const SparseMatrix &mass_23, const FieldCoeffs &B);
// Convenience form that assembles the region-masked mass matrix on the fly.
double magnetic_energy(const Mesh &mesh, const EdgeDofMap &dof,
                       const std::vector<TetFrame> &frames, const FieldCoeffs &B);

// (G^T M B) restricted to interior vertices, the monitored discrete-divergence
// functional.
std::vector<double> divergence_moments(const DynamoSystem &sys, const FieldCoeffs &B);

// max_v |(G^T M B)_v| over interior vertices, normalized by ||M B||_inf
// (0 for the zero field).
double divergence_residual(const DynamoSystem &sys, const FieldCoeffs &B);

// L2 errors of B_h and curl B_h against the manufactured field at time t, by
// element-wise degree-4 quadrature.
std::pair<double, double> mms_errors(const Mesh &mesh, const EdgeDofMap &dof,
                                     const std::vector<TetFrame> &frames, const FieldCoeffs &B,
                                     double t, double m);

struct EvolveOptions
{
  std::string energy_csv_path;  // empty: no CSV
  // Snapshot selection: every k-th step when snapshot_every > 0; at the
  // config's snapshot_times when snapshot_every < 0; never when 0.
  int snapshot_every = -1;
  std::function<void(const RunState &)> on_snapshot;
};

struct EvolveResult
{
  RunState final_state;
  std::vector<std::array<double, 3>> energy_series;  // (step, t, E_M)
  int steps = 0;
};

// Integrates to t_end (ceil(t_end / tau) steps, last one truncated to land
// exactly on t_end), recording E_M per step. Throws if the solver fails or
// the energy leaves the finite range.
EvolveResult evolve(const DynamoSystem &sys, const EvolveOptions &options);

// One row of a Table-1/2 style convergence report. Rates are NaN on the
// first row.
struct ConvergenceRow
{
  double h_max = 0.0;
  double tau = 0.0;
  double err_b = 0.0;
  double rate_b = 0.0;
  double err_curl = 0.0;
  double rate_curl = 0.0;
  bool solved = false;
  std::string message;
};

// Manufactured-solution sweeps on the scaled-down ball, integrating to t_end
// and measuring errors there. Spatial: levels 0..max_level at fixed tau.
// Temporal: fixed mesh level, one row per tau.
std::vector<ConvergenceRow> run_spatial_convergence(const std::array<double, 4> &radii,
                                                    int max_level, double tau, double m,
                                                    double t_end, double solver_tol,
                                                    int solver_maxiter);
std::vector<ConvergenceRow> run_temporal_convergence(const std::array<double, 4> &radii,
                                                     int level, const std::vector<double> &taus,
                                                     double m, double t_end, double solver_tol,
                                                     int solver_maxiter);

}  // namespace spherodyn

#endif  // SPHERODYN_SIMULATION_HPP
