// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace spherodyn
{

namespace
{

double quadratic_form(const SparseMatrix &A, const std::vector<double> &x)
{
  double s = 0.0;
  for (int i = 0; i < A.rows; ++i)
  {
    double row = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
    {
      row += A.val[k] * x[A.col[k]];
    }
    s += x[i] * row;
  }
  return s;
}

SparseMatrix compose_system_matrix(const SparseMatrix &M, const SparseMatrix &K, double tau)
{
  // M and K share the edge-edge pattern, so the sum is entrywise.
  SparseMatrix A = M;
  for (std::size_t k = 0; k < A.val.size(); ++k)
  {
    A.val[k] += tau * K.val[k];
  }
  return A;
}

std::vector<double> boundary_values_at(const DynamoSystem &sys, double t)
{
  std::vector<double> values(sys.dof->n_edges(), 0.0);
  if (sys.mode == Mode::mms)
  {
    const double m = sys.config.m;
    for (int b : sys.bc.boundary)
    {
      values[b] = segment_circulation(sys.mesh->vertices[sys.dof->edges[b][0]],
                                      sys.mesh->vertices[sys.dof->edges[b][1]],
                                      [&](const Vec3 &x) { return mms_field(x, t, m); });
    }
  }
  return values;
}

// Advances state to time t_n with step size tau against the given
// (already eliminated) system matrix.
void step_with(const DynamoSystem &sys, RunState &state, double tau, double t_n,
               const SparseMatrix &A, const BcElimination &bc)
{
  const EdgeDofMap &dof = *sys.dof;
  const int n_edges = dof.n_edges();

  std::vector<double> load = assemble_dynamo_rhs(*sys.mesh, dof, sys.frames, state.B, t_n,
                                                 sys.config, sys.mode);
  if (sys.mode == Mode::mms)
  {
    for (std::size_t t = 0; t < sys.mesh->tets.size(); ++t)
    {
      const Vec6 s = mms_source_functional(sys.frames[t], t_n, sys.config.m,
                                           sys.config.beta[sys.mesh->tets[t].region - 1],
                                           sys.config.r_alpha, sys.config.r_m,
                                           sys.config.sigma);
      for (int k = 0; k < 6; ++k)
      {
        load[dof.tet_edge[t][k]] += dof.tet_sign[t][k] * s[k];
      }
    }
  }

  std::vector<double> rhs = sys.M.mat_vec(state.B);
  for (int i = 0; i < n_edges; ++i)
  {
    rhs[i] += tau * load[i];
  }

  const std::vector<double> values = boundary_values_at(sys, t_n);
  constrain_rhs(bc, values, rhs);

  std::vector<double> x0 = state.B;
  for (int b : bc.boundary)
  {
    x0[b] = values[b];
  }
  const int maxiter =
      sys.config.solver_maxiter > 0 ? sys.config.solver_maxiter : 10 * n_edges;
  auto [x, report] = pcg(A, rhs, x0, sys.config.solver_tol, maxiter);
  if (!report.converged)
  {
    throw std::runtime_error("linear solver failed at step " + std::to_string(state.n + 1) +
                             " (residual " + std::to_string(report.relative_residual) + ")");
  }
  for (int b : bc.boundary)
  {
    x[b] = values[b];
  }

  const double mass_energy = quadratic_form(sys.M, x);
  const double curl_energy = quadratic_form(sys.K, x);
  std::vector<double> dt(n_edges);
  for (int i = 0; i < n_edges; ++i)
  {
    dt[i] = (x[i] - state.B[i]) / tau;
  }
  state.acc.max_mass_energy = std::max(state.acc.max_mass_energy, mass_energy);
  state.acc.tau_sum_curl_energy += tau * curl_energy;
  state.acc.tau_sum_dt_energy += tau * quadratic_form(sys.M, dt);

  state.B = std::move(x);
  state.last_solve = report;
  ++state.n;
  state.t = t_n;
}

}  // namespace

DynamoSystem build_system(const Mesh &mesh, const EdgeDofMap &dof, const ModelConfig &config,
                          Mode mode)
{
  config.validate();
  DynamoSystem sys;
  sys.mesh = &mesh;
  sys.dof = &dof;
  sys.config = config;
  sys.mode = mode;
  sys.frames = build_tet_frames(mesh);
  sys.M = assemble_mass(mesh, dof, sys.frames);
  sys.K = assemble_curlcurl(mesh, dof, sys.frames, config.beta);
  sys.G = discrete_gradient(mesh, dof);
  sys.A = compose_system_matrix(sys.M, sys.K, config.tau);
  sys.bc = eliminate_boundary(sys.A, dof);
  return sys;
}

RunState initial_state(const DynamoSystem &sys)
{
  RunState state;
  if (sys.mode == Mode::mms)
  {
    const double m = sys.config.m;
    state.B = project_initial(*sys.mesh, *sys.dof,
                              [&](const Vec3 &x) { return mms_field(x, 0.0, m); });
  }
  else
  {
    const auto radii = sys.config.radii;
    state.B = project_initial(*sys.mesh, *sys.dof,
                              [&](const Vec3 &x) { return initial_field(x, radii); });
  }
  state.acc.max_mass_energy = quadratic_form(sys.M, state.B);
  return state;
}

void step(const DynamoSystem &sys, RunState &state)
{
  const double tau = sys.config.tau;
  step_with(sys, state, tau, (state.n + 1) * tau, sys.A, sys.bc);
}

double magnetic_energy(const SparseMatrix &mass_23, const FieldCoeffs &B)
{
  return quadratic_form(mass_23, B);
}

double magnetic_energy(const Mesh &mesh, const EdgeDofMap &dof,
                       const std::vector<TetFrame> &frames, const FieldCoeffs &B)
{
  const SparseMatrix mass_23 = assemble_mass(mesh, dof, frames, {false, true, true, false});
  return quadratic_form(mass_23, B);
}

std::vector<double> divergence_moments(const DynamoSystem &sys, const FieldCoeffs &B)
{
  const std::vector<double> y = sys.M.mat_vec(B);
  std::vector<double> d(sys.dof->n_vertices, 0.0);
  for (int e = 0; e < sys.dof->n_edges(); ++e)
  {
    d[sys.dof->edges[e][0]] -= y[e];
    d[sys.dof->edges[e][1]] += y[e];
  }
  for (int v = 0; v < sys.dof->n_vertices; ++v)
  {
    if (sys.dof->boundary_vertex[v])
    {
      d[v] = 0.0;
    }
  }
  return d;
}

double divergence_residual(const DynamoSystem &sys, const FieldCoeffs &B)
{
  const std::vector<double> y = sys.M.mat_vec(B);
  double scale = 0.0;
  for (double v : y)
  {
    scale = std::max(scale, std::abs(v));
  }
  if (scale == 0.0)
  {
    return 0.0;
  }
  const std::vector<double> d = divergence_moments(sys, B);
  double worst = 0.0;
  for (double v : d)
  {
    worst = std::max(worst, std::abs(v));
  }
  return worst / scale;
}

std::pair<double, double> mms_errors(const Mesh &mesh, const EdgeDofMap &dof,
                                     const std::vector<TetFrame> &frames, const FieldCoeffs &B,
                                     double t, double m)
{
  const TetQuadrature &q = tet_quadrature_deg4();
  double err2 = 0.0, errc2 = 0.0;
  for (std::size_t tid = 0; tid < mesh.tets.size(); ++tid)
  {
    const TetFrame &T = frames[tid];
    Vec6 c;
    Vec3 curl_h{};
    for (int k = 0; k < 6; ++k)
    {
      c[k] = dof.tet_sign[tid][k] * B[dof.tet_edge[tid][k]];
      curl_h += c[k] * whitney_curl(T, k);
    }
    for (int n = 0; n < 14; ++n)
    {
      const Vec3 x = bary_to_point(T, q.points[n]);
      Vec3 bh{};
      for (int k = 0; k < 6; ++k)
      {
        bh += c[k] * whitney_shape(T, k, q.points[n]);
      }
      const double w = q.weights[n] * T.volume;
      err2 += w * norm2(bh - mms_field(x, t, m));
      errc2 += w * norm2(curl_h - mms_curl(x, t, m));
    }
  }
  return {std::sqrt(err2), std::sqrt(errc2)};
}

EvolveResult evolve(const DynamoSystem &sys, const EvolveOptions &options)
{
  const double tau = sys.config.tau;
  const double t_end = sys.config.t_end;
  const int n_steps = static_cast<int>(std::ceil(t_end / tau - 1e-12));

  std::set<int> snapshot_steps;
  if (options.snapshot_every < 0)
  {
    for (double ts : sys.config.snapshot_times)
    {
      // nearest actual step time; the final step may be truncated to t_end
      int best = 0;
      double best_dist = std::abs(ts);
      for (int n = 1; n <= n_steps; ++n)
      {
        const double dist = std::abs(std::min(n * tau, t_end) - ts);
        if (dist < best_dist)
        {
          best = n;
          best_dist = dist;
        }
      }
      if (best_dist <= 0.5 * tau)
      {
        snapshot_steps.insert(best);
      }
    }
  }

  const SparseMatrix mass_23 =
      assemble_mass(*sys.mesh, *sys.dof, sys.frames, {false, true, true, false});

  std::FILE *csv = nullptr;
  if (!options.energy_csv_path.empty())
  {
    csv = std::fopen(options.energy_csv_path.c_str(), "w");
    if (csv == nullptr)
    {
      throw std::runtime_error("cannot open " + options.energy_csv_path + " for writing");
    }
    std::fprintf(csv, "step,t,E_M\n");
  }

  EvolveResult result;
  RunState state = initial_state(sys);

  auto record = [&](const RunState &st)
  {
    const double energy = magnetic_energy(mass_23, st.B);
    if (!std::isfinite(energy))
    {
      if (csv != nullptr)
      {
        std::fclose(csv);
      }
      throw std::runtime_error("magnetic energy diverged at step " + std::to_string(st.n));
    }
    if (csv != nullptr)
    {
      std::fprintf(csv, "%d,%.17g,%.17g\n", st.n, st.t, energy);
    }
    result.energy_series.push_back({static_cast<double>(st.n), st.t, energy});
    const bool snap = options.snapshot_every > 0
                          ? (st.n % options.snapshot_every == 0)
                          : (options.snapshot_every < 0 && snapshot_steps.count(st.n) > 0);
    if (snap && options.on_snapshot)
    {
      options.on_snapshot(st);
    }
  };

  record(state);
  for (int n = 1; n <= n_steps; ++n)
  {
    const double t_n = std::min(n * tau, t_end);
    const double tau_n = t_n - state.t;
    if (tau_n < tau * (1.0 - 1e-12))
    {
      // truncated final step: rebuild the system matrix for the shorter tau
      SparseMatrix A_last = compose_system_matrix(sys.M, sys.K, tau_n);
      const BcElimination bc_last = eliminate_boundary(A_last, *sys.dof);
      step_with(sys, state, tau_n, t_end, A_last, bc_last);
    }
    else
    {
      step_with(sys, state, tau, t_n, sys.A, sys.bc);
    }
    record(state);
  }

  if (csv != nullptr && std::fclose(csv) != 0)
  {
    throw std::runtime_error("write failure on " + options.energy_csv_path);
  }
  result.final_state = std::move(state);
  result.steps = n_steps;
  return result;
}

namespace
{

ModelConfig mms_config(const std::array<double, 4> &radii, double tau, double m, double t_end,
                       double solver_tol, int solver_maxiter)
{
  ModelConfig c;
  c.radii = radii;
  c.beta = {1.0, 1.0, 1.0, 1.0};
  c.r_alpha = 1.0;
  c.r_m = 1.0;
  c.sigma = 1.0;
  c.tau = tau;
  c.t_end = t_end;
  c.m = m;
  c.solver_tol = solver_tol;
  c.solver_maxiter = solver_maxiter;
  return c;
}

ConvergenceRow run_single_mms(const Mesh &mesh, const ModelConfig &config)
{
  ConvergenceRow row;
  row.h_max = mesh_h_max(mesh);
  row.tau = config.tau;
  row.rate_b = std::numeric_limits<double>::quiet_NaN();
  row.rate_curl = std::numeric_limits<double>::quiet_NaN();
  try
  {
    const EdgeDofMap dof = build_edge_dof_map(mesh);
    const DynamoSystem sys = build_system(mesh, dof, config, Mode::mms);
    RunState state = initial_state(sys);
    const int n_steps = static_cast<int>(std::llround(config.t_end / config.tau));
    for (int n = 0; n < n_steps; ++n)
    {
      step(sys, state);
    }
    std::tie(row.err_b, row.err_curl) =
        mms_errors(mesh, dof, sys.frames, state.B, state.t, config.m);
    row.solved = true;
  }
  catch (const std::exception &e)
  {
    row.solved = false;
    row.message = e.what();
  }
  return row;
}

void attach_rates(std::vector<ConvergenceRow> &rows, bool spatial)
{
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    if (!rows[i].solved || !rows[i - 1].solved)
    {
      continue;
    }
    const double ratio = spatial ? rows[i - 1].h_max / rows[i].h_max
                                 : rows[i - 1].tau / rows[i].tau;
    rows[i].rate_b = std::log(rows[i - 1].err_b / rows[i].err_b) / std::log(ratio);
    rows[i].rate_curl = std::log(rows[i - 1].err_curl / rows[i].err_curl) / std::log(ratio);
  }
}

}  // namespace

std::vector<ConvergenceRow> run_spatial_convergence(const std::array<double, 4> &radii,
                                                    int max_level, double tau, double m,
                                                    double t_end, double solver_tol,
                                                    int solver_maxiter)
{
  std::vector<ConvergenceRow> rows;
  const ModelConfig config = mms_config(radii, tau, m, t_end, solver_tol, solver_maxiter);
  for (int level = 0; level <= max_level; ++level)
  {
    const Mesh mesh = generate_shell_ball_mesh(radii, level);
    rows.push_back(run_single_mms(mesh, config));
  }
  attach_rates(rows, true);
  return rows;
}

std::vector<ConvergenceRow> run_temporal_convergence(const std::array<double, 4> &radii,
                                                     int level, const std::vector<double> &taus,
                                                     double m, double t_end, double solver_tol,
                                                     int solver_maxiter)
{
  std::vector<ConvergenceRow> rows;
  const Mesh mesh = generate_shell_ball_mesh(radii, level);
  for (double tau : taus)
  {
    const ModelConfig config = mms_config(radii, tau, m, t_end, solver_tol, solver_maxiter);
    rows.push_back(run_single_mms(mesh, config));
  }
  attach_rates(rows, false);
  return rows;
}

}  // namespace spherodyn
