// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spherodyn/config.hpp"
#include "spherodyn/mesh.hpp"
#include "spherodyn/simulation.hpp"
#include "spherodyn/vtk.hpp"

namespace
{

using namespace spherodyn;

std::array<double, 4> parse_radii(const std::string &text)
{
  std::array<double, 4> radii{};
  std::stringstream ss(text);
  std::string item;
  int n = 0;
  while (std::getline(ss, item, ','))
  {
    if (n >= 4)
    {
      throw UsageError("radii: expected four comma-separated values");
    }
    try
    {
      radii[n++] = std::stod(item);
    }
    catch (const std::exception &)
    {
      throw UsageError("radii: cannot parse '" + item + "'");
    }
  }
  if (n != 4)
  {
    throw UsageError("radii: expected four comma-separated values");
  }
  if (!(radii[0] > 0.0 && radii[0] < radii[1] && radii[1] < radii[2] && radii[2] < radii[3]))
  {
    throw UsageError("radii must be strictly increasing");
  }
  return radii;
}

std::uint64_t fnv1a(const std::string &bytes)
{
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes)
  {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v)
{
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

int cmd_mesh(const std::string &radii_text, int levels, const std::string &out_path)
{
  const std::array<double, 4> radii = parse_radii(radii_text);
  Mesh mesh;
  try
  {
    mesh = generate_shell_ball_mesh(radii, levels);
  }
  catch (const std::invalid_argument &e)
  {
    throw UsageError(e.what());
  }
  catch (const std::length_error &e)
  {
    throw UsageError(e.what());
  }
  save_mesh(mesh, out_path);
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto vol = region_volumes(mesh);
  std::printf("mesh: %s\n", out_path.c_str());
  std::printf("vertices: %d\n", mesh.n_vertices());
  std::printf("tets: %d\n", mesh.n_tets());
  std::printf("edges: %d (%d on boundary)\n", dof.n_edges(), dof.n_boundary_edges());
  std::printf("h_max: %.6g\n", mesh_h_max(mesh));
  std::printf("region volumes: %.6g %.6g %.6g %.6g\n", vol[0], vol[1], vol[2], vol[3]);
  return 0;
}

void print_convergence_table(const std::vector<ConvergenceRow> &rows)
{
  std::printf("%-12s %-8s %-12s %-8s %-12s %-8s\n", "h_max", "tau", "errB", "rateB", "errCurl",
              "rateCurl");
  for (const auto &r : rows)
  {
    if (!r.solved)
    {
      std::printf("%-12.6g %-8.4g FAILED: %s\n", r.h_max, r.tau, r.message.c_str());
      continue;
    }
    std::string rate_b = std::isnan(r.rate_b) ? "--" : std::to_string(r.rate_b).substr(0, 5);
    std::string rate_c =
        std::isnan(r.rate_curl) ? "--" : std::to_string(r.rate_curl).substr(0, 5);
    std::printf("%-12.6g %-8.4g %-12.4e %-8s %-12.4e %-8s\n", r.h_max, r.tau, r.err_b,
                rate_b.c_str(), r.err_curl, rate_c.c_str());
  }
}

void write_convergence_csv(const std::vector<ConvergenceRow> &rows, const std::string &path)
{
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
  {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  std::fprintf(f, "h_max,tau,errB,rateB,errCurl,rateCurl\n");
  for (const auto &r : rows)
  {
    if (!r.solved)
    {
      std::fprintf(f, "%.17g,%.17g,,,,\n", r.h_max, r.tau);
      continue;
    }
    std::fprintf(f, "%.17g,%.17g,%.17g,", r.h_max, r.tau, r.err_b);
    if (!std::isnan(r.rate_b))
    {
      std::fprintf(f, "%.17g", r.rate_b);
    }
    std::fprintf(f, ",%.17g,", r.err_curl);
    if (!std::isnan(r.rate_curl))
    {
      std::fprintf(f, "%.17g", r.rate_curl);
    }
    std::fprintf(f, "\n");
  }
  if (std::fclose(f) != 0)
  {
    throw std::runtime_error("write failure on " + path);
  }
}

int cmd_converge(const std::string &mode, const std::string &config_path, int levels,
                 const std::string &out_csv)
{
  if (mode != "spatial" && mode != "temporal")
  {
    throw UsageError("--mode must be 'spatial' or 'temporal'");
  }
  RunConfig config;  // defaults; the sweep pins the physics parameters
  if (!config_path.empty())
  {
    config = parse_config_file(config_path);
  }
  // Convergence tests run on the unit ball: all radii scaled down equally.
  std::array<double, 4> radii = config.model.radii;
  for (double &r : radii)
  {
    r /= config.model.radii[3];
  }
  const double t_end = 1.0;
  std::vector<ConvergenceRow> rows;
  if (mode == "spatial")
  {
    rows = run_spatial_convergence(radii, levels, 0.1, 100.0, t_end, config.model.solver_tol,
                                   config.model.solver_maxiter);
  }
  else
  {
    rows = run_temporal_convergence(radii, levels, {0.5, 0.25, 0.1}, 1.0, t_end,
                                    config.model.solver_tol, config.model.solver_maxiter);
  }
  print_convergence_table(rows);
  if (!out_csv.empty())
  {
    write_convergence_csv(rows, out_csv);
  }
  bool all_solved = true;
  for (const auto &r : rows)
  {
    all_solved = all_solved && r.solved;
  }
  return all_solved ? 0 : 1;
}

int cmd_evolve(const std::string &config_path, const std::string &out_dir, int snapshot_every)
{
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig config = parse_config_file(config_path);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec)
  {
    throw std::runtime_error("cannot create output directory " + out_dir);
  }

  Mesh mesh;
  if (!config.mesh_path.empty())
  {
    mesh = load_mesh(config.mesh_path);
  }
  else
  {
    mesh = generate_shell_ball_mesh(config.model.radii, config.levels);
  }
  const EdgeDofMap dof = build_edge_dof_map(mesh);
  const auto t1 = std::chrono::steady_clock::now();

  const Mode mode = config.mode == "mms" ? Mode::mms : Mode::dynamo;
  const DynamoSystem sys = build_system(mesh, dof, config.model, mode);
  const auto t2 = std::chrono::steady_clock::now();

  std::vector<std::string> files;
  std::vector<double> snapshot_times_taken;
  EvolveOptions options;
  options.energy_csv_path = (std::filesystem::path(out_dir) / "energy.csv").string();
  options.snapshot_every = snapshot_every;
  options.on_snapshot = [&](const RunState &state)
  {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%06d.vtk", state.n);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    export_vtk(mesh, dof, sys.frames, state.B, path);
    files.push_back(path);
    snapshot_times_taken.push_back(state.t);
  };

  const EvolveResult result = evolve(sys, options);
  const auto t3 = std::chrono::steady_clock::now();
  files.push_back(options.energy_csv_path);

  const double energy_final = result.energy_series.back()[2];
  std::printf("steps: %d (tau=%.6g, t_end=%.6g)\n", result.steps, config.model.tau,
              config.model.t_end);
  std::printf("final E_M: %.12g\n", energy_final);
  std::printf("stability: max|B|_M^2=%.6g  tau*sum|curl B|_beta^2=%.6g  tau*sum|dB/dt|_M^2=%.6g\n",
              result.final_state.acc.max_mass_energy,
              result.final_state.acc.tau_sum_curl_energy,
              result.final_state.acc.tau_sum_dt_energy);

  auto seconds = [](auto a, auto b)
  { return std::chrono::duration<double>(b - a).count(); };

  nlohmann::json manifest;
  manifest["config"] = config_echo(config);
  manifest["mesh_hash"] = hex64(fnv1a(mesh_canonical_text(mesh)));
  manifest["files"] = files;
  manifest["snapshot_times"] = snapshot_times_taken;
  manifest["steps"] = result.steps;
  manifest["final_energy"] = energy_final;
  manifest["timings"] = {{"mesh_seconds", seconds(t0, t1)},
                         {"assemble_seconds", seconds(t1, t2)},
                         {"evolve_seconds", seconds(t2, t3)}};
  const std::string manifest_path = (std::filesystem::path(out_dir) / "manifest.json").string();
  std::ofstream mf(manifest_path);
  mf << manifest.dump(2) << "\n";
  if (!mf)
  {
    throw std::runtime_error("write failure on " + manifest_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"spherodyn: edge-element simulator for the spherical interface dynamo"};
  app.require_subcommand(1);

  std::string radii_text = "1.5,1.875,2.5,7.5";
  int levels = 0;
  std::string out_path = "ball.tmesh";
  CLI::App *mesh_cmd = app.add_subcommand("mesh", "generate a nested-shell ball mesh");
  mesh_cmd->add_option("--levels", levels, "red refinement levels");
  mesh_cmd->add_option("--radii", radii_text, "r1,r2,r3,r4");
  mesh_cmd->add_option("--out", out_path, "output tmesh path")->required();

  std::string conv_mode;
  std::string conv_config;
  int conv_levels = 2;
  std::string conv_csv = "converge.csv";
  CLI::App *conv_cmd = app.add_subcommand("converge", "manufactured-solution convergence study");
  conv_cmd->add_option("--mode", conv_mode, "spatial or temporal")->required();
  conv_cmd->add_option("--config", conv_config, "config file (solver settings)");
  conv_cmd->add_option("--levels", conv_levels, "finest refinement level");
  conv_cmd->add_option("--out", conv_csv, "output CSV path");

  std::string evolve_config;
  std::string evolve_out;
  int snapshot_every = -1;
  CLI::App *evolve_cmd = app.add_subcommand("evolve", "time evolution run");
  evolve_cmd->add_option("--config", evolve_config, "config file")->required();
  evolve_cmd->add_option("--out", evolve_out, "output directory")->required();
  evolve_cmd->add_option("--snapshot-every", snapshot_every,
                         "snapshot every N steps (0: none; default: config snapshot_times)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return 2;
  }

  try
  {
    if (mesh_cmd->parsed())
    {
      return cmd_mesh(radii_text, levels, out_path);
    }
    if (conv_cmd->parsed())
    {
      return cmd_converge(conv_mode, conv_config, conv_levels, conv_csv);
    }
    if (evolve_cmd->parsed())
    {
      return cmd_evolve(evolve_config, evolve_out, snapshot_every);
    }
  }
  catch (const UsageError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
