// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_CONFIG_HPP
#define SPHERODYN_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "spherodyn/model.hpp"

namespace spherodyn
{

// Raised for malformed flags or config files; the CLI maps it to exit code 2.
struct UsageError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

// A parsed run configuration: the physics parameters plus the mesh source
// (a tmesh path, or a generation level when no path is given) and the mode.
struct RunConfig
{
  ModelConfig model;
  std::string mesh_path;  // empty: generate from radii at `levels`
  int levels = 0;
  std::string mode = "dynamo";  // "dynamo" or "mms"
};

// Flat key=value text. Keys: radii, beta1..beta4, r_alpha, r_m, sigma, tau,
// t_end (required); mesh, levels, mode, m, solver_tol, solver_maxiter,
// snapshot_times (optional). '#' starts a comment. Throws UsageError naming
// the offending or missing key.
RunConfig parse_config_file(const std::string &path);
RunConfig parse_config_text(const std::string &text, const std::string &origin);

// Canonical echo of a parsed config (key=value lines, one per key).
std::string config_echo(const RunConfig &config);

}  // namespace spherodyn

#endif  // SPHERODYN_CONFIG_HPP
