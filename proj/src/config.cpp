// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/config.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace spherodyn
{

namespace
{

std::string trim(const std::string &s)
{
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos)
  {
    return "";
  }
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> parse_number_list(const std::string &key, const std::string &value)
{
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ','))
  {
    item = trim(item);
    if (item.empty())
    {
      continue;
    }
    std::size_t pos = 0;
    double v = 0.0;
    try
    {
      v = std::stod(item, &pos);
    }
    catch (const std::exception &)
    {
      throw UsageError("config key " + key + ": cannot parse number '" + item + "'");
    }
    if (pos != item.size())
    {
      throw UsageError("config key " + key + ": cannot parse number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

double parse_number(const std::string &key, const std::string &value)
{
  const auto v = parse_number_list(key, value);
  if (v.size() != 1)
  {
    throw UsageError("config key " + key + ": expected a single number");
  }
  return v[0];
}

}  // namespace

RunConfig parse_config_text(const std::string &text, const std::string &origin)
{
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.resize(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
    {
      throw UsageError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (!kv.emplace(key, value).second)
    {
      throw UsageError(origin + ": duplicate config key " + key);
    }
  }

  RunConfig config;
  auto take = [&](const std::string &key) -> std::string
  {
    const auto it = kv.find(key);
    if (it == kv.end())
    {
      throw UsageError("missing config key " + key);
    }
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_optional = [&](const std::string &key, bool &present) -> std::string
  {
    const auto it = kv.find(key);
    if (it == kv.end())
    {
      present = false;
      return "";
    }
    present = true;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  {
    const auto radii = parse_number_list("radii", take("radii"));
    if (radii.size() != 4)
    {
      throw UsageError("config key radii: expected four comma-separated values");
    }
    std::copy(radii.begin(), radii.end(), config.model.radii.begin());
  }
  for (int i = 0; i < 4; ++i)
  {
    const std::string key = "beta" + std::to_string(i + 1);
    config.model.beta[i] = parse_number(key, take(key));
  }
  config.model.r_alpha = parse_number("r_alpha", take("r_alpha"));
  config.model.r_m = parse_number("r_m", take("r_m"));
  config.model.sigma = parse_number("sigma", take("sigma"));
  config.model.tau = parse_number("tau", take("tau"));
  config.model.t_end = parse_number("t_end", take("t_end"));

  bool present = false;
  std::string v;
  if (v = take_optional("m", present); present)
  {
    config.model.m = parse_number("m", v);
  }
  if (v = take_optional("solver_tol", present); present)
  {
    config.model.solver_tol = parse_number("solver_tol", v);
  }
  if (v = take_optional("solver_maxiter", present); present)
  {
    config.model.solver_maxiter = static_cast<int>(parse_number("solver_maxiter", v));
  }
  if (v = take_optional("snapshot_times", present); present)
  {
    config.model.snapshot_times = parse_number_list("snapshot_times", v);
  }
  if (v = take_optional("mesh", present); present)
  {
    config.mesh_path = v;
  }
  if (v = take_optional("levels", present); present)
  {
    config.levels = static_cast<int>(parse_number("levels", v));
  }
  if (v = take_optional("mode", present); present)
  {
    if (v != "dynamo" && v != "mms")
    {
      throw UsageError("config key mode: expected 'dynamo' or 'mms'");
    }
    config.mode = v;
  }

  if (!kv.empty())
  {
    throw UsageError("unknown config key " + kv.begin()->first);
  }

  try
  {
    config.model.validate();
  }
  catch (const std::invalid_argument &e)
  {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  if (config.levels < 0)
  {
    throw UsageError("config key levels: must be nonnegative");
  }
  return config;
}

RunConfig parse_config_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw UsageError("cannot open config file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

std::string config_echo(const RunConfig &config)
{
  char buf[256];
  std::string out;
  auto add = [&](const char *fmt, auto... args)
  {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
  };
  const ModelConfig &mc = config.model;
  add("radii = %.17g,%.17g,%.17g,%.17g\n", mc.radii[0], mc.radii[1], mc.radii[2], mc.radii[3]);
  for (int i = 0; i < 4; ++i)
  {
    add("beta%d = %.17g\n", i + 1, mc.beta[i]);
  }
  add("r_alpha = %.17g\n", mc.r_alpha);
  add("r_m = %.17g\n", mc.r_m);
  add("sigma = %.17g\n", mc.sigma);
  add("tau = %.17g\n", mc.tau);
  add("t_end = %.17g\n", mc.t_end);
  add("m = %.17g\n", mc.m);
  add("solver_tol = %.17g\n", mc.solver_tol);
  add("solver_maxiter = %d\n", mc.solver_maxiter);
  out += "snapshot_times = ";
  for (std::size_t i = 0; i < mc.snapshot_times.size(); ++i)
  {
    add(i == 0 ? "%.17g" : ",%.17g", mc.snapshot_times[i]);
  }
  out += "\n";
  add("mesh = %s\n", config.mesh_path.c_str());
  add("levels = %d\n", config.levels);
  add("mode = %s\n", config.mode.c_str());
  return out;
}

}  // namespace spherodyn
