// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/vtk.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace spherodyn
{

void export_vtk(const Mesh &mesh, const EdgeDofMap &dof, const std::vector<TetFrame> &frames,
                const FieldCoeffs &B, const std::string &path)
{
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
  {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  std::fprintf(f, "# vtk DataFile Version 3.0\n");
  std::fprintf(f, "spherodyn magnetic field snapshot\n");
  std::fprintf(f, "ASCII\n");
  std::fprintf(f, "DATASET UNSTRUCTURED_GRID\n");
  std::fprintf(f, "POINTS %d double\n", mesh.n_vertices());
  for (const auto &p : mesh.vertices)
  {
    std::fprintf(f, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
  }
  std::fprintf(f, "CELLS %d %d\n", mesh.n_tets(), 5 * mesh.n_tets());
  for (const auto &t : mesh.tets)
  {
    std::fprintf(f, "4 %d %d %d %d\n", t.v[0], t.v[1], t.v[2], t.v[3]);
  }
  std::fprintf(f, "CELL_TYPES %d\n", mesh.n_tets());
  for (int i = 0; i < mesh.n_tets(); ++i)
  {
    std::fprintf(f, "10\n");
  }

  std::fprintf(f, "CELL_DATA %d\n", mesh.n_tets());
  std::vector<Vec3> field(mesh.n_tets());
  const Bary center = {0.25, 0.25, 0.25, 0.25};
  for (int t = 0; t < mesh.n_tets(); ++t)
  {
    Vec3 b{};
    for (int k = 0; k < 6; ++k)
    {
      b += dof.tet_sign[t][k] * B[dof.tet_edge[t][k]] * whitney_shape(frames[t], k, center);
    }
    field[t] = b;
  }
  std::fprintf(f, "VECTORS B double\n");
  for (const auto &b : field)
  {
    std::fprintf(f, "%.17g %.17g %.17g\n", b.x, b.y, b.z);
  }
  std::fprintf(f, "SCALARS B_phi double 1\nLOOKUP_TABLE default\n");
  for (int t = 0; t < mesh.n_tets(); ++t)
  {
    const Point3 c = tet_barycenter(mesh, t);
    const double rho = std::hypot(c.x, c.y);
    const double b_phi = rho > 0.0 ? (-field[t].x * c.y + field[t].y * c.x) / rho : 0.0;
    std::fprintf(f, "%.17g\n", b_phi);
  }
  std::fprintf(f, "SCALARS region int 1\nLOOKUP_TABLE default\n");
  for (const auto &t : mesh.tets)
  {
    std::fprintf(f, "%d\n", t.region);
  }
  if (std::fclose(f) != 0)
  {
    throw std::runtime_error("write failure on " + path);
  }
}

}  // namespace spherodyn
