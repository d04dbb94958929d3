// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_VTK_HPP
#define SPHERODYN_VTK_HPP

#include <string>
#include <vector>

#include "spherodyn/assembly.hpp"
#include "spherodyn/mesh.hpp"

namespace spherodyn
{

// Legacy VTK ASCII export (UNSTRUCTURED_GRID, cell type 10). Cell data:
// VECTORS B (field at the barycenter), SCALARS B_phi (azimuthal component,
// 0 on the polar axis) and SCALARS region (mesh tags).
void export_vtk(const Mesh &mesh, const EdgeDofMap &dof, const std::vector<TetFrame> &frames,
                const FieldCoeffs &B, const std::string &path);

}  // namespace spherodyn

#endif  // SPHERODYN_VTK_HPP
