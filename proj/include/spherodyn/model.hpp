// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHERODYN_MODEL_HPP
#define SPHERODYN_MODEL_HPP

#include <array>
#include <vector>

#include "spherodyn/vec3.hpp"
#include "spherodyn/whitney.hpp"

namespace spherodyn
{

// Physics and run parameters. Defaults are the solar-interface setup: unit
// diffusivity inside, beta = 150 in the insulating envelope, alpha-effect
// strength R_alpha = 30 and shear strength R_m = 100 with quenching sigma = 1.
struct ModelConfig
{
  std::array<double, 4> radii = {1.5, 1.875, 2.5, 7.5};
  std::array<double, 4> beta = {1.0, 1.0, 1.0, 150.0};
  double r_alpha = 30.0;
  double r_m = 100.0;
  double sigma = 1.0;
  double tau = 0.002;
  double t_end = 2.2;
  double m = 100.0;  // decay constant of the manufactured field
  double solver_tol = 1e-10;
  int solver_maxiter = 0;  // 0: defaults to 10 x n_edges
  std::vector<double> snapshot_times = {0.0, 1.0, 1.3, 1.6, 1.9, 2.2};

  // Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

enum class Mode
{
  dynamo,
  mms
};

// alpha-effect profile f(r,theta,phi) = sin^2(theta) cos(theta)
// sin(pi (r - r2)/(r3 - r2)), supported on the convection zone r2 <= r <= r3.
double alpha_profile(double r, double theta, double phi, const std::array<double, 4> &radii);

// Differential-rotation factor 1 - 0.1264 cos^2(theta) - 0.1591 cos^4(theta).
double rotation_profile(double cos_theta);

// Tachocline shear flow: purely azimuthal, u_phi = rotation_profile(theta)
// r sin(theta) sin(pi (r - r1)/(r2 - r1)) for r1 <= r <= r2, zero elsewhere
// (nonslip at the band edges). Returned in Cartesian components.
Vec3 shear_velocity(double r, double theta, double phi, const std::array<double, 4> &radii);

// Cartesian-point wrappers. These evaluate the spherical expressions in a
// form with no polar-axis singularity (all axis terms carry sin(theta)).
double alpha_profile_at(const Point3 &p, const std::array<double, 4> &radii);
Vec3 shear_velocity_at(const Point3 &p, const std::array<double, 4> &radii);

// Initial poloidal+toroidal seed field, supported on r <= r3 and vanishing
// at r3; divergence free.
Vec3 initial_field(const Point3 &p, const std::array<double, 4> &radii);

// Manufactured solution B_T(x, t) = e^{-t/m} * (cubic polynomial field),
// divergence free; curl and time derivative are analytic.
Vec3 mms_field(const Point3 &p, double t, double m);
Vec3 mms_curl(const Point3 &p, double t, double m);
Vec3 mms_dt(const Point3 &p, double t, double m);

// Coefficients of the manufactured run: f = |x|^2 and u = (x^2 y z, y^2 x z,
// z^2 x y), not region-restricted.
double mms_alpha_coeff(const Point3 &p);
Vec3 mms_velocity(const Point3 &p);

// Weak-residual source making B_T solve the scheme: component k is
//   (d/dt B_T, N_k) + beta (curl B_T, curl N_k) - (g_T, curl N_k),
// g_T = r_alpha f B_T / (1 + sigma |B_T|^2) + r_m u x B_T, all evaluated at
// time t by the degree-4 rule. Needs no second derivatives of B_T.
Vec6 mms_source_functional(const TetFrame &T, double t, double m, double beta_cell,
                           double r_alpha, double r_m, double sigma);

}  // namespace spherodyn

#endif  // SPHERODYN_MODEL_HPP
