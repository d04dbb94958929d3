// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spherodyn
{

void ModelConfig::validate() const
{
  if (!(radii[0] > 0.0 && radii[0] < radii[1] && radii[1] < radii[2] && radii[2] < radii[3]))
  {
    throw std::invalid_argument("radii must be strictly increasing");
  }
  for (double b : beta)
  {
    if (!(b > 0.0))
    {
      throw std::invalid_argument("beta must be positive");
    }
  }
  if (r_alpha < 0.0 || r_m < 0.0 || sigma < 0.0)
  {
    throw std::invalid_argument("r_alpha, r_m and sigma must be nonnegative");
  }
  if (!(tau > 0.0))
  {
    throw std::invalid_argument("tau must be positive");
  }
  if (!(t_end >= tau))
  {
    throw std::invalid_argument("t_end must be at least one time step");
  }
  if (!(m > 0.0))
  {
    throw std::invalid_argument("m must be positive");
  }
  if (!(solver_tol > 0.0))
  {
    throw std::invalid_argument("solver_tol must be positive");
  }
}

double alpha_profile(double r, double theta, double /*phi*/,
                     const std::array<double, 4> &radii)
{
  const double r2 = radii[1], r3 = radii[2];
  if (r < r2 || r > r3)
  {
    return 0.0;
  }
  const double s = std::sin(theta), c = std::cos(theta);
  return s * s * c * std::sin(std::numbers::pi * (r - r2) / (r3 - r2));
}

double rotation_profile(double cos_theta)
{
  const double c2 = cos_theta * cos_theta;
  return 1.0 - 0.1264 * c2 - 0.1591 * c2 * c2;
}

Vec3 shear_velocity(double r, double theta, double phi, const std::array<double, 4> &radii)
{
  const double r1 = radii[0], r2 = radii[1];
  if (r < r1 || r > r2)
  {
    return {};
  }
  const double u_phi = rotation_profile(std::cos(theta)) * r * std::sin(theta) *
                       std::sin(std::numbers::pi * (r - r1) / (r2 - r1));
  return {-u_phi * std::sin(phi), u_phi * std::cos(phi), 0.0};
}

double alpha_profile_at(const Point3 &p, const std::array<double, 4> &radii)
{
  const double r2 = radii[1], r3 = radii[2];
  const double r = norm(p);
  if (r < r2 || r > r3)
  {
    return 0.0;
  }
  const double c = p.z / r;  // r >= r2 > 0 here
  return (1.0 - c * c) * c * std::sin(std::numbers::pi * (r - r2) / (r3 - r2));
}

Vec3 shear_velocity_at(const Point3 &p, const std::array<double, 4> &radii)
{
  const double r1 = radii[0], r2 = radii[1];
  const double r = norm(p);
  if (r < r1 || r > r2)
  {
    return {};
  }
  // u_phi phihat with r sin(theta) phihat = (-y, x, 0): no axis singularity.
  const double a = rotation_profile(p.z / r) * std::sin(std::numbers::pi * (r - r1) / (r2 - r1));
  return {-a * p.y, a * p.x, 0.0};
}

Vec3 initial_field(const Point3 &p, const std::array<double, 4> &radii)
{
  const double r3 = radii[2];
  const double r = norm(p);
  if (r > r3 || r == 0.0)
  {
    return {};
  }
  const double d = r - r3;
  const double br_over = 2.0 * (p.z / r) * r * d * d / (r3 * r3);  // B_r
  // B_theta = sin(theta) g_t, B_phi = sin(theta) g_p:
  const double g_t = -(3.0 * r * d * d + 2.0 * r * r * d) / (r3 * r3);
  const double g_p = 3.0 * (p.z / r) * r * r * d * d / (r3 * r3);
  // rhat = p / r; sin(theta) thetahat = (z x / r^2, z y / r^2, -(1 - z^2/r^2));
  // sin(theta) phihat = (-y / r, x / r, 0).
  const double inv_r = 1.0 / r;
  Vec3 b = (br_over * inv_r) * p;
  b += g_t * Vec3{p.z * p.x * inv_r * inv_r, p.z * p.y * inv_r * inv_r,
                  -(1.0 - p.z * p.z * inv_r * inv_r)};
  b += g_p * Vec3{-p.y * inv_r, p.x * inv_r, 0.0};
  return b;
}

Vec3 mms_field(const Point3 &p, double t, double m)
{
  const double e = std::exp(-t / m);
  const double x = p.x, y = p.y, z = p.z;
  return {y * e * (x * x - 2.0 * x * z + y * y + 3.0 * z * z - 1.0),
          z * e * (3.0 * x * x - 2.0 * x * y + y * y + z * z - 1.0),
          x * e * (x * x + 3.0 * y * y - 2.0 * y * z + z * z - 1.0)};
}

Vec3 mms_curl(const Point3 &p, double t, double m)
{
  const double e = std::exp(-t / m);
  const double x = p.x, y = p.y, z = p.z;
  return {e * (-3.0 * x * x + 8.0 * x * y - 2.0 * x * z - y * y - 3.0 * z * z + 1.0),
          e * (-3.0 * x * x - 2.0 * x * y - 3.0 * y * y + 8.0 * y * z - z * z + 1.0),
          e * (-x * x - 3.0 * y * y + 8.0 * x * z - 2.0 * y * z - 3.0 * z * z + 1.0)};
}

Vec3 mms_dt(const Point3 &p, double t, double m)
{
  return (-1.0 / m) * mms_field(p, t, m);
}

double mms_alpha_coeff(const Point3 &p)
{
  return dot(p, p);
}

Vec3 mms_velocity(const Point3 &p)
{
  return {p.x * p.x * p.y * p.z, p.y * p.y * p.x * p.z, p.z * p.z * p.x * p.y};
}

Vec6 mms_source_functional(const TetFrame &T, double t, double m, double beta_cell,
                           double r_alpha, double r_m, double sigma)
{
  const TetQuadrature &q = tet_quadrature_deg4();
  Vec6 out{};
  Vec3 curl_part{};  // int_T (beta curl B_T - g_T)
  for (int n = 0; n < 14; ++n)
  {
    const Vec3 x = bary_to_point(T, q.points[n]);
    const double w = q.weights[n] * T.volume;
    const Vec3 b = mms_field(x, t, m);
    const Vec3 g = (r_alpha * mms_alpha_coeff(x) / (1.0 + sigma * norm2(b))) * b +
                   r_m * cross(mms_velocity(x), b);
    curl_part += w * (beta_cell * mms_curl(x, t, m) - g);
    const Vec3 db = mms_dt(x, t, m);
    for (int k = 0; k < 6; ++k)
    {
      out[k] += w * dot(db, whitney_shape(T, k, q.points[n]));
    }
  }
  for (int k = 0; k < 6; ++k)
  {
    out[k] += dot(whitney_curl(T, k), curl_part);
  }
  return out;
}

}  // namespace spherodyn
