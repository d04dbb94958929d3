// Copyright (c) 2026 the spherodyn developers.
// SPDX-License-Identifier: Apache-2.0

#include "spherodyn/mesh.hpp"

#include "spherodyn/whitney.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <cstdint>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace spherodyn
{

namespace
{

// Number of octahedron subdivision rounds baked into the macro mesh. Two
// rounds keep the barycenter of every prism tet inside its radial band even
// for the thin tachocline shell.
constexpr int kMacroSubdiv = 2;

// Memory guard for generate_shell_ball_mesh.
constexpr long kMaxTets = 5'000'000;

double signed_volume(const Point3 &a, const Point3 &b, const Point3 &c, const Point3 &d)
{
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

struct Surface
{
  std::vector<Vec3> dirs;  // unit vectors
  std::vector<std::array<int, 3>> tris;  // outward oriented
};

Surface octahedron_surface(int subdiv)
{
  Surface s;
  s.dirs = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  s.tris = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
            {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (int round = 0; round < subdiv; ++round)
  {
    std::unordered_map<std::int64_t, int> midpoint;
    auto mid = [&](int a, int b)
    {
      const auto mm = std::minmax(a, b);
      const std::int64_t key = (static_cast<std::int64_t>(mm.first) << 32) | mm.second;
      auto it = midpoint.find(key);
      if (it != midpoint.end())
      {
        return it->second;
      }
      Vec3 m = s.dirs[a] + s.dirs[b];
      m *= 1.0 / norm(m);
      s.dirs.push_back(m);
      int id = static_cast<int>(s.dirs.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(s.tris.size() * 4);
    for (const auto &t : s.tris)
    {
      const int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m02 = mid(t[0], t[2]);
      next.push_back({t[0], m01, m02});
      next.push_back({t[1], m12, m01});
      next.push_back({t[2], m02, m12});
      next.push_back({m01, m12, m02});
    }
    s.tris = std::move(next);
  }
  return s;
}

// Orientation-preserving prism permutations bringing each vertex to slot 0.
// Slots 0-2 are the bottom triangle, 3-5 the radially matched top.
constexpr int kPrismPerm[6][6] = {
    {0, 1, 2, 3, 4, 5},  // min at bottom 0
    {1, 2, 0, 4, 5, 3},  // min at bottom 1
    {2, 0, 1, 5, 3, 4},  // min at bottom 2
    {3, 5, 4, 0, 2, 1},  // min at top 0 (flip)
    {4, 3, 5, 1, 0, 2},  // min at top 1 (flip)
    {5, 4, 3, 2, 1, 0},  // min at top 2 (flip)
};

// Splits a prism into three tets with face diagonals chosen through the
// smallest global vertex index, so neighboring prisms agree on shared quads.
void split_prism(const std::array<int, 6> &v, std::vector<Mesh::Tet> &out, int region)
{
  int slot = 0;
  for (int i = 1; i < 6; ++i)
  {
    if (v[i] < v[slot])
    {
      slot = i;
    }
  }
  const int *p = kPrismPerm[slot];
  const int v1 = v[p[0]], v2 = v[p[1]], v3 = v[p[2]];
  const int v4 = v[p[3]], v5 = v[p[4]], v6 = v[p[5]];
  // Quads at v1 get diagonals (v1,v5) and (v1,v6); the remaining quad
  // (v2,v3,v6,v5) takes the diagonal through its smallest corner.
  if (std::min(v2, v6) < std::min(v3, v5))
  {
    out.push_back({{v1, v2, v3, v6}, region});
    out.push_back({{v1, v2, v6, v5}, region});
  }
  else
  {
    out.push_back({{v1, v2, v3, v5}, region});
    out.push_back({{v1, v5, v3, v6}, region});
  }
  out.push_back({{v1, v5, v6, v4}, region});
}

int band_of_radius(double rho, const std::array<double, 4> &radii)
{
  for (int i = 0; i < 4; ++i)
  {
    if (rho < radii[i])
    {
      return i + 1;
    }
  }
  return 4;
}

void canonical_orient(Mesh &mesh)
{
  for (auto &t : mesh.tets)
  {
    const double vol = signed_volume(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]],
                                     mesh.vertices[t.v[2]], mesh.vertices[t.v[3]]);
    if (vol < 0.0)
    {
      std::swap(t.v[2], t.v[3]);
    }
  }
}

// Index of the interface sphere a vertex sits on, or -1.
int sphere_index(const Point3 &p, const std::array<double, 4> &radii)
{
  const double rho = norm(p);
  for (int i = 0; i < 4; ++i)
  {
    if (std::abs(rho - radii[i]) <= kGeomTol * radii[i])
    {
      return i;
    }
  }
  return -1;
}

Mesh macro_mesh(const std::array<double, 4> &radii)
{
  const Surface surf = octahedron_surface(kMacroSubdiv);
  const int nd = static_cast<int>(surf.dirs.size());

  // Radial sheets: one at each interface, plus interior sheets spaced
  // geometrically so layer thickness tracks the local tangential size.
  const double chord = (std::numbers::pi / 2.0) / (1 << kMacroSubdiv);
  std::vector<double> sheets;
  sheets.push_back(radii[0]);
  for (int band = 0; band < 3; ++band)
  {
    const double lo = radii[band], hi = radii[band + 1];
    const int n = std::max(1, static_cast<int>(std::floor(std::log(hi / lo) / std::log1p(chord) + 0.5)));
    for (int k = 1; k <= n; ++k)
    {
      sheets.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / n));
    }
  }
  sheets.back() = radii[3];  // exact outer radius

  Mesh mesh;
  mesh.radii = radii;
  mesh.vertices.reserve(1 + sheets.size() * nd);
  mesh.vertices.push_back({0.0, 0.0, 0.0});
  for (double rho : sheets)
  {
    for (const Vec3 &d : surf.dirs)
    {
      mesh.vertices.push_back(rho * d);
    }
  }
  auto vid = [&](int sheet, int dir) { return 1 + sheet * nd + dir; };

  // Core: spikes from the center to the first sheet.
  for (const auto &t : surf.tris)
  {
    mesh.tets.push_back({{0, vid(0, t[0]), vid(0, t[1]), vid(0, t[2])}, 1});
  }
  // Shell layers: one prism per surface triangle per consecutive sheet pair.
  for (std::size_t s = 0; s + 1 < sheets.size(); ++s)
  {
    const double mid = 0.5 * (sheets[s] + sheets[s + 1]);
    const int region = band_of_radius(mid, radii);
    for (const auto &t : surf.tris)
    {
      split_prism({vid(static_cast<int>(s), t[0]), vid(static_cast<int>(s), t[1]),
                   vid(static_cast<int>(s), t[2]), vid(static_cast<int>(s + 1), t[0]),
                   vid(static_cast<int>(s + 1), t[1]), vid(static_cast<int>(s + 1), t[2])},
                  mesh.tets, region);
    }
  }
  canonical_orient(mesh);
  return mesh;
}

Mesh refine_red(const Mesh &mesh)
{
  Mesh fine;
  fine.radii = mesh.radii;
  fine.vertices = mesh.vertices;
  fine.tets.reserve(mesh.tets.size() * 8);

  std::unordered_map<std::int64_t, int> midpoint;
  midpoint.reserve(mesh.tets.size() * 4);
  auto mid = [&](int a, int b)
  {
    const auto mm = std::minmax(a, b);
    const std::int64_t key = (static_cast<std::int64_t>(mm.first) << 32) | mm.second;
    auto it = midpoint.find(key);
    if (it != midpoint.end())
    {
      return it->second;
    }
    const Point3 &pa = mesh.vertices[a];
    const Point3 &pb = mesh.vertices[b];
    Point3 m = 0.5 * (pa + pb);
    // Radial snapping: midpoints of edges lying on an interface or boundary
    // sphere are projected back to exact radius.
    const int sa = sphere_index(pa, mesh.radii);
    if (sa >= 0 && sa == sphere_index(pb, mesh.radii))
    {
      m *= mesh.radii[sa] / norm(m);
    }
    fine.vertices.push_back(m);
    const int id = static_cast<int>(fine.vertices.size()) - 1;
    midpoint.emplace(key, id);
    return id;
  };

  for (const auto &t : mesh.tets)
  {
    const int v0 = t.v[0], v1 = t.v[1], v2 = t.v[2], v3 = t.v[3];
    const int m01 = mid(v0, v1), m02 = mid(v0, v2), m03 = mid(v0, v3);
    const int m12 = mid(v1, v2), m13 = mid(v1, v3), m23 = mid(v2, v3);

    fine.tets.push_back({{v0, m01, m02, m03}, t.region});
    fine.tets.push_back({{v1, m01, m12, m13}, t.region});
    fine.tets.push_back({{v2, m02, m12, m23}, t.region});
    fine.tets.push_back({{v3, m03, m13, m23}, t.region});

    // Interior octahedron: split along the shortest diagonal (deterministic
    // tie-break by enumeration order).
    const std::array<std::array<int, 2>, 3> diag = {{{m01, m23}, {m02, m13}, {m03, m12}}};
    int best = 0;
    double best_len = -1.0;
    for (int d = 0; d < 3; ++d)
    {
      const double len = norm2(fine.vertices[diag[d][0]] - fine.vertices[diag[d][1]]);
      if (best_len < 0.0 || len < best_len)
      {
        best = d;
        best_len = len;
      }
    }
    // Equatorial cycle around each diagonal (consecutive entries adjacent).
    static constexpr int kEquator[3][4] = {{1, 2, 4, 3}, {0, 2, 5, 3}, {0, 1, 5, 4}};
    const std::array<int, 6> m = {m01, m02, m03, m12, m13, m23};
    for (int e = 0; e < 4; ++e)
    {
      fine.tets.push_back({{diag[best][0], diag[best][1], m[kEquator[best][e]],
                            m[kEquator[best][(e + 1) % 4]]},
                           t.region});
    }
  }
  canonical_orient(fine);
  return fine;
}

}  // namespace

Mesh generate_shell_ball_mesh(const std::array<double, 4> &radii, int levels)
{
  if (!(radii[0] > 0.0 && radii[0] < radii[1] && radii[1] < radii[2] && radii[2] < radii[3]))
  {
    throw std::invalid_argument("radii must be strictly increasing");
  }
  if (levels < 0)
  {
    throw std::invalid_argument("levels must be nonnegative");
  }
  Mesh mesh = macro_mesh(radii);
  if (static_cast<long>(mesh.tets.size()) << (3 * levels) > kMaxTets)
  {
    throw std::length_error("levels exceeds the configured maximum (memory guard)");
  }
  for (int l = 0; l < levels; ++l)
  {
    mesh = refine_red(mesh);
  }
  validate_mesh(mesh);
  return mesh;
}

double tet_volume(const Mesh &mesh, int tet_id)
{
  const auto &t = mesh.tets[tet_id];
  return signed_volume(mesh.vertices[t.v[0]], mesh.vertices[t.v[1]], mesh.vertices[t.v[2]],
                       mesh.vertices[t.v[3]]);
}

Point3 tet_barycenter(const Mesh &mesh, int tet_id)
{
  const auto &t = mesh.tets[tet_id];
  return 0.25 * (mesh.vertices[t.v[0]] + mesh.vertices[t.v[1]] + mesh.vertices[t.v[2]] +
                 mesh.vertices[t.v[3]]);
}

int classify_region(const Mesh &mesh, int tet_id)
{
  const int tag = mesh.tets[tet_id].region;
  assert(band_of_radius(norm(tet_barycenter(mesh, tet_id)), mesh.radii) == tag);
  return tag;
}

double mesh_h_max(const Mesh &mesh)
{
  double h = 0.0;
  for (const auto &t : mesh.tets)
  {
    for (int a = 0; a < 4; ++a)
    {
      for (int b = a + 1; b < 4; ++b)
      {
        h = std::max(h, norm(mesh.vertices[t.v[a]] - mesh.vertices[t.v[b]]));
      }
    }
  }
  return h;
}

std::array<double, 4> region_volumes(const Mesh &mesh)
{
  std::array<double, 4> vol{};
  for (int t = 0; t < mesh.n_tets(); ++t)
  {
    vol[mesh.tets[t].region - 1] += tet_volume(mesh, t);
  }
  return vol;
}

void validate_mesh(const Mesh &mesh)
{
  if (!(mesh.radii[0] > 0.0 && mesh.radii[0] < mesh.radii[1] && mesh.radii[1] < mesh.radii[2] &&
        mesh.radii[2] < mesh.radii[3]))
  {
    throw std::runtime_error("radii must be strictly increasing");
  }
  const double tol = kGeomTol * mesh.radii[3];
  for (int i = 0; i < mesh.n_tets(); ++i)
  {
    const auto &t = mesh.tets[i];
    for (int a = 0; a < 4; ++a)
    {
      if (t.v[a] < 0 || t.v[a] >= mesh.n_vertices())
      {
        throw std::runtime_error("vertex index out of range in tet " + std::to_string(i));
      }
      for (int b = a + 1; b < 4; ++b)
      {
        if (t.v[a] == t.v[b])
        {
          throw std::runtime_error("repeated vertex in tet " + std::to_string(i));
        }
      }
    }
    if (t.region < 1 || t.region > 4)
    {
      throw std::runtime_error("region tag out of range in tet " + std::to_string(i));
    }
    if (!(tet_volume(mesh, i) > 0.0))
    {
      throw std::runtime_error("nonpositive volume in tet " + std::to_string(i));
    }
    const double rho = norm(tet_barycenter(mesh, i));
    const double lo = (t.region == 1) ? 0.0 : mesh.radii[t.region - 2];
    const double hi = mesh.radii[t.region - 1];
    if (rho < lo - tol || rho > hi + tol)
    {
      throw std::runtime_error("tet " + std::to_string(i) +
                               " barycenter outside its region band");
    }
  }
}

std::string mesh_canonical_text(const Mesh &mesh)
{
  std::string out;
  out.reserve(64 * (mesh.vertices.size() + mesh.tets.size()) + 128);
  char buf[256];
  auto emit = [&](const char *fmt, auto... args)
  {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
  };
  out += "tmesh 1\n";
  emit("radii %.17g %.17g %.17g %.17g\n", mesh.radii[0], mesh.radii[1], mesh.radii[2],
       mesh.radii[3]);
  emit("nv %d\n", mesh.n_vertices());
  for (const auto &p : mesh.vertices)
  {
    emit("%.17g %.17g %.17g\n", p.x, p.y, p.z);
  }
  emit("nt %d\n", mesh.n_tets());
  for (const auto &t : mesh.tets)
  {
    emit("%d %d %d %d %d\n", t.v[0], t.v[1], t.v[2], t.v[3], t.region);
  }
  return out;
}

void save_mesh(const Mesh &mesh, const std::string &path)
{
  const std::string text = mesh_canonical_text(mesh);
  std::FILE *f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
  {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  const std::size_t written = std::fwrite(text.data(), 1, text.size(), f);
  if (std::fclose(f) != 0 || written != text.size())
  {
    throw std::runtime_error("write failure on " + path);
  }
}

namespace
{

struct LineReader
{
  std::ifstream in;
  std::string path;
  int line = 0;

  explicit LineReader(const std::string &p) : in(p), path(p)
  {
    if (!in)
    {
      throw std::runtime_error("cannot open " + p);
    }
  }

  std::istringstream next()
  {
    std::string s;
    if (!std::getline(in, s))
    {
      throw std::runtime_error(path + ":" + std::to_string(line + 1) +
                               ": parse error: unexpected end of file");
    }
    ++line;
    return std::istringstream(s);
  }

  [[noreturn]] void fail(const std::string &what) const
  {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": parse error: " + what);
  }
};

}  // namespace

Mesh load_mesh(const std::string &path)
{
  LineReader r(path);
  {
    auto s = r.next();
    std::string magic;
    int version = 0;
    if (!(s >> magic >> version) || magic != "tmesh" || version != 1)
    {
      r.fail("expected 'tmesh 1' header");
    }
  }
  Mesh mesh;
  {
    auto s = r.next();
    std::string key;
    if (!(s >> key >> mesh.radii[0] >> mesh.radii[1] >> mesh.radii[2] >> mesh.radii[3]) ||
        key != "radii")
    {
      r.fail("expected 'radii r1 r2 r3 r4'");
    }
  }
  int nv = 0;
  {
    auto s = r.next();
    std::string key;
    if (!(s >> key >> nv) || key != "nv" || nv < 0)
    {
      r.fail("expected 'nv N'");
    }
  }
  mesh.vertices.resize(nv);
  for (int i = 0; i < nv; ++i)
  {
    auto s = r.next();
    if (!(s >> mesh.vertices[i].x >> mesh.vertices[i].y >> mesh.vertices[i].z))
    {
      r.fail("expected vertex coordinates");
    }
  }
  int nt = 0;
  {
    auto s = r.next();
    std::string key;
    if (!(s >> key >> nt) || key != "nt" || nt < 0)
    {
      r.fail("expected 'nt M'");
    }
  }
  mesh.tets.resize(nt);
  for (int i = 0; i < nt; ++i)
  {
    auto s = r.next();
    auto &t = mesh.tets[i];
    if (!(s >> t.v[0] >> t.v[1] >> t.v[2] >> t.v[3] >> t.region))
    {
      r.fail("expected 'v0 v1 v2 v3 region'");
    }
    for (int a = 0; a < 4; ++a)
    {
      if (t.v[a] < 0 || t.v[a] >= nv)
      {
        r.fail("vertex index out of range");
      }
    }
    if (t.region < 1 || t.region > 4)
    {
      r.fail("region tag out of range");
    }
  }
  validate_mesh(mesh);
  return mesh;
}

int EdgeDofMap::n_boundary_edges() const
{
  int n = 0;
  for (auto b : boundary_edge)
  {
    n += b;
  }
  return n;
}

EdgeDofMap build_edge_dof_map(const Mesh &mesh)
{
  EdgeDofMap dof;
  dof.n_vertices = mesh.n_vertices();

  std::vector<std::array<int, 2>> all;
  all.reserve(mesh.tets.size() * 6);
  for (const auto &t : mesh.tets)
  {
    for (const auto &e : kTetEdges)
    {
      const auto mm = std::minmax(t.v[e[0]], t.v[e[1]]);
      all.push_back({mm.first, mm.second});
    }
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  dof.edges = std::move(all);

  auto edge_id = [&](int a, int b)
  {
    const auto mm = std::minmax(a, b);
    const std::array<int, 2> key = {mm.first, mm.second};
    const auto it = std::lower_bound(dof.edges.begin(), dof.edges.end(), key);
    return static_cast<int>(it - dof.edges.begin());
  };

  dof.tet_edge.resize(mesh.tets.size());
  dof.tet_sign.resize(mesh.tets.size());
  for (std::size_t i = 0; i < mesh.tets.size(); ++i)
  {
    const auto &t = mesh.tets[i];
    for (int k = 0; k < 6; ++k)
    {
      const int a = t.v[kTetEdges[k][0]];
      const int b = t.v[kTetEdges[k][1]];
      dof.tet_edge[i][k] = edge_id(a, b);
      dof.tet_sign[i][k] = static_cast<std::int8_t>(a < b ? 1 : -1);
    }
  }

  // Face scan: boundary faces belong to exactly one tet.
  std::vector<std::array<int, 3>> faces;
  faces.reserve(mesh.tets.size() * 4);
  for (const auto &t : mesh.tets)
  {
    std::array<int, 4> v = t.v;
    std::sort(v.begin(), v.end());
    faces.push_back({v[1], v[2], v[3]});
    faces.push_back({v[0], v[2], v[3]});
    faces.push_back({v[0], v[1], v[3]});
    faces.push_back({v[0], v[1], v[2]});
  }
  std::sort(faces.begin(), faces.end());
  dof.boundary_edge.assign(dof.edges.size(), 0);
  dof.boundary_vertex.assign(mesh.vertices.size(), 0);
  for (std::size_t i = 0; i < faces.size();)
  {
    std::size_t j = i;
    while (j < faces.size() && faces[j] == faces[i])
    {
      ++j;
    }
    const std::size_t count = j - i;
    if (count > 2)
    {
      throw std::runtime_error("non-manifold connectivity: face shared by more than two tets");
    }
    if (count == 1)
    {
      const auto &f = faces[i];
      dof.boundary_edge[edge_id(f[0], f[1])] = 1;
      dof.boundary_edge[edge_id(f[0], f[2])] = 1;
      dof.boundary_edge[edge_id(f[1], f[2])] = 1;
      dof.boundary_vertex[f[0]] = 1;
      dof.boundary_vertex[f[1]] = 1;
      dof.boundary_vertex[f[2]] = 1;
    }
    i = j;
  }
  return dof;
}

}  // namespace spherodyn
