#include "prismdg/mesh.hpp"

#include "prismdg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

namespace prismdg {

namespace {

double u01(std::mt19937_64& gen) {
  // explicit mapping keeps meshes bitwise reproducible across platforms
  return double(gen() >> 11) * 0x1.0p-53;
}

double wedge_volume_from_verts(const std::array<std::array<double, 3>, 6>& v) {
  const double xr = (v[1][0] - v[0][0]) / 2.0, yr = (v[1][1] - v[0][1]) / 2.0;
  const double xs = (v[2][0] - v[0][0]) / 2.0, ys = (v[2][1] - v[0][1]) / 2.0;
  const double G = xr * ys - xs * yr;
  const double b0 = (v[1][2] + v[2][2]) / 2.0, br = (v[1][2] - v[0][2]) / 2.0,
               bs = (v[2][2] - v[0][2]) / 2.0;
  const double a0 = (v[4][2] + v[5][2]) / 2.0, ar = (v[4][2] - v[3][2]) / 2.0,
               as = (v[5][2] - v[3][2]) / 2.0;
  const double j0 = G * (a0 - b0) / 2.0, jr = G * (ar - br) / 2.0, js = G * (as - bs) / 2.0;
  return 4.0 * j0 - (4.0 / 3.0) * (jr + js);
}

double tet_volume_from_verts(const std::array<std::array<double, 3>, 4>& v) {
  Eigen::Matrix3d A;
  for (int d = 0; d < 3; ++d) {
    A(d, 0) = v[1][d] - v[0][d];
    A(d, 1) = v[2][d] - v[0][d];
    A(d, 2) = v[3][d] - v[0][d];
  }
  return A.determinant() / 6.0;
}

bool wedge_is_valid(const std::array<std::array<double, 3>, 6>& v) {
  const double xr = (v[1][0] - v[0][0]) / 2.0, yr = (v[1][1] - v[0][1]) / 2.0;
  const double xs = (v[2][0] - v[0][0]) / 2.0, ys = (v[2][1] - v[0][1]) / 2.0;
  if (!(xr * ys - xs * yr > 0.0)) return false; // bottom triangle CCW from above
  for (int i = 0; i < 3; ++i)
    if (!(v[i + 3][2] - v[i][2] > 0.0)) return false; // top strictly above bottom
  return true;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

} // namespace

std::array<std::array<double, 3>, 6> HybridMesh::wedge_verts(int w) const {
  std::array<std::array<double, 3>, 6> v;
  for (int i = 0; i < 6; ++i) v[i] = vertices[wedges[w][i]];
  return v;
}

std::array<std::array<double, 3>, 4> HybridMesh::tet_verts(int t) const {
  std::array<std::array<double, 3>, 4> v;
  for (int i = 0; i < 4; ++i) v[i] = vertices[tets[t][i]];
  return v;
}

bool is_vertically_mapped(const std::array<std::array<double, 3>, 6>& v) {
  double diam = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      diam = std::max(diam, std::hypot(v[i][0] - v[j][0], v[i][1] - v[j][1],
                                       v[i][2] - v[j][2]));
  const double tol = 1e-12 * diam;
  for (int p = 0; p < 3; ++p) {
    if (std::abs(v[p][0] - v[p + 3][0]) > tol) return false;
    if (std::abs(v[p][1] - v[p + 3][1]) > tol) return false;
  }
  // co-planar top/bottom triangles are vertically mapped but have J = 0
  return std::abs(wedge_volume_from_verts(v)) > tol * diam * diam;
}

// ---------------------------------------------------------------------------
// generators
// ---------------------------------------------------------------------------

HybridMesh stack_layers(const std::vector<std::array<double, 2>>& xy,
                        const std::vector<std::array<int, 3>>& triangles,
                        const std::vector<LayerSpec>& layers) {
  if (layers.empty()) throw MeshError("stack_layers: no layers given");
  const int nv = (int)xy.size();
  for (const auto& ls : layers) {
    if ((int)ls.z_bottom.size() != nv || (int)ls.z_top.size() != nv)
      throw MeshError("stack_layers: layer surface size does not match triangulation");
    if (ls.sublayers < 1) throw MeshError("stack_layers: sublayers must be >= 1");
    for (int v = 0; v < nv; ++v)
      if (!(ls.z_top[v] > ls.z_bottom[v]))
        throw MeshError("stack_layers: inverted layer at surface vertex " +
                        std::to_string(v + 1));
  }
  for (size_t l = 1; l < layers.size(); ++l)
    for (int v = 0; v < nv; ++v)
      if (std::abs(layers[l].z_bottom[v] - layers[l - 1].z_top[v]) > 1e-12)
        throw MeshError("stack_layers: interface mismatch between layers " +
                        std::to_string(l) + " and " + std::to_string(l + 1) +
                        " at surface vertex " + std::to_string(v + 1));

  HybridMesh mesh;
  // interface vertex sheets; consecutive layers share theirs
  std::vector<int> below(nv); // vertex ids of the current lower sheet
  for (int v = 0; v < nv; ++v) {
    mesh.vertices.push_back({xy[v][0], xy[v][1], layers[0].z_bottom[v]});
    below[v] = v;
  }
  for (const auto& ls : layers) {
    for (int m = 1; m <= ls.sublayers; ++m) {
      const double f = double(m) / ls.sublayers;
      std::vector<int> above(nv);
      for (int v = 0; v < nv; ++v) {
        const double z = ls.z_bottom[v] + f * (ls.z_top[v] - ls.z_bottom[v]);
        above[v] = (int)mesh.vertices.size();
        mesh.vertices.push_back({xy[v][0], xy[v][1], z});
      }
      for (const auto& t : triangles) {
        mesh.wedges.push_back({below[t[0]], below[t[1]], below[t[2]], above[t[0]],
                               above[t[1]], above[t[2]]});
        mesh.media.push_back(ls.media);
      }
      below = above;
    }
  }
  validate_mesh(mesh);
  return mesh;
}

HybridMesh extrude_layer(const SurfaceTriangulation& surface, int layers, Media media) {
  LayerSpec ls;
  ls.z_bottom = surface.z_bottom;
  ls.z_top = surface.z_top;
  ls.sublayers = layers;
  ls.media = media;
  return stack_layers(surface.vertices, surface.triangles, {ls});
}

namespace {

// grid helpers for the structured boxes
struct Grid {
  int nx, ny, nz;
  int vid(int i, int j, int k) const { return (k * (ny + 1) + j) * (nx + 1) + i; }
};

} // namespace

HybridMesh structured_hybrid_box(int nx, int ny, int nz_wedge, int nz_tet, Media wedge_media,
                                 Media tet_media) {
  if (nx < 1 || ny < 1 || nz_wedge < 0 || nz_tet < 0 || nz_wedge + nz_tet < 1)
    throw MeshError("structured_hybrid_box: invalid cell counts");
  const int nz = nz_wedge + nz_tet;
  Grid g{nx, ny, nz};
  HybridMesh mesh;
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices.push_back({-1.0 + 2.0 * i / nx, -1.0 + 2.0 * j / ny,
                                 -1.0 + 2.0 * k / nz});

  // wedge region on top; every cell quad is split along its (i,j)->(i+1,j+1)
  // diagonal, matching the diagonals the Kuhn tet split induces below
  for (int k = nz_tet; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const int b00 = g.vid(i, j, k), b10 = g.vid(i + 1, j, k);
        const int b11 = g.vid(i + 1, j + 1, k), b01 = g.vid(i, j + 1, k);
        const int t00 = g.vid(i, j, k + 1), t10 = g.vid(i + 1, j, k + 1);
        const int t11 = g.vid(i + 1, j + 1, k + 1), t01 = g.vid(i, j + 1, k + 1);
        mesh.wedges.push_back({b00, b10, b11, t00, t10, t11});
        mesh.wedges.push_back({b00, b11, b01, t00, t11, t01});
        mesh.media.push_back(wedge_media);
        mesh.media.push_back(wedge_media);
      }

  // Kuhn 6-tet split, identical orientation in every hex
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < nz_tet; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        for (const auto& p : perms) {
          int c[3] = {0, 0, 0};
          std::array<int, 4> tet;
          tet[0] = g.vid(i, j, k);
          for (int step = 0; step < 3; ++step) {
            c[p[step]] = 1;
            tet[step + 1] = g.vid(i + c[0], j + c[1], k + c[2]);
          }
          std::array<std::array<double, 3>, 4> tv;
          for (int q = 0; q < 4; ++q) tv[q] = mesh.vertices[tet[q]];
          if (tet_volume_from_verts(tv) < 0.0) std::swap(tet[2], tet[3]);
          mesh.tets.push_back(tet);
        }
      }
  mesh.media.insert(mesh.media.end(), mesh.tets.size(), tet_media);
  validate_mesh(mesh);
  return mesh;
}

HybridMesh structured_wedge_box(int n, Media media) {
  return structured_hybrid_box(n, n, n, 0, media, media);
}

HybridMesh unstructured_wedge_box(int n, double xy_jitter, double z_amplitude,
                                  std::uint64_t seed, Media media) {
  if (xy_jitter < 0.0 || xy_jitter > 0.3)
    throw ConfigError("unstructured_wedge_box: xy_jitter must be in [0, 0.3]");
  const double h = 2.0 / n;
  std::vector<std::array<double, 2>> xy((n + 1) * (n + 1));
  std::mt19937_64 gen(seed);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double x = -1.0 + i * h, y = -1.0 + j * h;
      const double ux = 2.0 * u01(gen) - 1.0;
      const double uy = 2.0 * u01(gen) - 1.0;
      if (i > 0 && i < n) x += xy_jitter * h * ux;
      if (j > 0 && j < n) y += xy_jitter * h * uy;
      xy[j * (n + 1) + i] = {x, y};
    }
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i, b = j * (n + 1) + i + 1;
      const int c = (j + 1) * (n + 1) + i + 1, d = (j + 1) * (n + 1) + i;
      tris.push_back({a, b, c});
      tris.push_back({a, c, d});
    }
  LayerSpec ls;
  ls.z_bottom.assign(xy.size(), -1.0);
  ls.z_top.assign(xy.size(), 1.0);
  ls.sublayers = n;
  ls.media = media;
  HybridMesh mesh = stack_layers(xy, tris, {ls});
  if (z_amplitude > 0.0)
    mesh = perturb_vertically(mesh, z_amplitude, seed ^ 0x9e3779b97f4a7c15ull);
  return mesh;
}

namespace {

// boundary faces with a non-vertical normal pin their vertices: moving those
// heights would change the domain shape
std::vector<bool> movable_vertices(const HybridMesh& mesh) {
  std::map<std::vector<int>, int> face_count;
  const int ne = mesh.num_elements();
  for (int e = 0; e < ne; ++e)
    for (int f = 0; f < mesh.num_faces(e); ++f) {
      auto ids = face_vertex_ids(mesh, e, f);
      std::sort(ids.begin(), ids.end());
      face_count[ids] += 1;
    }
  std::vector<bool> movable(mesh.vertices.size(), true);
  for (int e = 0; e < ne; ++e)
    for (int f = 0; f < mesh.num_faces(e); ++f) {
      auto ids = face_vertex_ids(mesh, e, f);
      auto key = ids;
      std::sort(key.begin(), key.end());
      if (face_count[key] != 1) continue; // interior
      if (ids.size() == 4) continue;      // quad faces of vertically mapped wedges are vertical
      const auto& a = mesh.vertices[ids[0]];
      const auto& b = mesh.vertices[ids[1]];
      const auto& c = mesh.vertices[ids[2]];
      const double ux = b[0] - a[0], uy = b[1] - a[1], uz = b[2] - a[2];
      const double vx = c[0] - a[0], vy = c[1] - a[1], vz = c[2] - a[2];
      const double nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
      const double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
      if (std::abs(nz) > 1e-12 * nn)
        for (int id : ids) movable[id] = false;
    }
  return movable;
}

std::vector<double> local_layer_height(const HybridMesh& mesh) {
  std::vector<double> h(mesh.vertices.size(), std::numeric_limits<double>::max());
  for (int w = 0; w < mesh.num_wedges(); ++w)
    for (int p = 0; p < 3; ++p) {
      const int lo = mesh.wedges[w][p], hi = mesh.wedges[w][p + 3];
      const double dz = std::abs(mesh.vertices[hi][2] - mesh.vertices[lo][2]);
      h[lo] = std::min(h[lo], dz);
      h[hi] = std::min(h[hi], dz);
    }
  for (const auto& t : mesh.tets) {
    double zmin = 1e300, zmax = -1e300;
    for (int q = 0; q < 4; ++q) {
      zmin = std::min(zmin, mesh.vertices[t[q]][2]);
      zmax = std::max(zmax, mesh.vertices[t[q]][2]);
    }
    for (int q = 0; q < 4; ++q) h[t[q]] = std::min(h[t[q]], zmax - zmin);
  }
  return h;
}

bool all_elements_valid(const HybridMesh& mesh) {
  for (int w = 0; w < mesh.num_wedges(); ++w)
    if (!wedge_is_valid(mesh.wedge_verts(w))) return false;
  for (int t = 0; t < mesh.num_tets(); ++t)
    if (!(tet_volume_from_verts(mesh.tet_verts(t)) > 0.0)) return false;
  return true;
}

} // namespace

HybridMesh perturb_vertically(const HybridMesh& mesh, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude >= 0.45)
    throw ConfigError("perturb_vertically: amplitude must be in [0, 0.45)");
  if (amplitude == 0.0) return mesh;

  const auto movable = movable_vertices(mesh);
  const auto height = local_layer_height(mesh);

  double amp = amplitude;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    HybridMesh out = mesh;
    std::mt19937_64 gen(seed);
    for (size_t v = 0; v < out.vertices.size(); ++v) {
      const double u = 2.0 * u01(gen) - 1.0; // draw for every vertex: keeps the
                                             // sequence independent of movability
      if (!movable[v] || height[v] == std::numeric_limits<double>::max()) continue;
      out.vertices[v][2] += amp * height[v] * u;
    }
    if (all_elements_valid(out)) return out;
    amp *= 0.5;
  }
  throw MeshError("perturb_vertically: could not keep elements valid after 5 halvings");
}

HybridMesh arnold_wedge_box(int n, double delta, Media media) {
  if (!(delta >= 0.0 && delta < 0.5))
    throw ConfigError("arnold_wedge_box: delta must be in [0, 0.5)");
  HybridMesh mesh = structured_wedge_box(n, media);
  const double hz = 2.0 / n;
  for (auto& v : mesh.vertices) {
    const int i = (int)std::lround((v[0] + 1.0) / 2.0 * n);
    const int j = (int)std::lround((v[1] + 1.0) / 2.0 * n);
    const int m = (int)std::lround((v[2] + 1.0) / 2.0 * n);
    if (m == 0 || m == n) continue; // keep the box caps flat
    const int sign = ((i + j + m) % 2 == 0) ? 1 : -1;
    v[2] += sign * delta * hz;
  }
  validate_mesh(mesh);
  return mesh;
}

// ---------------------------------------------------------------------------
// connectivity
// ---------------------------------------------------------------------------

std::vector<int> face_vertex_ids(const HybridMesh& mesh, int e, int f) {
  if (mesh.kind(e) == ElemKind::wedge) {
    const auto& w = mesh.wedges[e];
    switch (f) {
      case 0: return {w[0], w[1], w[2]};
      case 1: return {w[3], w[4], w[5]};
      case 2: return {w[0], w[1], w[4], w[3]};
      case 3: return {w[1], w[2], w[5], w[4]};
      case 4: return {w[2], w[0], w[3], w[5]};
    }
  } else {
    const auto& t = mesh.tets[e - mesh.num_wedges()];
    switch (f) {
      case 0: return {t[0], t[1], t[2]};
      case 1: return {t[0], t[1], t[3]};
      case 2: return {t[1], t[2], t[3]};
      case 3: return {t[0], t[2], t[3]};
    }
  }
  throw MeshError("face_vertex_ids: bad face index");
}

std::vector<std::array<double, 3>> face_node_coords(const HybridMesh& mesh,
                                                    const References& refs, int e, int f) {
  std::vector<std::array<double, 3>> out;
  if (mesh.kind(e) == ElemKind::wedge) {
    const auto v = mesh.wedge_verts(e);
    for (int id : refs.wedge.face_nodes[f])
      out.push_back(wedge_map(v, refs.wedge.r[id], refs.wedge.s[id], refs.wedge.t[id]));
  } else {
    const auto tv = mesh.tet_verts(e - mesh.num_wedges());
    for (int id : refs.tet.face_nodes[f])
      out.push_back(tet_map(tv, refs.tet.r[id], refs.tet.s[id], refs.tet.t[id]));
  }
  return out;
}

Connectivity build_connectivity(const HybridMesh& mesh, const References& refs) {
  const int ne = mesh.num_elements();
  Connectivity conn;
  conn.elem.resize(ne);
  for (int e = 0; e < ne; ++e) conn.elem[e].resize(mesh.num_faces(e));

  std::map<std::vector<int>, std::vector<std::pair<int, int>>> owners;
  for (int e = 0; e < ne; ++e)
    for (int f = 0; f < mesh.num_faces(e); ++f) {
      auto key = face_vertex_ids(mesh, e, f);
      std::sort(key.begin(), key.end());
      owners[key].push_back({e, f});
    }

  std::vector<double> diam(ne);
  for (int e = 0; e < ne; ++e) {
    const auto ids = face_vertex_ids(mesh, e, 0);
    double d = 0.0;
    const auto& vs = mesh.vertices;
    const auto all = (mesh.kind(e) == ElemKind::wedge)
                         ? std::vector<int>(mesh.wedges[e].begin(), mesh.wedges[e].end())
                         : std::vector<int>(mesh.tets[e - mesh.num_wedges()].begin(),
                                            mesh.tets[e - mesh.num_wedges()].end());
    for (size_t i = 0; i < all.size(); ++i)
      for (size_t j = i + 1; j < all.size(); ++j)
        d = std::max(d, std::hypot(vs[all[i]][0] - vs[all[j]][0],
                                   vs[all[i]][1] - vs[all[j]][1],
                                   vs[all[i]][2] - vs[all[j]][2]));
    diam[e] = d;
  }

  for (const auto& [key, list] : owners) {
    if (list.size() == 1) {
      const auto [e, f] = list[0];
      auto it = mesh.boundary_tags.find({e, f});
      conn.elem[e][f].tag = (it != mesh.boundary_tags.end()) ? it->second : kReflectiveTag;
      conn.num_boundary_faces += 1;
      continue;
    }
    if (list.size() != 2)
      throw MeshError("mesh is not manifold: face shared by " +
                      std::to_string(list.size()) + " elements");
    const auto [ea, fa] = list[0];
    const auto [eb, fb] = list[1];
    if (key.size() == 4 &&
        (mesh.kind(ea) != ElemKind::wedge || mesh.kind(eb) != ElemKind::wedge))
      throw MeshError("quad faces may only pair wedge elements");

    const auto ca = face_node_coords(mesh, refs, ea, fa);
    const auto cb = face_node_coords(mesh, refs, eb, fb);
    if (ca.size() != cb.size())
      throw MeshError("face node count mismatch between elements " + std::to_string(ea + 1) +
                      " and " + std::to_string(eb + 1));
    const double tol = 1e-10 * std::max(diam[ea], diam[eb]);
    const int nfp = (int)ca.size();
    std::vector<int> perm_ab(nfp, -1), perm_ba(nfp, -1);
    std::vector<bool> used(nfp, false);
    for (int i = 0; i < nfp; ++i) {
      int best = -1;
      double bestd = 1e300;
      for (int j = 0; j < nfp; ++j) {
        if (used[j]) continue;
        const double d = std::hypot(ca[i][0] - cb[j][0], ca[i][1] - cb[j][1],
                                    ca[i][2] - cb[j][2]);
        if (d < bestd) {
          bestd = d;
          best = j;
        }
      }
      if (best < 0 || bestd > tol)
        throw MeshError("face node matching failed between element " +
                        std::to_string(ea + 1) + " face " + std::to_string(fa + 1) +
                        " and element " + std::to_string(eb + 1) + " face " +
                        std::to_string(fb + 1) + " (distance " + fmt17(bestd) + ")");
      perm_ab[i] = best;
      perm_ba[best] = i;
      used[best] = true;
    }
    conn.elem[ea][fa] = {eb, fb, 0, perm_ab};
    conn.elem[eb][fb] = {ea, fa, 0, perm_ba};
    conn.num_interior_pairs += 1;
  }
  return conn;
}

// ---------------------------------------------------------------------------
// validation & io
// ---------------------------------------------------------------------------

void validate_mesh(const HybridMesh& mesh) {
  const int nv = (int)mesh.vertices.size();
  if ((int)mesh.media.size() != mesh.num_elements())
    throw MeshError("mesh: media count does not match element count");
  for (int w = 0; w < mesh.num_wedges(); ++w) {
    for (int q = 0; q < 6; ++q)
      if (mesh.wedges[w][q] < 0 || mesh.wedges[w][q] >= nv)
        throw MeshError("wedge " + std::to_string(w + 1) + ": vertex index out of range");
    const auto v = mesh.wedge_verts(w);
    if (!is_vertically_mapped(v))
      throw MeshError("wedge " + std::to_string(w + 1) + " is not vertically mapped");
    if (!wedge_is_valid(v))
      throw MeshError("wedge " + std::to_string(w + 1) +
                      " violates the vertex ordering convention (counterclockwise bottom, "
                      "top above bottom)");
  }
  for (int t = 0; t < mesh.num_tets(); ++t) {
    for (int q = 0; q < 4; ++q)
      if (mesh.tets[t][q] < 0 || mesh.tets[t][q] >= nv)
        throw MeshError("tet " + std::to_string(t + 1) + ": vertex index out of range");
    if (!(tet_volume_from_verts(mesh.tet_verts(t)) > 0.0))
      throw MeshError("tet " + std::to_string(t + 1) + " has non-positive volume");
  }
  for (int e = 0; e < mesh.num_elements(); ++e) {
    if (!(mesh.media[e].rho > 0.0))
      throw MeshError("element " + std::to_string(e + 1) + ": density must be positive");
    if (!(mesh.media[e].kappa > 0.0))
      throw MeshError("element " + std::to_string(e + 1) + ": bulk modulus must be positive");
  }
}

double mesh_volume(const HybridMesh& mesh) {
  double vol = 0.0;
  for (int w = 0; w < mesh.num_wedges(); ++w) vol += wedge_volume_from_verts(mesh.wedge_verts(w));
  for (int t = 0; t < mesh.num_tets(); ++t) vol += tet_volume_from_verts(mesh.tet_verts(t));
  return vol;
}

namespace {

struct LineReader {
  std::ifstream in;
  std::string path;
  int line_no = 0;
  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) throw MeshError("cannot open " + p);
  }
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      const auto h = line.find('#');
      if (h != std::string::npos) line = line.substr(0, h);
      bool blank = true;
      for (char c : line)
        if (!std::isspace((unsigned char)c)) blank = false;
      if (!blank) return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw MeshError(path + ":" + std::to_string(line_no) + ": " + msg);
  }
};

int parse_count(LineReader& r) {
  std::string line;
  if (!r.next(line)) r.fail("unexpected end of file, expected a count");
  std::istringstream ss(line);
  long long n;
  if (!(ss >> n) || n < 0) r.fail("expected a non-negative count");
  return (int)n;
}

} // namespace

HybridMesh load_mesh(const std::string& path) {
  LineReader r(path);
  HybridMesh mesh;
  std::string line;
  bool saw_media = false;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string section;
    ss >> section;
    if (section == "$Vertices") {
      const int n = parse_count(r);
      mesh.vertices.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of vertex list");
        std::istringstream vs(line);
        if (!(vs >> mesh.vertices[i][0] >> mesh.vertices[i][1] >> mesh.vertices[i][2]))
          r.fail("malformed vertex record");
      }
    } else if (section == "$Wedges") {
      const int n = parse_count(r);
      mesh.wedges.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of wedge list");
        std::istringstream vs(line);
        for (int q = 0; q < 6; ++q) {
          int id;
          if (!(vs >> id)) r.fail("malformed wedge record");
          mesh.wedges[i][q] = id - 1;
        }
      }
    } else if (section == "$Tets") {
      const int n = parse_count(r);
      mesh.tets.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of tet list");
        std::istringstream vs(line);
        for (int q = 0; q < 4; ++q) {
          int id;
          if (!(vs >> id)) r.fail("malformed tet record");
          mesh.tets[i][q] = id - 1;
        }
      }
    } else if (section == "$Media") {
      const int n = parse_count(r);
      mesh.media.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of media list");
        std::istringstream vs(line);
        if (!(vs >> mesh.media[i].rho >> mesh.media[i].kappa)) r.fail("malformed media record");
      }
      saw_media = true;
    } else if (section == "$Boundary") {
      const int n = parse_count(r);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of boundary list");
        std::istringstream vs(line);
        int e, f, tag;
        if (!(vs >> e >> f >> tag)) r.fail("malformed boundary record");
        mesh.boundary_tags[{e - 1, f - 1}] = tag;
      }
    } else {
      r.fail("unknown section '" + section + "'");
    }
  }
  if (!saw_media) mesh.media.assign(mesh.num_elements(), Media{});
  validate_mesh(mesh);
  return mesh;
}

void save_mesh(const HybridMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write " + path);
  out << "$Vertices\n" << mesh.vertices.size() << "\n";
  for (const auto& v : mesh.vertices)
    out << fmt17(v[0]) << " " << fmt17(v[1]) << " " << fmt17(v[2]) << "\n";
  out << "$Wedges\n" << mesh.wedges.size() << "\n";
  for (const auto& w : mesh.wedges) {
    for (int q = 0; q < 6; ++q) out << w[q] + 1 << (q == 5 ? '\n' : ' ');
  }
  out << "$Tets\n" << mesh.tets.size() << "\n";
  for (const auto& t : mesh.tets) {
    for (int q = 0; q < 4; ++q) out << t[q] + 1 << (q == 3 ? '\n' : ' ');
  }
  out << "$Media\n" << mesh.media.size() << "\n";
  for (const auto& m : mesh.media) out << fmt17(m.rho) << " " << fmt17(m.kappa) << "\n";
  if (!mesh.boundary_tags.empty()) {
    out << "$Boundary\n" << mesh.boundary_tags.size() << "\n";
    for (const auto& [ef, tag] : mesh.boundary_tags)
      out << ef.first + 1 << " " << ef.second + 1 << " " << tag << "\n";
  }
}

SurfaceTriangulation load_surface(const std::string& path) {
  LineReader r(path);
  SurfaceTriangulation s;
  std::string line;
  while (r.next(line)) {
    std::istringstream ss(line);
    std::string section;
    ss >> section;
    if (section == "$SurfaceVertices") {
      const int n = parse_count(r);
      s.vertices.resize(n);
      s.z_bottom.resize(n);
      s.z_top.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of surface vertex list");
        std::istringstream vs(line);
        if (!(vs >> s.vertices[i][0] >> s.vertices[i][1] >> s.z_bottom[i] >> s.z_top[i]))
          r.fail("malformed surface vertex record");
      }
    } else if (section == "$SurfaceTriangles") {
      const int n = parse_count(r);
      s.triangles.resize(n);
      for (int i = 0; i < n; ++i) {
        if (!r.next(line)) r.fail("unexpected end of surface triangle list");
        std::istringstream vs(line);
        for (int q = 0; q < 3; ++q) {
          int id;
          if (!(vs >> id)) r.fail("malformed surface triangle record");
          s.triangles[i][q] = id - 1;
        }
      }
    } else {
      r.fail("unknown section '" + section + "'");
    }
  }
  return s;
}

} // namespace prismdg
