#include "doctest.h"

#include "prismdg/geometry.hpp"
#include "prismdg/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace prismdg;

namespace {

SurfaceTriangulation two_triangle_surface(double zb, double zt) {
  SurfaceTriangulation s;
  s.vertices = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  s.z_bottom.assign(4, zb);
  s.z_top.assign(4, zt);
  s.triangles = {{0, 1, 2}, {0, 2, 3}};
  return s;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("vertically mapped predicate") {
  std::array<std::array<double, 3>, 6> v = {
      {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {1, -1, 1}, {-1, 1, 1}}};
  CHECK(is_vertically_mapped(v));

  auto shifted = v;
  shifted[3][0] += 0.1;
  CHECK(!is_vertically_mapped(shifted));

  // arbitrary top heights keep the predicate as long as the volume is positive
  auto slanted = v;
  slanted[3][2] = 1.0;
  slanted[4][2] = 2.0;
  slanted[5][2] = 0.5;
  CHECK(is_vertically_mapped(slanted));
  const References refs = build_references(1);
  CHECK(wedge_geometry(slanted, refs).volume > 0.0);

  auto flat = v;
  for (int i = 3; i < 6; ++i) flat[i][2] = -1.0; // coplanar faces, J = 0
  CHECK(!is_vertically_mapped(flat));
}

TEST_CASE("flat extrusion produces stacked identical layers") {
  const HybridMesh mesh = extrude_layer(two_triangle_surface(0.0, 1.0), 2);
  CHECK(mesh.num_wedges() == 4);
  CHECK(mesh.num_tets() == 0);
  // interface plane sits exactly at z = 0.5
  int at_half = 0;
  for (const auto& p : mesh.vertices)
    if (p[2] == 0.5) ++at_half;
  CHECK(at_half == 4);
  CHECK(mesh_volume(mesh) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("extrusion interpolates the bounding surfaces linearly") {
  SurfaceTriangulation s = two_triangle_surface(0.0, 0.0);
  for (size_t i = 0; i < s.vertices.size(); ++i)
    s.z_top[i] = 1.0 + 0.2 * std::sin(M_PI * s.vertices[i][0]);
  const int L = 4;
  const HybridMesh mesh = extrude_layer(s, L);
  CHECK(mesh.num_wedges() == 2 * L);
  // every vertex height matches the interpolation formula
  for (const auto& p : mesh.vertices) {
    int vid = -1;
    for (size_t i = 0; i < s.vertices.size(); ++i)
      if (s.vertices[i][0] == p[0] && s.vertices[i][1] == p[1]) vid = (int)i;
    REQUIRE(vid >= 0);
    bool matches = false;
    for (int m = 0; m <= L; ++m) {
      const double z = s.z_bottom[vid] + (double(m) / L) * (s.z_top[vid] - s.z_bottom[vid]);
      if (std::abs(z - p[2]) < 1e-13) matches = true;
    }
    CHECK(matches);
  }
  for (int w = 0; w < mesh.num_wedges(); ++w) CHECK(is_vertically_mapped(mesh.wedge_verts(w)));
}

TEST_CASE("wavy-top layer keeps all wedges vertically mapped with positive volume") {
  SurfaceTriangulation s;
  const int n = 6;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      s.vertices.push_back({-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n});
      s.z_bottom.push_back(0.0);
      s.z_top.push_back(1.0 + 0.25 * std::sin(M_PI * (-1.0 + 2.0 * i / n)) *
                                  std::cos(M_PI * (-1.0 + 2.0 * j / n)));
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int a = j * (n + 1) + i, b = a + 1, c = a + n + 2, d = a + n + 1;
      s.triangles.push_back({a, b, c});
      s.triangles.push_back({a, c, d});
    }
  const HybridMesh mesh = extrude_layer(s, 3);
  const References refs = build_references(1);
  for (int w = 0; w < mesh.num_wedges(); ++w) {
    CHECK(is_vertically_mapped(mesh.wedge_verts(w)));
    CHECK(wedge_geometry(mesh.wedge_verts(w), refs).volume > 0.0);
  }
}

TEST_CASE("stacked layers share interfaces and carry their media") {
  const auto s = two_triangle_surface(0.0, 1.0);
  std::vector<LayerSpec> layers(2);
  layers[0].z_bottom.assign(4, 0.0);
  layers[0].z_top.assign(4, 1.0);
  layers[0].sublayers = 1;
  layers[0].media = {1.0, 1.0};
  layers[1].z_bottom.assign(4, 1.0);
  layers[1].z_top.assign(4, 2.0);
  layers[1].sublayers = 1;
  layers[1].media = {1.0, 4.0};
  const HybridMesh mesh = stack_layers(s.vertices, s.triangles, layers);
  CHECK(mesh.num_wedges() == 4);
  CHECK(mesh.media[0].wavespeed() == doctest::Approx(1.0));
  CHECK(mesh.media[2].wavespeed() == doctest::Approx(2.0)); // c jumps 1 -> 2
  // interface vertices are shared, not duplicated
  CHECK(mesh.vertices.size() == 12);

  // three flat layers of a unit cube: volume is exact
  std::vector<std::array<double, 2>> xy = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::array<int, 3>> tris = {{0, 1, 2}, {0, 2, 3}};
  std::vector<LayerSpec> unit(3);
  for (int l = 0; l < 3; ++l) {
    unit[l].z_bottom.assign(4, l / 3.0);
    unit[l].z_top.assign(4, (l + 1) / 3.0);
    unit[l].sublayers = 1;
  }
  const HybridMesh cube = stack_layers(xy, tris, unit);
  CHECK(cube.num_wedges() == 6);
  CHECK(mesh_volume(cube) == doctest::Approx(1.0).epsilon(1e-13));

  // mismatched interfaces must be rejected
  auto broken = layers;
  broken[1].z_bottom.assign(4, 1.01);
  CHECK_THROWS_AS(stack_layers(s.vertices, s.triangles, broken), MeshError);

  // inverted layer reports the offending vertex
  auto inverted = layers;
  inverted[0].z_top[2] = -0.5;
  try {
    stack_layers(s.vertices, s.triangles, inverted);
    CHECK(false);
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()).find("vertex 3") != std::string::npos);
  }
}

TEST_CASE("extrusion commutes with flat stacking") {
  const auto s = two_triangle_surface(0.0, 1.0);
  const HybridMesh a = extrude_layer(s, 3);
  std::vector<LayerSpec> layers(3);
  for (int l = 0; l < 3; ++l) {
    layers[l].z_bottom.assign(4, l / 3.0);
    layers[l].z_top.assign(4, (l + 1) / 3.0);
    layers[l].sublayers = 1;
  }
  const HybridMesh b = stack_layers(s.vertices, s.triangles, layers);
  REQUIRE(a.vertices.size() == b.vertices.size());
  REQUIRE(a.wedges.size() == b.wedges.size());
  for (size_t v = 0; v < a.vertices.size(); ++v)
    for (int d = 0; d < 3; ++d) CHECK(std::abs(a.vertices[v][d] - b.vertices[v][d]) < 1e-12);
}

TEST_CASE("structured boxes: counts, volume, and watertightness") {
  const HybridMesh hybrid = structured_hybrid_box(1, 1, 1, 1);
  CHECK(hybrid.num_wedges() == 2);
  CHECK(hybrid.num_tets() == 6);
  CHECK(mesh_volume(hybrid) == doctest::Approx(8.0).epsilon(1e-13));

  const HybridMesh wedges = structured_wedge_box(2);
  CHECK(wedges.num_wedges() == 16);
  CHECK(mesh_volume(wedges) == doctest::Approx(8.0).epsilon(1e-13));

  const HybridMesh tets = structured_hybrid_box(2, 2, 0, 2);
  CHECK(tets.num_tets() == 48);
  CHECK(mesh_volume(tets) == doctest::Approx(8.0).epsilon(1e-13));
  // watertight: every interior face has exactly one partner
  const References refs = build_references(1);
  const Connectivity conn = build_connectivity(tets, refs);
  CHECK(conn.num_boundary_faces == 2 * 4 * 6); // two triangles per boundary cell face
  CHECK(conn.num_interior_pairs == (48 * 4 - conn.num_boundary_faces) / 2);
}

TEST_CASE("hybrid interface faces pair wedges with tets exactly") {
  const HybridMesh mesh = structured_hybrid_box(2, 2, 1, 1);
  const References refs = build_references(3);
  const Connectivity conn = build_connectivity(mesh, refs);
  int wedge_tet_pairs = 0;
  for (int w = 0; w < mesh.num_wedges(); ++w) {
    const auto& fc = conn.elem[w][0]; // bottom tri face
    REQUIRE(fc.nbr >= 0);
    CHECK(mesh.kind(fc.nbr) == ElemKind::tet);
    ++wedge_tet_pairs;
  }
  CHECK(wedge_tet_pairs == 8);
}

TEST_CASE("connectivity basics") {
  const References refs = build_references(2);
  // a single wedge has five boundary faces
  SurfaceTriangulation s;
  s.vertices = {{0, 0}, {1, 0}, {0, 1}};
  s.z_bottom.assign(3, 0.0);
  s.z_top.assign(3, 1.0);
  s.triangles = {{0, 1, 2}};
  const HybridMesh single = extrude_layer(s, 1);
  const Connectivity cs = build_connectivity(single, refs);
  CHECK(cs.num_boundary_faces == 5);
  CHECK(cs.num_interior_pairs == 0);
  for (int f = 0; f < 5; ++f) CHECK(cs.elem[0][f].tag == kReflectiveTag);

  // two stacked wedges: one interior pair, identity permutation
  const HybridMesh stacked = extrude_layer(s, 2);
  const Connectivity c2 = build_connectivity(stacked, refs);
  CHECK(c2.num_interior_pairs == 1);
  const auto& fc = c2.elem[0][1]; // top face of the lower wedge
  REQUIRE(fc.nbr == 1);
  CHECK(fc.nbr_face == 0);
  for (size_t i = 0; i < fc.perm.size(); ++i) CHECK(fc.perm[i] == (int)i);
}

TEST_CASE("vertical perturbation: determinism, validity, and fixed caps") {
  const HybridMesh base = structured_wedge_box(2);
  const HybridMesh a = perturb_vertically(base, 0.3, 7);
  const HybridMesh b = perturb_vertically(base, 0.3, 7);
  REQUIRE(a.vertices.size() == b.vertices.size());
  for (size_t v = 0; v < a.vertices.size(); ++v)
    CHECK(a.vertices[v][2] == b.vertices[v][2]); // bitwise reproducible

  const HybridMesh c = perturb_vertically(base, 0.0, 7);
  for (size_t v = 0; v < c.vertices.size(); ++v)
    CHECK(c.vertices[v][2] == base.vertices[v][2]);

  const References refs = build_references(2);
  bool some_nonconstant_j = false;
  for (int w = 0; w < a.num_wedges(); ++w) {
    CHECK(is_vertically_mapped(a.wedge_verts(w)));
    const ElementGeometry g = wedge_geometry(a.wedge_verts(w), refs);
    if (std::abs(g.j_r) + std::abs(g.j_s) > 1e-8) some_nonconstant_j = true;
  }
  CHECK(some_nonconstant_j);

  // box caps stay flat
  for (const auto& p : a.vertices)
    if (std::abs(std::abs(p[2]) - 1.0) < 0.4) CHECK(std::abs(std::abs(p[2]) - 1.0) < 1e-14);

  CHECK_THROWS_AS(perturb_vertically(base, 0.5, 7), ConfigError);
}

TEST_CASE("alternating displacement keeps volume and validity") {
  for (int n : {2, 4}) {
    const HybridMesh m = arnold_wedge_box(n, 0.25);
    CHECK(mesh_volume(m) == doctest::Approx(8.0).epsilon(1e-12));
    for (int w = 0; w < m.num_wedges(); ++w) CHECK(is_vertically_mapped(m.wedge_verts(w)));
    // the displacement pattern actually moved interior interfaces
    bool moved = false;
    for (const auto& p : m.vertices)
      if (std::abs(p[2]) < 0.99 && std::abs(std::remainder(p[2] + 1.0, 2.0 / n)) > 1e-12)
        moved = true;
    CHECK(moved);
  }
}

TEST_CASE("mesh file round trip") {
  const HybridMesh mesh = structured_hybrid_box(1, 1, 1, 1, {1.0, 1.0}, {1.5, 3.0});
  const std::string path = tmp_path("prismdg_roundtrip.mesh");
  save_mesh(mesh, path);
  const HybridMesh loaded = load_mesh(path);
  REQUIRE(loaded.vertices.size() == mesh.vertices.size());
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    for (int d = 0; d < 3; ++d) CHECK(loaded.vertices[v][d] == mesh.vertices[v][d]);
  REQUIRE(loaded.wedges.size() == mesh.wedges.size());
  REQUIRE(loaded.tets.size() == mesh.tets.size());
  for (size_t e = 0; e < mesh.media.size(); ++e) {
    CHECK(loaded.media[e].rho == mesh.media[e].rho);
    CHECK(loaded.media[e].kappa == mesh.media[e].kappa);
  }
  std::filesystem::remove(path);
}

TEST_CASE("loader rejects invalid meshes with the element id") {
  const std::string path = tmp_path("prismdg_bad.mesh");
  {
    std::ofstream out(path);
    out << "$Vertices\n6\n"
           "0 0 0\n1 0 0\n0 1 0\n0.5 0 1\n1 0 1\n0 1 1\n" // top vertex shifted in x
           "$Wedges\n1\n1 2 3 4 5 6\n$Media\n1\n1 1\n";
  }
  try {
    load_mesh(path);
    CHECK(false);
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()).find("wedge 1") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << "$Vertices\n6\n"
           "0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 0 1\n0 1 1\n"
           "$Wedges\n1\n1 2 3 4 5 6\n$Media\n1\n1 -2\n"; // negative bulk modulus
  }
  CHECK_THROWS_AS(load_mesh(path), MeshError);
  {
    std::ofstream out(path);
    out << "$Vertices\n3\nnot a number\n";
  }
  try {
    load_mesh(path);
    CHECK(false);
  } catch (const MeshError& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos); // line number
  }
  std::filesystem::remove(path);
}

TEST_CASE("surface file loads") {
  const std::string path = tmp_path("prismdg_surface.txt");
  {
    std::ofstream out(path);
    out << "$SurfaceVertices\n3\n0 0 0 1\n1 0 0 1\n0 1 0 1\n$SurfaceTriangles\n1\n1 2 3\n";
  }
  const SurfaceTriangulation s = load_surface(path);
  CHECK(s.vertices.size() == 3);
  CHECK(s.triangles.size() == 1);
  const HybridMesh mesh = extrude_layer(s, 2);
  CHECK(mesh.num_wedges() == 2);
  std::filesystem::remove(path);
}

TEST_SUITE_END();
