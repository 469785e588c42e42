#include "doctest.h"

#include "oracles.hpp"
#include "prismdg/geometry.hpp"

#include <cmath>
#include <random>

using namespace prismdg;

namespace {

const std::array<std::array<double, 3>, 6> kReferenceWedge = {
    {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {1, -1, 1}, {-1, 1, 1}}};

std::array<std::array<double, 3>, 6> prism_with_top(std::array<double, 3> top_z) {
  auto v = kReferenceWedge;
  for (int i = 0; i < 3; ++i) {
    v[i][2] = 0.0;
    v[i + 3][2] = top_z[i];
  }
  return v;
}

} // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("identity mapping gives identity factors") {
  const References refs = build_references(2);
  const ElementGeometry g = wedge_geometry(kReferenceWedge, refs);
  CHECK(g.rx == doctest::Approx(1.0));
  CHECK(g.ry == doctest::Approx(0.0).scale(1.0));
  CHECK(g.sx == doctest::Approx(0.0).scale(1.0));
  CHECK(g.sy == doctest::Approx(1.0));
  CHECK(g.tzJ == doctest::Approx(1.0));
  CHECK(g.j0 == doctest::Approx(1.0));
  CHECK(g.j_r == doctest::Approx(0.0).scale(1.0));
  CHECK(g.j_s == doctest::Approx(0.0).scale(1.0));
  CHECK(g.txJ.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(g.tyJ.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(g.volume == doctest::Approx(4.0));
}

TEST_CASE("uniform vertical stretch scales J only") {
  const References refs = build_references(2);
  // top translated from z=1 to z=3: twice the reference height
  auto v = kReferenceWedge;
  for (int i = 3; i < 6; ++i) v[i][2] = 3.0;
  const ElementGeometry g = wedge_geometry(v, refs);
  CHECK(g.j0 == doctest::Approx(2.0));
  CHECK(g.j_r == doctest::Approx(0.0).scale(1.0));
  CHECK(g.j_s == doctest::Approx(0.0).scale(1.0));
  CHECK(g.tzJ == doctest::Approx(1.0)); // t_z J is untouched by the stretch
  CHECK(g.rx == doctest::Approx(1.0));
}

TEST_CASE("slanted top produces t-linear factors matching finite differences") {
  const References refs = build_references(3);
  const auto v = prism_with_top({1.0, 1.5, 2.0});
  const ElementGeometry g = wedge_geometry(v, refs);

  // txJ, tyJ at the GLL nodes must be affine in t
  const auto lin = [&](const Vec& f) {
    const int n = (int)f.size() - 1;
    for (int j = 0; j <= n; ++j) {
      const double t = refs.line.nodes[j];
      const double expect = f[0] * (1.0 - t) / 2.0 + f[n] * (1.0 + t) / 2.0;
      CHECK(f[j] == doctest::Approx(expect).epsilon(1e-13).scale(1.0));
    }
  };
  lin(g.txJ);
  lin(g.tyJ);

  // cross-check the full Jacobian against finite differences of the mapping
  std::mt19937_64 gen(5);
  auto u01 = [&] { return double(gen() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 10; ++trial) {
    double r = -1 + 2 * u01(), s = -1 + 2 * u01();
    if (r + s > 0) {
      r = -r;
      s = -s;
    }
    const double t = -1 + 2 * u01();
    const Eigen::Matrix3d fd = test::fd_wedge_jacobian(v, r, s, t);
    const Eigen::Matrix3d ex = test::wedge_jacobian_matrix(v, r, s, t);
    CHECK((fd - ex).cwiseAbs().maxCoeff() < 1e-7);
    // stored geometric factors vs the pointwise inverse
    const Eigen::Matrix3d Ai = ex.inverse();
    const double J = ex.determinant();
    CHECK(Ai(0, 0) == doctest::Approx(g.rx).epsilon(1e-12));
    CHECK(Ai(1, 1) == doctest::Approx(g.sy).epsilon(1e-12));
    CHECK(Ai(2, 2) * J == doctest::Approx(g.tzJ).epsilon(1e-12));
    CHECK(J == doctest::Approx(g.jacobian_at(r, s)).epsilon(1e-12));
  }
}

TEST_CASE("degenerate wedges are rejected") {
  const References refs = build_references(1);
  auto v = kReferenceWedge;
  for (int i = 3; i < 6; ++i) v[i][2] = -1.0; // coplanar top and bottom
  CHECK_THROWS_AS(wedge_geometry(v, refs), MeshError);
}

TEST_CASE("tet geometry: identity, scaling laws, and random cross-check") {
  const std::array<std::array<double, 3>, 4> ref = {
      {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}};
  const ElementGeometry g = tet_geometry(ref);
  CHECK(g.rx == doctest::Approx(1.0));
  CHECK(g.sy == doctest::Approx(1.0));
  CHECK(g.tz == doctest::Approx(1.0));
  CHECK(g.j0 == doctest::Approx(1.0));
  CHECK(g.volume == doctest::Approx(4.0 / 3.0));

  auto scaled = ref;
  for (auto& p : scaled)
    for (auto& c : p) c *= 2.0;
  const ElementGeometry gs = tet_geometry(scaled);
  CHECK(gs.j0 == doctest::Approx(8.0));
  CHECK(gs.rx == doctest::Approx(0.5));

  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = test::random_tet(gen);
    const ElementGeometry gr = tet_geometry(v);
    const Eigen::Matrix3d fd = test::fd_tet_jacobian(v, -0.3, -0.4, -0.2);
    const Eigen::Matrix3d Ai = fd.inverse();
    CHECK(Ai(0, 0) == doctest::Approx(gr.rx).epsilon(1e-7));
    CHECK(Ai(1, 2) == doctest::Approx(gr.sz).epsilon(1e-7).scale(1.0));
    CHECK(Ai(2, 1) == doctest::Approx(gr.ty).epsilon(1e-7).scale(1.0));
    CHECK(fd.determinant() == doctest::Approx(gr.j0).epsilon(1e-7));
  }

  auto bad = ref;
  std::swap(bad[0], bad[1]); // inverted orientation
  CHECK_THROWS_AS(tet_geometry(bad), MeshError);
}

TEST_CASE("face normals and Jacobians") {
  const References refs = build_references(2);
  const ElementGeometry g = wedge_geometry(kReferenceWedge, refs);

  // side-face normals are the 2D edge normals with zero vertical component
  CHECK(g.faces[2].normal[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(g.faces[2].normal[1] == doctest::Approx(-1.0));
  CHECK(g.faces[2].normal[2] == doctest::Approx(0.0).scale(1.0));
  CHECK(g.faces[4].normal[0] == doctest::Approx(-1.0));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(g.faces[3].normal[0] == doctest::Approx(inv_sqrt2));
  CHECK(g.faces[3].normal[1] == doctest::Approx(inv_sqrt2));
  for (const auto& f : g.faces) {
    const double n2 = f.normal[0] * f.normal[0] + f.normal[1] * f.normal[1] +
                      f.normal[2] * f.normal[2];
    CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-14);
  }
  CHECK(g.faces[0].normal[2] == doctest::Approx(-1.0));
  CHECK(g.faces[1].normal[2] == doctest::Approx(1.0));

  // vertical stretch x2: tri-face J_f unchanged, quad-face J_f doubles
  auto v = kReferenceWedge;
  for (int i = 3; i < 6; ++i) v[i][2] = 3.0;
  const ElementGeometry gs = wedge_geometry(v, refs);
  CHECK(gs.faces[0].jf == doctest::Approx(g.faces[0].jf));
  CHECK(gs.faces[1].jf == doctest::Approx(g.faces[1].jf));
  for (int e = 0; e < 3; ++e)
    for (int q = 0; q < gs.faces[2 + e].jf_edge.size(); ++q)
      CHECK(gs.faces[2 + e].jf_edge[q] ==
            doctest::Approx(2.0 * g.faces[2 + e].jf_edge[q]));

  // surface integral of 1 over each face equals the polygon area
  std::mt19937_64 gen(23);
  const auto rv = test::random_vertical_wedge(gen);
  const ElementGeometry gr = wedge_geometry(rv, refs);
  for (int f = 0; f < 2; ++f) {
    // triangles: area from the cross product oracle
    const int o = 3 * f;
    const Eigen::Vector3d a(rv[o][0], rv[o][1], rv[o][2]);
    const Eigen::Vector3d b(rv[o + 1][0], rv[o + 1][1], rv[o + 1][2]);
    const Eigen::Vector3d c(rv[o + 2][0], rv[o + 2][1], rv[o + 2][2]);
    const double area = 0.5 * ((b - a).cross(c - a)).norm();
    CHECK(gr.faces[f].jf * 2.0 == doctest::Approx(area).epsilon(1e-12));
    CHECK(gr.faces[f].area == doctest::Approx(area).epsilon(1e-12));
  }
  for (int e = 0; e < 3; ++e) {
    // planar trapezoid area: edge length x mean column height
    const int a = e, b = (e + 1) % 3;
    const double len = std::hypot(rv[b][0] - rv[a][0], rv[b][1] - rv[a][1]);
    const double area = len * ((rv[a + 3][2] - rv[a][2]) + (rv[b + 3][2] - rv[b][2])) / 2.0;
    CHECK(gr.faces[2 + e].area == doctest::Approx(area).epsilon(1e-12));
    // quadrature of the stored edge values reproduces the area
    double q = 0.0;
    for (int j = 0; j < gr.faces[2 + e].jf_edge.size(); ++j)
      q += 2.0 * refs.line.weights[j] * gr.faces[2 + e].jf_edge[j];
    CHECK(q == doctest::Approx(area).epsilon(1e-12));
  }
}

TEST_CASE("constant fields are divergence free over every element surface") {
  const References refs = build_references(2);
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = test::random_vertical_wedge(gen);
    const ElementGeometry g = wedge_geometry(v, refs);
    double sx = 0, sy = 0, sz = 0;
    for (const auto& f : g.faces) {
      sx += f.normal[0] * f.area;
      sy += f.normal[1] * f.area;
      sz += f.normal[2] * f.area;
    }
    CHECK(std::abs(sx) < 1e-12 * g.surface_area);
    CHECK(std::abs(sy) < 1e-12 * g.surface_area);
    CHECK(std::abs(sz) < 1e-12 * g.surface_area);

    const auto tv = test::random_tet(gen);
    const ElementGeometry gt = tet_geometry(tv);
    sx = sy = sz = 0;
    for (const auto& f : gt.faces) {
      sx += f.normal[0] * f.area;
      sy += f.normal[1] * f.area;
      sz += f.normal[2] * f.area;
    }
    CHECK(std::abs(sx) < 1e-12 * gt.surface_area);
    CHECK(std::abs(sy) < 1e-12 * gt.surface_area);
    CHECK(std::abs(sz) < 1e-12 * gt.surface_area);
  }
}

TEST_CASE("vertically mapped wedge property suite holds on 100 random elements") {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = test::random_vertical_wedge(gen);
    worst = std::max(worst, test::vertical_wedge_property_violation(v));
  }
  CHECK(worst < 1e-13);
}

TEST_SUITE_END();
