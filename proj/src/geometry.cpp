#include "prismdg/geometry.hpp"

#include <cmath>

namespace prismdg {

namespace {

using V3 = Eigen::Vector3d;

V3 to_v3(const std::array<double, 3>& a) { return V3(a[0], a[1], a[2]); }

double tri_area(const V3& a, const V3& b, const V3& c) {
  return 0.5 * ((b - a).cross(c - a)).norm();
}

// orient a face normal outward using the vector from the element centroid to
// the face centroid; all faces of this element class are planar
void orient_outward(FaceGeometry& fg, const V3& elem_centroid, const V3& face_centroid,
                    V3 n) {
  n.normalize();
  if (n.dot(face_centroid - elem_centroid) < 0.0) n = -n;
  fg.normal = {n[0], n[1], n[2]};
}

} // namespace

std::array<double, 3> wedge_map(const std::array<std::array<double, 3>, 6>& v, double r,
                                double s, double t) {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int m = 0; m < 6; ++m) {
    const double vm = wedge_vertex_function(m, r, s, t);
    for (int d = 0; d < 3; ++d) x[d] += vm * v[m][d];
  }
  return x;
}

std::array<double, 3> tet_map(const std::array<std::array<double, 3>, 4>& v, double r,
                              double s, double t) {
  const double l0 = -(1.0 + r + s + t) / 2.0;
  const double l1 = (1.0 + r) / 2.0;
  const double l2 = (1.0 + s) / 2.0;
  const double l3 = (1.0 + t) / 2.0;
  std::array<double, 3> x;
  for (int d = 0; d < 3; ++d)
    x[d] = l0 * v[0][d] + l1 * v[1][d] + l2 * v[2][d] + l3 * v[3][d];
  return x;
}

double wedge_jacobian_det(const std::array<std::array<double, 3>, 6>& v, double r, double s,
                          double t) {
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
  for (int m = 0; m < 6; ++m) {
    const auto g = wedge_vertex_function_grad(m, r, s, t);
    for (int d = 0; d < 3; ++d) {
      J(d, 0) += v[m][d] * g[0];
      J(d, 1) += v[m][d] * g[1];
      J(d, 2) += v[m][d] * g[2];
    }
  }
  return J.determinant();
}

ElementGeometry wedge_geometry(const std::array<std::array<double, 3>, 6>& v,
                               const References& refs) {
  ElementGeometry g;
  g.kind = ElemKind::wedge;
  g.nverts = 6;
  g.verts = v;

  const double xr = (v[1][0] - v[0][0]) / 2.0, yr = (v[1][1] - v[0][1]) / 2.0;
  const double xs = (v[2][0] - v[0][0]) / 2.0, ys = (v[2][1] - v[0][1]) / 2.0;
  const double G = xr * ys - xs * yr; // t_z * J, constant

  // bottom/top z as affine functions of (r,s): z = c0 + cr*r + cs*s
  const double b0 = (v[1][2] + v[2][2]) / 2.0;
  const double br = (v[1][2] - v[0][2]) / 2.0;
  const double bs = (v[2][2] - v[0][2]) / 2.0;
  const double a0 = (v[4][2] + v[5][2]) / 2.0;
  const double ar = (v[4][2] - v[3][2]) / 2.0;
  const double as = (v[5][2] - v[3][2]) / 2.0;

  // z_t = (top - bottom)/2, affine in (r,s); J = G * z_t
  g.j0 = G * (a0 - b0) / 2.0;
  g.j_r = G * (ar - br) / 2.0;
  g.j_s = G * (as - bs) / 2.0;

  // J is affine, so positivity at the three triangle vertices covers the element
  const double jv1 = g.jacobian_at(-1.0, -1.0);
  const double jv2 = g.jacobian_at(1.0, -1.0);
  const double jv3 = g.jacobian_at(-1.0, 1.0);
  if (!(jv1 > 0.0 && jv2 > 0.0 && jv3 > 0.0))
    throw MeshError("wedge has non-positive Jacobian");

  g.rx = ys / G;
  g.ry = -xs / G;
  g.sx = -yr / G;
  g.sy = xr / G;
  g.tzJ = G;

  const int nq = refs.degree + 1;
  g.txJ.resize(nq);
  g.tyJ.resize(nq);
  for (int j = 0; j < nq; ++j) {
    const double t = refs.line.nodes[j];
    const double zs = bs * (1.0 - t) / 2.0 + as * (1.0 + t) / 2.0;
    const double zr = br * (1.0 - t) / 2.0 + ar * (1.0 + t) / 2.0;
    g.txJ[j] = yr * zs - zr * ys;
    g.tyJ[j] = zr * xs - xr * zs;
  }

  const auto& tri = refs.tri;
  g.j_tri.resize(tri.num_nodes);
  for (int i = 0; i < tri.num_nodes; ++i) g.j_tri[i] = g.jacobian_at(tri.r[i], tri.s[i]);

  // volume: int J over the reference wedge; int_T r = int_T s = -2/3
  g.volume = 4.0 * g.j0 - (4.0 / 3.0) * (g.j_r + g.j_s);

  V3 centroid = V3::Zero();
  for (const auto& p : v) centroid += to_v3(p);
  centroid /= 6.0;

  g.faces.resize(5);
  // triangular faces (bottom 0, top 1)
  for (int f = 0; f < 2; ++f) {
    const V3 p0 = to_v3(v[3 * f + 0]), p1 = to_v3(v[3 * f + 1]), p2 = to_v3(v[3 * f + 2]);
    FaceGeometry& fg = g.faces[f];
    fg.area = tri_area(p0, p1, p2);
    fg.jf = fg.area / 2.0;
    orient_outward(fg, centroid, (p0 + p1 + p2) / 3.0, (p1 - p0).cross(p2 - p0));
  }
  // quad faces along triangle edges 0..2 (edge e: bottom verts e, e+1)
  for (int e = 0; e < 3; ++e) {
    const int a = e, b = (e + 1) % 3;
    const V3 pa = to_v3(v[a]), pb = to_v3(v[b]);
    const V3 pa_top = to_v3(v[a + 3]), pb_top = to_v3(v[b + 3]);
    FaceGeometry& fg = g.faces[2 + e];
    const double dx = pb[0] - pa[0], dy = pb[1] - pa[1];
    const double len2d = std::hypot(dx, dy);
    const double ha = pa_top[2] - pa[2], hb = pb_top[2] - pb[2];
    fg.area = len2d * (ha + hb) / 2.0;
    fg.jf_edge.resize(nq);
    for (int q = 0; q < nq; ++q) {
      const double xi = refs.line.nodes[q];
      const double h = ha * (1.0 - xi) / 2.0 + hb * (1.0 + xi) / 2.0;
      fg.jf_edge[q] = (h / 2.0) * (len2d / 2.0);
    }
    fg.jf = fg.jf_edge.mean();
    orient_outward(fg, centroid, (pa + pb + pa_top + pb_top) / 4.0, V3(dy, -dx, 0.0));
  }

  g.surface_area = 0.0;
  for (const auto& f : g.faces) g.surface_area += f.area;
  g.diameter = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      g.diameter = std::max(g.diameter, (to_v3(v[i]) - to_v3(v[j])).norm());
  return g;
}

ElementGeometry tet_geometry(const std::array<std::array<double, 3>, 4>& v) {
  ElementGeometry g;
  g.kind = ElemKind::tet;
  g.nverts = 4;
  for (int i = 0; i < 4; ++i) g.verts[i] = v[i];

  Eigen::Matrix3d A;
  for (int d = 0; d < 3; ++d) {
    A(d, 0) = (v[1][d] - v[0][d]) / 2.0;
    A(d, 1) = (v[2][d] - v[0][d]) / 2.0;
    A(d, 2) = (v[3][d] - v[0][d]) / 2.0;
  }
  const double J = A.determinant();
  if (!(J > 0.0)) throw MeshError("tet has non-positive Jacobian");
  const Eigen::Matrix3d Ai = A.inverse();
  g.j0 = J;
  g.rx = Ai(0, 0);
  g.ry = Ai(0, 1);
  g.rz = Ai(0, 2);
  g.sx = Ai(1, 0);
  g.sy = Ai(1, 1);
  g.sz = Ai(1, 2);
  g.tx = Ai(2, 0);
  g.ty = Ai(2, 1);
  g.tz = Ai(2, 2);
  g.volume = 4.0 / 3.0 * J; // reference tet has volume 4/3

  V3 centroid = V3::Zero();
  for (int i = 0; i < 4; ++i) centroid += to_v3(v[i]);
  centroid /= 4.0;

  // faces: t=-1 (012), s=-1 (013), r+s+t=-1 (123), r=-1 (023)
  const std::array<std::array<int, 3>, 4> fv = {{{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {0, 2, 3}}};
  g.faces.resize(4);
  for (int f = 0; f < 4; ++f) {
    const V3 p0 = to_v3(v[fv[f][0]]), p1 = to_v3(v[fv[f][1]]), p2 = to_v3(v[fv[f][2]]);
    FaceGeometry& fg = g.faces[f];
    fg.area = tri_area(p0, p1, p2);
    fg.jf = fg.area / 2.0;
    orient_outward(fg, centroid, (p0 + p1 + p2) / 3.0, (p1 - p0).cross(p2 - p0));
  }

  g.surface_area = 0.0;
  for (const auto& f : g.faces) g.surface_area += f.area;
  g.diameter = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      g.diameter = std::max(g.diameter, (to_v3(v[i]) - to_v3(v[j])).norm());
  return g;
}

} // namespace prismdg
