#pragma once

#include "prismdg/reference.hpp"
#include "prismdg/types.hpp"

#include <array>
#include <vector>

namespace prismdg {

struct FaceGeometry {
  std::array<double, 3> normal{}; // constant unit outward normal (planar faces)
  double jf = 0.0;                // constant face Jacobian (tri faces, tet faces)
  Vec jf_edge;                    // quad faces: J_f at the N+1 edge nodes
  double area = 0.0;
};

/// Geometric factors for one element.  For a vertically mapped wedge these
/// follow the closed forms implied by the vertex mapping: r_z = s_z = 0,
/// r_x, r_y, s_x, s_y and t_z*J are element constants, J is affine in (r,s)
/// and constant along t, and t_x*J, t_y*J vary linearly in t only.
struct ElementGeometry {
  ElemKind kind = ElemKind::wedge;

  // wedge factors
  double rx = 0, ry = 0, sx = 0, sy = 0, tzJ = 0;
  Vec txJ, tyJ; // values at the GLL t nodes
  double j0 = 0, j_r = 0, j_s = 0; // J(r,s) = j0 + j_r*r + j_s*s
  Vec j_tri;                       // J at the triangle nodes (constant in t)

  // tet factors (all constant); J stored in j0
  double rz = 0, sz = 0, tx = 0, ty = 0, tz = 0;

  std::vector<FaceGeometry> faces; // 5 for wedges, 4 for tets
  double volume = 0, surface_area = 0, diameter = 0;
  int nverts = 0;
  std::array<std::array<double, 3>, 6> verts{};

  double jacobian_at(double r, double s) const { return j0 + j_r * r + j_s * s; }
};

ElementGeometry wedge_geometry(const std::array<std::array<double, 3>, 6>& v,
                               const References& refs);
ElementGeometry tet_geometry(const std::array<std::array<double, 3>, 4>& v);

/// Physical coordinates of a reference point inside the element.
std::array<double, 3> wedge_map(const std::array<std::array<double, 3>, 6>& v, double r,
                                double s, double t);
std::array<double, 3> tet_map(const std::array<std::array<double, 3>, 4>& v, double r,
                              double s, double t);

/// Jacobian determinant of the wedge vertex mapping evaluated directly from
/// the vertex-function derivatives (used by validity checks and tests).
double wedge_jacobian_det(const std::array<std::array<double, 3>, 6>& v, double r, double s,
                          double t);

} // namespace prismdg
