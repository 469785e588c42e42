#include "prismdg/operators.hpp"

namespace prismdg {

Mat wedge_tri_mass(const ElementGeometry& geom, const References& refs) {
  return geom.j0 * refs.tri.mass + geom.j_r * refs.tri.moment_r +
         geom.j_s * refs.tri.moment_s;
}

WedgeOperators build_wedge_operators(const ElementGeometry& geom, const References& refs) {
  const auto& tri = refs.tri;
  const auto& line = refs.line;
  const int nq = refs.degree + 1;

  WedgeOperators ops;
  ops.txJ = geom.txJ;
  ops.tyJ = geom.tyJ;
  ops.tzJ = geom.tzJ;
  ops.rx = geom.rx;
  ops.ry = geom.ry;
  ops.sx = geom.sx;
  ops.sy = geom.sy;
  ops.jf_bottom = geom.faces[0].jf;
  ops.jf_top = geom.faces[1].jf;

  const Mat tri_mass = wedge_tri_mass(geom, refs);
  Eigen::LLT<Mat> llt(tri_mass);
  if (llt.info() != Eigen::Success)
    throw NumericalError("weighted triangle mass matrix is not SPD");

  ops.tri_lift = llt.solve(tri.mass);

  // weighted edge mass per quad face, integrated with the auxiliary Gauss
  // rule (the face Jacobian is affine along the edge, so this is exact)
  for (int e = 0; e < 3; ++e) {
    const auto& fg = geom.faces[2 + e];
    const double jf0 = fg.jf_edge[0], jf1 = fg.jf_edge[nq - 1];
    Mat scaled = line.interp_gq; // (N+2) x (N+1)
    for (Eigen::Index q = 0; q < line.gq_nodes.size(); ++q) {
      const double xi = line.gq_nodes[q];
      const double jf = jf0 * (1.0 - xi) / 2.0 + jf1 * (1.0 + xi) / 2.0;
      scaled.row(q) *= line.gq_weights[q] * jf;
    }
    const Mat edge_mass = line.interp_gq.transpose() * scaled; // (N+1) x (N+1)
    Mat emb = Mat::Zero(tri.num_nodes, nq);
    for (int a = 0; a < nq; ++a)
      for (int b = 0; b < nq; ++b) emb(tri.edge_nodes[e][a], b) = edge_mass(a, b);
    ops.quad_lift[e] = llt.solve(emb);
  }
  return ops;
}

TetOperators build_tet_operators(const ElementGeometry& geom) {
  TetOperators ops;
  ops.rx = geom.rx;
  ops.ry = geom.ry;
  ops.rz = geom.rz;
  ops.sx = geom.sx;
  ops.sy = geom.sy;
  ops.sz = geom.sz;
  ops.tx = geom.tx;
  ops.ty = geom.ty;
  ops.tz = geom.tz;
  for (int f = 0; f < 4; ++f) ops.lift_scale[f] = geom.faces[f].jf / geom.j0;
  return ops;
}

LumpedWedgeOperators build_lumped_wedge_operators(const ElementGeometry& geom,
                                                  const References& refs) {
  LumpedWedgeOperators lw;
  lw.tri_mass = wedge_tri_mass(geom, refs);
  lw.t_weights = refs.line.weights;
  lw.base = build_wedge_operators(geom, refs);
  return lw;
}

// ---------------------------------------------------------------------------
// Kronecker application
// ---------------------------------------------------------------------------

namespace {

using CMap = Eigen::Map<const Mat>;
using MMap = Eigen::Map<Mat>;

} // namespace

void apply_wedge_derivatives(const WedgeOperators& ops, const References& refs, const Vec& u,
                             Vec& dx, Vec& dy, Vec& dz) {
  const int nq = refs.degree + 1;
  const int ntri = refs.tri.num_nodes;
  CMap U(u.data(), nq, ntri);
  dx.resize(u.size());
  dy.resize(u.size());
  dz.resize(u.size());
  MMap DX(dx.data(), nq, ntri), DY(dy.data(), nq, ntri), DZ(dz.data(), nq, ntri);

  const Mat dUr = U * refs.tri.dr.transpose();
  const Mat dUs = U * refs.tri.ds.transpose();
  const Mat dUt = refs.line.diff * U;
  const Mat LT = ops.tri_lift.transpose();

  DX.noalias() = ops.rx * dUr + ops.sx * dUs + (ops.txJ.asDiagonal() * dUt) * LT;
  DY.noalias() = ops.ry * dUr + ops.sy * dUs + (ops.tyJ.asDiagonal() * dUt) * LT;
  DZ.noalias() = ops.tzJ * (dUt * LT);
}

void apply_wedge_lift(const WedgeOperators& ops, const References& refs, QuadratureMode mode,
                      int face, const Vec& flux, Vec& out) {
  const int nq = refs.degree + 1;
  const int ntri = refs.tri.num_nodes;
  MMap OUT(out.data(), nq, ntri);
  if (face < 2) {
    const bool bottom = (face == 0);
    const Vec& profile = (mode == QuadratureMode::exact)
                             ? (bottom ? refs.line.lift_bottom : refs.line.lift_top)
                             : (bottom ? refs.line.lumped_lift_bottom
                                       : refs.line.lumped_lift_top);
    const double jf = bottom ? ops.jf_bottom : ops.jf_top;
    const Vec tmp = ops.tri_lift * flux; // premultiplied flux, reused across slices
    OUT.noalias() += jf * profile * tmp.transpose();
  } else {
    // block diagonal across t slices: slice j only sees flux at slice j
    CMap F(flux.data(), nq, nq);
    OUT.noalias() += F * ops.quad_lift[face - 2].transpose();
  }
}

void apply_wedge_mass(const ElementGeometry& geom, const References& refs,
                      QuadratureMode mode, const Vec& u, Vec& out) {
  const int nq = refs.degree + 1;
  const int ntri = refs.tri.num_nodes;
  CMap U(u.data(), nq, ntri);
  out.resize(u.size());
  MMap OUT(out.data(), nq, ntri);
  const Mat M = wedge_tri_mass(geom, refs);
  if (mode == QuadratureMode::exact)
    OUT.noalias() = refs.line.mass * U * M;
  else
    OUT.noalias() = refs.line.weights.asDiagonal() * U * M;
}

void apply_tet_derivatives(const TetOperators& ops, const References& refs, const Vec& u,
                           Vec& dx, Vec& dy, Vec& dz) {
  const Vec dur = refs.tet.dr * u;
  const Vec dus = refs.tet.ds * u;
  const Vec dut = refs.tet.dt * u;
  dx = ops.rx * dur + ops.sx * dus + ops.tx * dut;
  dy = ops.ry * dur + ops.sy * dus + ops.ty * dut;
  dz = ops.rz * dur + ops.sz * dus + ops.tz * dut;
}

void apply_tet_lift(const TetOperators& ops, const References& refs, int face,
                    const Vec& flux, Vec& out) {
  const int nfp = refs.tet.num_face_nodes;
  out.noalias() +=
      ops.lift_scale[face] * (refs.tet.lift.middleCols(face * nfp, nfp) * flux);
}

void apply_tet_mass(const ElementGeometry& geom, const References& refs, const Vec& u,
                    Vec& out) {
  out.noalias() = geom.j0 * (refs.tet.mass * u);
}

StorageReport storage_report(int degree, const std::vector<WedgeOperators>& wedges,
                             const std::vector<TetOperators>& tets) {
  StorageReport rep;
  rep.degree = degree;
  rep.num_wedges = wedges.size();
  rep.num_tets = tets.size();
  const int ntri = (degree + 1) * (degree + 2) / 2;
  rep.budget_per_wedge = (std::size_t)ntri * ntri + 3u * ntri * (degree + 1) +
                         8u * (degree + 1);
  for (const auto& w : wedges) {
    rep.wedge_floats_per_elem = std::max(rep.wedge_floats_per_elem, w.storage_floats());
    rep.total_floats += w.storage_floats();
  }
  for (const auto& t : tets) {
    rep.tet_floats_per_elem = std::max(rep.tet_floats_per_elem, t.storage_floats());
    rep.total_floats += t.storage_floats();
  }
  return rep;
}

} // namespace prismdg
