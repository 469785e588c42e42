#include "prismdg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prismdg {

namespace {

using CMap = Eigen::Map<const Mat>;
using MMap = Eigen::Map<Mat>;
using CVMap = Eigen::Map<const Vec>;
using VMap = Eigen::Map<Vec>;

struct Workspace {
  Mat dr, ds, dt, w;    // volume scratch, (N+1) x Np_tri
  Vec fp, fu, lift_u;   // surface scratch
  Vec va, vb, vc;       // tet scratch
};

Workspace& workspace(int tid, int degree_nodes_tri, int nq, int max_np, int max_nfp) {
  static thread_local Workspace ws;
  ws.dr.resize(nq, degree_nodes_tri);
  ws.ds.resize(nq, degree_nodes_tri);
  ws.dt.resize(nq, degree_nodes_tri);
  ws.w.resize(nq, degree_nodes_tri);
  if (ws.fp.size() < max_nfp) {
    ws.fp.resize(max_nfp);
    ws.fu.resize(max_nfp);
  }
  if (ws.lift_u.size() < max_np) {
    ws.lift_u.resize(max_np);
    ws.va.resize(max_np);
    ws.vb.resize(max_np);
    ws.vc.resize(max_np);
  }
  (void)tid;
  return ws;
}

double avg_impedance(const Media& a, const Media& b) {
  return 0.5 * (a.rho * a.wavespeed() + b.rho * b.wavespeed());
}

} // namespace

// ---------------------------------------------------------------------------
// setup
// ---------------------------------------------------------------------------

Discretization build_discretization(HybridMesh mesh, int degree, FluxConfig flux,
                                    QuadratureMode qmode, int threads) {
  if (flux.mode == FluxMode::custom && (flux.tau_p < 0.0 || flux.tau_u < 0.0))
    throw ConfigError("flux penalties must be non-negative");
  Discretization d;
  d.mesh = std::move(mesh);
  d.refs = build_references(degree);
  d.conn = build_connectivity(d.mesh, d.refs);
  d.qmode = qmode;
  d.flux = flux;
  d.threads = std::max(1, threads);

  const int ne = d.mesh.num_elements();
  d.geom.reserve(ne);
  d.wedge_ops.reserve(d.mesh.num_wedges());
  d.tet_ops.reserve(d.mesh.num_tets());
  for (int w = 0; w < d.mesh.num_wedges(); ++w) {
    d.geom.push_back(wedge_geometry(d.mesh.wedge_verts(w), d.refs));
    d.wedge_ops.push_back(build_wedge_operators(d.geom.back(), d.refs));
  }
  for (int t = 0; t < d.mesh.num_tets(); ++t) {
    d.geom.push_back(tet_geometry(d.mesh.tet_verts(t)));
    d.tet_ops.push_back(build_tet_operators(d.geom.back()));
  }

  d.elem_offset.resize(ne + 1);
  d.node_offset.resize(ne + 1);
  d.elem_offset[0] = 0;
  d.node_offset[0] = 0;
  for (int e = 0; e < ne; ++e) {
    d.elem_offset[e + 1] = d.elem_offset[e] + 4u * d.np(e);
    d.node_offset[e + 1] = d.node_offset[e] + d.np(e);
  }
  d.total_dofs = d.elem_offset[ne];
  d.total_nodes = d.node_offset[ne];

  d.node_x.resize(d.total_nodes);
  d.node_y.resize(d.total_nodes);
  d.node_z.resize(d.total_nodes);
  for (int e = 0; e < ne; ++e) {
    const std::size_t base = d.node_offset[e];
    if (d.mesh.kind(e) == ElemKind::wedge) {
      const auto v = d.mesh.wedge_verts(e);
      for (int n = 0; n < d.refs.wedge.num_nodes; ++n) {
        const auto x = wedge_map(v, d.refs.wedge.r[n], d.refs.wedge.s[n], d.refs.wedge.t[n]);
        d.node_x[base + n] = x[0];
        d.node_y[base + n] = x[1];
        d.node_z[base + n] = x[2];
      }
    } else {
      const auto v = d.mesh.tet_verts(e - d.mesh.num_wedges());
      for (int n = 0; n < d.refs.tet.num_nodes; ++n) {
        const auto x = tet_map(v, d.refs.tet.r[n], d.refs.tet.s[n], d.refs.tet.t[n]);
        d.node_x[base + n] = x[0];
        d.node_y[base + n] = x[1];
        d.node_z[base + n] = x[2];
      }
    }
  }

  d.face_data.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const int nf = d.mesh.num_faces(e);
    d.face_data[e].resize(nf);
    for (int f = 0; f < nf; ++f) {
      auto& fd = d.face_data[e][f];
      const auto& fc = d.conn.elem[e][f];
      fd.my_nodes = (d.mesh.kind(e) == ElemKind::wedge) ? d.refs.wedge.face_nodes[f]
                                                        : d.refs.tet.face_nodes[f];
      fd.normal = d.geom[e].faces[f].normal;
      fd.nbr = fc.nbr;
      double z;
      if (fc.nbr >= 0) {
        const auto& nbr_list = (d.mesh.kind(fc.nbr) == ElemKind::wedge)
                                   ? d.refs.wedge.face_nodes[fc.nbr_face]
                                   : d.refs.tet.face_nodes[fc.nbr_face];
        fd.nbr_nodes.resize(fd.my_nodes.size());
        for (size_t i = 0; i < fd.my_nodes.size(); ++i)
          fd.nbr_nodes[i] = nbr_list[fc.perm[i]];
        z = avg_impedance(d.mesh.media[e], d.mesh.media[fc.nbr]);
      } else {
        z = d.mesh.media[e].rho * d.mesh.media[e].wavespeed();
      }
      switch (d.flux.mode) {
        case FluxMode::upwind:
          fd.tau_p = 1.0 / z;
          fd.tau_u = z;
          break;
        case FluxMode::central:
          fd.tau_p = 0.0;
          fd.tau_u = 0.0;
          break;
        case FluxMode::custom:
          fd.tau_p = d.flux.tau_p;
          fd.tau_u = d.flux.tau_u;
          break;
      }
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// RHS kernels
// ---------------------------------------------------------------------------

namespace {

void wedge_volume_elem(const Discretization& d, int e, const double* u, double* rhs,
                       Workspace& ws) {
  const auto& refs = d.refs;
  const auto& ops = d.wedge_ops[e];
  const int nq = refs.degree + 1;
  const int ntri = refs.tri.num_nodes;
  const int np = refs.wedge.num_nodes;
  const std::size_t base = d.elem_offset[e];

  CMap P(u + base, nq, ntri);
  CMap UX(u + base + np, nq, ntri);
  CMap UY(u + base + 2 * np, nq, ntri);
  CMap UZ(u + base + 3 * np, nq, ntri);
  MMap RP(rhs + base, nq, ntri);
  MMap RUX(rhs + base + np, nq, ntri);
  MMap RUY(rhs + base + 2 * np, nq, ntri);
  MMap RUZ(rhs + base + 3 * np, nq, ntri);

  const Mat& DrT = refs.tri.dr;
  const Mat& DsT = refs.tri.ds;
  const Mat& Dt = refs.line.diff;
  const Mat& L = ops.tri_lift;

  // pressure gradient
  ws.dr.noalias() = P * DrT.transpose();
  ws.ds.noalias() = P * DsT.transpose();
  ws.dt.noalias() = Dt * P;
  ws.w.noalias() = ops.txJ.asDiagonal() * ws.dt;
  RUX.noalias() = ws.w * L.transpose();
  RUX.noalias() += ops.rx * ws.dr + ops.sx * ws.ds;
  RUX = -RUX;
  ws.w.noalias() = ops.tyJ.asDiagonal() * ws.dt;
  RUY.noalias() = ws.w * L.transpose();
  RUY.noalias() += ops.ry * ws.dr + ops.sy * ws.ds;
  RUY = -RUY;
  RUZ.noalias() = ws.dt * L.transpose();
  RUZ = -ops.tzJ * RUZ;

  // velocity divergence: fold the three extruded-direction terms into one
  // triangular-lift application
  ws.dr.noalias() = UX * DrT.transpose();
  ws.ds.noalias() = UX * DsT.transpose();
  RP.noalias() = ops.rx * ws.dr + ops.sx * ws.ds;
  ws.dt.noalias() = Dt * UX;
  ws.w.noalias() = ops.txJ.asDiagonal() * ws.dt;
  ws.dr.noalias() = UY * DrT.transpose();
  ws.ds.noalias() = UY * DsT.transpose();
  RP.noalias() += ops.ry * ws.dr + ops.sy * ws.ds;
  ws.dt.noalias() = Dt * UY;
  ws.w.noalias() += ops.tyJ.asDiagonal() * ws.dt;
  ws.dt.noalias() = Dt * UZ;
  ws.w.noalias() += ops.tzJ * ws.dt;
  RP.noalias() += ws.w * L.transpose();
  RP = -RP;
}

void tet_volume_elem(const Discretization& d, int e, const double* u, double* rhs,
                     Workspace& ws) {
  const auto& refs = d.refs;
  const auto& ops = d.tet_ops[e - d.mesh.num_wedges()];
  const int np = refs.tet.num_nodes;
  const std::size_t base = d.elem_offset[e];

  CVMap P(u + base, np), UX(u + base + np, np), UY(u + base + 2 * np, np),
      UZ(u + base + 3 * np, np);
  VMap RP(rhs + base, np), RUX(rhs + base + np, np), RUY(rhs + base + 2 * np, np),
      RUZ(rhs + base + 3 * np, np);

  VMap a(ws.va.data(), np), b(ws.vb.data(), np), c(ws.vc.data(), np);

  a.noalias() = refs.tet.dr * P;
  b.noalias() = refs.tet.ds * P;
  c.noalias() = refs.tet.dt * P;
  RUX = -(ops.rx * a + ops.sx * b + ops.tx * c);
  RUY = -(ops.ry * a + ops.sy * b + ops.ty * c);
  RUZ = -(ops.rz * a + ops.sz * b + ops.tz * c);

  a.noalias() = refs.tet.dr * UX;
  b.noalias() = refs.tet.ds * UX;
  c.noalias() = refs.tet.dt * UX;
  RP = ops.rx * a + ops.sx * b + ops.tx * c;
  a.noalias() = refs.tet.dr * UY;
  b.noalias() = refs.tet.ds * UY;
  c.noalias() = refs.tet.dt * UY;
  RP += ops.ry * a + ops.sy * b + ops.ty * c;
  a.noalias() = refs.tet.dr * UZ;
  b.noalias() = refs.tet.ds * UZ;
  c.noalias() = refs.tet.dt * UZ;
  RP += ops.rz * a + ops.sz * b + ops.tz * c;
  RP = -RP;
}

// gather traces, evaluate the penalized fluxes, and lift them back; the
// boundary applies the reflection p+ = -p-, u+ = u-
void surface_elem(const Discretization& d, int e, const double* u, double* rhs,
                  Workspace& ws) {
  const auto& refs = d.refs;
  const bool wedge = d.mesh.kind(e) == ElemKind::wedge;
  const int np = d.np(e);
  const std::size_t base = d.elem_offset[e];
  const int nf = d.mesh.num_faces(e);

  for (int f = 0; f < nf; ++f) {
    const auto& fd = d.face_data[e][f];
    const int nfp = (int)fd.my_nodes.size();
    const double nx = fd.normal[0], ny = fd.normal[1], nz = fd.normal[2];

    if (fd.nbr >= 0) {
      const std::size_t nb = d.elem_offset[fd.nbr];
      const int npn = d.np(fd.nbr);
      for (int i = 0; i < nfp; ++i) {
        const int m = fd.my_nodes[i];
        const int q = fd.nbr_nodes[i];
        const double dp = u[nb + q] - u[base + m];
        const double dux = u[nb + npn + q] - u[base + np + m];
        const double duy = u[nb + 2 * npn + q] - u[base + 2 * np + m];
        const double duz = u[nb + 3 * npn + q] - u[base + 3 * np + m];
        const double dun = nx * dux + ny * duy + nz * duz;
        ws.fp[i] = 0.5 * (fd.tau_p * dp - dun);
        ws.fu[i] = 0.5 * (fd.tau_u * dun - dp);
      }
    } else {
      for (int i = 0; i < nfp; ++i) {
        const int m = fd.my_nodes[i];
        const double dp = -2.0 * u[base + m]; // p+ = -p-, u+ = u-
        ws.fp[i] = 0.5 * fd.tau_p * dp;
        ws.fu[i] = -0.5 * dp;
      }
    }

    VMap fp(ws.fp.data(), nfp), fu(ws.fu.data(), nfp);
    VMap lift_u(ws.lift_u.data(), np);
    lift_u.setZero();
    if (wedge) {
      const auto& ops = d.wedge_ops[e];
      const int nq = refs.degree + 1;
      const int ntri = refs.tri.num_nodes;
      MMap RP(rhs + base, nq, ntri);
      MMap LU(ws.lift_u.data(), nq, ntri);
      if (f < 2) {
        const bool bottom = (f == 0);
        const Vec& profile =
            (d.qmode == QuadratureMode::exact)
                ? (bottom ? refs.line.lift_bottom : refs.line.lift_top)
                : (bottom ? refs.line.lumped_lift_bottom : refs.line.lumped_lift_top);
        const double jf = bottom ? ops.jf_bottom : ops.jf_top;
        VMap tmp(ws.va.data(), ntri); // flux premultiplied by the triangular lift
        tmp.noalias() = ops.tri_lift * fp;
        RP.noalias() += jf * profile * tmp.transpose();
        tmp.noalias() = ops.tri_lift * fu;
        LU.noalias() += jf * profile * tmp.transpose();
      } else {
        CMap FP(ws.fp.data(), nq, nq);
        CMap FU(ws.fu.data(), nq, nq);
        RP.noalias() += FP * ops.quad_lift[f - 2].transpose();
        LU.noalias() += FU * ops.quad_lift[f - 2].transpose();
      }
    } else {
      const auto& ops = d.tet_ops[e - d.mesh.num_wedges()];
      const int nfp_t = refs.tet.num_face_nodes;
      VMap rp(rhs + base, np);
      rp.noalias() +=
          ops.lift_scale[f] * (refs.tet.lift.middleCols(f * nfp_t, nfp_t) * fp);
      lift_u.noalias() +=
          ops.lift_scale[f] * (refs.tet.lift.middleCols(f * nfp_t, nfp_t) * fu);
    }
    VMap rux(rhs + base + np, np), ruy(rhs + base + 2 * np, np), ruz(rhs + base + 3 * np, np);
    rux.noalias() += nx * lift_u;
    ruy.noalias() += ny * lift_u;
    ruz.noalias() += nz * lift_u;
  }
}

void scale_media(const Discretization& d, int e, double* rhs) {
  const int np = d.np(e);
  const std::size_t base = d.elem_offset[e];
  const double kappa = d.mesh.media[e].kappa;
  const double inv_rho = 1.0 / d.mesh.media[e].rho;
  VMap rp(rhs + base, np);
  rp *= kappa;
  VMap ru(rhs + base + np, 3 * np);
  ru *= inv_rho;
}

Workspace& elem_workspace(const Discretization& d) {
  const int nq = d.refs.degree + 1;
  const int max_np = std::max(d.refs.wedge.num_nodes, d.refs.tet.num_nodes);
  const int max_nfp = std::max(nq * nq, std::max(d.refs.tri.num_nodes,
                                                 d.refs.tet.num_face_nodes));
  int tid = 0;
#ifdef _OPENMP
  tid = omp_get_thread_num();
#endif
  return workspace(tid, d.refs.tri.num_nodes, nq, max_np, max_nfp);
}

} // namespace

void compute_rhs(const Discretization& d, const double* u, double* rhs) {
  const int ne = d.mesh.num_elements();
#ifdef _OPENMP
  omp_set_num_threads(d.threads);
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < ne; ++e) {
    Workspace& ws = elem_workspace(d);
    if (d.mesh.kind(e) == ElemKind::wedge)
      wedge_volume_elem(d, e, u, rhs, ws);
    else
      tet_volume_elem(d, e, u, rhs, ws);
    surface_elem(d, e, u, rhs, ws);
    scale_media(d, e, rhs);
  }
}

void wedge_volume_phase(const Discretization& d, const double* u, double* rhs) {
  for (int e = 0; e < d.mesh.num_wedges(); ++e)
    wedge_volume_elem(d, e, u, rhs, elem_workspace(d));
}

void wedge_surface_phase(const Discretization& d, const double* u, double* rhs) {
  for (int e = 0; e < d.mesh.num_wedges(); ++e) surface_elem(d, e, u, rhs, elem_workspace(d));
}

void tet_volume_phase(const Discretization& d, const double* u, double* rhs) {
  for (int e = d.mesh.num_wedges(); e < d.mesh.num_elements(); ++e)
    tet_volume_elem(d, e, u, rhs, elem_workspace(d));
}

void tet_surface_phase(const Discretization& d, const double* u, double* rhs) {
  for (int e = d.mesh.num_wedges(); e < d.mesh.num_elements(); ++e)
    surface_elem(d, e, u, rhs, elem_workspace(d));
}

// ---------------------------------------------------------------------------
// diagnostics
// ---------------------------------------------------------------------------

double compute_energy(const Discretization& d, const double* u) {
  const int ne = d.mesh.num_elements();
  std::vector<double> partial(ne, 0.0);
#ifdef _OPENMP
  omp_set_num_threads(d.threads);
#pragma omp parallel for schedule(static)
#endif
  for (int e = 0; e < ne; ++e) {
    const int np = d.np(e);
    const std::size_t base = d.elem_offset[e];
    Vec mu(np);
    double acc = 0.0;
    const double inv_kappa = 1.0 / d.mesh.media[e].kappa;
    const double rho = d.mesh.media[e].rho;
    for (int field = 0; field < 4; ++field) {
      CVMap v(u + base + field * np, np);
      if (d.mesh.kind(e) == ElemKind::wedge) {
        Vec vv = v;
        Vec out(np);
        apply_wedge_mass(d.geom[e], d.refs, d.qmode, vv, out);
        mu = out;
      } else {
        Vec vv = v;
        apply_tet_mass(d.geom[e], d.refs, vv, mu);
      }
      const double q = v.dot(mu);
      acc += (field == 0) ? inv_kappa * q : rho * q;
    }
    partial[e] = 0.5 * acc;
  }
  double total = 0.0;
  for (double p : partial) total += p; // fixed order: deterministic
  return total;
}

double estimate_dt(const Discretization& d, double cfl) {
  if (!(cfl > 0.0)) throw ConfigError("cfl must be positive");
  const double n1 = d.refs.degree + 1;
  double dt = std::numeric_limits<double>::max();
  for (int e = 0; e < d.mesh.num_elements(); ++e) {
    const double h = d.geom[e].volume / d.geom[e].surface_area;
    const double c = d.mesh.media[e].wavespeed();
    dt = std::min(dt, h / (c * n1 * n1));
  }
  return cfl * dt;
}

FieldFunctions standing_wave(double c, double rho) {
  const double k = M_PI / 2.0;
  const double omega = std::sqrt(3.0) * k * c;
  FieldFunctions f;
  f.p = [k, omega](double x, double y, double z, double t) {
    return std::cos(k * x) * std::cos(k * y) * std::cos(k * z) * std::cos(omega * t);
  };
  const double amp = k / (rho * omega);
  f.ux = [k, omega, amp](double x, double y, double z, double t) {
    return amp * std::sin(k * x) * std::cos(k * y) * std::cos(k * z) * std::sin(omega * t);
  };
  f.uy = [k, omega, amp](double x, double y, double z, double t) {
    return amp * std::cos(k * x) * std::sin(k * y) * std::cos(k * z) * std::sin(omega * t);
  };
  f.uz = [k, omega, amp](double x, double y, double z, double t) {
    return amp * std::cos(k * x) * std::cos(k * y) * std::sin(k * z) * std::sin(omega * t);
  };
  return f;
}

FieldFunctions gaussian_pulse(double width, std::array<double, 3> center) {
  FieldFunctions f;
  const double inv_w2 = 1.0 / (width * width);
  f.p = [inv_w2, center](double x, double y, double z, double) {
    const double r2 = (x - center[0]) * (x - center[0]) + (y - center[1]) * (y - center[1]) +
                      (z - center[2]) * (z - center[2]);
    return std::exp(-r2 * inv_w2);
  };
  auto zero = [](double, double, double, double) { return 0.0; };
  f.ux = zero;
  f.uy = zero;
  f.uz = zero;
  return f;
}

SolutionState make_initial_state(const Discretization& d, const FieldFunctions& f,
                                 double t0) {
  SolutionState s;
  s.u.assign(d.total_dofs, 0.0);
  s.time = t0;
  for (int e = 0; e < d.mesh.num_elements(); ++e) {
    const int np = d.np(e);
    const std::size_t base = d.elem_offset[e];
    const std::size_t nbase = d.node_offset[e];
    for (int n = 0; n < np; ++n) {
      const double x = d.node_x[nbase + n], y = d.node_y[nbase + n], z = d.node_z[nbase + n];
      s.u[base + n] = f.p(x, y, z, t0);
      s.u[base + np + n] = f.ux(x, y, z, t0);
      s.u[base + 2 * np + n] = f.uy(x, y, z, t0);
      s.u[base + 3 * np + n] = f.uz(x, y, z, t0);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// time integration
// ---------------------------------------------------------------------------

namespace {

// low-storage five-stage fourth-order Runge-Kutta (Carpenter/Kennedy)
const double rk4a[5] = {0.0, -567301805773.0 / 1357537059087.0,
                        -2404267990393.0 / 2016746695238.0,
                        -3550918686646.0 / 2091501179385.0,
                        -1275806237668.0 / 842570457699.0};
const double rk4b[5] = {1432997174477.0 / 9575080441755.0,
                        5161836677717.0 / 13612068292357.0,
                        1720146321549.0 / 2090206949498.0,
                        3134564353537.0 / 4481467310338.0,
                        2277821191437.0 / 14882151754819.0};
const double rk4c[5] = {0.0, 1432997174477.0 / 9575080441755.0,
                        2526269341429.0 / 6820363962896.0,
                        2006345519317.0 / 3224310063776.0,
                        2802321613138.0 / 2924317926251.0};

} // namespace

TimeStepper::TimeStepper(IntegratorKind kind, std::size_t n) : kind_(kind) {
  res_.assign(n, 0.0);
  rhs_.assign(n, 0.0);
  if (kind_ == IntegratorKind::ab3) {
    tmp_.assign(n, 0.0);
    fhist_.assign(3, std::vector<double>(n, 0.0));
  }
}

void TimeStepper::step(std::vector<double>& u, double& t, double dt, const RhsFn& rhs,
                       SolutionState* state) {
  const std::size_t n = u.size();
  if (res_.size() != n) throw NumericalError("TimeStepper: state size mismatch");

  auto lserk = [&]() {
    std::fill(res_.begin(), res_.end(), 0.0);
    for (int stage = 0; stage < 5; ++stage) {
      rhs(u, rhs_, t + rk4c[stage] * dt);
      const double a = rk4a[stage], b = rk4b[stage];
      for (std::size_t i = 0; i < n; ++i) {
        res_[i] = a * res_[i] + dt * rhs_[i];
        u[i] += b * res_[i];
      }
    }
  };

  if (kind_ == IntegratorKind::lserk4) {
    lserk();
    t += dt;
    return;
  }

  // AB3 with Runge-Kutta bootstrap; history lives in the state when provided
  if (state != nullptr && state->history.size() != 3) {
    state->history.assign(3, std::vector<double>(n, 0.0));
    state->history_filled = 0;
  }
  auto& h = (state != nullptr) ? state->history : fhist_;
  int& hf = (state != nullptr) ? state->history_filled : filled_;

  if (hf < 2) {
    rhs(u, h[2 - hf], t); // record f at the step start
    lserk();
    t += dt;
    ++hf;
    return;
  }
  rhs(u, rhs_, t);
  // h[2] = f_{n-2}, h[1] = f_{n-1}, rhs_ = f_n
  for (std::size_t i = 0; i < n; ++i)
    u[i] += dt / 12.0 * (23.0 * rhs_[i] - 16.0 * h[1][i] + 5.0 * h[2][i]);
  std::swap(h[2], h[1]);
  std::swap(h[1], rhs_);
  t += dt;
}

void step(const Discretization& d, SolutionState& state, double dt, TimeStepper& stepper) {
  auto rhs = [&d](const std::vector<double>& u, std::vector<double>& out, double) {
    out.resize(u.size());
    compute_rhs(d, u.data(), out.data());
  };
  stepper.step(state.u, state.time, dt, rhs, &state);
}

RunResult run_simulation(const Discretization& d, SolutionState& state,
                         const RunOptions& opts) {
  if (!(opts.final_time > state.time))
    throw ConfigError("final time must exceed the state time");

  TimeStepper stepper(opts.integrator, state.u.size());
  const double span = opts.final_time - state.time;
  double dt0 = opts.fixed_dt > 0.0 ? opts.fixed_dt
                                   : estimate_dt(d, opts.cfl) * stepper.dt_scale();
  const int steps = std::max(1, (int)std::ceil(span / dt0 - 1e-12));
  const double dt = span / steps;

  RunResult res;
  res.steps = steps;
  res.dt = dt;
  res.initial_energy = compute_energy(d, state.u.data());

  double last_logged_energy = res.initial_energy;
  double next_energy_t = state.time;
  double next_snapshot_t = state.time;
  int snap_index = 0;
  if (opts.energy_csv) {
    *opts.energy_csv << "time,energy\n";
  }
  auto log_energy = [&](double tcur) {
    const double en = compute_energy(d, state.u.data());
    res.max_energy_increase = std::max(res.max_energy_increase, en - last_logged_energy);
    last_logged_energy = en;
    if (opts.energy_csv) {
      char buf[80];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", tcur, en);
      *opts.energy_csv << buf;
    }
  };
  log_energy(state.time);
  if (opts.snapshot_cb && opts.snapshot_interval > 0.0) {
    opts.snapshot_cb(state, snap_index++);
    next_snapshot_t += opts.snapshot_interval;
  }
  next_energy_t += opts.energy_interval;

  for (int n = 0; n < steps; ++n) {
    step(d, state, dt, stepper);

    if (opts.energy_interval <= 0.0) {
      log_energy(state.time);
    } else if (state.time + 1e-12 >= next_energy_t) {
      log_energy(state.time);
      while (next_energy_t <= state.time + 1e-12) next_energy_t += opts.energy_interval;
    }
    if (opts.snapshot_cb && opts.snapshot_interval > 0.0 &&
        state.time + 1e-12 >= next_snapshot_t) {
      opts.snapshot_cb(state, snap_index++);
      while (next_snapshot_t <= state.time + 1e-12) next_snapshot_t += opts.snapshot_interval;
    }

    if ((n + 1) % opts.watchdog_every == 0 || n + 1 == steps) {
      for (std::size_t i = 0; i < state.u.size(); ++i) {
        if (!std::isfinite(state.u[i])) {
          const auto it = std::upper_bound(d.elem_offset.begin(), d.elem_offset.end(), i);
          const int e = (int)std::distance(d.elem_offset.begin(), it) - 1;
          throw NumericalError("non-finite state in element " + std::to_string(e + 1) +
                               " at time " + std::to_string(state.time));
        }
      }
      const double en = compute_energy(d, state.u.data());
      if (en > opts.blowup_factor * res.initial_energy + 1e-300)
        throw NumericalError("instability detected: energy grew from " +
                             std::to_string(res.initial_energy) + " to " +
                             std::to_string(en) + " at time " + std::to_string(state.time));
    }
  }
  res.final_time = state.time;
  res.final_energy = compute_energy(d, state.u.data());
  return res;
}

} // namespace prismdg
