#include "prismdg/reference.hpp"

#include "prismdg/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prismdg {

namespace {

// Warp-and-blend parameters. One shared table is used for the triangle and
// the tetrahedron so that tet face traces coincide with the triangle nodes
// (required for hybrid-face conformity).
constexpr double kAlpha[15] = {0.0,    0.0,    0.0,    0.1002, 1.1332,
                               1.5608, 1.3413, 1.2577, 1.1603, 1.10153,
                               0.6080, 0.4523, 0.8856, 0.8717, 0.9655};

double blend_alpha(int degree) { return degree <= 15 ? kAlpha[degree - 1] : 1.0; }

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxDegree)
    throw ConfigError("polynomial degree must be in [1," + std::to_string(kMaxDegree) +
                      "], got " + std::to_string(degree));
}

// 1D warp moving equispaced points toward GLL, with end roots deflated.
Vec evalwarp(int p, const Vec& gll_desc, const Vec& xout) {
  Vec warp = Vec::Zero(xout.size());
  Vec xeq(p + 1);
  for (int i = 0; i <= p; ++i) xeq[i] = -1.0 + 2.0 * (p - i) / double(p);
  for (int i = 0; i <= p; ++i) {
    const double xi = xeq[i];
    Vec d = Vec::Constant(xout.size(), gll_desc[i] - xi);
    for (int j = 1; j < p; ++j) {
      if (i != j) d = d.cwiseProduct((xout.array() - xeq[j]).matrix()) / (xi - xeq[j]);
    }
    if (i != 0) d = -d / (xi - xeq[0]);
    if (i != p) d = d / (xi - xeq[p]);
    warp += d;
  }
  return warp;
}

// Two-dimensional warp-and-blend shift in the equilateral-triangle frame,
// given barycentric coordinates (L1, L2, L3) of the evaluation points.
void evalshift(int p, double alpha, const Vec& L1, const Vec& L2, const Vec& L3, Vec& dx,
               Vec& dy) {
  Vec gll, wgll;
  gauss_lobatto(p + 1, gll, wgll);
  const Vec gll_desc = -gll; // descending order, paired with descending equispaced

  const Vec blend1 = L2.cwiseProduct(L3);
  const Vec blend2 = L1.cwiseProduct(L3);
  const Vec blend3 = L1.cwiseProduct(L2);

  const Vec warpf1 = 4.0 * evalwarp(p, gll_desc, L3 - L2);
  const Vec warpf2 = 4.0 * evalwarp(p, gll_desc, L1 - L3);
  const Vec warpf3 = 4.0 * evalwarp(p, gll_desc, L2 - L1);

  const auto amp = [alpha](const Vec& L) {
    return (1.0 + (alpha * L.array()).square()).matrix();
  };
  const Vec warp1 = blend1.cwiseProduct(warpf1).cwiseProduct(amp(L1));
  const Vec warp2 = blend2.cwiseProduct(warpf2).cwiseProduct(amp(L2));
  const Vec warp3 = blend3.cwiseProduct(warpf3).cwiseProduct(amp(L3));

  const double c23 = std::cos(2.0 * M_PI / 3.0), s23 = std::sin(2.0 * M_PI / 3.0);
  const double c43 = std::cos(4.0 * M_PI / 3.0), s43 = std::sin(4.0 * M_PI / 3.0);
  dx = warp1 + c23 * warp2 + c43 * warp3;
  dy = s23 * warp2 + s43 * warp3;
}

void rstoab(double r, double s, double& a, double& b) {
  a = (std::abs(s - 1.0) > 1e-12) ? 2.0 * (1.0 + r) / (1.0 - s) - 1.0 : -1.0;
  b = s;
}

double simplex2dp(double a, double b, int i, int j) {
  const double h1 = jacobi_p(i, 0.0, 0.0, a);
  const double h2 = jacobi_p(j, 2.0 * i + 1.0, 0.0, b);
  return std::sqrt(2.0) * h1 * h2 * std::pow(1.0 - b, i);
}

void grad_simplex2dp(double a, double b, int id, int jd, double& dr, double& ds) {
  const double fa = jacobi_p(id, 0.0, 0.0, a);
  const double dfa = grad_jacobi_p(id, 0.0, 0.0, a);
  const double gb = jacobi_p(jd, 2.0 * id + 1.0, 0.0, b);
  const double dgb = grad_jacobi_p(jd, 2.0 * id + 1.0, 0.0, b);

  dr = dfa * gb;
  if (id > 0) dr *= std::pow(0.5 * (1.0 - b), id - 1);

  ds = dfa * gb * 0.5 * (1.0 + a);
  if (id > 0) ds *= std::pow(0.5 * (1.0 - b), id - 1);
  double tmp = dgb * std::pow(0.5 * (1.0 - b), id);
  if (id > 0) tmp -= 0.5 * id * gb * std::pow(0.5 * (1.0 - b), id - 1);
  ds += fa * tmp;

  const double scale = std::pow(2.0, id + 0.5);
  dr *= scale;
  ds *= scale;
}

void rsttoabc(double r, double s, double t, double& a, double& b, double& c) {
  a = (std::abs(s + t) > 1e-12) ? 2.0 * (1.0 + r) / (-s - t) - 1.0 : -1.0;
  b = (std::abs(t - 1.0) > 1e-12) ? 2.0 * (1.0 + s) / (1.0 - t) - 1.0 : -1.0;
  c = t;
}

double simplex3dp(double a, double b, double c, int i, int j, int k) {
  const double h1 = jacobi_p(i, 0.0, 0.0, a);
  const double h2 = jacobi_p(j, 2.0 * i + 1.0, 0.0, b);
  const double h3 = jacobi_p(k, 2.0 * (i + j) + 2.0, 0.0, c);
  return 2.0 * std::sqrt(2.0) * h1 * h2 * std::pow(1.0 - b, i) * h3 * std::pow(1.0 - c, i + j);
}

void grad_simplex3dp(double a, double b, double c, int id, int jd, int kd, double& dr,
                     double& ds, double& dt) {
  const double fa = jacobi_p(id, 0.0, 0.0, a);
  const double dfa = grad_jacobi_p(id, 0.0, 0.0, a);
  const double gb = jacobi_p(jd, 2.0 * id + 1.0, 0.0, b);
  const double dgb = grad_jacobi_p(jd, 2.0 * id + 1.0, 0.0, b);
  const double hc = jacobi_p(kd, 2.0 * (id + jd) + 2.0, 0.0, c);
  const double dhc = grad_jacobi_p(kd, 2.0 * (id + jd) + 2.0, 0.0, c);

  dr = dfa * gb * hc;
  if (id > 0) dr *= std::pow(0.5 * (1.0 - b), id - 1);
  if (id + jd > 0) dr *= std::pow(0.5 * (1.0 - c), id + jd - 1);

  ds = 0.5 * (1.0 + a) * dr;
  double tmp = dgb * std::pow(0.5 * (1.0 - b), id);
  if (id > 0) tmp -= 0.5 * id * gb * std::pow(0.5 * (1.0 - b), id - 1);
  tmp *= hc;
  if (id + jd > 0) tmp *= std::pow(0.5 * (1.0 - c), id + jd - 1);
  tmp *= fa;
  ds += tmp;

  dt = 0.5 * (1.0 + a) * dr + 0.5 * (1.0 + b) * tmp;
  double tmp2 = dhc * std::pow(0.5 * (1.0 - c), id + jd);
  if (id + jd > 0) tmp2 -= 0.5 * (id + jd) * hc * std::pow(0.5 * (1.0 - c), id + jd - 1);
  tmp2 = fa * gb * tmp2 * std::pow(0.5 * (1.0 - b), id);
  dt += tmp2;

  const double scale = std::pow(2.0, 2 * id + jd + 1.5);
  dr *= scale;
  ds *= scale;
  dt *= scale;
}

double svd_cond(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  return sv(0) / sv(sv.size() - 1);
}

} // namespace

// ---------------------------------------------------------------------------
// Interval
// ---------------------------------------------------------------------------

Interval1D build_interval(int degree) {
  check_degree(degree);
  Interval1D iv;
  iv.degree = degree;
  gauss_lobatto(degree + 1, iv.nodes, iv.weights);

  iv.vandermonde = legendre_vandermonde(degree, iv.nodes);
  const Mat invV = iv.vandermonde.inverse();
  iv.diff = legendre_grad_vandermonde(degree, iv.nodes) * invV;
  iv.mass = invV.transpose() * invV; // exact: orthonormal modal basis
  iv.inv_mass = iv.mass.inverse();

  const int n = degree;
  iv.lift_bottom = iv.inv_mass.col(0);
  iv.lift_top = iv.inv_mass.col(n);
  iv.lumped_lift_bottom = Vec::Zero(n + 1);
  iv.lumped_lift_bottom[0] = 1.0 / iv.weights[0];
  iv.lumped_lift_top = Vec::Zero(n + 1);
  iv.lumped_lift_top[n] = 1.0 / iv.weights[n];

  jacobi_gauss(degree + 2, 0.0, 0.0, iv.gq_nodes, iv.gq_weights);
  // Lagrange basis on the GLL nodes evaluated at the Gauss points
  iv.interp_gq = legendre_vandermonde(degree, iv.gq_nodes) * invV;
  return iv;
}

// ---------------------------------------------------------------------------
// Triangle
// ---------------------------------------------------------------------------

namespace {

void triangle_nodes(int degree, Vec& r, Vec& s, std::vector<std::array<int, 2>>& lattice) {
  const int np = (degree + 1) * (degree + 2) / 2;
  Vec L1(np), L2(np), L3(np);
  lattice.clear();
  lattice.reserve(np);
  int sk = 0;
  for (int j = 0; j <= degree; ++j) {
    for (int i = 0; i <= degree - j; ++i) {
      L1[sk] = double(j) / degree; // vertex (-1, 1)
      L3[sk] = double(i) / degree; // vertex ( 1,-1)
      lattice.push_back({i, j});
      ++sk;
    }
  }
  L2 = Vec::Ones(np) - L1 - L3; // vertex (-1,-1)

  Vec x = -L2 + L3;
  Vec y = (-L2 - L3 + 2.0 * L1) / std::sqrt(3.0);
  Vec dx, dy;
  evalshift(degree, blend_alpha(degree), L1, L2, L3, dx, dy);
  x += dx;
  y += dy;

  r.resize(np);
  s.resize(np);
  for (int n = 0; n < np; ++n) {
    const double l1 = (std::sqrt(3.0) * y[n] + 1.0) / 3.0;
    const double l2 = (-3.0 * x[n] - std::sqrt(3.0) * y[n] + 2.0) / 6.0;
    const double l3 = (3.0 * x[n] - std::sqrt(3.0) * y[n] + 2.0) / 6.0;
    r[n] = -l2 + l3 - l1;
    s[n] = -l2 - l3 + l1;
  }
}

Mat triangle_vandermonde(int degree, const Vec& r, const Vec& s) {
  const int np = (degree + 1) * (degree + 2) / 2;
  Mat V(r.size(), np);
  for (Eigen::Index n = 0; n < r.size(); ++n) {
    double a, b;
    rstoab(r[n], s[n], a, b);
    int col = 0;
    for (int i = 0; i <= degree; ++i)
      for (int j = 0; j <= degree - i; ++j) V(n, col++) = simplex2dp(a, b, i, j);
  }
  return V;
}

void triangle_grad_vandermonde(int degree, const Vec& r, const Vec& s, Mat& Vr, Mat& Vs) {
  const int np = (degree + 1) * (degree + 2) / 2;
  Vr.resize(r.size(), np);
  Vs.resize(r.size(), np);
  for (Eigen::Index n = 0; n < r.size(); ++n) {
    double a, b;
    rstoab(r[n], s[n], a, b);
    int col = 0;
    for (int i = 0; i <= degree; ++i)
      for (int j = 0; j <= degree - i; ++j) {
        grad_simplex2dp(a, b, i, j, Vr(n, col), Vs(n, col));
        ++col;
      }
  }
}

TriangleCubature triangle_cubature(int degree) {
  // collapsed Gauss x Gauss-Jacobi(1,0) tensor rule; the (1-b)/2 area factor
  // of the Duffy map is folded into the Jacobi weight
  const int n = degree + 2;
  Vec xa, wa, xb, wb;
  jacobi_gauss(n, 0.0, 0.0, xa, wa);
  jacobi_gauss(n, 1.0, 0.0, xb, wb);
  TriangleCubature cub;
  cub.points.resize(n * n, 2);
  cub.weights.resize(n * n);
  int q = 0;
  for (int ib = 0; ib < n; ++ib)
    for (int ia = 0; ia < n; ++ia) {
      cub.points(q, 0) = (1.0 + xa[ia]) * (1.0 - xb[ib]) / 2.0 - 1.0;
      cub.points(q, 1) = xb[ib];
      cub.weights[q] = wa[ia] * wb[ib] / 2.0;
      ++q;
    }
  cub.exact_degree = 2 * n - 1;
  return cub;
}

} // namespace

Mat triangle_basis_at(const TriangleRef& tri, const Mat& points_rs) {
  Vec r = points_rs.col(0), s = points_rs.col(1);
  return triangle_vandermonde(tri.degree, r, s) * tri.inv_vandermonde;
}

void triangle_grads_at(const TriangleRef& tri, const Mat& points_rs, Mat& dr, Mat& ds) {
  Vec r = points_rs.col(0), s = points_rs.col(1);
  Mat Vr, Vs;
  triangle_grad_vandermonde(tri.degree, r, s, Vr, Vs);
  dr = Vr * tri.inv_vandermonde;
  ds = Vs * tri.inv_vandermonde;
}

Mat interval_basis_at(const Interval1D& line, const Vec& points) {
  return legendre_vandermonde(line.degree, points) * line.vandermonde.inverse();
}

Mat interval_grads_at(const Interval1D& line, const Vec& points) {
  return legendre_grad_vandermonde(line.degree, points) * line.vandermonde.inverse();
}

TriangleRef build_triangle(int degree) {
  check_degree(degree);
  TriangleRef tri;
  tri.degree = degree;
  tri.num_nodes = (degree + 1) * (degree + 2) / 2;
  triangle_nodes(degree, tri.r, tri.s, tri.lattice);

  tri.vandermonde = triangle_vandermonde(degree, tri.r, tri.s);
  tri.cond_vandermonde = svd_cond(tri.vandermonde);
  tri.inv_vandermonde = tri.vandermonde.inverse();

  Mat Vr, Vs;
  triangle_grad_vandermonde(degree, tri.r, tri.s, Vr, Vs);
  tri.dr = Vr * tri.inv_vandermonde;
  tri.ds = Vs * tri.inv_vandermonde;
  tri.mass = tri.inv_vandermonde.transpose() * tri.inv_vandermonde;

  tri.cubature = triangle_cubature(degree);
  tri.interp_cub = triangle_basis_at(tri, tri.cubature.points);

  // first moments of the basis products; a Jacobian affine in (r,s) makes the
  // weighted element mass a combination of mass and these two matrices
  const Eigen::Index q = tri.cubature.weights.size();
  Mat wr = tri.interp_cub, ws = tri.interp_cub;
  for (Eigen::Index k = 0; k < q; ++k) {
    wr.row(k) *= tri.cubature.weights[k] * tri.cubature.points(k, 0);
    ws.row(k) *= tri.cubature.weights[k] * tri.cubature.points(k, 1);
  }
  tri.moment_r = tri.interp_cub.transpose() * wr;
  tri.moment_s = tri.interp_cub.transpose() * ws;
  tri.moment_r = 0.5 * (tri.moment_r + tri.moment_r.transpose()).eval();
  tri.moment_s = 0.5 * (tri.moment_s + tri.moment_s.transpose()).eval();

  // edge node lists, ordered from vertex e to vertex (e+1)%3
  const double tol = 1e-8;
  for (int n = 0; n < tri.num_nodes; ++n) {
    if (std::abs(tri.s[n] + 1.0) < tol) tri.edge_nodes[0].push_back(n);
    if (std::abs(tri.r[n] + tri.s[n]) < tol) tri.edge_nodes[1].push_back(n);
    if (std::abs(tri.r[n] + 1.0) < tol) tri.edge_nodes[2].push_back(n);
  }
  auto sort_by = [&](std::vector<int>& v, auto key) {
    std::sort(v.begin(), v.end(), [&](int a, int b) { return key(a) < key(b); });
  };
  sort_by(tri.edge_nodes[0], [&](int n) { return tri.r[n]; });
  sort_by(tri.edge_nodes[1], [&](int n) { return tri.s[n]; });
  sort_by(tri.edge_nodes[2], [&](int n) { return -tri.s[n]; });
  for (const auto& e : tri.edge_nodes)
    if ((int)e.size() != degree + 1)
      throw NumericalError("triangle edge node detection failed");
  return tri;
}

// ---------------------------------------------------------------------------
// Wedge
// ---------------------------------------------------------------------------

WedgeRef build_wedge_ref(const TriangleRef& tri, const Interval1D& line) {
  if (tri.degree != line.degree)
    throw ConfigError("wedge reference requires matching triangle/interval degrees");
  WedgeRef w;
  w.degree = tri.degree;
  w.num_tri_nodes = tri.num_nodes;
  w.num_nodes = tri.num_nodes * (line.degree + 1);
  w.r.resize(w.num_nodes);
  w.s.resize(w.num_nodes);
  w.t.resize(w.num_nodes);
  const int nq = line.degree + 1;
  for (int i = 0; i < tri.num_nodes; ++i)
    for (int j = 0; j < nq; ++j) {
      const int id = w.node_id(i, j);
      w.r[id] = tri.r[i];
      w.s[id] = tri.s[i];
      w.t[id] = line.nodes[j];
    }

  for (int i = 0; i < tri.num_nodes; ++i) {
    w.face_nodes[0].push_back(w.node_id(i, 0));
    w.face_nodes[1].push_back(w.node_id(i, nq - 1));
  }
  for (int e = 0; e < 3; ++e)
    for (int a = 0; a < nq; ++a)
      for (int j = 0; j < nq; ++j)
        w.face_nodes[2 + e].push_back(w.node_id(tri.edge_nodes[e][a], j));
  return w;
}

// ---------------------------------------------------------------------------
// Tetrahedron
// ---------------------------------------------------------------------------

namespace {

void tet_nodes(int degree, Vec& r, Vec& s, Vec& t, std::vector<std::array<int, 3>>& lattice) {
  const int np = (degree + 1) * (degree + 2) * (degree + 3) / 6;
  const double alpha = blend_alpha(degree);
  const double tol = 1e-10;

  // equispaced barycentric lattice
  Vec re(np), se(np), te(np);
  lattice.clear();
  lattice.reserve(np);
  int sk = 0;
  for (int k = 0; k <= degree; ++k)
    for (int j = 0; j <= degree - k; ++j)
      for (int i = 0; i <= degree - k - j; ++i) {
        re[sk] = -1.0 + 2.0 * i / degree;
        se[sk] = -1.0 + 2.0 * j / degree;
        te[sk] = -1.0 + 2.0 * k / degree;
        lattice.push_back({i, j, k});
        ++sk;
      }

  const Vec L1 = (1.0 + te.array()).matrix() / 2.0;
  const Vec L2 = (1.0 + se.array()).matrix() / 2.0;
  const Vec L3 = (-(1.0 + re.array() + se.array() + te.array())).matrix() / 2.0;
  const Vec L4 = (1.0 + re.array()).matrix() / 2.0;

  using V3 = Eigen::Vector3d;
  const V3 v1(-1.0, -1.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0));
  const V3 v2(1.0, -1.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0));
  const V3 v3(0.0, 2.0 / std::sqrt(3.0), -1.0 / std::sqrt(6.0));
  const V3 v4(0.0, 0.0, 3.0 / std::sqrt(6.0));

  std::array<V3, 4> t1 = {v2 - v1, v2 - v1, v3 - v2, v3 - v1};
  std::array<V3, 4> t2 = {v3 - 0.5 * (v1 + v2), v4 - 0.5 * (v1 + v2), v4 - 0.5 * (v2 + v3),
                          v4 - 0.5 * (v1 + v3)};
  for (int f = 0; f < 4; ++f) {
    t1[f].normalize();
    t2[f].normalize();
  }

  Mat xyz(np, 3);
  for (int n = 0; n < np; ++n)
    xyz.row(n) = (L3[n] * v1 + L4[n] * v2 + L2[n] * v3 + L1[n] * v4).transpose();

  Mat shift = Mat::Zero(np, 3);
  for (int face = 0; face < 4; ++face) {
    Vec La, Lb, Lc, Ld;
    switch (face) {
      case 0: La = L1; Lb = L2; Lc = L3; Ld = L4; break;
      case 1: La = L2; Lb = L1; Lc = L3; Ld = L4; break;
      case 2: La = L3; Lb = L1; Lc = L4; Ld = L2; break;
      default: La = L4; Lb = L1; Lc = L3; Ld = L2; break;
    }
    Vec warp1, warp2;
    evalshift(degree, alpha, Lb, Lc, Ld, warp1, warp2);

    for (int n = 0; n < np; ++n) {
      double blend = Lb[n] * Lc[n] * Ld[n];
      const double denom =
          (Lb[n] + 0.5 * La[n]) * (Lc[n] + 0.5 * La[n]) * (Ld[n] + 0.5 * La[n]);
      if (denom > tol)
        blend = (1.0 + std::pow(alpha * La[n], 2)) * blend / denom;
      shift.row(n) += blend * warp1[n] * t1[face].transpose() +
                      blend * warp2[n] * t2[face].transpose();
      const int interior =
          int(Lb[n] > tol) + int(Lc[n] > tol) + int(Ld[n] > tol);
      if (La[n] < tol && interior < 3)
        shift.row(n) = warp1[n] * t1[face].transpose() + warp2[n] * t2[face].transpose();
    }
  }
  xyz += shift;

  // back to reference coordinates through the barycentric system
  Eigen::Matrix4d A;
  A << v1[0], v2[0], v3[0], v4[0], v1[1], v2[1], v3[1], v4[1], v1[2], v2[2], v3[2], v4[2],
      1.0, 1.0, 1.0, 1.0;
  const Eigen::Matrix4d Ainv = A.inverse();
  r.resize(np);
  s.resize(np);
  t.resize(np);
  for (int n = 0; n < np; ++n) {
    Eigen::Vector4d rhs(xyz(n, 0), xyz(n, 1), xyz(n, 2), 1.0);
    Eigen::Vector4d L = Ainv * rhs; // (L3, L4, L2, L1) in vertex order v1..v4
    r[n] = 2.0 * L[1] - 1.0;
    s[n] = 2.0 * L[2] - 1.0;
    t[n] = 2.0 * L[3] - 1.0;
  }
}

Mat tet_vandermonde(int degree, const Vec& r, const Vec& s, const Vec& t) {
  const int np = (degree + 1) * (degree + 2) * (degree + 3) / 6;
  Mat V(r.size(), np);
  for (Eigen::Index n = 0; n < r.size(); ++n) {
    double a, b, c;
    rsttoabc(r[n], s[n], t[n], a, b, c);
    int col = 0;
    for (int i = 0; i <= degree; ++i)
      for (int j = 0; j <= degree - i; ++j)
        for (int k = 0; k <= degree - i - j; ++k) V(n, col++) = simplex3dp(a, b, c, i, j, k);
  }
  return V;
}

void tet_grad_vandermonde(int degree, const Vec& r, const Vec& s, const Vec& t, Mat& Vr,
                          Mat& Vs, Mat& Vt) {
  const int np = (degree + 1) * (degree + 2) * (degree + 3) / 6;
  Vr.resize(r.size(), np);
  Vs.resize(r.size(), np);
  Vt.resize(r.size(), np);
  for (Eigen::Index n = 0; n < r.size(); ++n) {
    double a, b, c;
    rsttoabc(r[n], s[n], t[n], a, b, c);
    int col = 0;
    for (int i = 0; i <= degree; ++i)
      for (int j = 0; j <= degree - i; ++j)
        for (int k = 0; k <= degree - i - j; ++k) {
          grad_simplex3dp(a, b, c, i, j, k, Vr(n, col), Vs(n, col), Vt(n, col));
          ++col;
        }
  }
  return;
}

TetCubature tet_cubature(int degree) {
  const int n = degree + 2;
  Vec xa, wa, xb, wb, xc, wc;
  jacobi_gauss(n, 0.0, 0.0, xa, wa);
  jacobi_gauss(n, 1.0, 0.0, xb, wb);
  jacobi_gauss(n, 2.0, 0.0, xc, wc);
  TetCubature cub;
  cub.points.resize(n * n * n, 3);
  cub.weights.resize(n * n * n);
  int q = 0;
  for (int ic = 0; ic < n; ++ic)
    for (int ib = 0; ib < n; ++ib)
      for (int ia = 0; ia < n; ++ia) {
        const double a = xa[ia], b = xb[ib], c = xc[ic];
        cub.points(q, 0) = (1.0 + a) * (1.0 - b) * (1.0 - c) / 4.0 - 1.0;
        cub.points(q, 1) = (1.0 + b) * (1.0 - c) / 2.0 - 1.0;
        cub.points(q, 2) = c;
        cub.weights[q] = wa[ia] * wb[ib] * wc[ic] / 8.0;
        ++q;
      }
  cub.exact_degree = 2 * n - 1;
  return cub;
}

} // namespace

Mat tet_basis_at(const TetRef& tet, const Mat& points_rst) {
  Vec r = points_rst.col(0), s = points_rst.col(1), t = points_rst.col(2);
  return tet_vandermonde(tet.degree, r, s, t) * tet.inv_vandermonde;
}

void tet_grads_at(const TetRef& tet, const Mat& points_rst, Mat& dr, Mat& ds, Mat& dt) {
  Vec r = points_rst.col(0), s = points_rst.col(1), t = points_rst.col(2);
  Mat Vr, Vs, Vt;
  tet_grad_vandermonde(tet.degree, r, s, t, Vr, Vs, Vt);
  dr = Vr * tet.inv_vandermonde;
  ds = Vs * tet.inv_vandermonde;
  dt = Vt * tet.inv_vandermonde;
}

TetRef build_tet_ref(int degree) {
  check_degree(degree);
  TetRef tet;
  tet.degree = degree;
  tet.num_nodes = (degree + 1) * (degree + 2) * (degree + 3) / 6;
  tet.num_face_nodes = (degree + 1) * (degree + 2) / 2;
  tet_nodes(degree, tet.r, tet.s, tet.t, tet.lattice);

  tet.vandermonde = tet_vandermonde(degree, tet.r, tet.s, tet.t);
  tet.cond_vandermonde = svd_cond(tet.vandermonde);
  tet.inv_vandermonde = tet.vandermonde.inverse();
  Mat Vr, Vs, Vt;
  tet_grad_vandermonde(degree, tet.r, tet.s, tet.t, Vr, Vs, Vt);
  tet.dr = Vr * tet.inv_vandermonde;
  tet.ds = Vs * tet.inv_vandermonde;
  tet.dt = Vt * tet.inv_vandermonde;
  tet.mass = tet.inv_vandermonde.transpose() * tet.inv_vandermonde;

  tet.cubature = tet_cubature(degree);
  tet.interp_cub = tet_basis_at(tet, tet.cubature.points);

  tet.face_vertices = {{{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {0, 2, 3}}};
  const std::array<std::array<double, 3>, 4> corners = {
      {{-1.0, -1.0, -1.0}, {1.0, -1.0, -1.0}, {-1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}}};

  // face nodes ordered to match the triangle reference nodes under the
  // face's affine parametrization; the shared warp construction makes the
  // match exact
  const TriangleRef tri = build_triangle(degree);
  for (int f = 0; f < 4; ++f) {
    const auto& c0 = corners[tet.face_vertices[f][0]];
    const auto& c1 = corners[tet.face_vertices[f][1]];
    const auto& c2 = corners[tet.face_vertices[f][2]];
    tet.face_nodes[f].resize(tet.num_face_nodes);
    for (int m = 0; m < tet.num_face_nodes; ++m) {
      const double l0 = -(tri.r[m] + tri.s[m]) / 2.0;
      const double l1 = (1.0 + tri.r[m]) / 2.0;
      const double l2 = (1.0 + tri.s[m]) / 2.0;
      std::array<double, 3> p;
      for (int d = 0; d < 3; ++d) p[d] = l0 * c0[d] + l1 * c1[d] + l2 * c2[d];
      int best = -1;
      double bestd = 1e30;
      for (int n = 0; n < tet.num_nodes; ++n) {
        const double dx = tet.r[n] - p[0], dy = tet.s[n] - p[1], dz = tet.t[n] - p[2];
        const double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 < bestd) {
          bestd = d2;
          best = n;
        }
      }
      if (std::sqrt(bestd) > 1e-10)
        throw NumericalError("tet face nodes do not conform to triangle nodes");
      tet.face_nodes[f][m] = best;
    }
  }

  // reference lift: inverse mass times the face mass blocks.  Face mass on a
  // unisolvent nodal face reduces to the (permuted) triangle reference mass.
  const int nfp = tet.num_face_nodes;
  tet.lift.resize(tet.num_nodes, 4 * nfp);
  const Mat vvt = tet.vandermonde * tet.vandermonde.transpose(); // = mass^{-1}
  for (int f = 0; f < 4; ++f) {
    Mat emb = Mat::Zero(tet.num_nodes, nfp);
    for (int m = 0; m < nfp; ++m)
      for (int n = 0; n < nfp; ++n) emb(tet.face_nodes[f][m], n) = tri.mass(m, n);
    tet.lift.block(0, f * nfp, tet.num_nodes, nfp) = vvt * emb;
  }
  return tet;
}

References build_references(int degree) {
  References refs;
  refs.degree = degree;
  refs.line = build_interval(degree);
  refs.tri = build_triangle(degree);
  refs.wedge = build_wedge_ref(refs.tri, refs.line);
  refs.tet = build_tet_ref(degree);
  return refs;
}

// ---------------------------------------------------------------------------
// Wedge vertex functions (bi-unit convention)
// ---------------------------------------------------------------------------

double wedge_vertex_function(int m, double r, double s, double t) {
  const double l[3] = {-(r + s) / 2.0, (1.0 + r) / 2.0, (1.0 + s) / 2.0};
  const double za = (1.0 - t) / 2.0, zb = (1.0 + t) / 2.0;
  return (m < 3) ? l[m] * za : l[m - 3] * zb;
}

std::array<double, 3> wedge_vertex_function_grad(int m, double r, double s, double t) {
  const double l[3] = {-(r + s) / 2.0, (1.0 + r) / 2.0, (1.0 + s) / 2.0};
  const double dl_dr[3] = {-0.5, 0.5, 0.0};
  const double dl_ds[3] = {-0.5, 0.0, 0.5};
  const double za = (1.0 - t) / 2.0, zb = (1.0 + t) / 2.0;
  const int i = m % 3;
  if (m < 3) return {dl_dr[i] * za, dl_ds[i] * za, -0.5 * l[i]};
  return {dl_dr[i] * zb, dl_ds[i] * zb, 0.5 * l[i]};
}

} // namespace prismdg
