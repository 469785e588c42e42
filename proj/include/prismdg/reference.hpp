#pragma once

#include "prismdg/types.hpp"

#include <array>
#include <vector>

namespace prismdg {

constexpr int kMaxDegree = 9;

/// Nodal data on the bi-unit interval [-1,1] with Gauss-Legendre-Lobatto nodes.
struct Interval1D {
  int degree = 0;
  Vec nodes;    // N+1 GLL nodes, ascending, includes +-1
  Vec weights;  // GLL quadrature weights, sum to 2
  Mat vandermonde;
  Mat diff;      // nodal differentiation matrix
  Mat mass;      // exact 1D mass matrix (V V^T)^{-1}
  Mat inv_mass;
  Vec lift_bottom, lift_top;                // (M1D)^{-1} e_0 and e_N
  Vec lumped_lift_bottom, lumped_lift_top;  // e_0/w_0 and e_N/w_N (GLL collapse)
  // auxiliary Gauss-Legendre rule with N+2 points (exact to degree 2N+3),
  // used wherever a Jacobian-weighted 1D integral must stay exact
  Vec gq_nodes, gq_weights;
  Mat interp_gq; // Lagrange basis at the Gauss points, (N+2) x (N+1)
};

struct TriangleCubature {
  Mat points;  // Q x 2 (r,s)
  Vec weights; // sums to 2 (area of the bi-unit triangle)
  int exact_degree = 0;
};

/// Nodal data on the bi-unit triangle {r,s >= -1, r+s <= 0}.
/// Nodes are warp-and-blend points; edge traces coincide with the GLL
/// distribution of Interval1D, which is what makes wedge quad faces and
/// tet faces conforming.
struct TriangleRef {
  int degree = 0;
  int num_nodes = 0; // (N+1)(N+2)/2
  Vec r, s;
  Mat vandermonde, inv_vandermonde;
  Mat dr, ds;
  Mat mass;               // reference mass (V V^T)^{-1}
  Mat moment_r, moment_s; // int l_i l_j r  and  int l_i l_j s
  TriangleCubature cubature;
  Mat interp_cub; // cubature-point interpolation, Q x Np
  // edge e runs from vertex e to vertex (e+1)%3 with vertices
  // (-1,-1), (1,-1), (-1,1); nodes listed in edge-coordinate order
  std::array<std::vector<int>, 3> edge_nodes;
  std::vector<std::array<int, 2>> lattice; // equispaced (i,j) label per node
  double cond_vandermonde = 0.0;
};

/// Tensor-product wedge reference element (triangle x interval).
/// Node (i,j) sits at (r_i, s_i, t_j) and has flat id i*(N+1)+j, so the
/// vertical line of each triangle node is contiguous in memory.
struct WedgeRef {
  int degree = 0;
  int num_nodes = 0;     // (N+1)^2 (N+2)/2
  int num_tri_nodes = 0; // (N+1)(N+2)/2
  Vec r, s, t;           // length num_nodes
  // faces: 0 bottom tri (t=-1), 1 top tri (t=+1), 2..4 quads over triangle
  // edges 0..2.  Tri-face node f equals triangle node f; quad-face node
  // (a,j) has local index a*(N+1)+j.
  std::array<std::vector<int>, 5> face_nodes;

  int node_id(int tri_node, int line_node) const { return tri_node * (degree + 1) + line_node; }
};

struct TetCubature {
  Mat points; // Q x 3
  Vec weights;
  int exact_degree = 0;
};

/// Nodal data on the bi-unit tetrahedron with vertices
/// (-1,-1,-1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
struct TetRef {
  int degree = 0;
  int num_nodes = 0;      // (N+1)(N+2)(N+3)/6
  int num_face_nodes = 0; // (N+1)(N+2)/2
  Vec r, s, t;
  Mat vandermonde, inv_vandermonde;
  Mat dr, ds, dt;
  Mat mass;
  TetCubature cubature;
  Mat interp_cub;
  // face_nodes[f][m] is the volume node matching TriangleRef node m under
  // the face's affine parametrization (faces: t=-1, s=-1, r+s+t=-1, r=-1)
  std::array<std::vector<int>, 4> face_nodes;
  std::array<std::array<int, 3>, 4> face_vertices; // local corner ids per face
  Mat lift; // Np x 4*Nfp reference lift, scaled per element by Jf/J
  std::vector<std::array<int, 3>> lattice;
  double cond_vandermonde = 0.0;
};

Interval1D build_interval(int degree);
TriangleRef build_triangle(int degree);
WedgeRef build_wedge_ref(const TriangleRef& tri, const Interval1D& line);
TetRef build_tet_ref(int degree);

/// All reference data for one polynomial degree.
struct References {
  int degree = 0;
  Interval1D line;
  TriangleRef tri;
  WedgeRef wedge;
  TetRef tet;
};
References build_references(int degree);

/// Low-order wedge vertex functions on the bi-unit wedge, m = 0..5.
/// They sum to one and interpolate the six wedge vertices.
double wedge_vertex_function(int m, double r, double s, double t);
std::array<double, 3> wedge_vertex_function_grad(int m, double r, double s, double t);

/// Lagrange basis values of the triangle at arbitrary points, Q x Np.
Mat triangle_basis_at(const TriangleRef& tri, const Mat& points_rs);
void triangle_grads_at(const TriangleRef& tri, const Mat& points_rs, Mat& dr, Mat& ds);

/// Lagrange basis values/derivatives of the tet at arbitrary points.
Mat tet_basis_at(const TetRef& tet, const Mat& points_rst);
void tet_grads_at(const TetRef& tet, const Mat& points_rst, Mat& dr, Mat& ds, Mat& dt);

/// 1D Lagrange basis at arbitrary points, Q x (N+1).
Mat interval_basis_at(const Interval1D& line, const Vec& points);
Mat interval_grads_at(const Interval1D& line, const Vec& points);

} // namespace prismdg
