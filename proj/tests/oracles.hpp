#pragma once

#include "prismdg/geometry.hpp"
#include "prismdg/reference.hpp"

#include <array>
#include <random>

namespace prismdg::test {

/// GLL rule by Newton iteration on the Legendre-derivative polynomial;
/// independent of the library's eigenvalue-based construction.
void gll_newton(int npts, Vec& x, Vec& w);

/// Dense operators assembled by brute-force quadrature (exact to >= 2N+2):
/// the oracle the Kronecker-factored path is checked against.
struct DenseWedgeOps {
  Mat mass;
  Mat dx, dy, dz;            // (M^k)^{-1} S_*
  std::array<Mat, 5> lift;   // (M^k)^{-1} M_f, columns indexed by face nodes
};
DenseWedgeOps dense_wedge_ops(const std::array<std::array<double, 3>, 6>& verts,
                              const References& refs);

struct DenseTetOps {
  Mat mass;
  Mat dx, dy, dz;
  std::array<Mat, 4> lift;
};
DenseTetOps dense_tet_ops(const std::array<std::array<double, 3>, 4>& verts,
                          const References& refs);

/// Exact Jacobian matrix of the wedge vertex mapping at one point
/// (columns d/dr, d/ds, d/dt), assembled from the vertex-function gradients.
Eigen::Matrix3d wedge_jacobian_matrix(const std::array<std::array<double, 3>, 6>& verts,
                                      double r, double s, double t);

/// Finite-difference Jacobian of the wedge mapping.
Eigen::Matrix3d fd_wedge_jacobian(const std::array<std::array<double, 3>, 6>& verts,
                                  double r, double s, double t, double step = 1e-6);
Eigen::Matrix3d fd_tet_jacobian(const std::array<std::array<double, 3>, 4>& verts,
                                double r, double s, double t, double step = 1e-6);

/// Deterministic random element generators.
std::array<std::array<double, 3>, 6> random_vertical_wedge(std::mt19937_64& gen);
std::array<std::array<double, 3>, 4> random_tet(std::mt19937_64& gen);

/// The vertically-mapped-wedge property suite (constant J along t, vanishing
/// r_z/s_z, constant horizontal factors, linear t_x J / t_y J, quad-face
/// Jacobian structure), evaluated from the exact per-point Jacobian matrix.
/// Returns the worst relative violation across all checks.
double vertical_wedge_property_violation(const std::array<std::array<double, 3>, 6>& verts);

} // namespace prismdg::test
