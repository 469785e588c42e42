#pragma once

#include "prismdg/geometry.hpp"
#include "prismdg/reference.hpp"
#include "prismdg/types.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace prismdg {

/// Quadrature used along the extruded coordinate.  "exact" keeps the full 1D
/// mass matrix; "lumped" collapses it onto the GLL weights, which changes the
/// triangular-face lifts (and the energy norm) but nothing else for
/// vertically mapped wedges.
enum class QuadratureMode { exact, lumped };

/// Per-wedge operator storage.  Everything else (reference derivative
/// matrices, 1D lift profiles) is shared between elements, so the per-element
/// cost stays at Np_tri^2 + 3*Np_tri*(N+1) + O(N) floats.
struct WedgeOperators {
  Mat tri_lift;                 // (M^{tri,k})^{-1} * Mhat_tri
  std::array<Mat, 3> quad_lift; // (M^{tri,k})^{-1} * weighted edge mass, Np_tri x (N+1)
  Vec txJ, tyJ;                 // t_x*J and t_y*J at the GLL t nodes
  double tzJ = 0, rx = 0, ry = 0, sx = 0, sy = 0;
  double jf_bottom = 0, jf_top = 0;

  std::size_t storage_floats() const {
    return (std::size_t)tri_lift.size() + quad_lift[0].size() + quad_lift[1].size() +
           quad_lift[2].size() + txJ.size() + tyJ.size() + 7;
  }
};

/// Tets are affine: physical operators are scaled reference operators, so the
/// per-element footprint is a fixed handful of scalars.
struct TetOperators {
  double rx = 0, ry = 0, rz = 0, sx = 0, sy = 0, sz = 0, tx = 0, ty = 0, tz = 0;
  std::array<double, 4> lift_scale{}; // J_f / J per face

  std::size_t storage_floats() const { return 13; }
};

/// Mass-lumped wedge mass: block diagonal with N+1 blocks w_j * M^{tri,k}.
/// Volume derivatives and quad-face lifts coincide with the exact factors;
/// only the tri-face 1D lift profile and the mass differ.
struct LumpedWedgeOperators {
  Mat tri_mass;  // M^{tri,k}, the repeated block
  Vec t_weights; // GLL weights scaling each block
  WedgeOperators base;
};

/// Jacobian-weighted triangle mass M^{tri,k} = j0*Mhat + jr*Xr + js*Xs
/// (exact: J is affine over the triangle).
Mat wedge_tri_mass(const ElementGeometry& geom, const References& refs);

WedgeOperators build_wedge_operators(const ElementGeometry& geom, const References& refs);
TetOperators build_tet_operators(const ElementGeometry& geom);
LumpedWedgeOperators build_lumped_wedge_operators(const ElementGeometry& geom,
                                                  const References& refs);

/// Physical derivatives of a nodal field (t-fast layout), Kronecker path.
void apply_wedge_derivatives(const WedgeOperators& ops, const References& refs, const Vec& u,
                             Vec& dx, Vec& dy, Vec& dz);

/// Accumulate (M^k)^{-1} M_f^k * flux for one face into out.
void apply_wedge_lift(const WedgeOperators& ops, const References& refs, QuadratureMode mode,
                      int face, const Vec& flux, Vec& out);

/// Mass action in the requested quadrature mode.
void apply_wedge_mass(const ElementGeometry& geom, const References& refs,
                      QuadratureMode mode, const Vec& u, Vec& out);

void apply_tet_derivatives(const TetOperators& ops, const References& refs, const Vec& u,
                           Vec& dx, Vec& dy, Vec& dz);
void apply_tet_lift(const TetOperators& ops, const References& refs, int face,
                    const Vec& flux, Vec& out);
void apply_tet_mass(const ElementGeometry& geom, const References& refs, const Vec& u,
                    Vec& out);

struct StorageReport {
  int degree = 0;
  std::size_t num_wedges = 0, num_tets = 0;
  std::size_t wedge_floats_per_elem = 0; // max over elements (they are equal)
  std::size_t tet_floats_per_elem = 0;
  std::size_t budget_per_wedge = 0; // Np_tri^2 + 3*Np_tri*(N+1) + 8*(N+1)
  std::size_t total_floats = 0;
};

StorageReport storage_report(int degree, const std::vector<WedgeOperators>& wedges,
                             const std::vector<TetOperators>& tets);

} // namespace prismdg
