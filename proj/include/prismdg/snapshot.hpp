#pragma once

#include "prismdg/solver.hpp"

#include <string>

namespace prismdg {

/// Legacy ASCII unstructured-grid snapshot: each element is linearly
/// subdivided into sub-wedges/sub-tets along its nodal lattice, with point
/// data p, u_x, u_y, u_z.
void write_vtk_snapshot(const Discretization& disc, const double* u,
                        const std::string& path);

} // namespace prismdg
