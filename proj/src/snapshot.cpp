#include "prismdg/snapshot.hpp"

#include <cstdio>
#include <fstream>
#include <map>

namespace prismdg {

namespace {

// lattice (i,j) -> triangle node index
std::map<std::pair<int, int>, int> tri_lattice_map(const TriangleRef& tri) {
  std::map<std::pair<int, int>, int> m;
  for (int n = 0; n < tri.num_nodes; ++n)
    m[{tri.lattice[n][0], tri.lattice[n][1]}] = n;
  return m;
}

std::map<std::array<int, 3>, int> tet_lattice_map(const TetRef& tet) {
  std::map<std::array<int, 3>, int> m;
  for (int n = 0; n < tet.num_nodes; ++n) m[tet.lattice[n]] = n;
  return m;
}

// sub-triangulation of the degree-N triangle lattice
std::vector<std::array<int, 3>> tri_subcells(const TriangleRef& tri) {
  const int N = tri.degree;
  const auto map = tri_lattice_map(tri);
  std::vector<std::array<int, 3>> cells;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i + j < N; ++i) {
      cells.push_back({map.at({i, j}), map.at({i + 1, j}), map.at({i, j + 1})});
      if (i + j < N - 1)
        cells.push_back({map.at({i + 1, j}), map.at({i + 1, j + 1}), map.at({i, j + 1})});
    }
  return cells;
}

// decomposition of the degree-N tet lattice into N^3 sub-tets: corner tet,
// central octahedron split into four, and the reversed tet
std::vector<std::array<int, 4>> tet_subcells(const TetRef& tet) {
  const int N = tet.degree;
  const auto map = tet_lattice_map(tet);
  std::vector<std::array<int, 4>> cells;
  auto id = [&](int i, int j, int k) { return map.at({i, j, k}); };
  for (int k = 0; k < N; ++k)
    for (int j = 0; j + k < N; ++j)
      for (int i = 0; i + j + k < N; ++i) {
        const int m = i + j + k;
        cells.push_back({id(i, j, k), id(i + 1, j, k), id(i, j + 1, k), id(i, j, k + 1)});
        if (m <= N - 2) {
          const int p1 = id(i + 1, j, k), p2 = id(i, j + 1, k), p3 = id(i, j, k + 1);
          const int p4 = id(i + 1, j + 1, k), p5 = id(i + 1, j, k + 1),
                    p6 = id(i, j + 1, k + 1);
          cells.push_back({p1, p6, p2, p4});
          cells.push_back({p1, p6, p4, p5});
          cells.push_back({p1, p6, p5, p3});
          cells.push_back({p1, p6, p3, p2});
          if (m <= N - 3)
            cells.push_back({p4, p5, p6, id(i + 1, j + 1, k + 1)});
        }
      }
  return cells;
}

} // namespace

void write_vtk_snapshot(const Discretization& d, const double* u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  const auto wedge_tris = tri_subcells(d.refs.tri);
  const auto tet_cells = tet_subcells(d.refs.tet);
  const int nq = d.refs.degree + 1;

  std::size_t ncells = 0, csize = 0;
  if (d.mesh.num_wedges() > 0) {
    ncells += (std::size_t)d.mesh.num_wedges() * wedge_tris.size() * d.refs.degree;
    csize += (std::size_t)d.mesh.num_wedges() * wedge_tris.size() * d.refs.degree * 7;
  }
  if (d.mesh.num_tets() > 0) {
    ncells += (std::size_t)d.mesh.num_tets() * tet_cells.size();
    csize += (std::size_t)d.mesh.num_tets() * tet_cells.size() * 5;
  }

  char buf[128];
  out << "# vtk DataFile Version 3.0\nacoustic wave field\nASCII\n"
      << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << d.total_nodes << " double\n";
  for (std::size_t n = 0; n < d.total_nodes; ++n) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", d.node_x[n], d.node_y[n],
                  d.node_z[n]);
    out << buf;
  }

  out << "CELLS " << ncells << " " << csize << "\n";
  for (int e = 0; e < d.mesh.num_elements(); ++e) {
    const std::size_t base = d.node_offset[e];
    if (d.mesh.kind(e) == ElemKind::wedge) {
      for (int j = 0; j + 1 < nq; ++j)
        for (const auto& c : wedge_tris) {
          out << "6";
          for (int q = 0; q < 3; ++q) out << " " << base + (std::size_t)c[q] * nq + j;
          for (int q = 0; q < 3; ++q) out << " " << base + (std::size_t)c[q] * nq + j + 1;
          out << "\n";
        }
    } else {
      for (const auto& c : tet_cells) {
        out << "4";
        for (int q = 0; q < 4; ++q) out << " " << base + (std::size_t)c[q];
        out << "\n";
      }
    }
  }

  out << "CELL_TYPES " << ncells << "\n";
  for (int e = 0; e < d.mesh.num_elements(); ++e) {
    if (d.mesh.kind(e) == ElemKind::wedge) {
      const std::size_t n = wedge_tris.size() * (std::size_t)d.refs.degree;
      for (std::size_t i = 0; i < n; ++i) out << "13\n";
    } else {
      for (std::size_t i = 0; i < tet_cells.size(); ++i) out << "10\n";
    }
  }

  out << "POINT_DATA " << d.total_nodes << "\n";
  const char* names[4] = {"p", "u_x", "u_y", "u_z"};
  for (int field = 0; field < 4; ++field) {
    out << "SCALARS " << names[field] << " double\nLOOKUP_TABLE default\n";
    for (int e = 0; e < d.mesh.num_elements(); ++e) {
      const int np = d.np(e);
      const std::size_t ubase = d.elem_offset[e] + (std::size_t)field * np;
      for (int n = 0; n < np; ++n) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", u[ubase + n]);
        out << buf;
      }
    }
  }
}

} // namespace prismdg
