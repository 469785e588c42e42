#pragma once

#include "prismdg/reference.hpp"
#include "prismdg/types.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace prismdg {

constexpr int kReflectiveTag = 1; // default boundary: p = 0 reflection

struct Media {
  double rho = 1.0;
  double kappa = 1.0;
  double wavespeed() const { return std::sqrt(kappa / rho); }
};

/// Hybrid mesh of vertically mapped wedges and vertex-mapped tetrahedra.
/// Wedge vertex order: bottom triangle counterclockwise seen from above,
/// then the top triangle as vertical partners (pairs 0-3, 1-4, 2-5).
/// Element ids enumerate wedges first, then tets.
struct HybridMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<int, 6>> wedges;
  std::vector<std::array<int, 4>> tets;
  std::vector<Media> media; // one entry per element
  std::map<std::pair<int, int>, int> boundary_tags; // (elem, face) -> tag

  int num_wedges() const { return (int)wedges.size(); }
  int num_tets() const { return (int)tets.size(); }
  int num_elements() const { return num_wedges() + num_tets(); }
  ElemKind kind(int e) const { return e < num_wedges() ? ElemKind::wedge : ElemKind::tet; }
  int num_faces(int e) const { return kind(e) == ElemKind::wedge ? 5 : 4; }

  std::array<std::array<double, 3>, 6> wedge_verts(int w) const;
  std::array<std::array<double, 3>, 4> tet_verts(int t) const;
};

/// Surface triangulation in the (x,y) plane with bottom/top height columns.
struct SurfaceTriangulation {
  std::vector<std::array<double, 2>> vertices;
  std::vector<double> z_bottom, z_top;
  std::vector<std::array<int, 3>> triangles; // counterclockwise
};

struct LayerSpec {
  std::vector<double> z_bottom, z_top; // per surface vertex
  int sublayers = 1;
  Media media;
};

/// True iff the six vertices describe a vertically mapped wedge: the (x,y)
/// coordinates of each vertical vertex pair agree (relative to the element
/// diameter) and the element volume is nonzero.
bool is_vertically_mapped(const std::array<std::array<double, 3>, 6>& v);

HybridMesh extrude_layer(const SurfaceTriangulation& surface, int layers, Media media = {});
HybridMesh stack_layers(const std::vector<std::array<double, 2>>& xy,
                        const std::vector<std::array<int, 3>>& triangles,
                        const std::vector<LayerSpec>& layers);

/// Uniform box [-1,1]^3: tets below (Kuhn 6-tet split), extruded wedges
/// above.  The split rule makes the interface triangulations identical, so
/// every wedge-tet interface face pairs exactly.
HybridMesh structured_hybrid_box(int nx, int ny, int nz_wedge, int nz_tet,
                                 Media wedge_media = {}, Media tet_media = {});

/// All-wedge box [-1,1]^3 with n x n surface cells and n layers.
HybridMesh structured_wedge_box(int n, Media media = {});

/// Non-nested refinement family: interior surface vertices jittered in (x,y)
/// by up to xy_jitter x (cell size), then extruded and vertically perturbed.
HybridMesh unstructured_wedge_box(int n, double xy_jitter, double z_amplitude,
                                  std::uint64_t seed, Media media = {});

/// Randomly shift interior vertex heights by up to amplitude x (local layer
/// height).  Vertices on non-vertical boundary faces stay fixed, so the domain
/// shape is preserved.  Deterministic for a given seed; retries with halved
/// amplitude if an element would invert.
HybridMesh perturb_vertically(const HybridMesh& mesh, double amplitude, std::uint64_t seed);

/// Structured wedge box with a self-similar alternating vertical displacement:
/// interior interface vertex (i,j,m) moves by delta * (-1)^(i+j+m) x (layer
/// height).  The pattern is scale-invariant, so refined meshes never become
/// asymptotically affine.
HybridMesh arnold_wedge_box(int n, double delta, Media media = {});

struct FaceConn {
  int nbr = -1;      // neighbor element id, -1 at the boundary
  int nbr_face = -1;
  int tag = kReflectiveTag;  // boundary tag (valid when nbr < 0)
  std::vector<int> perm;     // my face node i <-> neighbor face node perm[i]
};

struct Connectivity {
  std::vector<std::vector<FaceConn>> elem; // per element, per face
  int num_interior_pairs = 0;
  int num_boundary_faces = 0;
};

/// Canonical mesh vertex ids of face f of element e (3 for tris, 4 for quads).
std::vector<int> face_vertex_ids(const HybridMesh& mesh, int e, int f);

/// Physical coordinates of the reference face nodes of (e, f).
std::vector<std::array<double, 3>> face_node_coords(const HybridMesh& mesh,
                                                    const References& refs, int e, int f);

Connectivity build_connectivity(const HybridMesh& mesh, const References& refs);

/// Structural and geometric validation; throws MeshError naming the element.
void validate_mesh(const HybridMesh& mesh);

HybridMesh load_mesh(const std::string& path);
void save_mesh(const HybridMesh& mesh, const std::string& path);

SurfaceTriangulation load_surface(const std::string& path);

/// Total volume from the per-element Jacobians (quadrature-exact).
double mesh_volume(const HybridMesh& mesh);

} // namespace prismdg
