#pragma once

#include "prismdg/solver.hpp"
#include "prismdg/types.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace prismdg {

constexpr std::size_t kDenseDofCap = 20000;

/// Dense semi-discrete operator dU/dt = A U in the state ordering of the
/// Discretization (element-major, [p|ux|uy|uz] per element).
struct GlobalOperator {
  Mat A;
  int degree = 0;
  FluxMode flux = FluxMode::upwind;
  QuadratureMode qmode = QuadratureMode::exact;
};

/// Column-by-column assembly through the right-hand side; guarded by the
/// dense DOF cap.
GlobalOperator assemble_global(const Discretization& disc);

/// Full eigenvalue set of A, sorted by ascending real part.
std::vector<std::complex<double>> spectrum(const Mat& A);

/// L2 norm of (p_h - p_exact) over the mesh, evaluated with the reference
/// cubatures (exact field sampled at cubature points, not at nodes).
double l2_error(const Discretization& disc, const double* u,
                const std::function<double(double, double, double, double)>& exact_p,
                double time);

enum class MeshFamily { structured, unstructured, arnold };
MeshFamily parse_family(const std::string& name);
std::string family_name(MeshFamily f);

struct FamilyParams {
  std::uint64_t seed = 20160311;
  double xy_jitter = 0.15;     // unstructured: horizontal jitter x cell size
  double z_amplitude = 0.3;    // unstructured: vertical perturbation fraction
  double arnold_delta = 0.25;  // arnold: alternating displacement fraction
};

/// One mesh of the refinement family at mesh size h = 2/n.
HybridMesh make_family_mesh(MeshFamily family, double h, const FamilyParams& params = {});

struct ConvergenceRecord {
  std::vector<double> h;
  std::vector<double> error;
  std::vector<bool> stable;
  double rate = 0.0; // least-squares slope over the last three levels
};

struct ConvergenceConfig {
  MeshFamily family = MeshFamily::structured;
  int degree = 2;
  std::vector<double> h = {2.0, 1.0, 0.5, 0.25, 0.125};
  FluxMode flux = FluxMode::upwind;
  double final_time = 1.0;
  double cfl = 0.5;
  int threads = 1;
  FamilyParams params;
};

ConvergenceRecord convergence_study(const ConvergenceConfig& cfg);

/// Least-squares slope of log(error) against log(h) over the last
/// min(3, n) entries.
double fit_rate(const std::vector<double>& h, const std::vector<double>& error);

struct BenchResult {
  int degree = 0;
  int wedge_np = 0, tet_np = 0;
  std::size_t num_wedges = 0, num_tets = 0;
  double wedge_volume_ns = 0, wedge_surface_ns = 0; // per element per evaluation
  double tet_volume_ns = 0, tet_surface_ns = 0;
  double wedge_volume_ns_dof = 0, wedge_surface_ns_dof = 0;
  double tet_volume_ns_dof = 0, tet_surface_ns_dof = 0;
  double volume_ratio = 0, surface_ratio = 0; // wedge per-dof / tet per-dof
  StorageReport storage;
};

/// CPU timing of the four RHS kernel phases on matched wedge/tet boxes.
BenchResult bench(int degree, int evals, int mesh_n = 3);

/// The perturbed 16-wedge mesh used by the spectral stability experiments.
HybridMesh spectra_mesh(std::uint64_t seed = 42, double amplitude = 0.3);

} // namespace prismdg
