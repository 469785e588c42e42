#pragma once

#include "prismdg/mesh.hpp"
#include "prismdg/operators.hpp"
#include "prismdg/types.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

namespace prismdg {

enum class FluxMode { upwind, central, custom };

struct FluxConfig {
  FluxMode mode = FluxMode::upwind;
  double tau_p = 0.0, tau_u = 0.0; // used when mode == custom; must be >= 0
};

enum class IntegratorKind { lserk4, ab3 };

/// Everything fixed over a run: mesh, reference data, geometry, per-element
/// operators, connectivity, and the flattened face/trace tables the RHS
/// kernels consume.
///
/// State layout: element-major, variable-major within the element:
/// [p | u_x | u_y | u_z] per element, each of length Np(e).
struct Discretization {
  HybridMesh mesh;
  References refs;
  Connectivity conn;
  std::vector<ElementGeometry> geom;
  std::vector<WedgeOperators> wedge_ops;
  std::vector<TetOperators> tet_ops;
  QuadratureMode qmode = QuadratureMode::exact;
  FluxConfig flux;
  int threads = 1;

  std::vector<std::size_t> elem_offset; // start of the 4-field block of element e
  std::size_t total_dofs = 0;

  std::vector<std::size_t> node_offset; // start of element e in the node arrays
  std::size_t total_nodes = 0;
  std::vector<double> node_x, node_y, node_z; // physical node coordinates

  struct FaceData {
    std::vector<int> my_nodes;  // local volume node of each face node
    std::vector<int> nbr_nodes; // neighbor local volume nodes, aligned; empty at boundary
    int nbr = -1;
    double tau_p = 0.0, tau_u = 0.0;
    std::array<double, 3> normal{};
  };
  std::vector<std::vector<FaceData>> face_data;

  int np(int e) const {
    return mesh.kind(e) == ElemKind::wedge ? refs.wedge.num_nodes : refs.tet.num_nodes;
  }
};

Discretization build_discretization(HybridMesh mesh, int degree, FluxConfig flux = {},
                                    QuadratureMode qmode = QuadratureMode::exact,
                                    int threads = 1);

/// Semi-discrete right-hand side for the full state vector; writes all of rhs.
/// Element-parallel with disjoint writes: bitwise identical for any thread count.
void compute_rhs(const Discretization& disc, const double* u, double* rhs);

/// Individual kernel phases (volume writes its block, surface accumulates,
/// neither applies the media scaling).  Used by the benchmark driver.
void wedge_volume_phase(const Discretization& disc, const double* u, double* rhs);
void wedge_surface_phase(const Discretization& disc, const double* u, double* rhs);
void tet_volume_phase(const Discretization& disc, const double* u, double* rhs);
void tet_surface_phase(const Discretization& disc, const double* u, double* rhs);

/// Discrete energy 1/2 sum_k (p^T M p / kappa + rho u^T M u), exact mass
/// unless the discretization is mass-lumped.
double compute_energy(const Discretization& disc, const double* u);

/// cfl * min_k h_k / (c_k (N+1)^2) with h_k = volume / surface area.
double estimate_dt(const Discretization& disc, double cfl);

struct SolutionState {
  std::vector<double> u;
  double time = 0.0;
  std::vector<std::vector<double>> history; // integrator history (AB3)
  int history_filled = 0;
};

struct FieldFunctions {
  std::function<double(double, double, double, double)> p, ux, uy, uz; // (x,y,z,t)
};

/// Standing pressure mode of the unit-wavespeed cube [-1,1]^3 with p = 0 on
/// the boundary; the reference solution for the convergence studies.
FieldFunctions standing_wave(double c = 1.0, double rho = 1.0);
FieldFunctions gaussian_pulse(double width,
                              std::array<double, 3> center = {0.0, 0.0, 0.0});

/// Nodal interpolation of the analytic fields at time t0.
SolutionState make_initial_state(const Discretization& disc, const FieldFunctions& f,
                                 double t0 = 0.0);

using RhsFn = std::function<void(const std::vector<double>&, std::vector<double>&, double)>;

/// Explicit time stepping over a flat state vector.  The same coefficients
/// drive the solver runs and the scalar convergence diagnostics.
class TimeStepper {
public:
  TimeStepper(IntegratorKind kind, std::size_t n);
  void step(std::vector<double>& u, double& t, double dt, const RhsFn& rhs,
            SolutionState* state = nullptr);
  /// stability margin relative to the LSERK timestep
  double dt_scale() const { return kind_ == IntegratorKind::ab3 ? 0.25 : 1.0; }

private:
  IntegratorKind kind_;
  std::vector<double> res_, rhs_, tmp_;
  std::vector<std::vector<double>> fhist_;
  int filled_ = 0;
};

/// Advance a state by one step of the configured integrator.
void step(const Discretization& disc, SolutionState& state, double dt, TimeStepper& stepper);

struct RunOptions {
  double final_time = 1.0;
  double cfl = 0.5;
  IntegratorKind integrator = IntegratorKind::lserk4;
  double fixed_dt = 0.0;          // overrides the estimate when > 0
  double energy_interval = 0.0;   // 0: log every step
  std::ostream* energy_csv = nullptr;
  double snapshot_interval = 0.0; // 0: no snapshots
  std::function<void(const SolutionState&, int)> snapshot_cb;
  int watchdog_every = 50;
  double blowup_factor = 10.0;
};

struct RunResult {
  int steps = 0;
  double dt = 0.0;
  double final_time = 0.0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double max_energy_increase = 0.0; // max over logged steps of E_new - E_old
};

RunResult run_simulation(const Discretization& disc, SolutionState& state,
                         const RunOptions& opts);

} // namespace prismdg
