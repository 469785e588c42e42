#include "prismdg/analysis.hpp"

#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prismdg {

GlobalOperator assemble_global(const Discretization& disc) {
  if (disc.total_dofs > kDenseDofCap)
    throw AnalysisError("dense operator assembly capped at " +
                        std::to_string(kDenseDofCap) + " DOFs, mesh has " +
                        std::to_string(disc.total_dofs));
  const int n = (int)disc.total_dofs;
  GlobalOperator go;
  go.degree = disc.refs.degree;
  go.flux = disc.flux.mode;
  go.qmode = disc.qmode;
  go.A.resize(n, n);
#ifdef _OPENMP
  omp_set_num_threads(disc.threads);
#pragma omp parallel
#endif
  {
    std::vector<double> u(n, 0.0), rhs(n, 0.0);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int j = 0; j < n; ++j) {
      std::fill(u.begin(), u.end(), 0.0);
      u[j] = 1.0;
      compute_rhs(disc, u.data(), rhs.data());
      for (int i = 0; i < n; ++i) go.A(i, j) = rhs[i];
    }
  }
  return go;
}

std::vector<std::complex<double>> spectrum(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw AnalysisError("dense eigensolver failed");
  std::vector<std::complex<double>> ev(A.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) ev[i] = es.eigenvalues()[i];
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

double l2_error(const Discretization& d, const double* u,
                const std::function<double(double, double, double, double)>& exact_p,
                double time) {
  const auto& refs = d.refs;
  double acc = 0.0;
  for (int e = 0; e < d.mesh.num_elements(); ++e) {
    const std::size_t base = d.elem_offset[e];
    if (d.mesh.kind(e) == ElemKind::wedge) {
      const int nq = refs.degree + 1;
      const int ntri = refs.tri.num_nodes;
      Eigen::Map<const Mat> P(u + base, nq, ntri);
      // interpolate to (t-gauss) x (triangle cubature) points
      const Mat Pc = refs.line.interp_gq * P * refs.tri.interp_cub.transpose();
      const auto verts = d.mesh.wedge_verts(e);
      for (Eigen::Index qt = 0; qt < refs.line.gq_nodes.size(); ++qt) {
        for (Eigen::Index qs = 0; qs < refs.tri.cubature.weights.size(); ++qs) {
          const double r = refs.tri.cubature.points(qs, 0);
          const double s = refs.tri.cubature.points(qs, 1);
          const double t = refs.line.gq_nodes[qt];
          const auto x = wedge_map(verts, r, s, t);
          const double diff = Pc(qt, qs) - exact_p(x[0], x[1], x[2], time);
          acc += refs.line.gq_weights[qt] * refs.tri.cubature.weights[qs] *
                 d.geom[e].jacobian_at(r, s) * diff * diff;
        }
      }
    } else {
      Eigen::Map<const Vec> P(u + base, refs.tet.num_nodes);
      const Vec Pc = refs.tet.interp_cub * P;
      const auto verts = d.mesh.tet_verts(e - d.mesh.num_wedges());
      for (Eigen::Index q = 0; q < refs.tet.cubature.weights.size(); ++q) {
        const auto x = tet_map(verts, refs.tet.cubature.points(q, 0),
                               refs.tet.cubature.points(q, 1), refs.tet.cubature.points(q, 2));
        const double diff = Pc[q] - exact_p(x[0], x[1], x[2], time);
        acc += refs.tet.cubature.weights[q] * d.geom[e].j0 * diff * diff;
      }
    }
  }
  return std::sqrt(acc);
}

MeshFamily parse_family(const std::string& name) {
  if (name == "structured") return MeshFamily::structured;
  if (name == "unstructured") return MeshFamily::unstructured;
  if (name == "arnold") return MeshFamily::arnold;
  throw ConfigError("unknown mesh family '" + name +
                    "' (expected structured, unstructured, or arnold)");
}

std::string family_name(MeshFamily f) {
  switch (f) {
    case MeshFamily::structured: return "structured";
    case MeshFamily::unstructured: return "unstructured";
    case MeshFamily::arnold: return "arnold";
  }
  return "?";
}

HybridMesh make_family_mesh(MeshFamily family, double h, const FamilyParams& params) {
  const int n = (int)std::lround(2.0 / h);
  if (n < 1 || std::abs(2.0 / n - h) > 1e-9 * h)
    throw ConfigError("mesh size must divide the box: h = 2/n");
  switch (family) {
    case MeshFamily::structured: return structured_wedge_box(n);
    case MeshFamily::unstructured: {
      // level-dependent seed: refinements are independent meshes, not nested
      const std::uint64_t seed = params.seed + 7919ull * (std::uint64_t)n;
      return unstructured_wedge_box(n, params.xy_jitter, params.z_amplitude, seed);
    }
    case MeshFamily::arnold: return arnold_wedge_box(n, params.arnold_delta);
  }
  throw ConfigError("bad mesh family");
}

double fit_rate(const std::vector<double>& h, const std::vector<double>& error) {
  const int n = (int)h.size();
  const int m = std::min(3, n);
  if (m < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - m; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

ConvergenceRecord convergence_study(const ConvergenceConfig& cfg) {
  if (cfg.h.size() < 3) throw ConfigError("convergence study needs at least 3 mesh sizes");
  for (size_t i = 1; i < cfg.h.size(); ++i)
    if (!(cfg.h[i] < cfg.h[i - 1])) throw ConfigError("mesh sizes must be strictly decreasing");

  ConvergenceRecord rec;
  const FieldFunctions exact = standing_wave();
  for (double h : cfg.h) {
    HybridMesh mesh = make_family_mesh(cfg.family, h, cfg.params);
    FluxConfig flux;
    flux.mode = cfg.flux;
    Discretization disc = build_discretization(std::move(mesh), cfg.degree, flux,
                                               QuadratureMode::exact, cfg.threads);
    SolutionState state = make_initial_state(disc, exact, 0.0);
    RunOptions opts;
    opts.final_time = cfg.final_time;
    opts.cfl = cfg.cfl;
    opts.energy_interval = cfg.final_time; // endpoints only
    bool stable = true;
    try {
      run_simulation(disc, state, opts);
    } catch (const NumericalError&) {
      stable = false;
    }
    rec.h.push_back(h);
    rec.error.push_back(stable ? l2_error(disc, state.u.data(), exact.p, state.time)
                               : std::numeric_limits<double>::quiet_NaN());
    rec.stable.push_back(stable);
  }
  rec.rate = fit_rate(rec.h, rec.error);
  return rec;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

namespace {

template <class F>
double time_ns_per_elem(F&& body, std::size_t nelems, int evals) {
  using clock = std::chrono::steady_clock;
  body(); // warm up
  double best = std::numeric_limits<double>::max();
  const int reps = 3;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    for (int i = 0; i < evals; ++i) body();
    const auto t1 = clock::now();
    const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
    best = std::min(best, ns / (double(evals) * nelems));
  }
  return best;
}

} // namespace

BenchResult bench(int degree, int evals, int mesh_n) {
  if (evals < 1) throw ConfigError("bench: need at least one evaluation");
  BenchResult res;
  res.degree = degree;

  Discretization wd =
      build_discretization(structured_wedge_box(mesh_n), degree, {}, QuadratureMode::exact, 1);
  Discretization td = build_discretization(
      structured_hybrid_box(mesh_n, mesh_n, 0, mesh_n), degree, {}, QuadratureMode::exact, 1);

  res.wedge_np = wd.refs.wedge.num_nodes;
  res.tet_np = td.refs.tet.num_nodes;
  res.num_wedges = wd.mesh.num_wedges();
  res.num_tets = td.mesh.num_tets();

  SolutionState ws = make_initial_state(wd, standing_wave(), 0.0);
  SolutionState ts = make_initial_state(td, standing_wave(), 0.0);
  std::vector<double> wrhs(wd.total_dofs, 0.0), trhs(td.total_dofs, 0.0);

  res.wedge_volume_ns = time_ns_per_elem(
      [&] { wedge_volume_phase(wd, ws.u.data(), wrhs.data()); }, res.num_wedges, evals);
  res.wedge_surface_ns = time_ns_per_elem(
      [&] { wedge_surface_phase(wd, ws.u.data(), wrhs.data()); }, res.num_wedges, evals);
  res.tet_volume_ns = time_ns_per_elem(
      [&] { tet_volume_phase(td, ts.u.data(), trhs.data()); }, res.num_tets, evals);
  res.tet_surface_ns = time_ns_per_elem(
      [&] { tet_surface_phase(td, ts.u.data(), trhs.data()); }, res.num_tets, evals);

  res.wedge_volume_ns_dof = res.wedge_volume_ns / res.wedge_np;
  res.wedge_surface_ns_dof = res.wedge_surface_ns / res.wedge_np;
  res.tet_volume_ns_dof = res.tet_volume_ns / res.tet_np;
  res.tet_surface_ns_dof = res.tet_surface_ns / res.tet_np;
  res.volume_ratio = res.wedge_volume_ns_dof / res.tet_volume_ns_dof;
  res.surface_ratio = res.wedge_surface_ns_dof / res.tet_surface_ns_dof;

  res.storage = storage_report(degree, wd.wedge_ops, td.tet_ops);
  return res;
}

HybridMesh spectra_mesh(std::uint64_t seed, double amplitude) {
  return perturb_vertically(structured_hybrid_box(2, 2, 2, 0), amplitude, seed);
}

} // namespace prismdg
