#include "prismdg/cli.hpp"

#include "prismdg/snapshot.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace prismdg {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("PRISMDG_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? (int)hw : 1;
}

} // namespace

int cmd_run(const std::string& config_path) {
  const RunConfig rc = parse_run_config(config_path);
  fs::create_directories(rc.output_dir);

  HybridMesh mesh = build_mesh_from_spec(rc.mesh);
  FluxConfig flux;
  flux.mode = (rc.flux == "upwind") ? FluxMode::upwind : FluxMode::central;
  const auto wall0 = std::chrono::steady_clock::now();
  Discretization disc = build_discretization(std::move(mesh), rc.degree, flux,
                                             QuadratureMode::exact,
                                             resolve_threads(rc.threads));

  FieldFunctions init = (rc.initial == "gaussian") ? gaussian_pulse(rc.gaussian_width)
                                                   : standing_wave();
  SolutionState state = make_initial_state(disc, init, 0.0);

  std::ofstream energy_csv(fs::path(rc.output_dir) / "energy.csv");
  RunOptions opts;
  opts.final_time = rc.final_time;
  opts.cfl = rc.cfl;
  opts.integrator = (rc.integrator == "ab3") ? IntegratorKind::ab3 : IntegratorKind::lserk4;
  opts.energy_interval = rc.energy_interval;
  opts.energy_csv = &energy_csv;
  opts.snapshot_interval = rc.snapshot_interval;
  if (rc.snapshot_interval > 0.0) {
    opts.snapshot_cb = [&](const SolutionState& s, int index) {
      char name[64];
      std::snprintf(name, sizeof(name), "snapshot_%04d.vtk", index);
      write_vtk_snapshot(disc, s.u.data(), (fs::path(rc.output_dir) / name).string());
    };
  }

  const RunResult res = run_simulation(disc, state, opts);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
                          .count();

  std::ofstream summary(fs::path(rc.output_dir) / "summary.txt");
  summary << "elements " << disc.mesh.num_elements() << " (" << disc.mesh.num_wedges()
          << " wedges, " << disc.mesh.num_tets() << " tets)\n"
          << "degree " << rc.degree << "\n"
          << "dofs " << disc.total_dofs << "\n"
          << "steps " << res.steps << "\n"
          << "dt " << fmt17(res.dt) << "\n"
          << "final_time " << fmt17(res.final_time) << "\n"
          << "initial_energy " << fmt17(res.initial_energy) << "\n"
          << "final_energy " << fmt17(res.final_energy) << "\n"
          << "wall_seconds " << fmt17(wall) << "\n";
  std::cout << "run finished: " << res.steps << " steps, dt " << res.dt << ", energy "
            << res.initial_energy << " -> " << res.final_energy << "\n";
  return 0;
}

int cmd_converge(const std::vector<std::string>& families, const std::vector<int>& degrees,
                 const std::vector<double>& h, const std::string& flux, int threads,
                 const std::string& out_dir, std::uint64_t seed) {
  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "convergence.csv");
  csv << "family,degree,h,error,rate\n";

  // rate table in the layout: families as rows, degrees as columns
  std::vector<std::vector<double>> table(families.size(),
                                         std::vector<double>(degrees.size(), 0.0));
  for (size_t fi = 0; fi < families.size(); ++fi) {
    for (size_t di = 0; di < degrees.size(); ++di) {
      ConvergenceConfig cfg;
      cfg.family = parse_family(families[fi]);
      cfg.degree = degrees[di];
      cfg.h = h;
      cfg.flux = (flux == "central") ? FluxMode::central : FluxMode::upwind;
      cfg.threads = resolve_threads(threads);
      if (seed != 0) cfg.params.seed = seed;
      const ConvergenceRecord rec = convergence_study(cfg);
      table[fi][di] = rec.rate;
      for (size_t i = 0; i < rec.h.size(); ++i) {
        csv << families[fi] << "," << degrees[di] << "," << fmt17(rec.h[i]) << ","
            << fmt17(rec.error[i]) << "," << fmt17(rec.rate) << "\n";
        if (!rec.stable[i])
          std::cout << "warning: unstable run at family " << families[fi] << " N "
                    << degrees[di] << " h " << rec.h[i] << "\n";
      }
      std::cout << families[fi] << " N=" << degrees[di] << " rate " << rec.rate << "\n";
    }
  }

  std::printf("%-14s", "");
  for (int n : degrees) std::printf("  N=%-6d", n);
  std::printf("\n");
  for (size_t fi = 0; fi < families.size(); ++fi) {
    std::printf("%-14s", families[fi].c_str());
    for (size_t di = 0; di < degrees.size(); ++di) std::printf("  %-8.3g", table[fi][di]);
    std::printf("\n");
  }
  return 0;
}

int cmd_spectrum(const std::string& quadrature, const std::string& flux, int degree,
                 int surface_n, int layers, double amplitude, std::uint64_t seed,
                 const std::string& out_dir) {
  if (quadrature != "exact" && quadrature != "lumped")
    throw ConfigError("quadrature must be exact or lumped");
  if (flux != "upwind" && flux != "central")
    throw ConfigError("flux must be upwind or central");
  fs::create_directories(out_dir);

  HybridMesh mesh =
      perturb_vertically(structured_hybrid_box(surface_n, surface_n, layers, 0), amplitude,
                         seed);
  FluxConfig fc;
  fc.mode = (flux == "upwind") ? FluxMode::upwind : FluxMode::central;
  const QuadratureMode qm =
      (quadrature == "lumped") ? QuadratureMode::lumped : QuadratureMode::exact;
  Discretization disc;
  try {
    disc = build_discretization(std::move(mesh), degree, fc, qm, resolve_threads(0));
  } catch (const AnalysisError&) {
    throw;
  }
  GlobalOperator go;
  try {
    go = assemble_global(disc);
  } catch (const AnalysisError& err) {
    throw ConfigError(std::string(err.what()) + "; use a smaller mesh");
  }
  const auto ev = spectrum(go.A);

  std::ofstream csv(fs::path(out_dir) / "spectrum.csv");
  csv << "re,im\n";
  double max_re = -std::numeric_limits<double>::max();
  double max_abs = 0.0;
  for (const auto& z : ev) {
    csv << fmt17(z.real()) << "," << fmt17(z.imag()) << "\n";
    max_re = std::max(max_re, z.real());
    max_abs = std::max(max_abs, std::abs(z));
  }
  const double tol = 1e-8 * max_abs;
  if (max_re <= tol)
    std::cout << "STABLE (max Re = " << max_re << ", tol = " << tol << ", max |lambda| = "
              << max_abs << ")\n";
  else
    std::cout << "UNSTABLE (max Re = " << max_re << " > tol = " << tol
              << ", max |lambda| = " << max_abs << ")\n";
  return 0;
}

int cmd_mesh(const std::string& config_path, const std::string& out_path) {
  ConfigFile cfg = ConfigFile::load(config_path);
  const MeshSpec spec = parse_mesh_spec(cfg);
  cfg.finish();
  HybridMesh mesh = build_mesh_from_spec(spec);
  save_mesh(mesh, out_path);
  // round-trip through the validating loader
  HybridMesh reloaded = load_mesh(out_path);

  const References refs = build_references(1);
  double jmin = std::numeric_limits<double>::max(), jmax = 0.0;
  for (int w = 0; w < reloaded.num_wedges(); ++w) {
    const auto g = wedge_geometry(reloaded.wedge_verts(w), refs);
    for (const auto& [r, s] : std::vector<std::pair<double, double>>{
             {-1.0, -1.0}, {1.0, -1.0}, {-1.0, 1.0}}) {
      jmin = std::min(jmin, g.jacobian_at(r, s));
      jmax = std::max(jmax, g.jacobian_at(r, s));
    }
  }
  for (int t = 0; t < reloaded.num_tets(); ++t) {
    const auto g = tet_geometry(reloaded.tet_verts(t));
    jmin = std::min(jmin, g.j0);
    jmax = std::max(jmax, g.j0);
  }
  std::cout << "mesh written to " << out_path << ": " << reloaded.num_wedges()
            << " wedges, " << reloaded.num_tets() << " tets, " << reloaded.vertices.size()
            << " vertices, J in [" << jmin << ", " << jmax << "]\n";
  return 0;
}

int cmd_bench(const std::vector<int>& degrees, int evals, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "bench.csv");
  csv << "degree,wedge_volume_ns_elem,wedge_surface_ns_elem,tet_volume_ns_elem,"
         "tet_surface_ns_elem,wedge_volume_ns_dof,wedge_surface_ns_dof,tet_volume_ns_dof,"
         "tet_surface_ns_dof,volume_ratio,surface_ratio,wedge_floats,wedge_budget,"
         "tet_floats\n";
  std::printf("%3s %12s %12s %12s %12s %9s %9s %10s %10s\n", "N", "wvol ns/dof",
              "wsurf ns/dof", "tvol ns/dof", "tsurf ns/dof", "vol ratio", "surf ratio",
              "wedge flts", "budget");
  for (int n : degrees) {
    const BenchResult b = bench(n, evals);
    csv << n << "," << fmt17(b.wedge_volume_ns) << "," << fmt17(b.wedge_surface_ns) << ","
        << fmt17(b.tet_volume_ns) << "," << fmt17(b.tet_surface_ns) << ","
        << fmt17(b.wedge_volume_ns_dof) << "," << fmt17(b.wedge_surface_ns_dof) << ","
        << fmt17(b.tet_volume_ns_dof) << "," << fmt17(b.tet_surface_ns_dof) << ","
        << fmt17(b.volume_ratio) << "," << fmt17(b.surface_ratio) << ","
        << b.storage.wedge_floats_per_elem << "," << b.storage.budget_per_wedge << ","
        << b.storage.tet_floats_per_elem << "\n";
    std::printf("%3d %12.1f %12.1f %12.1f %12.1f %9.3f %9.3f %10zu %10zu\n", n,
                b.wedge_volume_ns_dof, b.wedge_surface_ns_dof, b.tet_volume_ns_dof,
                b.tet_surface_ns_dof, b.volume_ratio, b.surface_ratio,
                b.storage.wedge_floats_per_elem, b.storage.budget_per_wedge);
  }
  return 0;
}

namespace {

void dump_matrix(const fs::path& dir, const std::string& name, const Mat& m) {
  std::ofstream out(dir / (name + ".csv"));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out << fmt17(m(i, j)) << (j + 1 == m.cols() ? '\n' : ',');
}

void dump_vector(const fs::path& dir, const std::string& name, const Vec& v) {
  std::ofstream out(dir / (name + ".csv"));
  for (Eigen::Index i = 0; i < v.size(); ++i) out << fmt17(v[i]) << '\n';
}

} // namespace

int cmd_dump_ref(int degree, const std::string& out_dir) {
  const References refs = build_references(degree);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);

  dump_vector(dir, "interval_nodes", refs.line.nodes);
  dump_vector(dir, "interval_weights", refs.line.weights);
  dump_matrix(dir, "interval_mass", refs.line.mass);
  dump_matrix(dir, "interval_diff", refs.line.diff);

  Mat tri_nodes(refs.tri.num_nodes, 2);
  tri_nodes.col(0) = refs.tri.r;
  tri_nodes.col(1) = refs.tri.s;
  dump_matrix(dir, "tri_nodes", tri_nodes);
  dump_matrix(dir, "tri_vandermonde", refs.tri.vandermonde);
  dump_matrix(dir, "tri_dr", refs.tri.dr);
  dump_matrix(dir, "tri_ds", refs.tri.ds);
  dump_matrix(dir, "tri_mass", refs.tri.mass);
  Mat tri_cub(refs.tri.cubature.weights.size(), 3);
  tri_cub.leftCols(2) = refs.tri.cubature.points;
  tri_cub.col(2) = refs.tri.cubature.weights;
  dump_matrix(dir, "tri_cubature", tri_cub);

  Mat wedge_nodes(refs.wedge.num_nodes, 3);
  wedge_nodes.col(0) = refs.wedge.r;
  wedge_nodes.col(1) = refs.wedge.s;
  wedge_nodes.col(2) = refs.wedge.t;
  dump_matrix(dir, "wedge_nodes", wedge_nodes);

  Mat tet_nodes(refs.tet.num_nodes, 3);
  tet_nodes.col(0) = refs.tet.r;
  tet_nodes.col(1) = refs.tet.s;
  tet_nodes.col(2) = refs.tet.t;
  dump_matrix(dir, "tet_nodes", tet_nodes);
  dump_matrix(dir, "tet_vandermonde", refs.tet.vandermonde);
  dump_matrix(dir, "tet_dr", refs.tet.dr);
  dump_matrix(dir, "tet_ds", refs.tet.ds);
  dump_matrix(dir, "tet_dt", refs.tet.dt);
  dump_matrix(dir, "tet_mass", refs.tet.mass);
  dump_matrix(dir, "tet_lift", refs.tet.lift);

  std::cout << "reference data for degree " << degree << " written to " << out_dir
            << " (triangle Vandermonde condition " << refs.tri.cond_vandermonde
            << ", tet " << refs.tet.cond_vandermonde << ")\n";
  return 0;
}

} // namespace prismdg
