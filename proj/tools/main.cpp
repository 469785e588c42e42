#include "prismdg/cli.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"prismdg: reduced-storage nodal DG solver for the acoustic wave equation on "
               "hybrid wedge/tet meshes"};
  app.require_subcommand(0, 1);

  std::string dump_ref_dir;
  int dump_degree = 3;
  app.add_option("--dump-ref", dump_ref_dir,
                 "dump reference nodes/matrices as CSV into this directory");
  app.add_option("--degree", dump_degree, "polynomial degree for --dump-ref");

  // run
  auto* run = app.add_subcommand("run", "time-domain simulation from a config file");
  std::string run_config;
  run->add_option("config", run_config, "run config file")->required();

  // converge
  auto* conv = app.add_subcommand("converge", "convergence study and rate table");
  std::vector<std::string> families = {"structured"};
  std::vector<int> degrees = {1, 2, 3};
  std::vector<double> hlist = {2.0, 1.0, 0.5, 0.25, 0.125};
  std::string conv_flux = "upwind", conv_out = "out";
  int conv_threads = 0;
  std::uint64_t conv_seed = 0;
  conv->add_option("--families", families, "structured, unstructured, arnold");
  conv->add_option("--degrees", degrees, "polynomial degrees");
  conv->add_option("--h", hlist, "mesh sizes (strictly decreasing, >= 3)");
  conv->add_option("--flux", conv_flux, "upwind or central");
  conv->add_option("--threads", conv_threads, "worker threads (0: all cores)");
  conv->add_option("--out", conv_out, "output directory");
  conv->add_option("--seed", conv_seed, "seed override for the unstructured family");

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "semi-discrete operator spectrum");
  std::string sp_quad = "exact", sp_flux = "upwind", sp_out = "out";
  int sp_degree = 2, sp_n = 2, sp_layers = 2;
  double sp_amp = 0.3;
  std::uint64_t sp_seed = 42;
  spec->add_option("--quadrature", sp_quad, "exact or lumped");
  spec->add_option("--flux", sp_flux, "upwind or central");
  spec->add_option("--degree", sp_degree, "polynomial degree");
  spec->add_option("--surface-n", sp_n, "surface cells per side");
  spec->add_option("--layers", sp_layers, "vertical layers");
  spec->add_option("--amplitude", sp_amp, "vertical perturbation amplitude");
  spec->add_option("--seed", sp_seed, "perturbation seed");
  spec->add_option("--out", sp_out, "output directory");

  // mesh
  auto* mesh = app.add_subcommand("mesh", "generate a mesh from a spec file");
  std::string mesh_config, mesh_out = "mesh.txt";
  mesh->add_option("config", mesh_config, "mesh spec file")->required();
  mesh->add_option("output", mesh_out, "output mesh path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "kernel timings and storage report");
  std::vector<int> bench_degrees = {1, 2, 3, 4, 5};
  int bench_evals = 200;
  std::string bench_out = "out";
  bench->add_option("--degrees", bench_degrees, "polynomial degrees");
  bench->add_option("--evals", bench_evals, "kernel evaluations per timing");
  bench->add_option("--out", bench_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!dump_ref_dir.empty()) return prismdg::cmd_dump_ref(dump_degree, dump_ref_dir);
    if (*run) return prismdg::cmd_run(run_config);
    if (*conv)
      return prismdg::cmd_converge(families, degrees, hlist, conv_flux, conv_threads,
                                   conv_out, conv_seed);
    if (*spec)
      return prismdg::cmd_spectrum(sp_quad, sp_flux, sp_degree, sp_n, sp_layers, sp_amp,
                                   sp_seed, sp_out);
    if (*mesh) return prismdg::cmd_mesh(mesh_config, mesh_out);
    if (*bench) return prismdg::cmd_bench(bench_degrees, bench_evals, bench_out);
    std::cout << app.help();
    return 0;
  } catch (const prismdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const prismdg::AnalysisError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const prismdg::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const prismdg::MeshError& e) {
    std::cerr << "mesh error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
