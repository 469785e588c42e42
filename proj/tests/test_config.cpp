#include "doctest.h"

#include "prismdg/cli.hpp"
#include "prismdg/config.hpp"

#include <filesystem>
#include <fstream>

using namespace prismdg;

namespace {

std::string write_tmp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

} // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("config file parsing and unknown-key detection") {
  ConfigFile cfg = ConfigFile::from_string("# comment\n[run]\ndegree = 3\ncfl=0.4\n");
  CHECK(cfg.take_int("run", "degree", 0) == 3);
  CHECK(cfg.take_double("run", "cfl", 0.0) == 0.4);
  CHECK_NOTHROW(cfg.finish());

  ConfigFile bad = ConfigFile::from_string("[run]\nmystery = 1\n");
  CHECK_THROWS_AS(bad.finish(), ConfigError);
  try {
    ConfigFile b2 = ConfigFile::from_string("[run]\nmystery = 1\n");
    b2.finish();
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.mystery") != std::string::npos);
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }

  CHECK_THROWS_AS(ConfigFile::from_string("[run]\ndegree = 1\ndegree = 2\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::from_string("degree = 1\n"), ConfigError);
  CHECK_THROWS_AS(ConfigFile::from_string("[run]\nno equals sign\n"), ConfigError);

  ConfigFile typed = ConfigFile::from_string("[run]\ndegree = banana\n");
  CHECK_THROWS_AS(typed.take_int("run", "degree", 0), ConfigError);
}

TEST_CASE("run config validation") {
  const std::string good = write_tmp("prismdg_run_good.cfg",
                                     "[run]\ndegree = 1\nfinal_time = 0.1\n"
                                     "[mesh]\nkind = wedge_box\nn = 1\n");
  const RunConfig rc = parse_run_config(good);
  CHECK(rc.degree == 1);
  CHECK(rc.mesh.kind == "wedge_box");

  const std::string bad_degree = write_tmp("prismdg_run_bad.cfg", "[run]\ndegree = 12\n");
  try {
    parse_run_config(bad_degree);
    CHECK(false);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.degree") != std::string::npos);
  }

  const std::string bad_flux =
      write_tmp("prismdg_run_badflux.cfg", "[run]\nflux = sideways\n");
  CHECK_THROWS_AS(parse_run_config(bad_flux), ConfigError);
  std::filesystem::remove(good);
  std::filesystem::remove(bad_degree);
  std::filesystem::remove(bad_flux);
}

TEST_CASE("surface functions") {
  const auto flat = parse_surface_function("flat:2.5");
  CHECK(flat(0.3, -0.7) == 2.5);
  const auto sine = parse_surface_function("sine:1:0.2:1:0");
  CHECK(sine(0.5, 0.123) == doctest::Approx(1.0 + 0.2 * std::sin(M_PI * 0.5)));
  CHECK_THROWS_AS(parse_surface_function("paraboloid:1"), ConfigError);
  CHECK_THROWS_AS(parse_surface_function("sine:1:2"), ConfigError);
}

TEST_CASE("mesh specs build the advertised generators") {
  {
    ConfigFile cfg = ConfigFile::from_string(
        "[mesh]\nkind = hybrid_box\nnx = 1\nny = 1\nnz_wedge = 1\nnz_tet = 1\n"
        "[media]\nwedge_kappa = 1\ntet_kappa = 4\n");
    const MeshSpec spec = parse_mesh_spec(cfg);
    cfg.finish();
    const HybridMesh mesh = build_mesh_from_spec(spec);
    CHECK(mesh.num_wedges() == 2);
    CHECK(mesh.num_tets() == 6);
    CHECK(mesh.media.back().kappa == 4.0);
  }
  {
    ConfigFile cfg = ConfigFile::from_string(
        "[mesh]\nkind = layers\nsurface_n = 4\nlayers = 2\n"
        "layer.1.bottom = flat:-1\nlayer.1.top = flat:0\nlayer.1.sublayers = 2\n"
        "layer.2.bottom = flat:0\nlayer.2.top = sine:1:0.2:1:0\nlayer.2.kappa = 4\n");
    const MeshSpec spec = parse_mesh_spec(cfg);
    cfg.finish();
    const HybridMesh mesh = build_mesh_from_spec(spec);
    CHECK(mesh.num_wedges() == 4 * 4 * 2 * 3);
    for (int w = 0; w < mesh.num_wedges(); ++w)
      CHECK(is_vertically_mapped(mesh.wedge_verts(w)));
  }
  {
    // inverted layer: generation error naming the vertex
    ConfigFile cfg = ConfigFile::from_string(
        "[mesh]\nkind = layers\nsurface_n = 2\nlayers = 1\n"
        "layer.1.bottom = flat:1\nlayer.1.top = flat:0\n");
    const MeshSpec spec = parse_mesh_spec(cfg);
    cfg.finish();
    try {
      build_mesh_from_spec(spec);
      CHECK(false);
    } catch (const MeshError& e) {
      CHECK(std::string(e.what()).find("vertex") != std::string::npos);
    }
  }
}

TEST_CASE("cmd_run produces the documented outputs") {
  const auto dir = std::filesystem::temp_directory_path() / "prismdg_cmd_run";
  std::filesystem::remove_all(dir);
  const std::string cfg = write_tmp("prismdg_cmd_run.cfg",
                                    "[run]\ndegree = 1\nfinal_time = 0.1\n"
                                    "[mesh]\nkind = wedge_box\nn = 1\n"
                                    "[output]\ndirectory = " + dir.string() + "\n");
  CHECK(cmd_run(cfg) == 0);
  CHECK(std::filesystem::exists(dir / "energy.csv"));
  CHECK(std::filesystem::exists(dir / "summary.txt"));
  // energy log: header plus at least two samples
  std::ifstream in(dir / "energy.csv");
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "time,energy");
  while (std::getline(in, line)) ++rows;
  CHECK(rows >= 2);
  std::filesystem::remove_all(dir);
  std::filesystem::remove(cfg);
}

TEST_CASE("cmd_mesh round-trips generated meshes") {
  const auto out = std::filesystem::temp_directory_path() / "prismdg_wavy.mesh";
  const std::string cfg = write_tmp("prismdg_cmd_mesh.cfg",
                                    "[mesh]\nkind = layers\nsurface_n = 3\nlayers = 1\n"
                                    "layer.1.bottom = flat:0\n"
                                    "layer.1.top = sine:1:0.3:1:1\n"
                                    "layer.1.sublayers = 2\n");
  CHECK(cmd_mesh(cfg, out.string()) == 0);
  const HybridMesh mesh = load_mesh(out.string());
  for (int w = 0; w < mesh.num_wedges(); ++w)
    CHECK(is_vertically_mapped(mesh.wedge_verts(w)));
  std::filesystem::remove(out);
  std::filesystem::remove(cfg);
}

TEST_CASE("cmd_dump_ref writes one file per matrix") {
  const auto dir = std::filesystem::temp_directory_path() / "prismdg_dump";
  std::filesystem::remove_all(dir);
  CHECK(cmd_dump_ref(2, dir.string()) == 0);
  for (const char* name :
       {"interval_nodes.csv", "interval_mass.csv", "tri_vandermonde.csv", "tri_dr.csv",
        "wedge_nodes.csv", "tet_lift.csv"})
    CHECK(std::filesystem::exists(dir / name));
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
