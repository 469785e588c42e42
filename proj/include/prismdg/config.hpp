#pragma once

#include "prismdg/mesh.hpp"
#include "prismdg/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace prismdg {

/// Sectioned key/value config file ([section] headers, key = value lines,
/// '#' comments).  Consumers must drain every key; leftovers are errors so
/// that misconfigured experiments fail loudly.
class ConfigFile {
public:
  static ConfigFile load(const std::string& path);
  static ConfigFile from_string(const std::string& text, const std::string& name = "<inline>");

  bool has(const std::string& section, const std::string& key) const;
  std::string take(const std::string& section, const std::string& key,
                   const std::string& fallback);
  std::string take_required(const std::string& section, const std::string& key);
  double take_double(const std::string& section, const std::string& key, double fallback);
  int take_int(const std::string& section, const std::string& key, int fallback);
  std::uint64_t take_u64(const std::string& section, const std::string& key,
                         std::uint64_t fallback);

  /// Throws ConfigError naming any unconsumed key and its line number.
  void finish() const;

private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };
  std::string name_;
  std::map<std::string, std::map<std::string, Entry>> sections_;
  const Entry* find(const std::string& section, const std::string& key) const;
};

struct MeshSpecLayer {
  std::string bottom = "flat:0";
  std::string top = "flat:1";
  int sublayers = 1;
  double rho = 1.0, kappa = 1.0;
};

struct MeshSpec {
  std::string kind = "wedge_box"; // wedge_box | unstructured_box | arnold_box |
                                  // hybrid_box | layers | extrude_file | file
  std::string file;               // mesh or surface file path
  int n = 2;                      // wedge_box / unstructured_box / arnold_box
  int nx = 2, ny = 2, nz_wedge = 1, nz_tet = 1; // hybrid_box
  int surface_n = 8;              // layers: surface triangulation resolution
  int extrude_layers = 1;         // extrude_file
  double perturb_amplitude = 0.0;
  std::uint64_t perturb_seed = 0;
  double arnold_delta = 0.25;
  double xy_jitter = 0.15;
  std::vector<MeshSpecLayer> layers;
  double rho = 1.0, kappa = 1.0;             // uniform media
  double wedge_rho = 1.0, wedge_kappa = 1.0; // hybrid_box region media
  double tet_rho = 1.0, tet_kappa = 1.0;
};

struct RunConfig {
  int degree = 2;
  std::string flux = "upwind";
  std::string integrator = "lserk4";
  std::string initial = "standing_wave"; // standing_wave | gaussian
  double gaussian_width = 0.25;
  double cfl = 0.5;
  double final_time = 1.0;
  double snapshot_interval = 0.0;
  double energy_interval = 0.0;
  std::uint64_t seed = 0;
  int threads = 0; // 0: all hardware threads
  std::string output_dir = "out";
  MeshSpec mesh;
};

RunConfig parse_run_config(const std::string& path);
MeshSpec parse_mesh_spec(ConfigFile& cfg);

/// Builds the mesh a spec describes (generators or file load).
HybridMesh build_mesh_from_spec(const MeshSpec& spec);

/// "flat:z0" or "sine:z0:amp:kx:ky" -> z(x,y) = z0 + amp sin(pi kx x) cos(pi ky y)
std::function<double(double, double)> parse_surface_function(const std::string& text);

} // namespace prismdg
