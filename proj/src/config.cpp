#include "prismdg/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace prismdg {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

} // namespace

ConfigFile ConfigFile::from_string(const std::string& text, const std::string& name) {
  ConfigFile cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(name + ":" + std::to_string(line_no) + ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(line_no) + ": empty key");
    if (section.empty())
      throw ConfigError(name + ":" + std::to_string(line_no) + ": key outside any section");
    auto& slot = cfg.sections_[section][key];
    if (slot.line != 0)
      throw ConfigError(name + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                        "'");
    slot = Entry{value, line_no, false};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  return &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string ConfigFile::take(const std::string& section, const std::string& key,
                             const std::string& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->used = true;
  return e->value;
}

std::string ConfigFile::take_required(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) throw ConfigError(name_ + ": missing required key " + section + "." + key);
  e->used = true;
  return e->value;
}

double ConfigFile::take_double(const std::string& section, const std::string& key,
                               double fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->used = true;
  try {
    size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(name_ + ":" + std::to_string(e->line) + ": " + section + "." + key +
                      " must be a number, got '" + e->value + "'");
  }
}

int ConfigFile::take_int(const std::string& section, const std::string& key, int fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->used = true;
  try {
    size_t pos = 0;
    const int v = std::stoi(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(name_ + ":" + std::to_string(e->line) + ": " + section + "." + key +
                      " must be an integer, got '" + e->value + "'");
  }
}

std::uint64_t ConfigFile::take_u64(const std::string& section, const std::string& key,
                                   std::uint64_t fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->used = true;
  try {
    size_t pos = 0;
    const unsigned long long v = std::stoull(e->value, &pos);
    if (pos != e->value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError(name_ + ":" + std::to_string(e->line) + ": " + section + "." + key +
                      " must be a non-negative integer, got '" + e->value + "'");
  }
}

void ConfigFile::finish() const {
  for (const auto& [section, keys] : sections_)
    for (const auto& [key, entry] : keys)
      if (!entry.used)
        throw ConfigError(name_ + ":" + std::to_string(entry.line) + ": unknown key " +
                          section + "." + key);
}

// ---------------------------------------------------------------------------

std::function<double(double, double)> parse_surface_function(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.empty()) throw ConfigError("empty surface function");
  try {
    if (parts[0] == "flat") {
      if (parts.size() != 2) throw ConfigError("");
      const double z0 = std::stod(parts[1]);
      return [z0](double, double) { return z0; };
    }
    if (parts[0] == "sine") {
      if (parts.size() != 5) throw ConfigError("");
      const double z0 = std::stod(parts[1]);
      const double amp = std::stod(parts[2]);
      const double kx = std::stod(parts[3]);
      const double ky = std::stod(parts[4]);
      return [z0, amp, kx, ky](double x, double y) {
        return z0 + amp * std::sin(M_PI * kx * x) * std::cos(M_PI * ky * y);
      };
    }
  } catch (...) {
  }
  throw ConfigError("bad surface function '" + text +
                    "' (expected flat:z0 or sine:z0:amp:kx:ky)");
}

MeshSpec parse_mesh_spec(ConfigFile& cfg) {
  MeshSpec spec;
  spec.kind = cfg.take("mesh", "kind", spec.kind);
  spec.file = cfg.take("mesh", "file", "");
  spec.n = cfg.take_int("mesh", "n", spec.n);
  spec.nx = cfg.take_int("mesh", "nx", spec.nx);
  spec.ny = cfg.take_int("mesh", "ny", spec.ny);
  spec.nz_wedge = cfg.take_int("mesh", "nz_wedge", spec.nz_wedge);
  spec.nz_tet = cfg.take_int("mesh", "nz_tet", spec.nz_tet);
  spec.surface_n = cfg.take_int("mesh", "surface_n", spec.surface_n);
  spec.extrude_layers = cfg.take_int("mesh", "extrude_layers", spec.extrude_layers);
  spec.perturb_amplitude = cfg.take_double("mesh", "perturb_amplitude", 0.0);
  spec.perturb_seed = cfg.take_u64("mesh", "perturb_seed", 0);
  spec.arnold_delta = cfg.take_double("mesh", "arnold_delta", spec.arnold_delta);
  spec.xy_jitter = cfg.take_double("mesh", "xy_jitter", spec.xy_jitter);

  const int nlayers = cfg.take_int("mesh", "layers", 0);
  for (int l = 1; l <= nlayers; ++l) {
    const std::string p = "layer." + std::to_string(l) + ".";
    MeshSpecLayer layer;
    layer.bottom = cfg.take_required("mesh", p + "bottom");
    layer.top = cfg.take_required("mesh", p + "top");
    layer.sublayers = cfg.take_int("mesh", p + "sublayers", 1);
    layer.rho = cfg.take_double("mesh", p + "rho", 1.0);
    layer.kappa = cfg.take_double("mesh", p + "kappa", 1.0);
    spec.layers.push_back(layer);
  }

  spec.rho = cfg.take_double("media", "rho", 1.0);
  spec.kappa = cfg.take_double("media", "kappa", 1.0);
  spec.wedge_rho = cfg.take_double("media", "wedge_rho", spec.rho);
  spec.wedge_kappa = cfg.take_double("media", "wedge_kappa", spec.kappa);
  spec.tet_rho = cfg.take_double("media", "tet_rho", spec.rho);
  spec.tet_kappa = cfg.take_double("media", "tet_kappa", spec.kappa);
  return spec;
}

HybridMesh build_mesh_from_spec(const MeshSpec& spec) {
  const Media uniform{spec.rho, spec.kappa};
  HybridMesh mesh;
  if (spec.kind == "wedge_box") {
    mesh = structured_wedge_box(spec.n, uniform);
  } else if (spec.kind == "unstructured_box") {
    mesh = unstructured_wedge_box(spec.n, spec.xy_jitter, 0.0, spec.perturb_seed, uniform);
  } else if (spec.kind == "arnold_box") {
    mesh = arnold_wedge_box(spec.n, spec.arnold_delta, uniform);
  } else if (spec.kind == "hybrid_box") {
    mesh = structured_hybrid_box(spec.nx, spec.ny, spec.nz_wedge, spec.nz_tet,
                                 Media{spec.wedge_rho, spec.wedge_kappa},
                                 Media{spec.tet_rho, spec.tet_kappa});
  } else if (spec.kind == "layers") {
    if (spec.layers.empty()) throw ConfigError("mesh.kind = layers requires layer entries");
    const int n = spec.surface_n;
    std::vector<std::array<double, 2>> xy((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        xy[j * (n + 1) + i] = {-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n};
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const int a = j * (n + 1) + i, b = a + 1, c = a + n + 2, d = a + n + 1;
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      }
    std::vector<LayerSpec> layers;
    for (const auto& l : spec.layers) {
      LayerSpec ls;
      const auto fb = parse_surface_function(l.bottom);
      const auto ft = parse_surface_function(l.top);
      ls.z_bottom.resize(xy.size());
      ls.z_top.resize(xy.size());
      for (size_t v = 0; v < xy.size(); ++v) {
        ls.z_bottom[v] = fb(xy[v][0], xy[v][1]);
        ls.z_top[v] = ft(xy[v][0], xy[v][1]);
      }
      ls.sublayers = l.sublayers;
      ls.media = Media{l.rho, l.kappa};
      layers.push_back(std::move(ls));
    }
    mesh = stack_layers(xy, tris, layers);
  } else if (spec.kind == "extrude_file") {
    if (spec.file.empty()) throw ConfigError("mesh.kind = extrude_file requires mesh.file");
    mesh = extrude_layer(load_surface(spec.file), spec.extrude_layers, uniform);
  } else if (spec.kind == "file") {
    if (spec.file.empty()) throw ConfigError("mesh.kind = file requires mesh.file");
    mesh = load_mesh(spec.file);
  } else {
    throw ConfigError("unknown mesh.kind '" + spec.kind + "'");
  }
  if (spec.perturb_amplitude > 0.0 && spec.kind != "unstructured_box")
    mesh = perturb_vertically(mesh, spec.perturb_amplitude, spec.perturb_seed);
  else if (spec.kind == "unstructured_box" && spec.perturb_amplitude > 0.0)
    mesh = perturb_vertically(mesh, spec.perturb_amplitude,
                              spec.perturb_seed ^ 0x9e3779b97f4a7c15ull);
  return mesh;
}

RunConfig parse_run_config(const std::string& path) {
  ConfigFile cfg = ConfigFile::load(path);
  RunConfig rc;
  rc.degree = cfg.take_int("run", "degree", rc.degree);
  if (rc.degree < 1 || rc.degree > kMaxDegree)
    throw ConfigError(path + ": run.degree must be in [1," + std::to_string(kMaxDegree) +
                      "], got " + std::to_string(rc.degree));
  rc.flux = cfg.take("run", "flux", rc.flux);
  if (rc.flux != "upwind" && rc.flux != "central")
    throw ConfigError(path + ": run.flux must be upwind or central");
  rc.integrator = cfg.take("run", "integrator", rc.integrator);
  if (rc.integrator != "lserk4" && rc.integrator != "ab3")
    throw ConfigError(path + ": run.integrator must be lserk4 or ab3");
  rc.initial = cfg.take("run", "initial", rc.initial);
  if (rc.initial != "standing_wave" && rc.initial != "gaussian")
    throw ConfigError(path + ": run.initial must be standing_wave or gaussian");
  rc.gaussian_width = cfg.take_double("run", "gaussian_width", rc.gaussian_width);
  rc.cfl = cfg.take_double("run", "cfl", rc.cfl);
  if (!(rc.cfl > 0.0)) throw ConfigError(path + ": run.cfl must be positive");
  rc.final_time = cfg.take_double("run", "final_time", rc.final_time);
  if (!(rc.final_time > 0.0)) throw ConfigError(path + ": run.final_time must be positive");
  rc.snapshot_interval = cfg.take_double("run", "snapshot_interval", 0.0);
  rc.energy_interval = cfg.take_double("run", "energy_interval", 0.0);
  rc.seed = cfg.take_u64("run", "seed", 0);
  rc.threads = cfg.take_int("run", "threads", 0);
  rc.output_dir = cfg.take("output", "directory", rc.output_dir);
  rc.mesh = parse_mesh_spec(cfg);
  if (rc.mesh.perturb_seed == 0) rc.mesh.perturb_seed = rc.seed ? rc.seed : 1;
  cfg.finish();
  return rc;
}

} // namespace prismdg
