#pragma once

#include "prismdg/analysis.hpp"
#include "prismdg/config.hpp"

#include <string>
#include <vector>

namespace prismdg {

/// CLI entry points.  All throw on failure; main maps exceptions to exit
/// codes (2 config, 3 instability, 4 mesh).

int cmd_run(const std::string& config_path);

int cmd_converge(const std::vector<std::string>& families, const std::vector<int>& degrees,
                 const std::vector<double>& h, const std::string& flux, int threads,
                 const std::string& out_dir, std::uint64_t seed);

int cmd_spectrum(const std::string& quadrature, const std::string& flux, int degree,
                 int surface_n, int layers, double amplitude, std::uint64_t seed,
                 const std::string& out_dir);

int cmd_mesh(const std::string& config_path, const std::string& out_path);

int cmd_bench(const std::vector<int>& degrees, int evals, const std::string& out_dir);

int cmd_dump_ref(int degree, const std::string& out_dir);

} // namespace prismdg
