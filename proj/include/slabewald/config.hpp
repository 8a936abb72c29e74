#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "slabewald/bd.hpp"
#include "slabewald/domain.hpp"
#include "slabewald/kernels.hpp"
#include "slabewald/slab_solver.hpp"

namespace slabewald {

struct SurfaceConfig {
  std::string kind = "none";  // none | uniform | gaussian
  double sigma_b = 0.0, sigma_t = 0.0;          // uniform
  double s = 0.2, amplitude_b = 0.0, amplitude_t = 0.0;  // gaussian
  double x0 = 0.0, y0 = 0.0;  // gaussian center; defaults to the box center
  bool center_set = false;
};

struct BdRunConfig {
  std::string mode = "slab";  // slab | bulk
  std::string init = "random";  // random | pnp | file
  std::size_t n_pos = 0, n_neg = 0;
  double L = 0.0;  // bulk box side
  StericParams steric;
  BdConfig cfg;
  long log_every = 100;
  double z_bin = 0.25, r_bin = 0.1, r_max = 0.0;
};

struct RunConfig {
  SlabGeometry geometry;
  std::string charges_file;
  double g_w = 0.0;
  double delta = 5e-4;
  int nxy = 0;      // > 0 when given
  double xi = 0.0;  // > 0 when given
  SolverOptions solver;
  SurfaceConfig surface;
  BdRunConfig bd;
  std::string out_dir = "out";
  int threads = 1;
  std::uint64_t seed = 1;
};

// Flat key = value text with [section] headers (keys become section.key).
// Unknown keys, malformed values and inconsistent settings throw InputError.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
// Cross-field checks (exactly one of Nxy/xi, profile, bd settings).
void check_config(const RunConfig& c);

// Every resolved parameter as (dotted key, value) with 17 significant digits.
std::vector<std::pair<std::string, std::string>> resolved_parameters(const RunConfig& c);

// Ewald parameters from Nxy or xi.
EwaldParams plan_from_config(const RunConfig& c);
void make_surfaces(const RunConfig& c, SurfaceCharge& sigma_b, SurfaceCharge& sigma_t);

}  // namespace slabewald
