#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slabewald {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;  // informational lines
  double seconds = 0.0;
  bool pass() const;
};

// Four charges in a laterally unbounded slab: L = 28 and 32 solves,
// 1/L extrapolation, compared to the image series.
SuiteReport validate_freespace();
// 100 charges, xi in {4.3, 9.2, 12.2, 26.0} against the unsplit reference.
SuiteReport validate_xi(int repetitions = 10, std::uint64_t seed = 20240611);
// W1 vs W2 with Gaussian wall charges for g_w in {1e-2, 1e-3, 1e-4, 1e-10}.
SuiteReport validate_workcheck(std::uint64_t seed = 7);
// Tuned alpha = r_nf * xi for both profiles.
SuiteReport validate_tuner();
// Manufactured BVP solutions and spectral convergence.
SuiteReport validate_bvp();
// Near kernel plus an independently integrated far kernel versus the full smoothed Coulomb kernel.
SuiteReport validate_split_identity();
// Adjointness, thread-count bit reproducibility, zero-jump degeneration, translation invariance.
SuiteReport validate_properties();

struct BdSuiteOptions {
  // bulk electrolyte (triply periodic)
  std::size_t bulk_ions = 2000;
  double bulk_dt = 5e-3;
  double bulk_equil_tau = 30.0;
  double bulk_tau = 60.0;
  // charged walls, counterions only
  std::size_t wall_ions = 1000;
  double wall_H = 40.0;
  double wall_dt = 1e-2;
  double wall_equil_tau = 10.0;
  double wall_tau = 100.0;
  std::uint64_t seed = 12345;
  std::string out_dir;  // histogram CSVs are written here when non-empty
};
SuiteReport validate_bd_bulk(const BdSuiteOptions& o);
// eps_out_ratio = eps_b/eps = eps_t/eps; 1 compares to PNP pointwise, < 1 checks depletion.
SuiteReport validate_bd_charged(const BdSuiteOptions& o, double eps_out_ratio);

// Runs a named suite: freespace, xi, workcheck, tuner, bvp, kernels, properties, bd.
SuiteReport run_suite(const std::string& name, const BdSuiteOptions& bd = {});
const std::vector<std::string>& suite_names();

}  // namespace slabewald
