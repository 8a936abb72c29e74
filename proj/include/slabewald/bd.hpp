#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "slabewald/domain.hpp"

namespace slabewald {

// Truncated, regularized Lennard-Jones repulsion between ions of radius a.
struct StericParams {
  double a = 1.0;
  double U0 = 1.0;
  double r_m = 1.0;
  double p = 6.0;
  double cutoff() const;  // 2^{1/p} * 2a
};
double lj_energy(double r, const StericParams& s);
double lj_force(double r, const StericParams& s);
// Force is F_LJ(r_m) for r <= r_m, F_LJ(r) up to the cutoff, then zero.
double steric_force(double r, const StericParams& s);
// Energy consistent with steric_force, zero beyond the cutoff.
double steric_energy(double r, const StericParams& s);

struct BdConfig {
  double dt = 2e-3;
  double mu = 1.0;
  double kT = 1.0;
  long steps = 0;
  long equil_steps = 0;
  long sample_every = 1;
  std::uint64_t seed = 1;
  double max_disp = 1.0;  // per-particle displacement cap, <= 0 disables
  int max_retries = 100;
};

// Box of the simulation. Slab runs are periodic in x, y and confined to
// z_lo < z < z_hi; bulk runs are periodic in all three directions with Lz = H.
struct BdBox {
  double Lx = 1.0, Ly = 1.0, H = 1.0;
  bool periodic_z = false;
  double z_lo = 0.0, z_hi = 1.0;
  bool wall_steric = true;  // mirror-particle repulsion from z = 0 and z = H
};

// Electrostatic forces q*E on every charge for the given positions. The
// output vector arrives sized to the charge count and zeroed.
using ForceFn = std::function<void(const ChargeSet&, std::vector<std::array<double, 3>>&)>;

// Steric forces from all pairs within the cutoff (cell list) and the walls.
void steric_forces(const ChargeSet& c, const BdBox& box, const StericParams& s,
                   std::vector<std::array<double, 3>>& F);

// Non-Markovian Euler-Maruyama scheme with averaged consecutive increments.
class BdIntegrator {
 public:
  BdIntegrator(const BdBox& box, const StericParams& steric, const BdConfig& cfg);

  // Draws the initial increments W^0. Called by the first step if needed.
  void init(std::size_t n);
  // One accepted step. Returns the number of rejected attempts.
  int step(ChargeSet& c, const ForceFn& electro);

  long steps_taken() const { return step_; }
  long total_retries() const { return retries_; }
  const std::vector<std::array<double, 3>>& last_forces() const { return force_; }

 private:
  BdBox box_;
  StericParams steric_;
  BdConfig cfg_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::vector<std::array<double, 3>> w_prev_, w_next_, force_, fe_;
  long step_ = 0, retries_ = 0;
  bool ready_ = false;
};

// Histograms of n(z) and the like/unlike pair correlation g2(r).
class BdObservables {
 public:
  BdObservables(const BdBox& box, double z_bin, double r_bin, double r_max);
  void sample(const ChargeSet& c);

  long samples() const { return samples_; }
  double z_bin() const { return z_bin_; }
  double r_bin() const { return r_bin_; }
  // Number density per bin center: counts / (samples * Lx * Ly * z_bin).
  std::vector<double> density() const;
  std::vector<double> density_of(int sign) const;
  // g2 for pairs of equal sign and of opposite sign, shell normalized.
  std::vector<double> g2_like() const;
  std::vector<double> g2_unlike() const;
  std::vector<double> z_centers() const;
  std::vector<double> r_centers() const;
  // Raw pair counts and their ideal-gas expectations (for weighting fits).
  const std::vector<double>& like_counts() const { return g_like_; }
  const std::vector<double>& unlike_counts() const { return g_unlike_; }
  double like_pairs_expected(std::size_t bin) const;
  double unlike_pairs_expected(std::size_t bin) const;

 private:
  BdBox box_;
  double z_bin_, r_bin_, r_max_;
  std::vector<double> n_pos_, n_neg_, g_like_, g_unlike_;
  long samples_ = 0;
  double like_pairs_ = 0.0, unlike_pairs_ = 0.0;  // accumulated pair-count normalizers
};

// Reduced-unit helpers. Lengths in units of the ion radius a, energies in kT, charge in e.
constexpr double kAvogadro = 6.02214076e23;
// Bjerrum length in Angstrom for relative permittivity eps_r at temperature T (K).
double bjerrum_length_angstrom(double eps_r, double T);
// eps in reduced units from the Bjerrum length in units of a: 1/(4 pi lB).
double reduced_permittivity(double bjerrum_in_a);
// Per-species number density (a^-3) of a salt of molarity M (mol/L) for ion radius a in Angstrom.
double molar_to_density(double molarity, double a_angstrom);
// Debye length sqrt(eps kT / (e^2 * 2 n_salt)), n_salt per species.
double debye_length(double eps, double kT, double n_salt);

// Modified Debye-Huckel-Onsager pair correlation. sign = -1 for oppositely
// charged ions (attractive), +1 for like charges.
double dho_pair_correlation(double r, int sign, double eps, double kT, double g_w, double lambda,
                            const StericParams& s);

// Counterion-only slit with both walls at sigma (<0 for cations), d = H - 2a.
struct PnpProfile {
  double K = 0.0, n_m = 0.0, d = 0.0, H = 0.0, a = 0.0;
  double operator()(double z) const;
  // Integral of n over [z0, z1].
  double integral(double z0, double z1) const;
};
PnpProfile pnp_profile(double sigma, double eps, double kT, double H, double a);

// Uniform random positions with x in [0,Lx), y in [0,Ly), z in [z_lo, z_hi].
ChargeSet random_ions(std::size_t n_pos, std::size_t n_neg, const BdBox& box, double z_lo, double z_hi,
                      std::mt19937_64& rng);
// Cations placed by rejection so that the z density follows the PNP profile.
ChargeSet pnp_ions(std::size_t n, const BdBox& box, const PnpProfile& prof, std::mt19937_64& rng);

}  // namespace slabewald
