#include "slabewald/bd.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

#include "slabewald/errors.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

namespace {
constexpr double kPi = std::numbers::pi;

// Visits each unordered pair closer than rc once, with the minimum-image separation.
template <class F>
void for_pairs(const ChargeSet& c, const BdBox& box, double rc, F&& f) {
  const std::size_t n = c.size();
  const double Lz = box.periodic_z ? box.H : 0.0;
  auto cells = [&](double L) {
    int k = std::max(1, int(L / rc));
    return k < 3 ? 1 : k;
  };
  const int nx = cells(box.Lx), ny = cells(box.Ly);
  // slab: z cells over [0, H] without wrapping
  const int nz = box.periodic_z ? cells(box.H) : std::max(1, int(box.H / rc));
  auto cx = [&](double x) { return std::clamp(int(x / box.Lx * nx), 0, nx - 1); };
  auto cy = [&](double y) { return std::clamp(int(y / box.Ly * ny), 0, ny - 1); };
  auto cz = [&](double z) { return std::clamp(int(z / box.H * nz), 0, nz - 1); };
  const std::size_t ncell = std::size_t(nx) * ny * nz;
  std::vector<std::size_t> start(ncell + 1, 0), items(n), id(n);
  for (std::size_t i = 0; i < n; ++i) {
    id[i] = (std::size_t(cx(c.x[i])) * ny + cy(c.y[i])) * nz + cz(c.z[i]);
    ++start[id[i] + 1];
  }
  for (std::size_t t = 0; t < ncell; ++t) start[t + 1] += start[t];
  {
    auto pos = start;
    for (std::size_t i = 0; i < n; ++i) items[pos[id[i]]++] = i;
  }
  const double rc2 = rc * rc;
  const int ox = nx == 1 ? 0 : 1, oy = ny == 1 ? 0 : 1;
  const int oz = (box.periodic_z && nz == 1) ? 0 : 1;
  for (std::size_t i = 0; i < n; ++i) {
    int ix = cx(c.x[i]), iy = cy(c.y[i]), iz = cz(c.z[i]);
    for (int a = -ox; a <= ox; ++a)
      for (int b = -oy; b <= oy; ++b)
        for (int d = -oz; d <= oz; ++d) {
          int kz = iz + d;
          if (box.periodic_z)
            kz = (kz % nz + nz) % nz;
          else if (kz < 0 || kz >= nz)
            continue;
          if (!box.periodic_z && nz == 1 && d != 0) continue;
          std::size_t cell = (std::size_t((ix + a + nx) % nx) * ny + (iy + b + ny) % ny) * nz + kz;
          for (std::size_t t = start[cell]; t < start[cell + 1]; ++t) {
            std::size_t j = items[t];
            if (j <= i) continue;
            double dx = c.x[i] - c.x[j], dy = c.y[i] - c.y[j], dz = c.z[i] - c.z[j];
            dx -= box.Lx * std::nearbyint(dx / box.Lx);
            dy -= box.Ly * std::nearbyint(dy / box.Ly);
            if (box.periodic_z) dz -= Lz * std::nearbyint(dz / Lz);
            double r2 = dx * dx + dy * dy + dz * dz;
            if (r2 < rc2) f(i, j, dx, dy, dz, r2);
          }
        }
  }
}
}  // namespace

double StericParams::cutoff() const { return std::pow(2.0, 1.0 / p) * 2.0 * a; }

double lj_energy(double r, const StericParams& s) {
  double x = std::pow(2.0 * s.a / r, s.p);
  return 4.0 * s.U0 * (x * x - x) + s.U0;
}

double lj_force(double r, const StericParams& s) {
  double x = std::pow(2.0 * s.a / r, s.p);
  return 4.0 * s.U0 * s.p / r * (2.0 * x * x - x);
}

double steric_force(double r, const StericParams& s) {
  if (r > s.cutoff()) return 0.0;
  if (r <= s.r_m) return lj_force(s.r_m, s);
  return lj_force(r, s);
}

double steric_energy(double r, const StericParams& s) {
  if (r > s.cutoff()) return 0.0;
  if (r <= s.r_m) return lj_energy(s.r_m, s) + lj_force(s.r_m, s) * (s.r_m - r);
  return lj_energy(r, s);
}

void steric_forces(const ChargeSet& c, const BdBox& box, const StericParams& s,
                   std::vector<std::array<double, 3>>& F) {
  const std::size_t n = c.size();
  F.assign(n, {0.0, 0.0, 0.0});
  if (s.U0 == 0.0) return;
  const double rc = s.cutoff();
  for_pairs(c, box, rc, [&](std::size_t i, std::size_t j, double dx, double dy, double dz, double r2) {
    double r = std::sqrt(r2);
    double f = steric_force(r, s) / std::max(r, 1e-300);
    F[i][0] += f * dx;
    F[i][1] += f * dy;
    F[i][2] += f * dz;
    F[j][0] -= f * dx;
    F[j][1] -= f * dy;
    F[j][2] -= f * dz;
  });
  if (box.periodic_z || !box.wall_steric) return;
  for (std::size_t i = 0; i < n; ++i) {
    F[i][2] += steric_force(2.0 * c.z[i], s);
    F[i][2] -= steric_force(2.0 * (box.H - c.z[i]), s);
  }
}

BdIntegrator::BdIntegrator(const BdBox& box, const StericParams& steric, const BdConfig& cfg)
    : box_(box), steric_(steric), cfg_(cfg), rng_(cfg.seed) {
  if (!(cfg.dt > 0.0)) throw InputError("bd: dt must be positive");
  if (!(cfg.mu > 0.0) || cfg.kT < 0.0) throw InputError("bd: mobility must be positive and kT non-negative");
  if (cfg.max_retries < 0) throw InputError("bd: max_retries must be non-negative");
}

void BdIntegrator::init(std::size_t n) {
  w_prev_.resize(n);
  for (auto& w : w_prev_)
    for (auto& v : w) v = normal_(rng_);
  ready_ = true;
}

int BdIntegrator::step(ChargeSet& c, const ForceFn& electro) {
  const std::size_t n = c.size();
  if (!ready_ || w_prev_.size() != n) init(n);
  steric_forces(c, box_, steric_, force_);
  if (electro) {
    fe_.assign(n, {0.0, 0.0, 0.0});
    electro(c, fe_);
    for (std::size_t i = 0; i < n; ++i)
      for (int d = 0; d < 3; ++d) force_[i][d] += fe_[i][d];
  }
  const double drift = cfg_.mu * cfg_.dt;
  const double amp = std::sqrt(cfg_.kT * cfg_.mu * cfg_.dt / 2.0);
  w_next_.resize(n);
  std::vector<std::array<double, 3>> disp(n);
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    for (auto& w : w_next_)
      for (auto& v : w) v = normal_(rng_);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      double d2 = 0.0;
      for (int d = 0; d < 3; ++d) {
        disp[i][d] = drift * force_[i][d] + amp * (w_prev_[i][d] + w_next_[i][d]);
        d2 += disp[i][d] * disp[i][d];
      }
      if (cfg_.max_disp > 0.0 && d2 > cfg_.max_disp * cfg_.max_disp) {
        double f = cfg_.max_disp / std::sqrt(d2);
        for (int d = 0; d < 3; ++d) disp[i][d] *= f;
      }
      if (!box_.periodic_z) {
        double z = c.z[i] + disp[i][2];
        if (!(z > box_.z_lo && z < box_.z_hi)) ok = false;
      }
    }
    if (!ok) {
      ++retries_;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) {
      c.x[i] += disp[i][0];
      c.y[i] += disp[i][1];
      c.z[i] += disp[i][2];
      c.x[i] -= box_.Lx * std::floor(c.x[i] / box_.Lx);
      c.y[i] -= box_.Ly * std::floor(c.y[i] / box_.Ly);
      if (box_.periodic_z) c.z[i] -= box_.H * std::floor(c.z[i] / box_.H);
    }
    std::swap(w_prev_, w_next_);
    ++step_;
    return attempt;
  }
  throw NumericalError("bd: unrecoverable configuration after " + std::to_string(cfg_.max_retries) + " retries");
}

BdObservables::BdObservables(const BdBox& box, double z_bin, double r_bin, double r_max)
    : box_(box), z_bin_(z_bin), r_bin_(r_bin), r_max_(r_max) {
  if (!(z_bin > 0.0) || !(r_bin > 0.0)) throw InputError("bd: histogram bins must be positive");
  std::size_t nzb = std::size_t(std::ceil(box.H / z_bin - 1e-9));
  n_pos_.assign(nzb, 0.0);
  n_neg_.assign(nzb, 0.0);
  std::size_t nrb = r_max > 0.0 ? std::size_t(std::ceil(r_max / r_bin - 1e-9)) : 0;
  g_like_.assign(nrb, 0.0);
  g_unlike_.assign(nrb, 0.0);
}

void BdObservables::sample(const ChargeSet& c) {
  const std::size_t nzb = n_pos_.size();
  std::size_t np = 0, nn = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto b = std::size_t(std::clamp(c.z[i] / z_bin_, 0.0, double(nzb) - 0.5));
    if (c.q[i] > 0) {
      n_pos_[b] += 1.0;
      ++np;
    } else {
      n_neg_[b] += 1.0;
      ++nn;
    }
  }
  if (!g_like_.empty()) {
    const double V = box_.Lx * box_.Ly * box_.H;
    like_pairs_ += (0.5 * double(np) * (np - 1.0) + 0.5 * double(nn) * (nn - 1.0)) / V;
    unlike_pairs_ += double(np) * nn / V;
    for_pairs(c, box_, r_max_, [&](std::size_t i, std::size_t j, double, double, double, double r2) {
      auto b = std::size_t(std::sqrt(r2) / r_bin_);
      if (b >= g_like_.size()) return;
      ((c.q[i] > 0) == (c.q[j] > 0) ? g_like_ : g_unlike_)[b] += 1.0;
    });
  }
  ++samples_;
}

std::vector<double> BdObservables::density_of(int sign) const {
  const auto& src = sign > 0 ? n_pos_ : n_neg_;
  std::vector<double> out(src.size(), 0.0);
  if (samples_ == 0) return out;
  const double norm = 1.0 / (double(samples_) * box_.Lx * box_.Ly * z_bin_);
  for (std::size_t b = 0; b < src.size(); ++b) out[b] = src[b] * norm;
  return out;
}

std::vector<double> BdObservables::density() const {
  auto p = density_of(1), n = density_of(-1);
  for (std::size_t b = 0; b < p.size(); ++b) p[b] += n[b];
  return p;
}

std::vector<double> BdObservables::z_centers() const {
  std::vector<double> z(n_pos_.size());
  for (std::size_t b = 0; b < z.size(); ++b) z[b] = (b + 0.5) * z_bin_;
  return z;
}

std::vector<double> BdObservables::r_centers() const {
  std::vector<double> r(g_like_.size());
  for (std::size_t b = 0; b < r.size(); ++b) r[b] = (b + 0.5) * r_bin_;
  return r;
}

double BdObservables::like_pairs_expected(std::size_t b) const {
  double r0 = b * r_bin_, r1 = r0 + r_bin_;
  return like_pairs_ * 4.0 / 3.0 * kPi * (r1 * r1 * r1 - r0 * r0 * r0);
}

double BdObservables::unlike_pairs_expected(std::size_t b) const {
  double r0 = b * r_bin_, r1 = r0 + r_bin_;
  return unlike_pairs_ * 4.0 / 3.0 * kPi * (r1 * r1 * r1 - r0 * r0 * r0);
}

std::vector<double> BdObservables::g2_like() const {
  std::vector<double> g(g_like_.size(), 0.0);
  for (std::size_t b = 0; b < g.size(); ++b) {
    double e = like_pairs_expected(b);
    g[b] = e > 0.0 ? g_like_[b] / e : 0.0;
  }
  return g;
}

std::vector<double> BdObservables::g2_unlike() const {
  std::vector<double> g(g_unlike_.size(), 0.0);
  for (std::size_t b = 0; b < g.size(); ++b) {
    double e = unlike_pairs_expected(b);
    g[b] = e > 0.0 ? g_unlike_[b] / e : 0.0;
  }
  return g;
}

double bjerrum_length_angstrom(double eps_r, double T) {
  const double e = 1.602176634e-19, eps0 = 8.8541878128e-12, kB = 1.380649e-23;
  return e * e / (4.0 * kPi * eps0 * eps_r * kB * T) * 1e10;
}

double reduced_permittivity(double bjerrum_in_a) { return 1.0 / (4.0 * kPi * bjerrum_in_a); }

double molar_to_density(double molarity, double a_angstrom) {
  double a_m = a_angstrom * 1e-10;
  return molarity * 1e3 * kAvogadro * a_m * a_m * a_m;
}

double debye_length(double eps, double kT, double n_salt) { return std::sqrt(eps * kT / (2.0 * n_salt)); }

double dho_pair_correlation(double r, int sign, double eps, double kT, double g_w, double lambda,
                            const StericParams& s) {
  double Ue = sign * std::erf(r / (2.0 * g_w)) / (4.0 * kPi * eps * r);
  return std::exp(-(steric_energy(r, s) + Ue * std::exp(-r / lambda)) / kT);
}

double PnpProfile::operator()(double z) const {
  if (z <= a || z >= H - a) return 0.0;
  double c = std::cos(K * (z - 0.5 * H) / d);
  return n_m / (c * c);
}

double PnpProfile::integral(double z0, double z1) const {
  z0 = std::max(z0, a);
  z1 = std::min(z1, H - a);
  if (z1 <= z0) return 0.0;
  if (K == 0.0) return n_m * (z1 - z0);
  auto prim = [&](double z) { return n_m * d / K * std::tan(K * (z - 0.5 * H) / d); };
  return prim(z1) - prim(z0);
}

PnpProfile pnp_profile(double sigma, double eps, double kT, double H, double a) {
  PnpProfile p;
  p.H = H;
  p.a = a;
  p.d = H - 2.0 * a;
  if (!(p.d > 0.0)) throw InputError("pnp: channel narrower than the ion diameter");
  if (sigma > 0.0) throw InputError("pnp: counterions are cations, so sigma must be <= 0");
  if (sigma == 0.0) return p;
  const double target = -sigma * p.d / (2.0 * eps * kT);
  auto f = [&](double K) { return K * std::tan(0.5 * K) - target; };
  double lo = 0.0, hi = kPi * (1.0 - 1e-15);
  if (f(hi) <= 0.0) throw NumericalError("pnp: no root for K below pi");
  auto r = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<double>(52));
  p.K = 0.5 * (r.first + r.second);
  p.n_m = 2.0 * p.K * p.K * eps * kT / (p.d * p.d);
  return p;
}

ChargeSet random_ions(std::size_t n_pos, std::size_t n_neg, const BdBox& box, double z_lo, double z_hi,
                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ChargeSet c;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    double x = u(rng) * box.Lx, y = u(rng) * box.Ly, z = z_lo + u(rng) * (z_hi - z_lo);
    c.add(x, y, z, i < n_pos ? 1.0 : -1.0);
  }
  return c;
}

ChargeSet pnp_ions(std::size_t n, const BdBox& box, const PnpProfile& prof, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double zlo = prof.a * (1.0 + 1e-9), zhi = prof.H - prof.a * (1.0 + 1e-9);
  const double peak = prof.K > 0.0 ? prof(zlo) : 1.0;
  ChargeSet c;
  while (c.size() < n) {
    double z = zlo + u(rng) * (zhi - zlo);
    double accept = prof.K > 0.0 ? prof(z) / peak : 1.0;
    double x = u(rng) * box.Lx, y = u(rng) * box.Ly;
    if (u(rng) < accept) c.add(x, y, z, 1.0);
  }
  return c;
}

}  // namespace slabewald
