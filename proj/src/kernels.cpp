#include "slabewald/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slabewald/errors.hpp"

namespace slabewald {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoOverSqrtPi = 2.0 / 1.7724538509055160273;

// erf(x)/x and d/dx of it, power series for small x.
double erf_over_x_series(double x) {
  double x2 = x * x, term = 1.0, sum = 1.0;
  for (int n = 1; n < 12; ++n) {
    term *= -x2 / n;
    sum += term / (2 * n + 1);
  }
  return kTwoOverSqrtPi * sum;
}
double erf_over_x_series_dx(double x) {
  double x2 = x * x, term = 1.0, sum = 0.0;
  for (int n = 1; n < 12; ++n) {
    term *= -x2 / n;  // (-1)^n x^{2n} / n!
    sum += term * (2.0 * n) / (2 * n + 1);
  }
  return kTwoOverSqrtPi * sum / x;
}

bool is_smooth_round(int n) {
  for (int p : {2, 3, 5, 7})
    while (n % p == 0) n /= p;
  return n == 1;
}
}  // namespace

int fft_friendly_size(int n) {
  int m = std::max(n, 2);
  while (!is_smooth_round(m)) ++m;
  return m;
}

Profile profile_for(double delta) {
  if (std::abs(delta - 1e-4) < 1e-12) return {1e-4, 1.4, 12};
  if (std::abs(delta - 5e-4) < 1e-12) return {5e-4, 1.2, 10};
  throw InputError("accuracy profile: delta must be 1e-4 or 5e-4");
}

double split_widths(double xi, double g_w) {
  if (!(xi > 0.0) || !(g_w >= 0.0)) throw InputError("split_widths: need xi > 0 and g_w >= 0");
  if (std::isinf(xi)) return g_w;
  return std::sqrt(0.25 / (xi * xi) + g_w * g_w);
}

double erf_pair(double r, double s1, double s2) {
  if (s1 >= s2) return 0.0;
  bool inf2 = std::isinf(s2);
  if (s1 > 0.0 && r < 0.1 * s1) {
    double v = erf_over_x_series(r / s1) / s1;
    if (!inf2) v -= erf_over_x_series(r / s2) / s2;
    return v;
  }
  if (s1 == 0.0 && r == 0.0) return kInf;
  if (inf2) return (s1 == 0.0 ? 1.0 : std::erf(r / s1)) / r;
  if (s1 == 0.0) return std::erfc(r / s2) / r;
  if (r > 0.5 * s1) return (std::erfc(r / s2) - std::erfc(r / s1)) / r;
  return (std::erf(r / s1) - std::erf(r / s2)) / r;
}

double erf_pair_dr(double r, double s1, double s2) {
  if (s1 >= s2) return 0.0;
  bool inf2 = std::isinf(s2);
  if (s1 > 0.0 && r < 0.1 * s1) {
    double v = erf_over_x_series_dx(r / s1) / (s1 * s1);
    if (!inf2) v -= erf_over_x_series_dx(r / s2) / (s2 * s2);
    return r == 0.0 ? 0.0 : v;
  }
  if (r == 0.0) return -kInf;
  double g1 = (s1 == 0.0) ? 0.0 : kTwoOverSqrtPi * std::exp(-(r / s1) * (r / s1)) / s1;
  double g2 = inf2 ? 0.0 : kTwoOverSqrtPi * std::exp(-(r / s2) * (r / s2)) / s2;
  return (g1 - g2) / r - erf_pair(r, s1, s2) / r;
}

namespace {
double s_second(double base2, double xi) {
  if (xi == 0.0) return kInf;
  return std::sqrt(base2 + 1.0 / (xi * xi));
}
}  // namespace

double near_potential_point(double r, double g_w, double xi, double eps) {
  double s1 = std::sqrt(2.0) * g_w;
  return erf_pair(r, s1, s_second(2.0 * g_w * g_w, xi)) / (4.0 * kPi * eps);
}

double near_potential_avg(double r, double g_w, double xi, double eps) {
  double s1 = 2.0 * g_w;
  return erf_pair(r, s1, s_second(4.0 * g_w * g_w, xi)) / (4.0 * kPi * eps);
}

double near_field_point(double r, double g_w, double xi, double eps) {
  double s1 = std::sqrt(2.0) * g_w;
  return -erf_pair_dr(r, s1, s_second(2.0 * g_w * g_w, xi)) / (4.0 * kPi * eps);
}

double near_field_avg(double r, double g_w, double xi, double eps) {
  double s1 = 2.0 * g_w;
  return -erf_pair_dr(r, s1, s_second(4.0 * g_w * g_w, xi)) / (4.0 * kPi * eps);
}

double gaussian_cloud_potential(double r, double s, double eps) {
  return erf_pair(r, std::sqrt(2.0) * s, kInf) / (4.0 * kPi * eps);
}

double erfcx(double x) {
  if (x < 25.0) {
    if (x < -26.0) return kInf;
    return std::exp(x * x) * std::erfc(x);
  }
  // asymptotic series, x >= 25
  double ix2 = 1.0 / (2.0 * x * x), term = 1.0, sum = 1.0;
  for (int n = 1; n < 8; ++n) {
    term *= -(2 * n - 1) * ix2;
    sum += term;
  }
  return sum / (x * std::sqrt(kPi));
}

double tune_cutoff(double xi, double g_w, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("tune_cutoff: delta must lie in (0,1)");
  if (std::isinf(xi)) return 0.0;
  const double gt = split_widths(xi, g_w);
  const double s1 = std::sqrt(2.0) * g_w;
  const double s2 = s_second(2.0 * g_w * g_w, xi);
  auto ratio = [&](double r) {
    double full = erf_pair_dr(r, s1, kInf);
    return std::abs(erf_pair_dr(r, s1, s2) / full);
  };
  double lo = gt, hi = 20.0 * gt;
  if (ratio(lo) < delta) return lo;
  if (ratio(hi) >= delta) throw ConstraintError("near_cutoff", "tune_cutoff: no cutoff below 20 g_t");
  while (hi - lo > 1e-13 * hi) {
    double mid = 0.5 * (lo + hi);
    if (ratio(mid) < delta)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

bool EwaldParams::constraints_ok() const { return first_violation() == nullptr; }

const Constraint* EwaldParams::first_violation() const {
  for (const auto& c : constraints)
    if (!c.ok) return &c;
  return nullptr;
}

void evaluate_constraints(EwaldParams& p, const SlabGeometry& g) {
  p.constraints.clear();
  auto add = [&](std::string name, double value, double bound, std::string desc, bool inclusive = false) {
    bool ok = inclusive ? value <= bound : value < bound;
    p.constraints.push_back(Constraint{std::move(name), value, bound, ok, std::move(desc)});
  };
  if (p.split() && p.g_w > 0.0)
    add("efficiency", p.xi, 1.0 / (p.g_w * std::sqrt(12.0)), "xi <= 1/(g_w sqrt(12))", true);
  if (p.split()) {
    add("near_wall", p.r_nf, p.n_img * g.H + p.h_min, "r_nf < n_img H + h_min");
    add("near_box", p.r_cut, 0.5 * std::min(g.Lx, g.Ly), "r_cut < min(Lx, Ly)/2");
  }
  add("far_images", 2.0 * p.H_E, g.H + p.h_min, "2 H_E < H + h_min");
  add("kernel_box", 2.0 * p.H_E, std::min(g.Lx, g.Ly), "2 H_E < min(Lx, Ly)");
}

namespace {

void finish_plan(EwaldParams& p, const SlabGeometry& g, double h_ratio, int n_g, const PlanOptions& opt) {
  p.n_g = n_g;
  p.n_sigma = 0.5 * n_g / h_ratio;
  p.H_E = 0.5 * n_g * p.h_xy;
  p.z0 = -3.0 * p.H_E;
  p.z1 = g.H + 3.0 * p.H_E;
  double hbar = p.z1 - p.z0;
  p.Nz = static_cast<int>(std::ceil(kPi * hbar / (2.0 * p.h_xy)));
  if (opt.fft_friendly_nz)
    while (!is_smooth_round(2 * p.Nz - 2)) ++p.Nz;
  p.Nz = std::max(p.Nz, 8);
  p.k_max = kPi / p.h_xy;
  p.r_nf = p.split() ? tune_cutoff(p.xi, p.g_w, p.delta) : 0.0;
  p.r_cut = p.split() ? p.r_nf + p.n_sigma * p.g_w : 0.0;
  p.h_min = opt.h_min > 0.0 ? opt.h_min : p.n_sigma * p.g_w;
  evaluate_constraints(p, g);
}

}  // namespace

EwaldParams plan_grid(const SlabGeometry& g, double g_w, double delta, int nx, int ny, const PlanOptions& opt) {
  g.validate();
  if (nx < 4) throw InputError("plan_grid: Nx too small");
  if (!(g_w >= 0.0)) throw InputError("plan_grid: g_w must be non-negative");
  Profile prof = profile_for(delta);
  double ratio = opt.h_ratio > 0.0 ? opt.h_ratio : prof.h_ratio;
  int n_g = opt.n_g > 0 ? opt.n_g : prof.n_g;
  EwaldParams p;
  p.delta = delta;
  p.g_w = g_w;
  p.Nx = nx;
  p.hx = g.Lx / nx;
  p.Ny = ny > 0 ? ny : std::max(4, static_cast<int>(std::lround(g.Ly / p.hx)));
  p.hy = g.Ly / p.Ny;
  p.h_xy = std::max(p.hx, p.hy);
  p.g_t = ratio * p.h_xy;
  if (!(p.g_t > g_w))
    throw InputError("plan_grid: grid resolves g_w (g_t <= g_w); use the unsplit solver or a coarser grid");
  p.xi = 0.5 / std::sqrt(p.g_t * p.g_t - g_w * g_w);
  finish_plan(p, g, ratio, n_g, opt);
  return p;
}

EwaldParams plan_grid_xi(const SlabGeometry& g, double g_w, double delta, double xi, const PlanOptions& opt) {
  g.validate();
  if (!(xi > 0.0) || std::isinf(xi)) throw InputError("plan_grid: xi must be positive and finite");
  Profile prof = profile_for(delta);
  double ratio = opt.h_ratio > 0.0 ? opt.h_ratio : prof.h_ratio;
  double h = split_widths(xi, g_w) / ratio;
  int nx = std::max(4, static_cast<int>(std::lround(g.Lx / h)));
  int ny = std::max(4, static_cast<int>(std::lround(g.Ly / h)));
  return plan_grid(g, g_w, delta, nx, ny, opt);
}

EwaldParams plan_grid_unsplit(const SlabGeometry& g, double g_w, int nx, int ny, int n_g) {
  g.validate();
  if (!(g_w > 0.0)) throw InputError("unsplit plan needs g_w > 0");
  EwaldParams p;
  p.delta = 0.0;
  p.g_w = g_w;
  p.xi = kInf;
  p.g_t = g_w;
  p.Nx = nx;
  p.Ny = ny;
  p.hx = g.Lx / nx;
  p.hy = g.Ly / ny;
  p.h_xy = std::max(p.hx, p.hy);
  finish_plan(p, g, g_w / p.h_xy, n_g, PlanOptions{});
  return p;
}

}  // namespace slabewald
