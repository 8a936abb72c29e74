#include "slabewald/oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "slabewald/errors.hpp"
#include "slabewald/parallel.hpp"

namespace slabewald {

namespace {
constexpr double kPi = std::numbers::pi;

// Averaged kernel erf(r/s)/(4 pi eps r) and -d/dr of it, s = 2 g_w.
void pair_kernel(double r, double s, double eps, double& pot, double& fr) {
  const double c = 1.0 / (4.0 * kPi * eps);
  if (r < 1e-3 * s) {
    double x2 = (r / s) * (r / s);
    pot = c * (2.0 / std::sqrt(kPi)) / s * (1.0 - x2 / 3.0 + x2 * x2 / 10.0);
    fr = c * (2.0 / std::sqrt(kPi)) / (s * s * s) * r * (2.0 / 3.0 - 0.4 * x2);
    return;
  }
  double e = std::erf(r / s);
  pot = c * e / r;
  fr = c * (e / (r * r) - 2.0 / (std::sqrt(kPi) * s * r) * std::exp(-(r * r) / (s * s)));
}
}  // namespace

std::vector<ImageTerm> slab_image_series(double z, const SlabGeometry& g, int n_images) {
  const double rb = (g.eps - g.eps_b) / (g.eps + g.eps_b);
  const double rt = (g.eps - g.eps_t) / (g.eps + g.eps_t);
  const int M = std::max(1, n_images / 4);
  std::vector<ImageTerm> out;
  if (rb == 0.0 && rt == 0.0) return out;
  for (int n = -M; n <= M; ++n) {
    if (n != 0) {
      double f = std::pow(rb * rt, std::abs(n));
      if (f != 0.0) out.push_back({z + 2.0 * n * g.H, f});
    }
    if (n > -M) {
      double f = n >= 1 ? std::pow(rt, n) * std::pow(rb, n - 1) : std::pow(rb, -n + 1) * std::pow(rt, -n);
      if (f != 0.0) out.push_back({-z + 2.0 * n * g.H, f});
    }
  }
  return out;
}

FieldSample free_space_slab_reference(const ChargeSet& c, const SlabGeometry& g, double g_w, int n_images) {
  const std::size_t n = c.size();
  FieldSample out;
  out.phi.assign(n, 0.0);
  out.E.assign(n, {0.0, 0.0, 0.0});
  const double s = 2.0 * g_w;
  std::vector<std::vector<ImageTerm>> imgs(n);
  for (std::size_t j = 0; j < n; ++j) imgs[j] = slab_image_series(c.z[j], g, n_images);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double ph = 0.0, ex = 0.0, ey = 0.0, ez = 0.0;
      auto add = [&](double x, double y, double z, double q) {
        double dx = c.x[i] - x, dy = c.y[i] - y, dz = c.z[i] - z;
        double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        double p, f;
        pair_kernel(r, s, g.eps, p, f);
        ph += q * p;
        if (r > 0.0) {
          ex += q * f * dx / r;
          ey += q * f * dy / r;
          ez += q * f * dz / r;
        }
      };
      for (std::size_t j = 0; j < n; ++j) {
        add(c.x[j], c.y[j], c.z[j], c.q[j]);
        for (const auto& im : imgs[j]) add(c.x[j], c.y[j], im.z, im.factor * c.q[j]);
      }
      out.phi[i] = ph;
      out.E[i] = {ex, ey, ez};
    }
  });
  return out;
}

EwaldParams no_split_params(const SlabGeometry& g, double g_w, const NoSplitOptions& o) {
  double h = g_w / o.h_factor;
  int nx = std::max(4, int(std::lround(g.Lx / h)));
  int ny = std::max(4, int(std::lround(g.Ly / h)));
  int n_g = 2 * int(std::ceil(o.n_sigma * o.h_factor - 1e-9));
  EwaldParams p = plan_grid_unsplit(g, g_w, nx, ny, n_g);
  std::size_t nodes = std::size_t(p.Nx) * p.Ny * p.Nz;
  if (nodes > o.max_nodes) throw InputError("no-split reference grid exceeds the node limit");
  return p;
}

SolveResult no_split_reference(const SlabGeometry& g, double g_w, ChargeSet c, const SurfaceCharge& sb,
                               const SurfaceCharge& st, const NoSplitOptions& o) {
  EwaldParams p = no_split_params(g, g_w, o);
  SolverOptions so;
  so.enforce_constraints = false;
  so.allow_wall_overlap = true;
  SlabSolver solver(g, p, so);
  return solver.solve(c, sb, st);
}

WorkCheck work_check(SlabSolver& solver, const ChargeSet& c, const SurfaceCharge& sb, const SurfaceCharge& st,
                     double delta0, const std::vector<std::array<double, 3>>& dir) {
  if (dir.size() != c.size()) throw InputError("work_check: direction count mismatch");
  WorkCheck w;
  bool saved = solver.options().compute_energy;
  solver.options().compute_energy = true;
  auto shifted = [&](double f) {
    ChargeSet s = c;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s.x[i] += f * dir[i][0];
      s.y[i] += f * dir[i][1];
      s.z[i] += f * dir[i][2];
    }
    return s;
  };
  ChargeSet c0 = c, cp = shifted(0.5 * delta0), cm = shifted(-0.5 * delta0);
  SolveResult r0 = solver.solve(c0, sb, st);
  double Up = solver.solve(cp, sb, st).U;
  double Um = solver.solve(cm, sb, st).U;
  solver.options().compute_energy = saved;
  w.W1 = -(Up - Um) / delta0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int d = 0; d < 3; ++d) w.W2 += c.q[i] * r0.E_bar[i][d] * dir[i][d];
  w.degenerate = std::abs(w.W1) < 1e-14;
  w.reldiff = w.degenerate ? 0.0 : std::abs(w.W1 - w.W2) / std::abs(w.W1);
  return w;
}

std::vector<std::array<double, 3>> random_unit_directions(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<std::array<double, 3>> d(n);
  for (auto& v : d) {
    double a = nd(rng), b = nd(rng), cc = nd(rng);
    double s = std::sqrt(a * a + b * b + cc * cc);
    v = {a / s, b / s, cc / s};
  }
  return d;
}

double extrapolate_inverse_length(double L1, double v1, double L2, double v2) {
  return (L2 * v2 - L1 * v1) / (L2 - L1);
}

FieldSample ewald_sum_gaussian(const ChargeSet& c, double Lx, double Ly, double Lz, double eps, double g_w,
                               double alpha, int kmax, int nreal) {
  const std::size_t n = c.size();
  FieldSample out;
  out.phi.assign(n, 0.0);
  out.E.assign(n, {0.0, 0.0, 0.0});
  const double V = Lx * Ly * Lz;
  const double s2 = g_w * g_w + 0.25 / (alpha * alpha);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double ph = 0.0, E[3] = {0, 0, 0};
      for (std::size_t j = 0; j < n; ++j)
        for (int a = -nreal; a <= nreal; ++a)
          for (int bb = -nreal; bb <= nreal; ++bb)
            for (int cc = -nreal; cc <= nreal; ++cc) {
              double d[3] = {c.x[i] - c.x[j] + a * Lx, c.y[i] - c.y[j] + bb * Ly, c.z[i] - c.z[j] + cc * Lz};
              double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
              ph += c.q[j] * near_potential_avg(r, g_w, alpha, eps);
              if (r > 0.0) {
                double f = c.q[j] * near_field_avg(r, g_w, alpha, eps) / r;
                for (int t = 0; t < 3; ++t) E[t] += f * d[t];
              }
            }
      for (int a = -kmax; a <= kmax; ++a)
        for (int bb = -kmax; bb <= kmax; ++bb)
          for (int cc = -kmax; cc <= kmax; ++cc) {
            if (a == 0 && bb == 0 && cc == 0) continue;
            double k[3] = {2 * kPi * a / Lx, 2 * kPi * bb / Ly, 2 * kPi * cc / Lz};
            double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            double w = std::exp(-k2 * s2) / (eps * V * k2);
            for (std::size_t j = 0; j < n; ++j) {
              double arg = k[0] * (c.x[i] - c.x[j]) + k[1] * (c.y[i] - c.y[j]) + k[2] * (c.z[i] - c.z[j]);
              ph += c.q[j] * w * std::cos(arg);
              for (int t = 0; t < 3; ++t) E[t] += c.q[j] * w * k[t] * std::sin(arg);
            }
          }
      out.phi[i] = ph;
      out.E[i] = {E[0], E[1], E[2]};
    }
  });
  return out;
}

}  // namespace slabewald
